import sympy
from django.test import SimpleTestCase

from curvature.metric import tensor_is_zero
from curvature.tensors import curvature_package, first_bianchi, weyl_traces
from exterior.charts import J1EXT
from exterior.differential import DifferentialForm, SymmetricForm, VectorField
from expressions.exceptions import ChartMismatchError
from expressions.symbols import symbols

from .equations import SecondOrderODE
from .fefferman import CURVED, FLAT, fefferman_flatness_check, fefferman_metric, ode2_invariants

x, y, p, q = symbols('x y p q')

dx, dy, dp, dphi = (DifferentialForm.basis(J1EXT, c) for c in ('x', 'y', 'p', 'phi'))


# ============================================
# STEP 1: FEFFERMAN METRIC TESTS
# ============================================
# These tests verify the metric built from y'' = Q

class FeffermanMetricTest(SimpleTestCase):
    """
    Test suite for fefferman_metric().
    """

    # TEST 1: Flat Expansion
    def test_zero_equation(self):
        """
        Test that Q = 0 gives 2 (dp dx - dy dphi) with signature (2,2).
        """
        metric = fefferman_metric(SecondOrderODE(sympy.S.Zero))
        expected = 2 * SymmetricForm.product(dp, dx) - 2 * SymmetricForm.product(dy, dphi)
        self.assertEqual(metric.form, expected)
        self.assertEqual(metric.signature_at({}), (2, 2, 0))

    # TEST 2: Flat Curvature
    def test_zero_equation_is_flat(self):
        """
        Test that the whole curvature package of Q = 0 vanishes.
        """
        package = curvature_package(fefferman_metric(SecondOrderODE(sympy.S.Zero)))
        self.assertTrue(tensor_is_zero(package.riemann, samples=5).identically_zero)
        self.assertTrue(tensor_is_zero(package.scalar, samples=5).identically_zero)

    # TEST 3: Null Fibre
    def test_null_fibre(self):
        """
        Test that d_phi is null and pairs only with dy - p dx.
        """
        metric = fefferman_metric(SecondOrderODE(p ** 3 + x * y))
        fibre = VectorField(J1EXT, {'phi': 1})
        self.assertEqual(metric.form.pair(fibre, fibre), 0)
        self.assertEqual(metric.form.contract(fibre), -(dy - p * dx))
        self.assertEqual(metric.signature_at({'x': 0.2, 'y': -0.4, 'p': 0.5}), (2, 2, 0))

    # TEST 4: Foreign Symbols
    def test_foreign_symbols(self):
        """
        Test that Q may not depend on q.
        """
        with self.assertRaises(ChartMismatchError):
            SecondOrderODE(q * p)


# ============================================
# STEP 2: POINT INVARIANT TESTS
# ============================================
# These tests verify w1 and w2 against hand computations

class PointInvariantTest(SimpleTestCase):
    """
    Test suite for ode2_invariants().
    """

    # TEST 5: Zero
    def test_zero(self):
        """
        Test w1 = w2 = 0 for Q = 0.
        """
        invariants = ode2_invariants(SecondOrderODE(sympy.S.Zero))
        self.assertEqual((invariants.w1, invariants.w2), (0, 0))

    # TEST 6: Fourth Power
    def test_fourth_power(self):
        """
        Test w1 = 24 p^8 and w2 = 24 for Q = p^4.
        """
        invariants = ode2_invariants(SecondOrderODE(p ** 4))
        self.assertEqual(sympy.expand(invariants.w1), 24 * p ** 8)
        self.assertEqual(invariants.w2, 24)

    # TEST 7: Linearizable Equations
    def test_linearizable(self):
        """
        Test that Q = p^2 and Q = y have vanishing invariants.
        """
        for Q in (p ** 2, y):
            invariants = ode2_invariants(SecondOrderODE(Q))
            self.assertEqual(sympy.expand(invariants.w1), 0)
            self.assertEqual(invariants.w2, 0)


# ============================================
# STEP 3: FLATNESS TESTS
# ============================================
# These tests verify that Weyl vanishes exactly when w1 and w2 do

class FlatnessTest(SimpleTestCase):
    """
    Test suite for fefferman_flatness_check().
    """

    # TEST 8: Flat Cases
    def test_flat_cases(self):
        """
        Test that Q = p^2 and Q = y give a conformally flat metric.
        """
        for Q in (p ** 2, y):
            report = fefferman_flatness_check(SecondOrderODE(Q), samples=6)
            self.assertEqual(report.verdict, FLAT)
            self.assertTrue(report.details['consistent'])

    # TEST 9: Curved Case
    def test_fourth_power_is_curved(self):
        """
        Test that Q = p^4 gives a Weyl witness, consistently with w2 = 24.
        """
        report = fefferman_flatness_check(SecondOrderODE(p ** 4), samples=6)
        self.assertEqual(report.verdict, CURVED)
        self.assertTrue(report.details['consistent'])
        self.assertIn('weyl', report.witnesses())

    # TEST 10: Structural Identities
    def test_bianchi_and_traces(self):
        """
        Test the Bianchi identity and trace-freeness of Weyl for Q = p^4.
        """
        metric = fefferman_metric(SecondOrderODE(p ** 4))
        self.assertTrue(tensor_is_zero(first_bianchi(metric), samples=5).identically_zero)
        self.assertTrue(tensor_is_zero(weyl_traces(metric), samples=5).identically_zero)
