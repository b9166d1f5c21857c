import itertools

import numpy as np
import sympy
from django.test import SimpleTestCase

from exterior.charts import J2_3RD
from exterior.differential import DifferentialForm, SymmetricForm
from expressions.evaluation import infer_box
from expressions.exceptions import ChartMismatchError, NotADkpSolutionError, UnknownIdentifierError
from expressions.parser import parse
from expressions.symbols import symbols
from expressions.zerotest import is_zero

from .classification import EINSTEIN_WEYL, GENERIC, WUENSCHMANN, classify3
from .dkp import dkp_coframe, dkp_frobenius, dkp_residual
from .equations import ThirdOrderODE
from .geometry import closedness_check, kernel_check, metric_tilde, nu_tilde, transport_check
from .invariants import ode3_invariants

x, y, p, q, t, v = symbols('x y p q t v')

C1_TEXT = '(2*q*y - p^2)^(3/2)/y^2'
EXAMPLE1_TEXT = 'alpha*(q^2 + (1 - p^2)^2)^(3/2)/(1 - p^2)^(3/2) - 3*p*q^2/(1 - p^2) - p*(1 - p^2)'
FDKP2_TEXT = '(p*q*(-12 + 3*p*q - 8*sqrt(1 - p*q)) + 8*(1 + sqrt(1 - p*q)))/p^3'

dx, dy, dp, dq = (DifferentialForm.basis(J2_3RD, c) for c in 'xypq')


# ============================================
# STEP 1: INVARIANT TESTS
# ============================================
# These tests verify K, A, G and the Cotton components against hand computations

class InvariantTest(SimpleTestCase):
    """
    Test suite for ode3_invariants().
    """

    # TEST 1: Flat Equation
    def test_zero_equation(self):
        """
        Test that every invariant of y''' = 0 is exactly zero.
        """
        invariants = ode3_invariants(ThirdOrderODE(sympy.S.Zero))
        for name, value in invariants.__dict__.items():
            self.assertEqual(value, 0, name)

    # TEST 2: Three-halves Power
    def test_three_halves(self):
        """
        Test K = -q/8 and A = G = 0 for F = q^(3/2).
        """
        ode = ThirdOrderODE(q ** sympy.Rational(3, 2))
        invariants = ode3_invariants(ode)
        self.assertTrue(is_zero(invariants.K + q / 8, ode.box, samples=8).identically_zero)
        self.assertTrue(is_zero(invariants.A, ode.box, samples=8).identically_zero)
        self.assertTrue(is_zero(invariants.G, ode.box, samples=8).identically_zero)

    # TEST 3: Square
    def test_square(self):
        """
        Test A = -(2/27) q^3 for F = q^2.
        """
        invariants = ode3_invariants(ThirdOrderODE(q ** 2))
        self.assertEqual(sympy.expand(invariants.A + sympy.Rational(2, 27) * q ** 3), 0)

    # TEST 4: First Cotton Component
    def test_c1_is_fourth_derivative(self):
        """
        Test that C1 is structurally F_qqqq.
        """
        F = q ** 5 + x * p * q ** 2
        invariants = ode3_invariants(ThirdOrderODE(F))
        self.assertEqual(invariants.C1, sympy.diff(F, q, 4))

    # TEST 5: Foreign Symbols
    def test_foreign_symbols(self):
        """
        Test that F may not use coordinates outside x, y, p, q.
        """
        with self.assertRaises(ChartMismatchError):
            ThirdOrderODE(parse('z*q'))
        with self.assertRaises(UnknownIdentifierError):
            ThirdOrderODE.from_formula('w*q')
        ode = ThirdOrderODE.from_formula('alpha*q', parameters={'alpha': 2})
        self.assertEqual(ode.F, 2 * q)


# ============================================
# STEP 2: METRIC AND WEYL FORM TESTS
# ============================================
# These tests verify the degenerate metric, the 1-form nu and their transport along D

class GeometryTest(SimpleTestCase):
    """
    Test suite for metric_tilde(), nu_tilde() and the transport checks.
    """

    # TEST 6: Flat Metric Expansion
    def test_zero_equation_metric(self):
        """
        Test the metric of y''' = 0 against its hand expansion.
        """
        expected = (2 * SymmetricForm.product(dy, dq) - 2 * p * SymmetricForm.product(dx, dq)
                    - SymmetricForm.square(dp) + 2 * q * SymmetricForm.product(dp, dx)
                    - q ** 2 * SymmetricForm.square(dx))
        self.assertEqual(metric_tilde(ThirdOrderODE(sympy.S.Zero)), expected)

    # TEST 7: Kernel And Signature
    def test_kernel_and_signature(self):
        """
        Test that D spans the kernel and the signature is (+,-,-,0).
        """
        ode = ThirdOrderODE(q ** sympy.Rational(3, 2))
        self.assertTrue(kernel_check(ode, samples=8).identically_zero)
        self.assertEqual(metric_tilde(ode).signature_at({'x': 0.1, 'y': 0.2, 'p': 0.3, 'q': 0.5}), (1, 2, 1))

    # TEST 8: Vanishing Weyl Form
    def test_zero_equation_nu(self):
        """
        Test that nu vanishes for y''' = 0.
        """
        self.assertTrue(nu_tilde(ThirdOrderODE(sympy.S.Zero)).is_structurally_zero())

    # TEST 9: Closedness
    def test_closedness(self):
        """
        Test that d(L_D nu) vanishes for q^(3/2) but not for q^3, where G = 18 q^5.
        """
        self.assertTrue(closedness_check(ThirdOrderODE(q ** sympy.Rational(3, 2)), samples=8).identically_zero)
        cubic = ThirdOrderODE(q ** 3)
        self.assertEqual(sympy.expand(ode3_invariants(cubic).G), 18 * q ** 5)
        verdict = closedness_check(cubic, samples=8)
        self.assertFalse(verdict.identically_zero)
        self.assertIsNotNone(verdict.witness)

    # TEST 10: Conformal Transport
    def test_transport(self):
        """
        Test that the conformal class is carried along D for F = 0 and not for F = q^2.
        """
        self.assertTrue(transport_check(ThirdOrderODE(sympy.S.Zero), samples=8).success)
        result = transport_check(ThirdOrderODE(q ** 2), samples=8)
        self.assertFalse(result.success)
        self.assertIsNotNone(result.verdict.witness)

    # TEST 11: Transport And Closedness Across The Worked Examples
    def test_transport_and_closedness_track_invariants(self):
        """
        Test that transport holds iff A = 0 and closedness holds iff G = 0 on every worked example.
        """
        cases = {
            'zero': ThirdOrderODE(sympy.S.Zero),
            'three-halves': ThirdOrderODE(q ** sympy.Rational(3, 2)),
            'c1': ThirdOrderODE.from_formula(C1_TEXT, bounds={'y': (0.5, 2), 'q': (0.5, 2), 'p': (-0.5, 0.5)}),
            'alpha-one': ThirdOrderODE.from_formula(EXAMPLE1_TEXT, parameters={'alpha': 1},
                                                    bounds={'p': (-0.9, 0.9), 'q': (-1, 1)}),
            'square': ThirdOrderODE(q ** 2),
            'cube': ThirdOrderODE(q ** 3),
            'dkp': ThirdOrderODE.from_formula(FDKP2_TEXT, bounds={'p': (0.2, 1), 'q': (-1, 0.8)}),
        }
        for name, ode in cases.items():
            with self.subTest(equation=name):
                invariants = ode3_invariants(ode)
                A_vanishes = is_zero(invariants.A, ode.box, samples=8).identically_zero
                G_vanishes = is_zero(invariants.G, ode.box, samples=8).identically_zero
                self.assertEqual(transport_check(ode, samples=8).success, A_vanishes)
                self.assertEqual(closedness_check(ode, samples=8).identically_zero, G_vanishes)


# ============================================
# STEP 3: CLASSIFICATION TESTS
# ============================================
# These tests verify classify3() on the worked examples

class ClassificationTest(SimpleTestCase):
    """
    Test suite for classify3().
    """

    # TEST 12: Generic
    def test_square_is_generic(self):
        """
        Test that F = q^2 is generic with a witness for A.
        """
        report = classify3(ThirdOrderODE(q ** 2), samples=8)
        self.assertEqual(report.verdict, GENERIC)
        self.assertIn('A', report.witnesses())

    # TEST 13: Einstein-Weyl Family
    def test_einstein_weyl_family(self):
        """
        Test that (2qy - p^2)^(3/2)/y^2 is Einstein-Weyl.
        """
        ode = ThirdOrderODE.from_formula(C1_TEXT, bounds={'y': (0.5, 2), 'q': (0.5, 2), 'p': (-0.5, 0.5)})
        self.assertEqual(classify3(ode, samples=8).verdict, EINSTEIN_WEYL)

    # TEST 14: Wuenschmann Family
    def test_wuenschmann_family(self):
        """
        Test that the alpha = 1 member of the first example satisfies A = 0.
        """
        ode = ThirdOrderODE.from_formula(EXAMPLE1_TEXT, parameters={'alpha': 1},
                                         bounds={'p': (-0.9, 0.9), 'q': (-1, 1)})
        report = classify3(ode, samples=8)
        self.assertIn(report.verdict, (WUENSCHMANN, EINSTEIN_WEYL))
        self.assertTrue(report.vanishes('A'))

    # TEST 15: dKP Equation
    def test_dkp_equation_is_einstein_weyl(self):
        """
        Test that the equation built from u = sqrt(2x) is Einstein-Weyl.
        """
        ode = ThirdOrderODE.from_formula(FDKP2_TEXT, bounds={'p': (0.2, 1), 'q': (-1, 0.8)})
        self.assertEqual(classify3(ode, samples=8).verdict, EINSTEIN_WEYL)


# ============================================
# STEP 4: DKP TESTS
# ============================================
# These tests verify the Frobenius forms and the coframe of a dKP solution

class DkpTest(SimpleTestCase):
    """
    Test suite for dkp_residual(), dkp_frobenius() and dkp_coframe().
    """

    # TEST 16: Residuals
    def test_residuals(self):
        """
        Test the residual of sqrt(2x), x and 0.
        """
        u = sympy.sqrt(2 * x)
        self.assertTrue(is_zero(dkp_residual(u), infer_box(u), samples=8).identically_zero)
        self.assertEqual(dkp_residual(x), 1)
        self.assertEqual(dkp_residual(sympy.S.Zero), 0)

    # TEST 17: Frobenius Forms
    def test_frobenius_coefficients(self):
        """
        Test on random cubics in (x, y, t) that the first 4-form vanishes and the second is minus the dKP scalar.
        """
        monomials = [x ** i * y ** j * t ** k
                     for i, j, k in itertools.product(range(4), repeat=3) if i + j + k <= 3]
        rng = np.random.default_rng(7)
        for _ in range(3):
            coefficients = rng.integers(-5, 6, size=len(monomials))
            u = sum(int(c) * m for c, m in zip(coefficients, monomials))
            with self.subTest(u=str(u)):
                frobenius = dkp_frobenius(u)
                self.assertEqual(sympy.expand(frobenius.first), 0)
                self.assertEqual(sympy.expand(frobenius.second + frobenius.scalar), 0)

    # TEST 18: X Coordinate
    def test_x_membership(self):
        """
        Test that X = t + v^2/2 + sqrt(2x) is in the omega4 class and X = t is not.
        """
        u = sympy.sqrt(2 * x)
        good = dkp_coframe(u, t + v ** 2 / 2 + sympy.sqrt(2 * x), samples=8)
        self.assertTrue(good.membership.identically_zero)
        self.assertEqual(len(good.forms), 4)
        self.assertFalse(dkp_coframe(u, t, samples=8).membership.identically_zero)
        self.assertFalse(dkp_coframe(sympy.S.Zero, t, samples=8).membership.identically_zero)

    # TEST 19: Not A Solution
    def test_not_a_solution(self):
        """
        Test that u = x is refused with a witness.
        """
        with self.assertRaises(NotADkpSolutionError):
            dkp_coframe(x, t, samples=8)
        with self.assertRaises(ChartMismatchError):
            dkp_residual(v * x)
