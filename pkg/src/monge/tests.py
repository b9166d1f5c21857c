import sympy
from django.test import SimpleTestCase

from curvature.metric import tensor_is_zero
from curvature.tensors import einstein_residual, frame_components, metric_field, weyl, weyl_square
from expressions.exceptions import (
    ChartMismatchError,
    ResidualAntiderivativeError,
    VanishingHessianError,
    VanishingTangentError,
)
from expressions.symbols import family_member, symbols
from expressions.zerotest import is_zero

from .classification import BRANCH_CC1, BRANCH_CC2, G2, INTEGRAL_FREE, classify_monge1, classify_monge2
from .equations import MongeFirst, MongeSecond
from .example6 import (
    A5_PATTERN,
    FLAT,
    HOLDS,
    einstein_scale_residual,
    example6_a5,
    example6_coframe,
    example6_derivatives,
    example6_structure_check,
    frame_metric,
    representative_metric,
    transcription_report,
    weyl_frame_pattern_check,
)
from .g32 import conformal_agreement, g32_coefficients, g32_metric, tilde_coframe
from .psi import PsiInvariants, psi_invariant
from .solutions import (
    COMPONENTS,
    ParametrizedSolution,
    cartan_solution,
    integral_free_solution,
    mutate,
    quadrature_solution,
    terms,
    verify_parametrized_solution,
)

x, y, p, q, z, t = symbols('x y p q z t')
w0, w1, w2 = (family_member('w', k) for k in range(3))

CUBIC = q ** 3 / 6
POINT = {'x': 0, 'y': 0, 'p': 0.3, 'q': 1, 'z': 0}


# ============================================
# STEP 1: CLASSIFICATION TESTS
# ============================================
# These tests verify the first- and second-order Monge classifications

class ClassificationTest(SimpleTestCase):
    """
    Test suite for classify_monge1() and classify_monge2().
    """

    # TEST 1: First-order Branches
    def test_first_order_branches(self):
        """
        Test z and p z against the cc2 branch, y and p^2 against cc1.
        """
        self.assertEqual(classify_monge1(MongeFirst(z), samples=5).verdict, BRANCH_CC2)
        self.assertEqual(classify_monge1(MongeFirst(p * z), samples=5).verdict, BRANCH_CC2)
        report = classify_monge1(MongeFirst(y), samples=5)
        self.assertEqual(report.verdict, BRANCH_CC1)
        self.assertTrue(report.vanishes('F_pp'))
        self.assertFalse(report.vanishes('DF_p-F_y-F_pF_z'))
        report = classify_monge1(MongeFirst(p ** 2), samples=5)
        self.assertEqual(report.verdict, BRANCH_CC1)
        self.assertIn('F_pp', report.witnesses())

    # TEST 2: Second-order Classes
    def test_second_order_classes(self):
        """
        Test q^2 and q^3/6 against the g2 class and q + y against the integral-free one.
        """
        self.assertEqual(classify_monge2(MongeSecond(q ** 2), samples=5).verdict, G2)
        self.assertEqual(classify_monge2(MongeSecond(CUBIC), samples=5).verdict, G2)
        self.assertEqual(classify_monge2(MongeSecond(q + y), samples=5).verdict, INTEGRAL_FREE)

    # TEST 3: Chart Discipline
    def test_foreign_symbols(self):
        """
        Test that a first-order equation may not use q.
        """
        with self.assertRaises(ChartMismatchError):
            MongeFirst(q * p)
        self.assertEqual(MongeSecond.from_formula('k*q^2', parameters={'k': 3}).F, 3 * q ** 2)


# ============================================
# STEP 2: PARAMETRIZED SOLUTION TESTS
# ============================================
# These tests verify solutions in t and the derivatives w_k of a free function

class SolutionTest(SimpleTestCase):
    """
    Test suite for verify_parametrized_solution() and mutate().
    """

    # TEST 4: Integral-free Solution
    def test_integral_free_solution(self):
        """
        Test the integral-free solution of z' = (y')^2.
        """
        verdict = verify_parametrized_solution(MongeFirst(p ** 2), integral_free_solution(), samples=8)
        self.assertTrue(verdict.identically_zero)

    # TEST 5: Solutions With Integrals
    def test_cartan_and_quadrature(self):
        """
        Test both solutions of z' = (y'')^3/3; the Int nodes vanish under d/dt.
        """
        equation = MongeSecond(q ** 3 / 3)
        self.assertTrue(verify_parametrized_solution(equation, cartan_solution(3), samples=8).identically_zero)
        self.assertTrue(verify_parametrized_solution(equation, quadrature_solution(3), samples=8).identically_zero)

    # TEST 6: Wrong Solution
    def test_wrong_solution(self):
        """
        Test that x = w'', y = w', z = w does not solve z' = (y')^2.
        """
        solution = ParametrizedSolution(x=w2, y=w1, z=w0)
        verdict = verify_parametrized_solution(MongeFirst(p ** 2), solution, samples=8)
        self.assertFalse(verdict.identically_zero)
        self.assertIsNotNone(verdict.witness)

    # TEST 7: Soundness Under Mutation
    def test_mutations_are_detected(self):
        """
        Test that raising any coefficient of a verified solution by 1 breaks it.
        """
        cases = ((MongeFirst(p ** 2), integral_free_solution()), (MongeSecond(q ** 3 / 3), cartan_solution(3)))
        for equation, solution in cases:
            for component in COMPONENTS:
                for index in range(len(terms(solution, component))):
                    mutated = mutate(solution, component, index)
                    verdict = verify_parametrized_solution(equation, mutated, samples=5)
                    self.assertFalse(verdict.identically_zero, mutated.name)

    # TEST 8: Error Cases
    def test_errors(self):
        """
        Test a constant x and an Int node that survives differentiation.
        """
        with self.assertRaises(VanishingTangentError):
            verify_parametrized_solution(MongeFirst(p ** 2), ParametrizedSolution(x=1, y=w1, z=w0), samples=5)
        with self.assertRaises(ResidualAntiderivativeError):
            verify_parametrized_solution(MongeSecond(z + q ** 2), quadrature_solution(2), samples=5)
        with self.assertRaises(ChartMismatchError):
            ParametrizedSolution(x=t, y=w0, z=x)


# ============================================
# STEP 3: (3,2) METRIC TESTS
# ============================================
# These tests verify the transcribed metric of z' = F(x, y, y', y'', z)

class G32MetricTest(SimpleTestCase):
    """
    Test suite for g32_metric() and the term table behind it.
    """

    # TEST 9: Hilbert Equation Coefficients
    def test_hilbert_coefficients(self):
        """
        Test that F = q^2 keeps only the w1w4, w2w5 and w3w3 terms.
        """
        coefficients = {pair: sympy.expand(c) for pair, c in g32_coefficients(MongeSecond(q ** 2)).items()}
        expected = {(1, 4): 480, (2, 5): 240, (3, 3): -320}
        for pair, value in coefficients.items():
            self.assertEqual(value, expected.get(pair, 0), pair)

    # TEST 10: Signature
    def test_signature(self):
        """
        Test signature (3,2) up to overall sign at (0,0,0,1,0).
        """
        metric = g32_metric(MongeSecond(q ** 2))
        positive, negative, zero = metric.signature_at({'x': 0, 'y': 0, 'p': 0, 'q': 1, 'z': 0})
        self.assertEqual(sorted((positive, negative)), [2, 3])
        self.assertEqual(zero, 0)

    # TEST 11: Flat Model
    def test_hilbert_is_conformally_flat(self):
        """
        Test that the metric of z' = (y'')^2 has vanishing Weyl tensor.
        """
        self.assertTrue(tensor_is_zero(weyl(g32_metric(MongeSecond(q ** 2))), samples=5).identically_zero)

    # TEST 12: Vanishing Hessian
    def test_vanishing_hessian(self):
        """
        Test that F = q + y is refused.
        """
        with self.assertRaises(VanishingHessianError):
            g32_metric(MongeSecond(q + y))

    # TEST 13: Transcription
    def test_transcription_against_frames(self):
        """
        Test every pair of the term table against the frame construction for F(q).
        """
        for F in (CUBIC, sympy.exp(q)):
            factor, verdicts = transcription_report(F, samples=6)
            for label, verdict in verdicts.items():
                self.assertTrue(verdict.identically_zero, f'{F}: {label}')

    # TEST 14: Two Coordinate Representatives
    def test_matches_quoted_representative(self):
        """
        Test that the table and the quoted representative metric coincide for F = q^3/6.
        """
        equation = MongeSecond(CUBIC, representative_metric(CUBIC).box)
        self.assertEqual(g32_metric(equation).form, representative_metric(CUBIC).form)

    # TEST 15: Conformal Agreement
    def test_conformal_to_frame_metric(self):
        """
        Test that the quoted metric is -15 F''^(10/3) times the frame metric.
        """
        result = conformal_agreement(representative_metric(CUBIC), frame_metric(CUBIC), samples=6)
        self.assertTrue(result.success)
        self.assertTrue(is_zero(result.factor + 15 * q ** sympy.Rational(10, 3),
                                representative_metric(CUBIC).box, samples=6).identically_zero)


# ============================================
# STEP 4: EXAMPLE 6 TESTS
# ============================================
# These tests verify the coframe, a5, the Einstein scale and the Weyl pattern for z' = F(y'')

class Example6Test(SimpleTestCase):
    """
    Test suite for the z' = F(y'') constructions.
    """

    # TEST 16: Hilbert Coframe
    def test_hilbert_coframe(self):
        """
        Test that F = q^2 kills the correction terms and both connection forms.
        """
        coframe = example6_coframe(q ** 2)
        tilde = tilde_coframe(q ** 2)
        cube_root = sympy.Integer(2) ** sympy.Rational(1, 3)
        self.assertEqual(coframe.theta[2], -cube_root * tilde[2])
        self.assertEqual(coframe.theta[3], tilde[4] * (1 / cube_root))
        self.assertTrue(coframe.omega2.is_structurally_zero())
        self.assertTrue(coframe.omega6.is_structurally_zero())

    # TEST 17: Cubic Coframe At q = 1
    def test_cubic_theta4(self):
        """
        Test theta4 = w5 - w3/3 + (4/30) w2 at q = 1 for F = q^3/6.
        """
        theta4 = example6_coframe(CUBIC).theta[3]
        tilde = tilde_coframe(CUBIC)
        expected = tilde[4] - tilde[2] * sympy.Rational(1, 3) + tilde[1] * sympy.Rational(4, 30)
        for index in range(5):
            difference = (theta4.coefficient((index,)) - expected.coefficient((index,))).subs(q, 1)
            self.assertEqual(sympy.simplify(difference), 0, index)

    # TEST 18: Scalar Invariant
    def test_a5(self):
        """
        Test a5 = 0 for q^2 and a5 = -(56/25) q^(-20/3) for q^3/6.
        """
        self.assertEqual(example6_a5(q ** 2), 0)
        self.assertEqual(sympy.simplify(example6_a5(CUBIC) + sympy.Rational(56, 25) * q ** sympy.Rational(-20, 3)), 0)
        with self.assertRaises(ChartMismatchError):
            example6_derivatives(q * p)

    # TEST 19: Structure Equations
    def test_structure_equations(self):
        """
        Test the structure equations of the coframe for q^3/6 and exp(q).
        """
        for F in (CUBIC, sympy.exp(q)):
            report = example6_structure_check(F, samples=6)
            self.assertEqual(report.verdict, HOLDS, report.witnesses())

    # TEST 20: Alpha Coframe
    def test_alpha_metric_is_constant(self):
        """
        Test that the alpha coframe turns the frame metric into 2 a1 a5 - 2 a2 a4 + a3^2.
        """
        metric = frame_metric(CUBIC)
        values = frame_components(metric_field(metric), example6_coframe(CUBIC).alpha).at(POINT)
        expected = {(0, 4): 1, (4, 0): 1, (1, 3): -1, (3, 1): -1, (2, 2): 1}
        for i in range(5):
            for j in range(5):
                self.assertAlmostEqual(float(values[i, j]), expected.get((i, j), 0), places=12)

    # TEST 21: Weyl Pattern
    def test_weyl_pattern(self):
        """
        Test that only the a5 slots of the frame Weyl tensor survive, with |C_2525| = 2.24 at q = 1.
        """
        self.assertEqual(weyl_frame_pattern_check(CUBIC, samples=5).verdict, A5_PATTERN)
        self.assertEqual(weyl_frame_pattern_check(q ** 2, samples=5).verdict, FLAT)
        self.assertEqual(weyl_frame_pattern_check(CUBIC + q ** 4 / 10, samples=5).verdict, A5_PATTERN)
        frame_weyl = frame_components(weyl(frame_metric(CUBIC)), example6_coframe(CUBIC).alpha)
        values = frame_weyl.at(POINT)
        self.assertAlmostEqual(float(values[1, 4, 1, 4]), 2.24, places=9)
        self.assertAlmostEqual(float(values[4, 1, 1, 4]), -2.24, places=9)

    # TEST 22: Psi Consistency
    def test_weyl_square_and_psi(self):
        """
        Test that I_Psi and the Weyl square both vanish for q^3/6.
        """
        self.assertEqual(psi_invariant(PsiInvariants.example6(example6_a5(CUBIC))), 0)
        self.assertTrue(tensor_is_zero(weyl_square(representative_metric(CUBIC)), samples=5).identically_zero)

    # TEST 23: Einstein Scale
    def test_einstein_scale(self):
        """
        Test that the scale equation makes the metric Einstein and a wrong one does not.
        """
        self.assertTrue(tensor_is_zero(einstein_scale_residual(CUBIC), samples=5).identically_zero)
        u1 = family_member('Upsilon', 1)
        wrong = u1 ** 2 + 4 * u1 / q
        self.assertFalse(tensor_is_zero(einstein_scale_residual(CUBIC, upsilon2=wrong), samples=5).identically_zero)

    # TEST 24: Hilbert Metric Is Einstein
    def test_hilbert_is_einstein(self):
        """
        Test that for F = q^2 the metric is Einstein without rescaling.
        """
        self.assertTrue(tensor_is_zero(einstein_residual(g32_metric(MongeSecond(q ** 2))), samples=5).identically_zero)


# ============================================
# STEP 5: PSI POLYNOMIAL TESTS
# ============================================

class PsiTest(SimpleTestCase):
    """
    Test suite for psi_invariant().
    """

    # TEST 25: Quadratic Invariant
    def test_invariant(self):
        """
        Test I_Psi on (0,0,0,0,a5) and (0,0,1,0,0).
        """
        a5 = sympy.Symbol('a5')
        self.assertEqual(psi_invariant(PsiInvariants(a5=a5)), 0)
        self.assertEqual(psi_invariant(PsiInvariants(a3=1)), 6)
        self.assertEqual(PsiInvariants(a3=1).polynomial(z), 6 * z ** 2)
