import mpmath
import numpy as np
import sympy
from django.test import SimpleTestCase
from hypothesis import given, settings as hypothesis_settings, strategies as st

from .calculus import differentiate, partial, substitute
from .evaluation import DomainBox, eval_numeric, infer_box
from .exceptions import (
    BoxUnusableError,
    DomainBoxError,
    DomainViolationError,
    FormulaSyntaxError,
    ResidualAntiderivativeError,
    UnboundSymbolError,
    UnknownIdentifierError,
)
from .parser import parse
from .printer import to_formula
from .symbols import Int, family_member, symbols
from .zerotest import is_zero, is_zero_all

x, y, p, q, t = symbols('x y p q t')
w_1, w_2, w_3 = (family_member('w', k) for k in (1, 2, 3))

C1_TEXT = '(2*q*y - p^2)^(3/2)/y^2'
FDKP2_TEXT = '(p*q*(-12 + 3*p*q - 8*sqrt(1 - p*q)) + 8*(1 + sqrt(1 - p*q)))/p^3'
EXAMPLE1_TEXT = 'alpha*(q^2 + (1 - p^2)^2)^(3/2)/(1 - p^2)^(3/2) - 3*p*q^2/(1 - p^2) - p*(1 - p^2)'


# ============================================
# STEP 1: PARSER AND PRINTER TESTS
# ============================================
# These tests verify the formula grammar: precedence, errors and round trips

class ParserTest(SimpleTestCase):
    """
    Test suite for parse() and to_formula().
    """

    # TEST 1: Simple Power
    def test_power(self):
        """
        Test that q^2 becomes a power node with exponent 2.
        """
        self.assertEqual(parse('q^2'), sympy.Pow(q, 2))

    # TEST 2: Precedence
    def test_precedence(self):
        """
        Test that ^ binds tighter than unary minus and is right-associative.
        """
        self.assertEqual(parse('-q^2'), -(q ** 2))
        self.assertEqual(parse('2^3^2'), sympy.Integer(512))
        self.assertEqual(parse('p - q - x'), p - q - x)
        self.assertEqual(parse('p/q/x'), p / (q * x))
        self.assertEqual(parse('2*-q'), -2 * q)

    # TEST 3: Signed Exponents
    def test_signed_exponent(self):
        """
        Test that the right operand of ^ may carry a sign without parentheses.
        """
        self.assertEqual(parse('q^-1'), 1 / q)
        self.assertEqual(parse('q^+2'), q ** 2)
        self.assertEqual(parse('p^-3/2'), p ** -3 / 2)
        self.assertEqual(parse('2^-q^2'), 2 ** -(q ** 2))
        self.assertEqual(parse('-q^-2'), -(q ** -2))
        with self.assertRaises(FormulaSyntaxError):
            parse('q^-')

    # TEST 4: C1 Formula
    def test_c1_formula(self):
        """
        Test the tree for the first Einstein-Weyl family with a=1.
        """
        expected = (2 * q * y - p ** 2) ** sympy.Rational(3, 2) / y ** 2
        self.assertEqual(parse(C1_TEXT), expected)

    # TEST 5: Exact Numbers
    def test_numbers_are_exact(self):
        """
        Test that decimals and integer quotients are read as exact rationals.
        """
        self.assertEqual(parse('0.25*q'), q / 4)
        self.assertEqual(parse('3/2'), sympy.Rational(3, 2))

    # TEST 6: Syntax Errors
    def test_syntax_error_has_position(self):
        """
        Test that malformed input raises a syntax error carrying a position.
        """
        with self.assertRaises(FormulaSyntaxError) as caught:
            parse('q + * p')
        self.assertIsInstance(caught.exception.position, int)
        with self.assertRaises(FormulaSyntaxError):
            parse('2q')

    # TEST 7: Unknown Identifiers
    def test_unknown_identifier(self):
        """
        Test that identifiers outside the allowed set and unknown functions are rejected.
        """
        with self.assertRaises(UnknownIdentifierError) as caught:
            parse('q + r', allowed=['q'])
        self.assertEqual(caught.exception.name, 'r')
        self.assertEqual(caught.exception.position, 4)
        with self.assertRaises(UnknownIdentifierError):
            parse('sin(q)')

    # TEST 8: Antiderivative Node
    def test_int_node(self):
        """
        Test that Int(body, var) parses into the formal antiderivative.
        """
        node = parse('Int(t^(1/2)*w_2^2, t)')
        self.assertIsInstance(node, Int)
        self.assertEqual(node.args[1], t)

    # TEST 9: Round Trip
    def test_round_trip(self):
        """
        Test that printing then parsing gives back the same tree.
        """
        for text in ['q^(3/2)', C1_TEXT, FDKP2_TEXT, EXAMPLE1_TEXT, 'Int(t^(1/2)*w_2^2, t)',
                     'exp(q)', 'q^3/6', 'log(x)*y - 1/sqrt(p)']:
            expr = parse(text)
            self.assertEqual(parse(to_formula(expr)), expr, text)
        self.assertNotIn('**', to_formula(parse('q^(5/2)')))


# ============================================
# STEP 2: DIFFERENTIATION AND SUBSTITUTION TESTS
# ============================================

class DifferentiateTest(SimpleTestCase):
    """
    Test suite for differentiate(), the symbol families and substitute().
    """

    # TEST 10: Fractional Power
    def test_fractional_power(self):
        """
        Test d/dq q^(3/2) = (3/2) q^(1/2).
        """
        self.assertEqual(differentiate(parse('q^(3/2)'), 'q'), sympy.Rational(3, 2) * sympy.sqrt(q))

    # TEST 11: Family Symbols
    def test_family_rule(self):
        """
        Test that w_k steps to w_{k+1} under d/dt and Upsilon_k under d/dq.
        """
        self.assertEqual(differentiate(parse('w_2^2'), 't'), 2 * w_2 * w_3)
        self.assertEqual(differentiate(parse('Upsilon_1'), 'q'), sympy.Symbol('Upsilon_2'))
        self.assertEqual(differentiate(parse('Upsilon_1'), 'x'), 0)

    # TEST 12: Antiderivative Rules
    def test_int_rules(self):
        """
        Test d/dt Int(w_2^2, t) = w_2^2 and the Leibniz rule in other variables.
        """
        node = parse('Int(w_2^2, t)')
        self.assertEqual(differentiate(node, 't'), w_2 ** 2)
        self.assertEqual(differentiate(node, 'w_2'), Int(2 * w_2, t))
        mixed = parse('t*Int(t^(1/2)*w_2^2, t)')
        self.assertEqual(differentiate(mixed, 't'), node.func(sympy.sqrt(t) * w_2 ** 2, t) + t * sympy.sqrt(t) * w_2 ** 2)

    # TEST 13: Finite Differences On fdkp2
    def test_finite_difference_fdkp2(self):
        """
        Test F_q of the dKP-derived equation against a central difference at (p=1, q=1/2).
        """
        F = parse(FDKP2_TEXT)
        exact = eval_numeric(partial(F, 'q'), {'p': 1, 'q': 0.5})
        h = mpmath.mpf('1e-8')
        with mpmath.workdps(40):
            upper = eval_numeric(F, {'p': 1, 'q': mpmath.mpf('0.5') + h}, precision=40)
            lower = eval_numeric(F, {'p': 1, 'q': mpmath.mpf('0.5') - h}, precision=40)
            central = (upper - lower) / (2 * h)
        self.assertLess(abs(central - exact) / abs(exact), 1e-6)

    # TEST 14: Finite Differences On Elementary Functions
    def test_finite_difference_elementary(self):
        """
        Test every elementary node against central differences at 20 random points.
        """
        rng = np.random.default_rng(0)
        h = mpmath.mpf('1e-10')
        for text in ['sqrt(x)', 'exp(x)', 'log(x)', 'x^(5/2)', 'x^(-3)', '1/(1 + x^2)']:
            f = parse(text)
            derivative = differentiate(f, 'x')
            for value in rng.uniform(0.5, 2.0, size=20):
                with mpmath.workdps(30):
                    exact = eval_numeric(derivative, {'x': value})
                    central = (eval_numeric(f, {'x': mpmath.mpf(value) + h}) -
                               eval_numeric(f, {'x': mpmath.mpf(value) - h})) / (2 * h)
                self.assertLess(abs(central - exact) / (1 + abs(exact)), 1e-6, text)

    # TEST 15: Substitution
    def test_substitute(self):
        """
        Test simple and simultaneous substitution.
        """
        self.assertEqual(substitute(q * p, {'q': 0}), 0)
        self.assertEqual(substitute(x - 2 * y, {'x': y, 'y': x}), y - 2 * x)
        closed = substitute(differentiate(parse('w_0'), 't') - parse('2*t'),
                            {'w_0': t ** 2, 'w_1': 2 * t, 'w_2': 2, 'w_3': 0})
        self.assertEqual(closed, 0)


# ============================================
# STEP 3: EVALUATION AND BOX TESTS
# ============================================

class EvaluationTest(SimpleTestCase):
    """
    Test suite for eval_numeric(), DomainBox and infer_box().
    """

    # TEST 16: Values
    def test_values(self):
        """
        Test q^(3/2) at 4 and the fdkp2 F at p=1, q=0.
        """
        self.assertEqual(eval_numeric(parse('q^(3/2)'), {'q': 4}), 8)
        self.assertEqual(eval_numeric(parse(FDKP2_TEXT), {'p': 1, 'q': 0}), 16)

    # TEST 17: Evaluation Errors
    def test_errors(self):
        """
        Test domain violations, unbound symbols and residual Int nodes.
        """
        with self.assertRaises(DomainViolationError):
            eval_numeric(parse('sqrt(q)'), {'q': -1})
        with self.assertRaises(DomainViolationError):
            eval_numeric(parse('1/q'), {'q': 0})
        with self.assertRaises(UnboundSymbolError):
            eval_numeric(parse('p + q'), {'q': 1})
        with self.assertRaises(ResidualAntiderivativeError):
            eval_numeric(parse('Int(w_2, t)'), {'w_2': 1, 't': 1})

    # TEST 18: Box Syntax
    def test_box_items(self):
        """
        Test the 'sym:lo:hi' syntax and its errors.
        """
        self.assertEqual(DomainBox.parse_items(['q:0.1:10']), {'q': (0.1, 10.0)})
        with self.assertRaises(DomainBoxError):
            DomainBox.parse_items(['q:0.1'])
        with self.assertRaises(DomainBoxError):
            DomainBox.parse_items(['q:2:1'])
        with self.assertRaises(DomainBoxError):
            DomainBox(margin=0)

    # TEST 19: Inferred Margins
    def test_infer_box(self):
        """
        Test that fractional powers force positivity and denominators exclude zero.
        """
        box = infer_box(parse('q^(3/2)'))
        self.assertGreater(box.interval('q').lo, 0)
        box = infer_box(parse('1/y'))
        self.assertIn(0, box.interval('y').exclude)
        box = infer_box(parse(C1_TEXT), bounds={'y': (0.5, 2), 'q': (1.5, 3)})
        self.assertEqual(len(box.constraints), 1)
        point = box.sample(np.random.default_rng(3), ['p', 'q', 'y'])
        self.assertGreater(2 * point['q'] * point['y'] - point['p'] ** 2, 0)


# ============================================
# STEP 4: ZERO-TEST TESTS
# ============================================

class ZeroTestTest(SimpleTestCase):
    """
    Test suite for is_zero() and is_zero_all().
    """

    # TEST 20: Literal Zero
    def test_literal_zero(self):
        """
        Test that the literal 0 is identically zero.
        """
        self.assertTrue(is_zero(sympy.S.Zero).identically_zero)

    # TEST 21: Identity
    def test_identity(self):
        """
        Test an expanded square identity.
        """
        self.assertTrue(is_zero(parse('(x + 1)^2 - x^2 - 2*x - 1')).identically_zero)

    # TEST 22: Nonzero With Reproducible Witness
    def test_witness_reproduces(self):
        """
        Test that a nonzero verdict carries a witness that re-evaluates to the same value.
        """
        expr = parse('-2*q^3/27')
        verdict = is_zero(expr)
        self.assertFalse(verdict.identically_zero)
        self.assertEqual(verdict.verdict, 'nonzero')
        self.assertEqual(float(eval_numeric(expr, verdict.witness)), verdict.value)

    # TEST 23: Determinism
    def test_seed_determinism(self):
        """
        Test that a fixed seed gives the same verdict and witness.
        """
        expr = parse('x*y - q')
        self.assertEqual(is_zero(expr, seed=7).as_dict(), is_zero(expr, seed=7).as_dict())

    # TEST 24: Monotone In Tolerance
    def test_monotone_in_tolerance(self):
        """
        Test that once a tolerance accepts, every larger tolerance accepts too.
        """
        expr = parse('x/100000000')
        verdicts = [is_zero(expr, tol=tol).identically_zero for tol in (1e-12, 1e-9, 1e-7, 1e-5, 1e-3)]
        self.assertEqual(verdicts, sorted(verdicts))
        self.assertFalse(verdicts[0])
        self.assertTrue(verdicts[-1])

    # TEST 25: Unusable Box
    def test_box_unusable(self):
        """
        Test that a box where most evaluations fail is reported as unusable.
        """
        box = DomainBox.from_bounds({'q': (-2, -1)})
        with self.assertRaises(BoxUnusableError):
            is_zero(parse('sqrt(q)'), box=box)

    # TEST 26: Joint Test Names The Worst Component
    def test_joint_witness_component(self):
        """
        Test that is_zero_all reports the offending label.
        """
        verdict = is_zero_all({'zero': parse('x - x'), 'bad': parse('x^2 + 1')})
        self.assertFalse(verdict.identically_zero)
        self.assertEqual(verdict.component, 'bad')


# ============================================
# STEP 5: PROPERTY TESTS
# ============================================

_leaves = st.sampled_from([x, y, sympy.Integer(2), sympy.Rational(1, 3)])


def _extend(children):
    return st.one_of(
        st.tuples(children, children).map(lambda pair: pair[0] + pair[1]),
        st.tuples(children, children).map(lambda pair: pair[0] * pair[1]),
        children.map(lambda c: sympy.exp(c / (1 + c ** 2))),
        children.map(lambda c: sympy.sqrt(c ** 2 + 1)),
    )


trees = st.recursive(_leaves, _extend, max_leaves=5)


class CalculusPropertyTest(SimpleTestCase):
    """
    Property tests: linearity and the Leibniz rule on random small trees.
    """

    # TEST 27: Linearity
    @hypothesis_settings(max_examples=15, deadline=None)
    @given(trees, trees)
    def test_linearity(self, f, g):
        """
        Test d(2f + g) - (2 df + dg) is zero.
        """
        residual = differentiate(2 * f + g, 'x') - 2 * differentiate(f, 'x') - differentiate(g, 'x')
        self.assertTrue(is_zero(residual, samples=8).identically_zero)

    # TEST 28: Leibniz Rule
    @hypothesis_settings(max_examples=15, deadline=None)
    @given(trees, trees)
    def test_leibniz(self, f, g):
        """
        Test d(fg) - (df g + f dg) is zero.
        """
        residual = differentiate(f * g, 'x') - differentiate(f, 'x') * g - f * differentiate(g, 'x')
        self.assertTrue(is_zero(residual, samples=8).identically_zero)
