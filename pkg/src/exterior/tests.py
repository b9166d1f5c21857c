import sympy
from django.test import SimpleTestCase

from expressions.exceptions import ChartMismatchError, DimensionError
from expressions.symbols import symbols

from .charts import DKP, J2_3RD, MONGE1, Chart
from .differential import DifferentialForm, SymmetricForm, VectorField, lie_derivative, sort_indices, wedge
from .transport import conformal_transport_factor, total_derivative

x, y, p, q = symbols('x y p q')

dx, dy, dp, dq = (DifferentialForm.basis(J2_3RD, c) for c in 'xypq')


# ============================================
# STEP 1: CHART TESTS
# ============================================
# These tests verify coordinate bookkeeping on the standard charts

class ChartTest(SimpleTestCase):
    """
    Test suite for Chart.
    """

    # TEST 1: Coordinates
    def test_standard_charts(self):
        """
        Test the coordinate names and indices of the standard charts.
        """
        self.assertEqual(J2_3RD.names, ('x', 'y', 'p', 'q'))
        self.assertEqual(DKP.names, ('x', 'y', 't', 'v'))
        self.assertEqual(J2_3RD.index('q'), 3)

    # TEST 2: Repeated Coordinates
    def test_repeated_coordinate_rejected(self):
        """
        Test that a chart cannot repeat a coordinate.
        """
        with self.assertRaises(ChartMismatchError):
            Chart('broken', symbols('x x'))

    # TEST 3: Foreign Coordinates
    def test_foreign_coordinate_rejected(self):
        """
        Test that a Monge first-order expression may not mention q.
        """
        with self.assertRaises(ChartMismatchError):
            MONGE1.check_expression(p * q)
        with self.assertRaises(ChartMismatchError):
            total_derivative('monge1', q ** 2)


# ============================================
# STEP 2: EXTERIOR ALGEBRA TESTS
# ============================================
# These tests verify wedge, d and interior products against hand computations

class ExteriorAlgebraTest(SimpleTestCase):
    """
    Test suite for DifferentialForm.
    """

    # TEST 4: Permutation Signs
    def test_sort_indices(self):
        """
        Test the sign of sorting index tuples.
        """
        self.assertEqual(sort_indices((2, 0, 1)), (1, (0, 1, 2)))
        self.assertEqual(sort_indices((1, 0)), (-1, (0, 1)))
        self.assertEqual(sort_indices((1, 1)), (0, None))

    # TEST 5: Antisymmetry
    def test_wedge_antisymmetry(self):
        """
        Test that dx^dy = -dy^dx and dx^dx = 0.
        """
        self.assertEqual(dx ^ dy, -(dy ^ dx))
        self.assertTrue((dx ^ dx).is_structurally_zero())
        self.assertEqual((dy ^ dx).coefficient(('x', 'y')), -1)

    # TEST 6: d Squared
    def test_d_squared_vanishes(self):
        """
        Test that d(d f) is structurally zero.
        """
        f = DifferentialForm.function(J2_3RD, x * y ** 2 * q + sympy.exp(p) * x)
        self.assertTrue(f.d().d().is_structurally_zero())
        alpha = x * p * dy + q ** 2 * dp
        self.assertTrue(alpha.d().d().is_structurally_zero())

    # TEST 7: Leibniz Rule
    def test_graded_leibniz(self):
        """
        Test d(a^b) = da^b - a^db for a 1-form a.
        """
        a = x * dy + p * dq
        b = p * q * dx
        self.assertEqual((a ^ b).d(), (a.d() ^ b) - (a ^ b.d()))

    # TEST 8: Interior Product
    def test_interior(self):
        """
        Test i_X(dx^dy) for X = d_x + 2 d_y.
        """
        field = VectorField(J2_3RD, {'x': 1, 'y': 2})
        self.assertEqual((dx ^ dy).interior(field), dy - 2 * dx)

    # TEST 9: Degree Checks
    def test_degree_overflow(self):
        """
        Test that wedging or differentiating past the chart dimension is refused.
        """
        volume = wedge(dx, dy, dp, dq)
        self.assertEqual(volume.degree, 4)
        with self.assertRaises(DimensionError):
            volume ^ dx
        with self.assertRaises(DimensionError):
            volume.d()
        self.assertEqual(lie_derivative(VectorField(J2_3RD, {'x': x}), volume), volume)

    # TEST 10: Serialization
    def test_dict_form(self):
        """
        Test the dictionary form of a 2-form and reading it back.
        """
        form = (q ** 2 * dx) ^ dp
        data = form.as_dict()
        self.assertEqual(data['terms'], [{'indices': ['x', 'p'], 'coefficient': 'q^2'}])
        self.assertEqual(DifferentialForm.from_dict(J2_3RD, data), form)


# ============================================
# STEP 3: LIE DERIVATIVE TESTS
# ============================================
# These tests verify the Lie derivative of forms and symmetric tensors

class LieDerivativeTest(SimpleTestCase):
    """
    Test suite for lie_derivative() and SymmetricForm.
    """

    # TEST 11: Commutes With d
    def test_lie_commutes_with_d(self):
        """
        Test L_X df = d(X f).
        """
        field = VectorField(J2_3RD, (1, p, q, q ** 2))
        f = DifferentialForm.function(J2_3RD, x * p + y * q ** 3)
        self.assertEqual(lie_derivative(field, f.d()), lie_derivative(field, f).d())

    # TEST 12: Scaling Field
    def test_scaling_symmetric(self):
        """
        Test L_X dx^2 = 2 dx^2 for X = x d_x.
        """
        field = VectorField(J2_3RD, {'x': x})
        g = SymmetricForm.square(dx)
        self.assertEqual(lie_derivative(field, g), 2 * g)

    # TEST 13: Symmetric Product
    def test_symmetric_product(self):
        """
        Test that 2 sym(dy, dq) has unit off-diagonal entries.
        """
        g = 2 * SymmetricForm.product(dy, dq)
        self.assertEqual(g.component('y', 'q'), 1)
        self.assertEqual(g.component('q', 'y'), 1)
        self.assertEqual(g.component('y', 'y'), 0)
        self.assertEqual(g.pair(VectorField(J2_3RD, {'y': 1}), VectorField(J2_3RD, {'q': 3})), 3)

    # TEST 14: Signature
    def test_signature(self):
        """
        Test the signature of 2 dy dq - dp^2, degenerate along d_x.
        """
        g = 2 * SymmetricForm.product(dy, dq) - SymmetricForm.square(dp)
        self.assertEqual(g.signature_at({}), (1, 2, 1))


# ============================================
# STEP 4: TRANSPORT TESTS
# ============================================
# These tests verify total derivatives and conformal transport

class TransportTest(SimpleTestCase):
    """
    Test suite for total_derivative() and conformal_transport_factor().
    """

    # TEST 15: Total Derivatives
    def test_total_derivatives(self):
        """
        Test the components of D for third-order and second-order classes.
        """
        self.assertEqual(total_derivative('ode3', q ** 2).components, (1, p, q, q ** 2))
        self.assertEqual(total_derivative('3rd-order', q).components, (1, p, q, q))
        self.assertEqual(total_derivative('ode2', p ** 2).components, (1, p, p ** 2, 0))

    # TEST 16: Homothety
    def test_homothety_is_conformal(self):
        """
        Test that x d_x + y d_y rescales dx^2 + dy^2 by 2.
        """
        field = VectorField(J2_3RD, {'x': x, 'y': y})
        g = SymmetricForm.square(dx) + SymmetricForm.square(dy)
        result = conformal_transport_factor(field, g, samples=8)
        self.assertTrue(result.success)
        self.assertEqual(result.factor, 2)
        self.assertEqual(result.pivot, (0, 0))

    # TEST 17: Non-conformal Field
    def test_stretch_is_not_conformal(self):
        """
        Test that x d_x fails, with the witness on the dy.dy component.
        """
        field = VectorField(J2_3RD, {'x': x})
        g = SymmetricForm.square(dx) + SymmetricForm.square(dy)
        result = conformal_transport_factor(field, g, samples=8)
        self.assertFalse(result.success)
        self.assertEqual(result.verdict.component, 'dy.dy')
        self.assertEqual(result.as_dict()['pivot'], ['x', 'x'])
