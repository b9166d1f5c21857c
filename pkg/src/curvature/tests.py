import mpmath
import numpy as np
import sympy
from django.test import SimpleTestCase

from exterior.charts import Chart
from exterior.differential import DifferentialForm
from expressions.evaluation import DomainBox, evaluate_many
from expressions.exceptions import BoxUnusableError, DimensionError
from expressions.symbols import symbols

from .engine import CurvatureEngine
from .metric import MetricTensor, TensorField, conformal_rescale, tensor_is_zero
from .tensors import (
    cotton3,
    curvature_package,
    einstein_residual,
    first_bianchi,
    frame_components,
    metric_compatibility,
    metric_field,
    weyl,
    weyl_connection_residual,
    weyl_square,
    weyl_traces,
)

a, b, c, u = symbols('a b c u')
s, theta, varphi = symbols('s theta varphi')

E3 = Chart('E3', (a, b, c))
E4 = Chart('E4', (a, b, c, u))
SPHERE = Chart('S2xR', (s, theta, varphi))


def shifted(tensor, constant):
    """tensor - constant, for scalar fields."""
    return tensor.derive(f'{tensor.name}-{constant}',
                         lambda v, m: (v - mpmath.mpf(constant), m + abs(mpmath.mpf(constant))))


def difference(left, right):
    return left.combine(right, f'{left.name}-{right.name}', lambda v, m, w, n: (v - w, m + n))


# ============================================
# STEP 1: LEVI-CIVITA CURVATURE TESTS
# ============================================
# These tests verify the curvature package on flat and round metrics

class CurvaturePackageTest(SimpleTestCase):
    """
    Test suite for curvature_package() and its structural properties.
    """

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.flat = MetricTensor(E3, sympy.diag(1, -1, -1))
        #2-sphere of radius 2 times a line
        cls.sphere = MetricTensor(SPHERE, sympy.diag(1, 4, 4 * sympy.sin(theta) ** 2),
                                  DomainBox.from_bounds({'theta': (0.5, 2.5)}))

    # TEST 1: Flat Metric
    def test_flat_is_flat(self):
        """
        Test that every output of a constant diagonal metric vanishes.
        """
        package = curvature_package(self.flat)
        for tensor in (package.christoffel, package.riemann, package.ricci, package.scalar):
            self.assertTrue(tensor_is_zero(tensor, samples=5).identically_zero, tensor.name)

    # TEST 2: Round Sphere Scalar
    def test_sphere_scalar(self):
        """
        Test R = 2/r^2 = 1/2 for the radius-2 sphere block.
        """
        scalar = curvature_package(self.sphere).scalar
        self.assertTrue(tensor_is_zero(shifted(scalar, '0.5'), samples=8).identically_zero)
        value = scalar.at({'theta': 1.0})
        self.assertAlmostEqual(float(value), 0.5, places=12)

    # TEST 3: Bianchi And Compatibility
    def test_bianchi_and_compatibility(self):
        """
        Test the first Bianchi identity and nabla g = 0 on the sphere block.
        """
        self.assertTrue(tensor_is_zero(first_bianchi(self.sphere), samples=8).identically_zero)
        self.assertTrue(tensor_is_zero(metric_compatibility(self.sphere), samples=8).identically_zero)

    # TEST 4: Constant Curvature 3-metric
    def test_round_three_sphere_is_einstein(self):
        """
        Test that the stereographic round 3-sphere has vanishing Einstein residual.
        """
        conformal = 4 / (1 + a ** 2 + b ** 2 + c ** 2) ** 2
        metric = MetricTensor(E3, sympy.diag(conformal, conformal, conformal))
        self.assertTrue(tensor_is_zero(einstein_residual(metric), samples=8).identically_zero)
        self.assertFalse(tensor_is_zero(curvature_package(metric).ricci, samples=5).identically_zero)

    # TEST 5: Singular Metric
    def test_singular_metric(self):
        """
        Test that a metric singular everywhere leaves no usable sample point.
        """
        degenerate = MetricTensor(E3, sympy.diag(1, a, 0))
        with self.assertRaises(BoxUnusableError):
            tensor_is_zero(curvature_package(degenerate).scalar, samples=5)


# ============================================
# STEP 2: WEYL AND COTTON TESTS
# ============================================
# These tests verify the conformal curvature tensors

class ConformalCurvatureTest(SimpleTestCase):
    """
    Test suite for weyl(), weyl_square() and cotton3().
    """

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.conformally_flat = MetricTensor(
            E4, sympy.exp(2 * (a * b / 3 + c ** 2 / 5)) * sympy.diag(1, 1, -1, -1))
        #a curved surface times a flat plane is not conformally flat
        cls.product = MetricTensor(E4, sympy.diag(1, 1 + a ** 2, 1, 1))

    # TEST 6: Conformally Flat
    def test_conformally_flat_weyl(self):
        """
        Test that Weyl and its square vanish for e^(2f) times a flat metric.
        """
        self.assertTrue(tensor_is_zero(weyl(self.conformally_flat), samples=6).identically_zero)
        self.assertTrue(tensor_is_zero(weyl_square(self.conformally_flat), samples=6).identically_zero)

    # TEST 7: Curved Product
    def test_product_weyl(self):
        """
        Test that Weyl does not vanish for the product metric, but its traces do.
        """
        verdict = tensor_is_zero(weyl(self.product), samples=6)
        self.assertFalse(verdict.identically_zero)
        self.assertIsNotNone(verdict.witness)
        self.assertTrue(tensor_is_zero(weyl_traces(self.product), samples=6).identically_zero)

    # TEST 8: Conformal Weight
    def test_weyl_conformal_weight(self):
        """
        Test Weyl(e^(2U) g) = e^(2U) Weyl(g) with all indices down.
        """
        upsilon = a * b / 3
        rescaled = weyl(conformal_rescale(self.product, upsilon))
        base = weyl(self.product)

        def evaluate(point):
            left, left_scale = rescaled.evaluate(point)
            right, right_scale = base.evaluate(point)
            factor = mpmath.exp(2 * evaluate_many([upsilon], point)[0])
            return left - right * factor, left_scale + right_scale * factor

        names = tuple(sorted(set(rescaled.names) | set(base.names)))
        check = TensorField(E4, 'weight', (0, 4), evaluate, names, self.product.box)
        self.assertTrue(tensor_is_zero(check, samples=6).identically_zero)

    # TEST 9: Cotton Invariance
    def test_cotton_conformal_invariance(self):
        """
        Test that the Cotton tensor vanishes for flat and conformally flat 3-metrics.
        """
        flat = MetricTensor(E3, sympy.eye(3))
        self.assertTrue(tensor_is_zero(cotton3(flat), samples=5).identically_zero)
        rescaled = conformal_rescale(flat, a * b + c / 2)
        self.assertTrue(tensor_is_zero(cotton3(rescaled), samples=6).identically_zero)

    # TEST 10: Cotton Trace
    def test_cotton_trace_free(self):
        """
        Test g^ij C_ijk = 0 and the antisymmetry of C in its last pair.
        """
        metric = MetricTensor(E3, sympy.diag(1, 1 + a ** 2, 1 + b ** 2))
        engine = CurvatureEngine(metric, order=3)

        def evaluate(point):
            signed, magnitude = engine.at(point)
            return (np.einsum('ij,ijk->k', signed.ginv, signed.cotton),
                    np.einsum('ij,ijk->k', magnitude.ginv, magnitude.cotton))

        trace = TensorField(E3, 'trace', (0, 1), evaluate, engine.names, metric.box)
        self.assertTrue(tensor_is_zero(trace, samples=6).identically_zero)
        cotton = cotton3(metric)
        antisymmetry = cotton.derive('sym', lambda v, m: (v + np.einsum('ikj->ijk', v),
                                                          m + np.einsum('ikj->ijk', m)))
        self.assertTrue(tensor_is_zero(antisymmetry, samples=6).identically_zero)

    # TEST 11: Dimension Checks
    def test_dimension_checks(self):
        """
        Test that Weyl needs dimension 4 or 5 and Cotton needs dimension 3.
        """
        with self.assertRaises(DimensionError):
            weyl(MetricTensor(E3, sympy.eye(3)))
        with self.assertRaises(DimensionError):
            cotton3(self.product)


# ============================================
# STEP 3: WEYL CONNECTION TESTS
# ============================================
# These tests verify the Einstein-Weyl residual of a metric and a 1-form

class WeylConnectionTest(SimpleTestCase):
    """
    Test suite for weyl_connection_residual().
    """

    # TEST 12: Flat, nu = 0
    def test_flat_zero(self):
        """
        Test that the residual of (flat, 0) vanishes.
        """
        flat = MetricTensor(E3, sympy.eye(3))
        residual = weyl_connection_residual(flat, DifferentialForm(E3, 1))
        self.assertTrue(tensor_is_zero(residual, samples=5).identically_zero)

    # TEST 13: Constant nu
    def test_constant_nu(self):
        """
        Test (flat, 2 da) against the hand expansion diag(2/3, -1/3, -1/3).
        """
        flat = MetricTensor(E3, sympy.eye(3))
        residual = weyl_connection_residual(flat, DifferentialForm.one_form(E3, {'a': 2}))
        values = residual.at({})
        expected = np.diag([mpmath.mpf(2) / 3, -mpmath.mpf(1) / 3, -mpmath.mpf(1) / 3])
        for i in range(3):
            for j in range(3):
                self.assertAlmostEqual(float(values[i, j]), float(expected[i, j]), places=12)

    # TEST 14: Reduction To Einstein
    def test_reduces_to_einstein(self):
        """
        Test that with nu = 0 the residual is the trace-free Ricci tensor.
        """
        metric = MetricTensor(E3, sympy.diag(1, 1 + a ** 2, 1 + b ** 2))
        residual = weyl_connection_residual(metric, DifferentialForm(E3, 1))
        self.assertTrue(tensor_is_zero(difference(residual, einstein_residual(metric)), samples=6).identically_zero)

    # TEST 15: Gauge Invariance
    def test_gauge_invariance(self):
        """
        Test that (e^(-2 phi) g, nu + 2 d phi) has the same residual as (g, nu).
        """
        metric = MetricTensor(E3, sympy.diag(1, 1 + a ** 2, 1))
        nu = DifferentialForm.one_form(E3, {'a': b, 'c': a})
        phi = a * c / 2
        gauged = conformal_rescale(metric, -phi)
        gauged_nu = nu + 2 * DifferentialForm.function(E3, phi).d()
        left = weyl_connection_residual(metric, nu)
        right = weyl_connection_residual(gauged, gauged_nu)
        self.assertTrue(tensor_is_zero(difference(right, left), samples=6).identically_zero)


# ============================================
# STEP 4: FRAME COMPONENT TESTS
# ============================================
# These tests verify conversion to frame components

class FrameComponentsTest(SimpleTestCase):
    """
    Test suite for frame_components().
    """

    # TEST 16: Identity Coframe
    def test_identity_coframe(self):
        """
        Test that the coordinate coframe leaves components unchanged.
        """
        metric = MetricTensor(E3, sympy.diag(1, 1 + a ** 2, 1))
        coframe = [DifferentialForm.basis(E3, x) for x in (a, b, c)]
        g = metric_field(metric)
        framed = frame_components(g, coframe)
        self.assertTrue(tensor_is_zero(difference(framed, g), samples=5).identically_zero)

    # TEST 17: Orthonormal Coframe
    def test_orthonormal_coframe(self):
        """
        Test that da, sqrt(1+a^2) db, dc makes the metric the identity.
        """
        metric = MetricTensor(E3, sympy.diag(1, 1 + a ** 2, 1))
        coframe = [DifferentialForm.basis(E3, a),
                   sympy.sqrt(1 + a ** 2) * DifferentialForm.basis(E3, b),
                   DifferentialForm.basis(E3, c)]
        framed = frame_components(metric_field(metric), coframe)
        values = framed.at({'a': 0.3})
        self.assertAlmostEqual(float(values[1, 1]), 1.0, places=12)
        self.assertAlmostEqual(float(values[0, 1]), 0.0, places=12)
        self.assertEqual(framed.label((1, 1)), 'g@frame[2,2]')
