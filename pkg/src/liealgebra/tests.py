import numpy as np
import sympy
from django.test import SimpleTestCase

from expressions.exceptions import ChartMismatchError, DimensionError

from .invariants import commutator_closure_check, invariant_bilinear_form, invariant_three_form, proportional
from .matrices import MatrixBasis, matrix_rep
from .structure import (
    StructureConstantTable,
    flat_structure_constants,
    inertia,
    jacobi_check,
    killing_analysis,
    structure_d_squared,
)


def rotations():
    """The three generators of so(3)."""
    Lx = sympy.Matrix([[0, 0, 0], [0, 0, -1], [0, 1, 0]])
    Ly = sympy.Matrix([[0, 0, 1], [0, 0, 0], [-1, 0, 0]])
    Lz = sympy.Matrix([[0, -1, 0], [1, 0, 0], [0, 0, 0]])
    return MatrixBasis(('Lx', 'Ly', 'Lz'), (Lx, Ly, Lz))


# ============================================
# STEP 1: STRUCTURE CONSTANT TESTS
# ============================================
# These tests verify the tables read off the flat coframe systems

class StructureConstantTest(SimpleTestCase):
    """
    Test suite for flat_structure_constants(), jacobi_check() and killing_analysis().
    """

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.point = flat_structure_constants('syspoint')
        cls.g2 = flat_structure_constants('g2-flat')

    # TEST 1: Table Entries
    def test_entries(self):
        """
        Test dimensions, antisymmetry and two constants read off the systems.
        """
        self.assertEqual((self.point.dim, self.g2.dim), (7, 14))
        self.assertTrue(self.point.is_antisymmetric())
        self.assertTrue(self.g2.is_antisymmetric())
        point, g2 = self.point.index, self.g2.index
        self.assertEqual(self.point[(point('theta1'), point('Omega1'), point('theta1'))], -1)
        self.assertEqual(self.g2[(g2('theta4'), g2('theta3'), g2('Omega6'))], -sympy.Rational(4, 3))
        self.assertEqual(self.g2[(g2('theta4'), g2('Omega6'), g2('theta3'))], sympy.Rational(4, 3))
        with self.assertRaises(ChartMismatchError):
            flat_structure_constants('sl3')

    # TEST 2: Jacobi Identity
    def test_jacobi(self):
        """
        Test that both flat tables satisfy Jacobi and a perturbed one does not.
        """
        self.assertTrue(jacobi_check(self.point).holds)
        self.assertTrue(jacobi_check(self.g2).holds)
        broken = jacobi_check(self.g2.perturbed('theta1', 'theta3', 'theta4'))
        self.assertFalse(broken.holds)
        self.assertEqual(len(broken.violation), 4)
        self.assertNotEqual(broken.value, 0)

    # TEST 3: d Squared
    def test_d_squared_agrees_with_jacobi(self):
        """
        Test that d(de) vanishes exactly when Jacobi holds.
        """
        for table in (self.point, self.g2):
            self.assertTrue(all(form.is_structurally_zero() for form in structure_d_squared(table).values()))
        broken = self.g2.perturbed('theta1', 'theta3', 'theta4')
        self.assertFalse(all(form.is_structurally_zero() for form in structure_d_squared(broken).values()))

    # TEST 4: Killing Forms
    def test_killing(self):
        """
        Test signature (8,6,0) for the 14-dimensional algebra and a 3-dimensional radical for the point algebra.
        """
        g2 = killing_analysis(self.g2)
        self.assertTrue(g2.nondegenerate)
        self.assertEqual(g2.signature, (8, 6, 0))
        point = killing_analysis(self.point)
        self.assertFalse(point.nondegenerate)
        self.assertEqual(point.signature, (3, 1, 3))
        self.assertEqual(killing_analysis(StructureConstantTable.abelian(3)).signature, (0, 0, 3))

    # TEST 5: Exact Inertia
    def test_inertia_is_exact(self):
        """
        Test that eigenvalues far below float resolution still get the right sign.
        """
        tiny = sympy.Rational(1, 10 ** 8)
        self.assertEqual(inertia(sympy.diag(1, -tiny, 0)), (2, (1, 1, 1)))
        nearly_singular = sympy.Matrix([[1, 1], [1, 1 + sympy.Rational(1, 10 ** 20)]])
        self.assertEqual(inertia(nearly_singular), (2, (2, 0, 0)))
        self.assertEqual(inertia(sympy.Matrix([[sympy.sqrt(2), 1], [1, 0]])), (2, (1, 1, 0)))
        with self.assertRaises(DimensionError):
            inertia(sympy.Matrix([[0, 1], [0, 0]]))


# ============================================
# STEP 2: MATRIX CONNECTION TESTS
# ============================================
# These tests verify the generator matrices and the brackets they induce

class MatrixConnectionTest(SimpleTestCase):
    """
    Test suite for matrix_rep() and commutator_closure_check().
    """

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.ccg2 = matrix_rep('ccg2')
        cls.caln = matrix_rep('caln')
        cls.conpoint = matrix_rep('conpoint')

    # TEST 6: Generators
    def test_generators(self):
        """
        Test the number and size of the generators of each connection.
        """
        self.assertEqual((len(self.ccg2), self.ccg2.size), (14, 7))
        self.assertEqual((len(self.conpoint), self.conpoint.size), (7, 5))
        self.assertEqual((len(self.caln), self.caln.size), (7, 8))
        self.assertEqual(self.conpoint['theta1'][1, 0], 1)
        self.assertEqual(self.ccg2['theta3'][3, 0], 2 / sympy.sqrt(3))
        with self.assertRaises(ChartMismatchError):
            matrix_rep('so44')
        with self.assertRaises(DimensionError):
            MatrixBasis(('a', 'b'), (sympy.eye(2), 2 * sympy.eye(2)))

    # TEST 7: Split G2 Brackets
    def test_ccg2_closes_on_flat_table(self):
        """
        Test that the 14 matrices close with exactly the flat structure constants.
        """
        closure = commutator_closure_check(self.ccg2)
        self.assertTrue(closure.closed)
        self.assertEqual(closure.table.differences(flat_structure_constants('g2-flat')), [])

    # TEST 8: Point Brackets
    def test_point_connections_close_on_flat_table(self):
        """
        Test that conpoint and flat caln both reproduce the flat point table.
        """
        point = flat_structure_constants('syspoint')
        for basis in (self.conpoint, self.caln):
            closure = commutator_closure_check(basis)
            self.assertTrue(closure.closed)
            self.assertEqual(closure.table.differences(point), [])
        self.assertFalse(killing_analysis(commutator_closure_check(self.conpoint).table).nondegenerate)


# ============================================
# STEP 3: INVARIANT FORM TESTS
# ============================================
# These tests verify the bilinear and 3-forms preserved by a matrix basis

class InvariantFormTest(SimpleTestCase):
    """
    Test suite for invariant_bilinear_form() and invariant_three_form().
    """

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.ccg2 = matrix_rep('ccg2')

    # TEST 9: Rotations
    def test_rotations_preserve_identity(self):
        """
        Test that so(3) preserves the identity and nothing else.
        """
        result = invariant_bilinear_form(rotations())
        self.assertEqual(result.forms, [sympy.eye(3)])
        self.assertEqual(result.signature, (3, 0, 0))

    # TEST 10: (4,3) Form
    def test_ccg2_bilinear_form(self):
        """
        Test a unique invariant form of signature (4,3) up to sign.
        """
        result = invariant_bilinear_form(self.ccg2)
        self.assertEqual(result.dimension, 1)
        self.assertEqual(sorted(result.signature[:2]), [3, 4])
        self.assertEqual(result.signature[2], 0)

    # TEST 11: (4,4) Form
    def test_caln_bilinear_form(self):
        """
        Test that the flat normal conformal connection preserves a split form on R^8.
        """
        result = invariant_bilinear_form(matrix_rep('caln'))
        self.assertGreaterEqual(result.dimension, 1)
        self.assertEqual(result.signature, (4, 4, 0))

    # TEST 12: Generic 3-form
    def test_ccg2_three_form(self):
        """
        Test a unique generic invariant 3-form whose induced metric is the invariant form.
        """
        result = invariant_three_form(self.ccg2)
        self.assertEqual(result.dimension, 1)
        self.assertTrue(result.generic)
        self.assertTrue(proportional(result.induced[0], invariant_bilinear_form(self.ccg2).forms[0]))

    # TEST 13: Random Generators
    def test_random_generators_have_no_three_form(self):
        """
        Test that 14 random integer matrices preserve no 3-form.
        """
        rng = np.random.default_rng(0)
        matrices = [sympy.Matrix(rng.integers(-3, 4, (7, 7)).tolist()) for _ in range(14)]
        basis = MatrixBasis(tuple(f'X{i}' for i in range(14)), matrices)
        self.assertEqual(invariant_three_form(basis).dimension, 0)
