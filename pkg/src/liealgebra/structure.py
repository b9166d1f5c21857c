"""
Structure constants read off the flat coframe systems.

A system lists d e^k as sums coeff * e^a ^ e^b; with
d e^k = -1/2 c^k_ij e^i ^ e^j this gives c^k_ab = -coeff, c^k_ba = +coeff.
"""

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np
import sympy
from sympy.polys.matrices import DomainMatrix

from exterior.charts import Chart
from exterior.differential import DifferentialForm
from expressions.exceptions import ChartMismatchError, DimensionError
from expressions.printer import to_formula

logger = logging.getLogger(__name__)

THIRD = sympy.Rational(1, 3)
FOUR_THIRDS = sympy.Rational(4, 3)

POINT_LABELS = ('theta1', 'theta2', 'theta3', 'theta4', 'Omega1', 'Omega2', 'Omega3')

#point equivalence of y''' = F with every Cartan invariant set to zero
SYSPOINT_FLAT = {
    'theta1': [(1, 'Omega1', 'theta1'), (1, 'theta4', 'theta2')],
    'theta2': [(1, 'Omega2', 'theta2'), (1, 'Omega3', 'theta1'), (1, 'theta4', 'theta3')],
    'theta3': [(2, 'Omega2', 'theta3'), (-1, 'Omega1', 'theta3'), (1, 'Omega3', 'theta2')],
    'theta4': [(1, 'Omega1', 'theta4'), (-1, 'Omega2', 'theta4')],
    'Omega1': [(-1, 'Omega3', 'theta4')],
    'Omega2': [],
    'Omega3': [(1, 'Omega2', 'Omega3'), (-1, 'Omega1', 'Omega3')],
}

G2_LABELS = ('theta1', 'theta2', 'theta3', 'theta4', 'theta5',
             'Omega1', 'Omega2', 'Omega3', 'Omega4', 'Omega5', 'Omega6', 'Omega7', 'Omega8', 'Omega9')

#z' = F(x, y, y', y'', z) with every scalar invariant set to zero, i.e. the Hilbert equation
G2_FLAT = {
    'theta1': [(2, 'theta1', 'Omega1'), (1, 'theta1', 'Omega4'), (1, 'theta2', 'Omega2'), (1, 'theta3', 'theta4')],
    'theta2': [(1, 'theta1', 'Omega3'), (1, 'theta2', 'Omega1'), (2, 'theta2', 'Omega4'), (1, 'theta3', 'theta5')],
    'theta3': [(1, 'theta1', 'Omega5'), (1, 'theta2', 'Omega6'), (1, 'theta3', 'Omega1'), (1, 'theta3', 'Omega4'),
               (1, 'theta4', 'theta5')],
    'theta4': [(1, 'theta1', 'Omega7'), (FOUR_THIRDS, 'theta3', 'Omega6'), (1, 'theta4', 'Omega1'),
               (1, 'theta5', 'Omega2')],
    'theta5': [(1, 'theta2', 'Omega7'), (-FOUR_THIRDS, 'theta3', 'Omega5'), (1, 'theta4', 'Omega3'),
               (1, 'theta5', 'Omega4')],
    'Omega1': [(1, 'Omega3', 'Omega2'), (THIRD, 'theta3', 'Omega7'), (-2 * THIRD, 'theta4', 'Omega5'),
               (THIRD, 'theta5', 'Omega6'), (1, 'theta1', 'Omega8')],
    'Omega2': [(1, 'Omega2', 'Omega1'), (-1, 'Omega2', 'Omega4'), (-1, 'theta4', 'Omega6'), (1, 'theta1', 'Omega9')],
    'Omega3': [(1, 'Omega3', 'Omega4'), (-1, 'Omega3', 'Omega1'), (-1, 'theta5', 'Omega5'), (1, 'theta2', 'Omega8')],
    'Omega4': [(1, 'Omega2', 'Omega3'), (THIRD, 'theta3', 'Omega7'), (THIRD, 'theta4', 'Omega5'),
               (-2 * THIRD, 'theta5', 'Omega6'), (1, 'theta2', 'Omega9')],
    'Omega5': [(1, 'Omega1', 'Omega5'), (1, 'Omega3', 'Omega6'), (-1, 'theta5', 'Omega7'), (1, 'theta3', 'Omega8')],
    'Omega6': [(1, 'Omega2', 'Omega5'), (1, 'Omega4', 'Omega6'), (1, 'theta4', 'Omega7'), (1, 'theta3', 'Omega9')],
    'Omega7': [(FOUR_THIRDS, 'Omega5', 'Omega6'), (1, 'Omega1', 'Omega7'), (1, 'Omega4', 'Omega7'),
               (1, 'theta4', 'Omega8'), (1, 'theta5', 'Omega9')],
    'Omega8': [(1, 'Omega5', 'Omega7'), (2, 'Omega1', 'Omega8'), (1, 'Omega4', 'Omega8'), (1, 'Omega3', 'Omega9')],
    'Omega9': [(1, 'Omega6', 'Omega7'), (1, 'Omega1', 'Omega9'), (2, 'Omega4', 'Omega9'), (1, 'Omega2', 'Omega8')],
}

SYSTEMS = {
    'syspoint': (POINT_LABELS, SYSPOINT_FLAT),
    'g2-flat': (G2_LABELS, G2_FLAT),
}


@dataclass
class StructureConstantTable:
    """c^k_ij, stored sparsely as {(k, i, j): value} and kept antisymmetric in (i, j)."""
    labels: tuple
    constants: dict = field(default_factory=dict)

    @property
    def dim(self):
        return len(self.labels)

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise ChartMismatchError(f'{label} is not a generator of this algebra') from None

    def __getitem__(self, key):
        return self.constants.get(key, sympy.S.Zero)

    def add(self, k, i, j, value):
        """c^k_ij += value and c^k_ji -= value."""
        if i == j:
            return
        for key, delta in (((k, i, j), value), ((k, j, i), -value)):
            total = self[key] + delta
            if total == 0 or sympy.simplify(total) == 0:
                self.constants.pop(key, None)
            else:
                self.constants[key] = total

    @classmethod
    def from_system(cls, labels, system):
        table = cls(tuple(labels))
        for target, terms in system.items():
            k = table.index(target)
            for coefficient, a, b in terms:
                table.add(k, table.index(a), table.index(b), -sympy.sympify(coefficient))
        return table

    @classmethod
    def abelian(cls, n):
        return cls(tuple(f'e{i}' for i in range(1, n + 1)))

    def perturbed(self, k, i, j, delta=1):
        """A copy with c^k_ij raised by delta (and c^k_ji lowered)."""
        copy = StructureConstantTable(self.labels, dict(self.constants))
        copy.add(self.index(k), self.index(i), self.index(j), sympy.sympify(delta))
        return copy

    def array(self):
        n = self.dim
        c = np.zeros((n, n, n), dtype=object)
        c[...] = sympy.S.Zero
        for (k, i, j), value in self.constants.items():
            c[k, i, j] = value
        return c

    def is_antisymmetric(self):
        return all(sympy.simplify(value + self[(k, j, i)]) == 0 for (k, i, j), value in self.constants.items())

    def differences(self, other):
        """Keys where the two tables disagree, by label."""
        if self.labels != other.labels:
            raise ChartMismatchError('tables use different generator labels')
        keys = set(self.constants) | set(other.constants)
        return sorted((self.labels[k], self.labels[i], self.labels[j])
                      for k, i, j in keys if sympy.simplify(self[(k, i, j)] - other[(k, i, j)]) != 0)

    def as_dict(self):
        return {
            'labels': list(self.labels),
            'constants': [
                {'k': self.labels[k], 'i': self.labels[i], 'j': self.labels[j], 'value': to_formula(value)}
                for (k, i, j), value in sorted(self.constants.items()) if i < j
            ],
        }


def flat_structure_constants(system):
    try:
        labels, terms = SYSTEMS[system]
    except KeyError:
        raise ChartMismatchError(f'unknown system {system!r}; expected one of {", ".join(SYSTEMS)}') from None
    table = StructureConstantTable.from_system(labels, terms)
    logger.debug('%s: %d non-zero constants', system, len(table.constants))
    return table


@dataclass(frozen=True)
class JacobiResult:
    holds: bool
    violation: tuple = None
    value: sympy.Expr = sympy.S.Zero

    def as_dict(self):
        data = {'holds': self.holds}
        if not self.holds:
            data['violation'] = list(self.violation)
            data['value'] = to_formula(self.value)
        return data


def jacobi_check(table):
    """sum over cyclic (i, j, k) of c^l_ij c^m_lk; exact, first violating (i, j, k; m) reported."""
    c = table.array()
    n = table.dim
    for i, j, k in itertools.combinations(range(n), 3):
        for m in range(n):
            total = sum(c[l, i, j] * c[m, l, k] + c[l, j, k] * c[m, l, i] + c[l, k, i] * c[m, l, j]
                        for l in range(n))
            if total != 0 and sympy.simplify(total) != 0:
                labels = table.labels
                violation = (labels[i], labels[j], labels[k], labels[m])
                logger.info('Jacobi fails on %s', violation)
                return JacobiResult(False, violation, total)
    return JacobiResult(True)


def structure_d_squared(table):
    """
    d(d e^k) for every generator, with d e^k = -1/2 c^k_ij e^i ^ e^j extended
    as an antiderivation; the 3-forms vanish exactly when Jacobi holds.
    """
    chart = Chart(f'g{table.dim}', table.labels)
    n = table.dim
    c = table.array()
    basis = [DifferentialForm.basis(chart, label) for label in table.labels]
    d_basis = [
        DifferentialForm(chart, 2, {(i, j): -c[k, i, j] for i in range(n) for j in range(i + 1, n) if c[k, i, j] != 0})
        for k in range(n)
    ]
    result = {}
    for k, label in enumerate(table.labels):
        total = DifferentialForm(chart, 3)
        for (i, j), a in d_basis[k].coefficients.items():
            total = total + a * ((d_basis[i] ^ basis[j]) - (basis[i] ^ d_basis[j]))
        result[label] = total
    return result


@dataclass
class KillingAnalysis:
    matrix: sympy.Matrix
    rank: int
    signature: tuple

    @property
    def nondegenerate(self):
        return self.rank == self.matrix.shape[0]

    def as_dict(self):
        return {'nondegenerate': self.nondegenerate, 'rank': self.rank, 'signature': list(self.signature)}


def _sign_changes(values):
    signs = [1 if value > 0 else -1 for value in values if value != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def inertia(matrix):
    """
    (positive, negative, zero) of an exact symmetric matrix.

    Every root of the characteristic polynomial is real, so the sign changes
    of p(lambda) and p(-lambda) count the positive and negative eigenvalues
    exactly; the zero count is n - rank.
    """
    n = matrix.shape[0]
    exact = DomainMatrix.from_Matrix(sympy.Matrix(matrix), extension=True).to_field()
    rank = exact.rank()
    #coefficients[i] multiplies lambda^(n - i)
    coefficients = [exact.domain.to_sympy(c) for c in exact.charpoly()]
    mirrored = [c if (n - i) % 2 == 0 else -c for i, c in enumerate(coefficients)]
    positive, negative = _sign_changes(coefficients), _sign_changes(mirrored)
    if positive + negative != rank:
        raise DimensionError(f'sign count {positive}+{negative} does not match rank {rank}; matrix is not symmetric')
    return rank, (positive, negative, n - rank)


def killing_analysis(table):
    """K_ij = c^a_ib c^b_ja."""
    c = table.array()
    n = table.dim
    K = sympy.Matrix(n, n, lambda i, j: sympy.expand(sum(c[a, i, b] * c[b, j, a]
                                                        for a in range(n) for b in range(n))))
    rank, signature = inertia(K)
    analysis = KillingAnalysis(K, rank, signature)
    logger.info('Killing form: rank %d, signature %s', rank, signature)
    return analysis
