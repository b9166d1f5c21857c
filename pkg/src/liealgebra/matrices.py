"""
The matrix-valued Cartan connections, and their generator matrices.

Each template is a matrix of 1-forms, linear in the coframe symbols. A
generator matrix is obtained by setting one form to 1 and every other form
to 0; invariant-dependent entries are specialized first (zero by default).
"""

import logging
from dataclasses import dataclass

import sympy
from sympy.polys.matrices import DomainMatrix

from expressions.exceptions import ChartMismatchError, DimensionError
from expressions.symbols import as_symbol, symbols

from .structure import G2_LABELS, POINT_LABELS

logger = logging.getLogger(__name__)

t1, t2, t3, t4, t5 = symbols('theta1 theta2 theta3 theta4 theta5')
O1, O2, O3, O4, O5, O6, O7, O8, O9 = symbols('Omega1 Omega2 Omega3 Omega4 Omega5 Omega6 Omega7 Omega8 Omega9')

#point invariants of y''' = F, with the frame derivatives entering tau4 and tau5
A, B, C, D, G, H, K, L, M, N = symbols('A B C D G H K L M N')
X3G, X2L, X4D = symbols('X3G X2L X4D')
POINT_INVARIANTS = (A, B, C, D, G, H, K, L, M, N, X3G, X2L, X4D)

half, quarter, third = sympy.Rational(1, 2), sympy.Rational(1, 4), sympy.Rational(1, 3)
s = 1 / sympy.sqrt(3)


def conpoint():
    """co(1,2) x| R^3 connection of the point class of y''' = F."""
    return sympy.Matrix([
        [O2, 0, 0, 0, 0],
        [t1, O2 - O1, -t4, 0, 0],
        [t2, -O3, 0, -t4, 0],
        [t3, 0, -O3, O1 - O2, 0],
        [0, t3, -t2, t1, -O2],
    ])


def caln():
    """so(4,4) normal conformal connection on the space of integral curves of Z."""
    tau4 = (X3G - 6 * H) / 12 * t1 - quarter * K * t2 - half * C * t3
    tau5 = (half * (-A * C - 2 * X2L - 2 * M + X4D) * t1 + (X3G - 6 * H + 6 * D) / 12 * t2
            + quarter * (-2 * B + 3 * K) * t3 + half * G * t4)
    g13 = half * O3 + half * (G - L) * t1
    g23 = N * t1 + half * (G - L) * t2 + A * t4
    g24 = M * t1 - H * t2 + half * (2 * B - 3 * K) * t3 - half * (G + L) * t4
    g26 = (D - H) * t1 + half * K * t2 + C * t3
    g34 = half * (2 * B - K) * t1 + C * t2
    return sympy.Matrix([
        [half * O2, quarter * (O1 - O2), -quarter * t4, quarter * O3, tau4, tau5, half * g34, 0],
        [O1 - O2, half * O2, half * t4, g13, 0, -g24, -g34, tau4],
        [-O3, half * O3, half * O1, g23, g24, 0, g26, tau5],
        [t4, half * t4, 0, -half * O1 + O2, g34, -g26, 0, half * g34],
        [t2, 0, -half * t1, half * t3, -half * O2, -half * O3, -half * t4, quarter * (O1 - O2)],
        [t1, half * t1, 0, half * t2, -half * t4, -half * O1, 0, -quarter * t4],
        [t3, -half * t3, -half * t2, 0, -g13, -g23, half * O1 - O2, quarter * O3],
        [0, t2, t1, t3, O1 - O2, -O3, t4, -half * O2],
    ])


def ccg2():
    """Split G2 connection of z' = F(x, y, y', y'', z), F_qq != 0."""
    return sympy.Matrix([
        [-O1 - O4, -O8, -O9, -s * O7, third * O5, third * O6, 0],
        [t1, O1, O2, s * t4, -third * t3, 0, third * O6],
        [t2, O3, O4, s * t5, 0, -third * t3, -third * O5],
        [2 * s * t3, 2 * s * O5, 2 * s * O6, 0, s * t5, -s * t4, -s * O7],
        [t4, O7, 0, 2 * s * O6, -O4, O2, O9],
        [t5, 0, O7, -2 * s * O5, O3, -O1, -O8],
        [0, t5, -t4, 2 * s * t3, -t2, t1, O1 + O4],
    ])


CONNECTIONS = {
    'conpoint': (conpoint, POINT_LABELS),
    'caln': (caln, POINT_LABELS),
    'ccg2': (ccg2, G2_LABELS),
}


@dataclass
class MatrixBasis:
    labels: tuple
    matrices: tuple

    def __post_init__(self):
        self.matrices = tuple(sympy.ImmutableMatrix(m) for m in self.matrices)
        if len(self.labels) != len(self.matrices):
            raise DimensionError(f'{len(self.labels)} labels for {len(self.matrices)} matrices')
        shapes = {m.shape for m in self.matrices}
        if len(shapes) != 1 or any(rows != cols for rows, cols in shapes):
            raise DimensionError('generators must be square matrices of one size')
        if self.rank() != len(self.matrices):
            raise DimensionError('generator matrices are linearly dependent')

    @property
    def size(self):
        return self.matrices[0].shape[0]

    def __len__(self):
        return len(self.matrices)

    def __getitem__(self, label):
        return self.matrices[self.labels.index(label)]

    def columns(self):
        """Generators flattened row-major, one per column."""
        return sympy.Matrix.hstack(*(m.reshape(self.size ** 2, 1) for m in self.matrices))

    def rank(self):
        return DomainMatrix.from_Matrix(self.columns(), extension=True).to_field().rank()

    def as_dict(self):
        return {'labels': list(self.labels), 'size': self.size}


def generator_matrices(template, labels, invariants=None):
    """Replace one form by 1 and all others by 0, for each label in turn."""
    forms = symbols(' '.join(labels))
    specialization = {symbol: 0 for symbol in POINT_INVARIANTS}
    specialization.update({as_symbol(k): sympy.sympify(v) for k, v in (invariants or {}).items()})
    template = template.xreplace({k: v for k, v in specialization.items() if k not in forms})
    stray = set().union(*(entry.free_symbols for entry in template)) - set(forms)
    if stray:
        raise ChartMismatchError(f'connection entries use {", ".join(sorted(map(str, stray)))}')
    matrices = []
    for form in forms:
        matrices.append(template.xreplace({other: (1 if other == form else 0) for other in forms}))
    return matrices


def matrix_rep(connection, invariants=None):
    """
    MatrixBasis of one of the named connections; invariants maps invariant
    names (A..N, X3G, X2L, X4D for caln) to values, zero when omitted.
    """
    try:
        template, labels = CONNECTIONS[connection]
    except KeyError:
        raise ChartMismatchError(
            f'unknown connection {connection!r}; expected one of {", ".join(CONNECTIONS)}'
        ) from None
    basis = MatrixBasis(labels, generator_matrices(template(), labels, invariants))
    logger.debug('%s: %d generators of size %d', connection, len(basis), basis.size)
    return basis
