"""Closure of a matrix basis under commutators and the forms it preserves."""

import itertools
import logging
from dataclasses import dataclass, field

import sympy
from sympy.polys.matrices import DomainMatrix

from exterior.charts import Chart
from exterior.differential import DifferentialForm, VectorField, wedge
from expressions.printer import to_formula

from .structure import StructureConstantTable, inertia

logger = logging.getLogger(__name__)


def _field(matrix):
    return DomainMatrix.from_Matrix(sympy.Matrix(matrix), extension=True).to_field()


def _null_vectors(rows, unknowns):
    """Exact basis of the solution space of rows . x = 0."""
    if not rows:
        return [sympy.Matrix.eye(unknowns).row(i) for i in range(unknowns)]
    null = _field(sympy.Matrix(rows)).nullspace().to_Matrix()
    vectors = []
    for i in range(null.rows):
        vector = null.row(i)
        pivot = next(v for v in vector if v != 0)
        vectors.append((vector / pivot).applyfunc(sympy.radsimp))
    return vectors


@dataclass
class ClosureResult:
    closed: bool
    table: StructureConstantTable
    outside: list = field(default_factory=list)

    def as_dict(self):
        return {
            'closed': self.closed,
            'outside': [list(pair) for pair in self.outside],
            'structure_constants': self.table.as_dict(),
        }


def commutator_closure_check(basis):
    """
    Expand every [E_i, E_j] in the basis; the coefficients are the induced
    structure constants, [E_i, E_j] = c^k_ij E_k.
    """
    m = len(basis)
    pairs = list(itertools.combinations(range(m), 2))
    commutators = [basis.matrices[i] * basis.matrices[j] - basis.matrices[j] * basis.matrices[i] for i, j in pairs]
    columns = sympy.Matrix.hstack(basis.columns(), *(c.reshape(basis.size ** 2, 1) for c in commutators))
    rref, pivots = _field(columns).rref()
    reduced = rref.to_Matrix()
    closed = all(p < m for p in pivots)
    outside = [] if closed else [(i, j) for column, (i, j) in enumerate(pairs)
                                 if not _in_span(basis, commutators[column])]
    table = StructureConstantTable(basis.labels)
    for column, (i, j) in enumerate(pairs):
        if (i, j) in outside:
            continue
        for k in range(m):
            value = sympy.radsimp(reduced[k, m + column])
            if value != 0:
                table.add(k, i, j, value)
    outside = [(basis.labels[i], basis.labels[j]) for i, j in outside]
    logger.info('commutator closure of %d generators: %s', m, 'closed' if closed else f'{len(outside)} pairs outside')
    return ClosureResult(closed, table, outside)


def _in_span(basis, matrix):
    columns = basis.columns()
    augmented = sympy.Matrix.hstack(columns, matrix.reshape(basis.size ** 2, 1))
    return _field(augmented).rank() == _field(columns).rank()


@dataclass
class FormSolutions:
    """A basis of invariant forms and the inertia of a generic member."""
    forms: list
    signature: tuple = None

    @property
    def dimension(self):
        return len(self.forms)

    def as_dict(self):
        return {
            'dimension': self.dimension,
            'signature': list(self.signature) if self.signature else None,
            'forms': [to_formula(form) for form in self.forms],
        }


def _generic(forms):
    return sum((k * form for k, form in enumerate(forms, start=1)), sympy.zeros(*forms[0].shape))


def invariant_bilinear_form(basis):
    """Symmetric B with X^T B + B X = 0 for every generator X."""
    n = basis.size
    slots = {pair: index for index, pair in enumerate(itertools.combinations_with_replacement(range(n), 2))}

    def slot(a, b):
        return slots[(a, b) if a <= b else (b, a)]

    rows = []
    for X in basis.matrices:
        for a, b in slots:
            row = [sympy.S.Zero] * len(slots)
            for d in range(n):
                row[slot(d, b)] += X[d, a]
                row[slot(a, d)] += X[d, b]
            if any(v != 0 for v in row):
                rows.append(row)
    forms = []
    for vector in _null_vectors(rows, len(slots)):
        forms.append(sympy.Matrix(n, n, lambda a, b: vector[slot(a, b)]))
    result = FormSolutions(forms)
    if forms:
        result.signature = inertia(_generic(forms))[1]
    logger.info('invariant bilinear forms: dimension %d, signature %s', result.dimension, result.signature)
    return result


@dataclass
class ThreeFormSolutions:
    forms: list
    induced: list
    generic: bool = False

    @property
    def dimension(self):
        return len(self.forms)

    def as_dict(self):
        return {
            'dimension': self.dimension,
            'generic': self.generic,
            'forms': [{''.join(str(i + 1) for i in triple): to_formula(value) for triple, value in form.items()}
                      for form in self.forms],
        }


def _permutation_sign(indices):
    sign, indices = 1, list(indices)
    for i in range(len(indices)):
        for j in range(len(indices) - 1 - i):
            if indices[j] > indices[j + 1]:
                indices[j], indices[j + 1] = indices[j + 1], indices[j]
                sign = -sign
    return sign, tuple(indices)


def induced_bilinear_form(phi, n):
    """(i_u phi) ^ (i_v phi) ^ phi / 6 on e1 ^ ... ^ e7; None outside dimension 7."""
    if n != 7:
        return None
    chart = Chart(f'R{n}', tuple(f'e{i}' for i in range(1, n + 1)))
    form = DifferentialForm(chart, 3, phi)
    contracted = [form.interior(VectorField(chart, {i: 1})) for i in range(n)]
    volume = tuple(range(n))
    return sympy.Matrix(n, n, lambda u, v: wedge(contracted[u], contracted[v], form).coefficient(volume) / 6)


def invariant_three_form(basis):
    """3-forms phi with phi(Xu, v, w) + phi(u, Xv, w) + phi(u, v, Xw) = 0 for every generator X."""
    n = basis.size
    triples = list(itertools.combinations(range(n), 3))
    slots = {triple: index for index, triple in enumerate(triples)}
    rows = []
    for X in basis.matrices:
        for a, b, c in triples:
            row = [sympy.S.Zero] * len(triples)
            for d in range(n):
                for position, value in ((0, X[d, a]), (1, X[d, b]), (2, X[d, c])):
                    if value == 0:
                        continue
                    indices = [a, b, c]
                    indices[position] = d
                    if len(set(indices)) < 3:
                        continue
                    sign, ordered = _permutation_sign(indices)
                    row[slots[ordered]] += sign * value
            if any(v != 0 for v in row):
                rows.append(row)
    forms = [{triple: vector[slots[triple]] for triple in triples if vector[slots[triple]] != 0}
             for vector in _null_vectors(rows, len(triples))]
    induced = [induced_bilinear_form(phi, n) for phi in forms]
    generic = bool(induced) and induced[0] is not None and _field(induced[0]).rank() == n
    result = ThreeFormSolutions(forms, induced, generic)
    logger.info('invariant 3-forms: dimension %d, generic %s', result.dimension, result.generic)
    return result


def proportional(first, second):
    """Exact test that two nonzero matrices are multiples of each other."""
    stacked = sympy.Matrix.vstack(first.reshape(1, len(first)), second.reshape(1, len(second)))
    return _field(stacked).rank() == 1
