"""
Vector fields, differential forms and symmetric 2-tensors on a chart.

Forms are stored as a mapping from strictly increasing index tuples to
non-zero sympy coefficients; everything else is derived from that.
"""

import functools
import logging

import mpmath
import numpy as np
import sympy

from expressions.calculus import apply_vector_field, differentiate
from expressions.evaluation import evaluate_many, geometry_setting
from expressions.exceptions import ChartMismatchError, DimensionError
from expressions.printer import to_formula

logger = logging.getLogger(__name__)


def sort_indices(indices):
    """(sign, sorted tuple) of a permutation of indices, or (0, None) when one repeats."""
    indices = list(indices)
    if len(set(indices)) != len(indices):
        return 0, None
    sign = 1
    for i in range(len(indices)):
        for j in range(i + 1, len(indices)):
            if indices[i] > indices[j]:
                sign = -sign
    return sign, tuple(sorted(indices))


def _same_chart(a, b):
    if a.chart != b.chart:
        raise ChartMismatchError(f'{a.chart.name} and {b.chart.name} do not match')


class VectorField:
    __slots__ = ('chart', 'components')

    def __init__(self, chart, components):
        if isinstance(components, dict):
            values = [sympy.S.Zero] * chart.dim
            for key, value in components.items():
                values[key if isinstance(key, int) else chart.index(key)] = sympy.sympify(value)
            components = values
        components = tuple(sympy.sympify(c) for c in components)
        if len(components) != chart.dim:
            raise DimensionError(f'vector field needs {chart.dim} components, got {len(components)}')
        self.chart = chart
        self.components = components

    def __call__(self, f):
        return apply_vector_field(self.components, self.chart.coordinates, f)

    def __getitem__(self, i):
        return self.components[i]

    def __repr__(self):
        terms = [f'({to_formula(c)})*d_{name}' for c, name in zip(self.components, self.chart.names) if c != 0]
        return ' + '.join(terms) or '0'


class DifferentialForm:
    __slots__ = ('chart', 'degree', 'coefficients')

    def __init__(self, chart, degree, coefficients=None):
        if not 0 <= degree <= chart.dim:
            raise DimensionError(f'no {degree}-forms on a {chart.dim}-dimensional chart')
        self.chart = chart
        self.degree = degree
        self.coefficients = {}
        for indices, value in (coefficients or {}).items():
            indices = tuple(i if isinstance(i, int) else chart.index(i) for i in indices)
            if len(indices) != degree:
                raise DimensionError(f'{indices} is not a {degree}-index')
            sign, ordered = sort_indices(indices)
            if sign:
                self._accumulate(ordered, sign * sympy.sympify(value))

    def _accumulate(self, indices, value):
        total = sympy.expand(self.coefficients.get(indices, sympy.S.Zero) + value)
        if total == 0:
            self.coefficients.pop(indices, None)
        else:
            self.coefficients[indices] = total

    @classmethod
    def function(cls, chart, f):
        return cls(chart, 0, {(): f})

    @classmethod
    def basis(cls, chart, coordinate):
        return cls(chart, 1, {(chart.index(coordinate),): 1})

    @classmethod
    def one_form(cls, chart, mapping):
        """one_form(J2_3RD, {'y': 1, 'x': -p}) is dy - p dx."""
        return cls(chart, 1, {(key,): value for key, value in mapping.items()})

    def coefficient(self, indices):
        indices = tuple(i if isinstance(i, int) else self.chart.index(i) for i in indices)
        sign, ordered = sort_indices(indices)
        if not sign:
            return sympy.S.Zero
        return sign * self.coefficients.get(ordered, sympy.S.Zero)

    def is_structurally_zero(self):
        return not self.coefficients

    def map_coefficients(self, fn):
        return DifferentialForm(self.chart, self.degree, {k: fn(v) for k, v in self.coefficients.items()})

    def simplify(self):
        return self.map_coefficients(sympy.simplify)

    def __add__(self, other):
        _same_chart(self, other)
        if self.degree != other.degree:
            raise DimensionError(f'cannot add a {self.degree}-form and a {other.degree}-form')
        result = DifferentialForm(self.chart, self.degree, self.coefficients)
        for indices, value in other.coefficients.items():
            result._accumulate(indices, value)
        return result

    def __neg__(self):
        return self.map_coefficients(lambda v: -v)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, DifferentialForm):
            return self.wedge(scalar)
        scalar = sympy.sympify(scalar)
        return self.map_coefficients(lambda v: scalar * v)

    def __rmul__(self, scalar):
        scalar = sympy.sympify(scalar)
        return self.map_coefficients(lambda v: scalar * v)

    def __xor__(self, other):
        return self.wedge(other)

    def __eq__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return (self.chart == other.chart and self.degree == other.degree
                and (self - other).is_structurally_zero())

    __hash__ = None

    def wedge(self, other):
        _same_chart(self, other)
        degree = self.degree + other.degree
        if degree > self.chart.dim:
            raise DimensionError(f'no {degree}-forms on a {self.chart.dim}-dimensional chart')
        result = DifferentialForm(self.chart, degree)
        for left, a in self.coefficients.items():
            for right, b in other.coefficients.items():
                sign, ordered = sort_indices(left + right)
                if sign:
                    result._accumulate(ordered, sign * a * b)
        return result

    def d(self):
        """Exterior derivative."""
        if self.degree >= self.chart.dim:
            raise DimensionError(f'no d of a {self.degree}-form on a {self.chart.dim}-dimensional chart')
        result = DifferentialForm(self.chart, self.degree + 1)
        for indices, value in self.coefficients.items():
            for k, coordinate in enumerate(self.chart.coordinates):
                if k in indices:
                    continue
                derivative = differentiate(value, coordinate)
                if derivative != 0:
                    sign, ordered = sort_indices((k,) + indices)
                    result._accumulate(ordered, sign * derivative)
        return result

    def interior(self, field):
        """i_X of the form; X goes into the first slot."""
        if field.chart != self.chart:
            raise ChartMismatchError(f'{field.chart.name} and {self.chart.name} do not match')
        if self.degree == 0:
            return DifferentialForm(self.chart, 0)
        result = DifferentialForm(self.chart, self.degree - 1)
        for indices, value in self.coefficients.items():
            for m, i in enumerate(indices):
                if field[i] != 0:
                    result._accumulate(indices[:m] + indices[m + 1:], (-1) ** m * field[i] * value)
        return result

    def components(self):
        """Label -> coefficient, labels spelled with coordinate names."""
        return {'^'.join(self.chart.names[i] for i in indices) or 'scalar': value
                for indices, value in sorted(self.coefficients.items())}

    def as_dict(self):
        return {
            'chart': self.chart.name,
            'degree': self.degree,
            'terms': [{'indices': [self.chart.names[i] for i in indices], 'coefficient': to_formula(value)}
                      for indices, value in sorted(self.coefficients.items())],
        }

    @classmethod
    def from_dict(cls, chart, data):
        from expressions.parser import parse
        if data['chart'] != chart.name:
            raise ChartMismatchError(f'form lives on {data["chart"]}, not {chart.name}')
        return cls(chart, data['degree'],
                   {tuple(t['indices']): parse(t['coefficient']) for t in data['terms']})

    def __repr__(self):
        if not self.coefficients:
            return '0'
        return ' + '.join(
            f'({to_formula(value)})' + (''.join(f'*d{self.chart.names[i]}' for i in indices) if indices else '')
            for indices, value in sorted(self.coefficients.items())
        )


def wedge(*forms):
    return functools.reduce(lambda a, b: a.wedge(b), forms)


def d(form):
    return form.d()


def interior(field, form):
    return form.interior(field)


class SymmetricForm:
    """Symmetric 2-tensor held as an immutable sympy matrix in chart coordinates."""
    __slots__ = ('chart', 'matrix')

    def __init__(self, chart, matrix):
        matrix = sympy.ImmutableMatrix(matrix)
        if matrix.shape != (chart.dim, chart.dim):
            raise DimensionError(f'symmetric form on {chart.name} needs a {chart.dim}x{chart.dim} matrix')
        if any(sympy.expand(matrix[i, j] - matrix[j, i]) != 0
               for i in range(chart.dim) for j in range(i + 1, chart.dim)):
            raise DimensionError('matrix is not symmetric')
        self.chart = chart
        self.matrix = matrix.applyfunc(sympy.expand)

    @classmethod
    def zero(cls, chart):
        return cls(chart, sympy.zeros(chart.dim, chart.dim))

    @classmethod
    def product(cls, a, b):
        """Symmetric product of two 1-forms: (a (x) b + b (x) a) / 2."""
        _same_chart(a, b)
        if a.degree != 1 or b.degree != 1:
            raise DimensionError('symmetric products take 1-forms')
        n = a.chart.dim
        va = [a.coefficient((i,)) for i in range(n)]
        vb = [b.coefficient((i,)) for i in range(n)]
        return cls(a.chart, sympy.Matrix(n, n, lambda i, j: (va[i] * vb[j] + vb[i] * va[j]) / 2))

    @classmethod
    def square(cls, a):
        return cls.product(a, a)

    def component(self, i, j):
        i = i if isinstance(i, int) else self.chart.index(i)
        j = j if isinstance(j, int) else self.chart.index(j)
        return self.matrix[i, j]

    def __add__(self, other):
        _same_chart(self, other)
        return SymmetricForm(self.chart, self.matrix + other.matrix)

    def __neg__(self):
        return SymmetricForm(self.chart, -self.matrix)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return SymmetricForm(self.chart, sympy.sympify(scalar) * self.matrix)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SymmetricForm):
            return NotImplemented
        return self.chart == other.chart and (self - other).is_structurally_zero()

    __hash__ = None

    def is_structurally_zero(self):
        return all(v == 0 for v in self.matrix)

    def contract(self, field):
        """g(X, .) as a 1-form."""
        n = self.chart.dim
        return DifferentialForm(self.chart, 1, {
            (j,): sum((field[i] * self.matrix[i, j] for i in range(n)), sympy.S.Zero) for j in range(n)
        })

    def pair(self, x, y):
        n = self.chart.dim
        return sympy.expand(sum((x[i] * y[j] * self.matrix[i, j] for i in range(n) for j in range(n)),
                                sympy.S.Zero))

    def map_entries(self, fn):
        return SymmetricForm(self.chart, self.matrix.applyfunc(fn))

    def components(self):
        """Upper-triangular entries keyed by coordinate pairs."""
        names = self.chart.names
        return {f'd{names[i]}.d{names[j]}': self.matrix[i, j]
                for i in range(self.chart.dim) for j in range(i, self.chart.dim)}

    def free_symbols(self):
        return set().union(*(v.free_symbols for v in self.matrix))

    def signature_at(self, point, precision=None):
        """(positive, negative, zero) eigenvalue counts at one point."""
        precision = precision or geometry_setting('PRECISION')
        with mpmath.workdps(precision):
            values = evaluate_many(list(self.matrix), point)
        numeric = np.array([float(v) for v in values]).reshape(self.chart.dim, self.chart.dim)
        eigenvalues = np.linalg.eigvalsh(numeric)
        floor = 1e-9 * max(1.0, float(np.max(np.abs(eigenvalues))))
        return (int(np.sum(eigenvalues > floor)), int(np.sum(eigenvalues < -floor)),
                int(np.sum(np.abs(eigenvalues) <= floor)))

    def as_dict(self):
        return {
            'chart': self.chart.name,
            'components': {label: to_formula(value) for label, value in self.components().items() if value != 0},
        }

    def __repr__(self):
        return f'SymmetricForm({self.chart.name}, {self.as_dict()["components"]})'


def lie_derivative(field, tensor):
    """L_X of a function-form, a differential form or a symmetric 2-tensor."""
    return _lie_derivative(tensor, field)


@functools.singledispatch
def _lie_derivative(tensor, field):
    raise TypeError(f'no Lie derivative for {type(tensor).__name__}')


@_lie_derivative.register
def _(tensor: DifferentialForm, field):
    if field.chart != tensor.chart:
        raise ChartMismatchError(f'{field.chart.name} and {tensor.chart.name} do not match')
    if tensor.degree == 0:
        return DifferentialForm.function(tensor.chart, field(tensor.coefficient(())))
    #Cartan: L_X = i_X d + d i_X; d of a top-degree form is zero
    if tensor.degree == tensor.chart.dim:
        return tensor.interior(field).d()
    return tensor.d().interior(field) + tensor.interior(field).d()


@_lie_derivative.register
def _(tensor: SymmetricForm, field):
    if field.chart != tensor.chart:
        raise ChartMismatchError(f'{field.chart.name} and {tensor.chart.name} do not match')
    chart, g = tensor.chart, tensor.matrix
    n = chart.dim
    jacobian = [[differentiate(field[k], chart.coordinates[i]) for i in range(n)] for k in range(n)]

    def entry(i, j):
        value = field(g[i, j])
        for k in range(n):
            value += g[k, j] * jacobian[k][i] + g[i, k] * jacobian[k][j]
        return value

    return SymmetricForm(chart, sympy.Matrix(n, n, entry))
