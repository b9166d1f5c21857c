import logging
from dataclasses import dataclass, field

import mpmath
import numpy as np
import sympy

from exterior.differential import SymmetricForm
from expressions.evaluation import evaluate_many, geometry_setting, infer_box
from expressions.exceptions import DimensionError, SingularMetricError
from expressions.zerotest import pointwise_zero_test

logger = logging.getLogger(__name__)


class MetricTensor:
    """A nondegenerate metric in chart coordinates, with the box it is checked on."""

    def __init__(self, chart, matrix, box=None, signature=None):
        form = matrix if isinstance(matrix, SymmetricForm) else SymmetricForm(chart, matrix)
        if not 3 <= chart.dim <= 5:
            raise DimensionError(f'metrics are handled in dimensions 3 to 5, not {chart.dim}')
        self.chart = chart
        self.form = form
        self.matrix = form.matrix
        self.signature = signature
        self.box = box if box is not None else infer_box(list(self.matrix))

    @classmethod
    def from_form(cls, form, box=None, signature=None):
        return cls(form.chart, form, box, signature)

    @property
    def dim(self):
        return self.chart.dim

    def free_symbols(self):
        return self.form.free_symbols()

    def signature_at(self, point, precision=None):
        return self.form.signature_at(point, precision)

    def determinant_at(self, point, precision=None):
        with mpmath.workdps(precision or geometry_setting('PRECISION')):
            values = evaluate_many(list(self.matrix), point)
            rows = [values[i * self.dim:(i + 1) * self.dim] for i in range(self.dim)]
            return mpmath.det(mpmath.matrix(rows))

    def check_nondegenerate(self, point):
        if abs(self.determinant_at(point)) < geometry_setting('DET_FLOOR'):
            raise SingularMetricError(f'metric is singular at {point}')

    def as_dict(self):
        data = self.form.as_dict()
        data['box'] = self.box.describe()
        if self.signature is not None:
            data['signature'] = list(self.signature)
        return data


def conformal_rescale(metric, upsilon):
    """e^(2 upsilon) g, on the same box."""
    upsilon = sympy.sympify(upsilon)
    if upsilon == 0:
        return metric
    return MetricTensor(metric.chart, metric.form * sympy.exp(2 * upsilon),
                        metric.box.merged(constraints=infer_box(upsilon).constraints), metric.signature)


@dataclass(eq=False)
class TensorField:
    """
    A tensor known through its values at points.

    evaluate(point) returns (values, magnitudes) as numpy object arrays whose
    rank is the total arity; magnitudes bound the terms that cancel in values.
    """
    chart: object
    name: str
    signature: tuple
    evaluate: object
    names: tuple
    box: object
    index_names: tuple = field(default=None)

    def __post_init__(self):
        if self.index_names is None:
            self.index_names = self.chart.names

    @property
    def rank(self):
        return sum(self.signature)

    def at(self, point, precision=None):
        with mpmath.workdps(precision or geometry_setting('PRECISION')):
            return self.evaluate(point)[0]

    def label(self, index):
        if not index:
            return self.name
        return f'{self.name}[{",".join(self.index_names[i] for i in index)}]'

    def derive(self, name, fn, signature=None):
        """A tensor computed pointwise from this one; fn maps (values, magnitudes) pairs."""
        return TensorField(self.chart, name, signature or self.signature,
                           lambda point: fn(*self.evaluate(point)), self.names, self.box, self.index_names)

    def combine(self, other, name, fn, signature=None):
        """fn takes (values, magnitudes, other values, other magnitudes)."""
        return TensorField(self.chart, name, signature or self.signature,
                           lambda point: fn(*self.evaluate(point), *other.evaluate(point)),
                           tuple(sorted(set(self.names) | set(other.names))), self.box, self.index_names)

    def as_dict(self, point=None, precision=None):
        data = {
            'chart': self.chart.name,
            'name': self.name,
            'arity': {'contravariant': self.signature[0], 'covariant': self.signature[1]},
        }
        if point is not None:
            values = self.at(point, precision)
            data['point'] = dict(point)
            data['components'] = {self.label(index): float(value) for index, value in np.ndenumerate(values)
                                  if value != 0}
        return data


def tensor_is_zero(tensor, box=None, samples=None, seed=None, tol=None, precision=None):
    """Zero-test every component of a tensor field at the same sample points."""
    box = box if box is not None else tensor.box

    def evaluate(point):
        values, magnitudes = tensor.evaluate(point)
        for index, value in np.ndenumerate(np.asarray(values, dtype=object)):
            yield tensor.label(index), value, np.asarray(magnitudes, dtype=object)[index]

    verdict = pointwise_zero_test(evaluate, box, tensor.names, samples, seed, tol, precision)
    logger.info('%s on %s: %s', tensor.name, tensor.chart.name, verdict.verdict)
    return verdict

