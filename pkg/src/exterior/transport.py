"""Total derivatives of the equation classes and conformal transport along them."""

import logging
from dataclasses import dataclass

import mpmath
import numpy as np
import sympy

from expressions.evaluation import evaluate_many, geometry_setting, infer_box
from expressions.exceptions import ChartMismatchError, DegenerateFormError
from expressions.printer import to_formula
from expressions.symbols import symbols
from expressions.zerotest import is_zero_all

from .charts import J1EXT, J2_3RD, MONGE1, MONGE2
from .differential import SymmetricForm, VectorField, lie_derivative

logger = logging.getLogger(__name__)

x, y, p, q = symbols('x y p q')

CLASS_CHARTS = {
    'ode3': J2_3RD,
    'ode2': J1EXT,
    'monge1': MONGE1,
    'monge2': MONGE2,
}

ALIASES = {
    '3rd-order': 'ode3',
    '2nd-order': 'ode2',
    'monge-first': 'monge1',
    'monge-second': 'monge2',
}


def class_chart(class_tag):
    tag = ALIASES.get(class_tag, class_tag)
    try:
        return tag, CLASS_CHARTS[tag]
    except KeyError:
        raise ChartMismatchError(f'unknown equation class {class_tag!r}') from None


def total_derivative(class_tag, f):
    """
    The total derivative D of an equation class, as a vector field.

    ode3:   d_x + p d_y + q d_p + F d_q
    ode2:   d_x + p d_y + Q d_p            (phi is inert)
    monge1: d_x + p d_y + F d_z
    monge2: d_x + p d_y + q d_p + F d_z
    """
    tag, chart = class_chart(class_tag)
    f = chart.check_expression(sympy.sympify(f))
    components = {
        'ode3': (1, p, q, f),
        'ode2': (1, p, f, 0),
        'monge1': (1, p, 0, f),
        'monge2': (1, p, q, 0, f),
    }[tag]
    return VectorField(chart, components)


@dataclass
class TransportResult:
    success: bool
    factor: sympy.Expr
    pivot: tuple
    verdict: object
    residual: SymmetricForm

    def as_dict(self):
        names = self.residual.chart.names
        return {
            'conformal': self.success,
            'factor': to_formula(self.factor) if self.success else None,
            'pivot': [names[i] for i in self.pivot],
            'residual': self.verdict.as_dict(),
        }


def conformal_transport_factor(field, metric, box=None, samples=None, seed=None, tol=None, precision=None):
    """Look for lambda with L_X g = lambda g."""
    derived = lie_derivative(field, metric)
    if box is None:
        box = infer_box(list(metric.matrix) + list(field.components))
    result = proportionality(derived, metric, box, samples, seed, tol, precision)
    logger.info('transport along %s: pivot %s, %s', field, result.pivot, result.verdict.verdict)
    return result


def proportionality(derived, metric, box=None, samples=None, seed=None, tol=None, precision=None):
    """
    Look for lambda with derived = lambda metric.

    lambda is read off a pivot component, the first upper-triangular entry of
    metric that is clearly non-zero at the box reference point; the candidate
    is then checked on every component.
    """
    n = metric.chart.dim
    upper = [(i, j) for i in range(n) for j in range(i, n)]
    if box is None:
        box = infer_box([metric.matrix[i, j] for i, j in upper])
    seed = seed if seed is not None else geometry_setting('SEED')
    names = sorted(str(s) for s in metric.free_symbols() | derived.free_symbols())
    reference = box.reference_point(names, np.random.default_rng(seed))

    with mpmath.workdps(precision or geometry_setting('PRECISION')):
        values = evaluate_many([metric.matrix[i, j] for i, j in upper], reference)
    magnitudes = [abs(v) for v in values]
    largest = max(magnitudes)
    if largest == 0:
        raise DegenerateFormError(f'metric vanishes at the reference point {reference}')
    threshold = geometry_setting('PIVOT_THRESHOLD') * largest
    pivot = next(ij for ij, m in zip(upper, magnitudes) if m > threshold)

    factor = sympy.cancel(derived.matrix[pivot] / metric.matrix[pivot])
    residual = derived - factor * metric
    verdict = is_zero_all(residual.components(), box, samples, seed, tol, precision)
    return TransportResult(verdict.identically_zero, factor, pivot, verdict, residual)
