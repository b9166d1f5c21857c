"""Curvature operations on MetricTensor, each returning pointwise TensorFields."""

import logging
from dataclasses import dataclass

import mpmath
import numpy as np

from expressions.evaluation import evaluate_many, geometry_setting
from expressions.exceptions import DegenerateCoframeError, DimensionError

from .engine import CurvatureEngine
from .metric import TensorField

logger = logging.getLogger(__name__)

_ENGINES = {}


def engine_for(metric, order=2, nu=None):
    """One engine per (metric, jet order, nu), so tensors of the same metric share work."""
    key = (id(metric), order, id(nu))
    cached = _ENGINES.get(key)
    if cached is None or cached[0] is not metric or cached[1] is not nu:
        if len(_ENGINES) > 32:
            _ENGINES.clear()
        _ENGINES[key] = (metric, nu, CurvatureEngine(metric, order, nu))
    return _ENGINES[key][2]


def _field(metric, name, signature, quantity, order=2, nu=None):
    engine = engine_for(metric, order, nu)

    def evaluate(point):
        signed, magnitude = engine.at(point)
        return getattr(signed, quantity), getattr(magnitude, quantity)

    return TensorField(metric.chart, name, signature, evaluate, engine.names, metric.box)


@dataclass
class CurvaturePackage:
    christoffel: TensorField
    riemann: TensorField
    ricci: TensorField
    scalar: TensorField


def curvature_package(metric):
    return CurvaturePackage(
        christoffel=_field(metric, 'Gamma', (1, 2), 'christoffel'),
        riemann=_field(metric, 'Riemann', (1, 3), 'riemann'),
        ricci=_field(metric, 'Ricci', (0, 2), 'ricci'),
        scalar=_field(metric, 'R', (0, 0), 'scalar'),
    )


def _require_dim(metric, dims, operation):
    if metric.dim not in dims:
        raise DimensionError(f'{operation} needs dimension {" or ".join(map(str, dims))}, not {metric.dim}')


def weyl(metric):
    """All-lower conformal Weyl tensor, dimensions 4 and 5."""
    _require_dim(metric, (4, 5), 'weyl')
    return _field(metric, 'Weyl', (0, 4), 'weyl')


def weyl_square(metric):
    _require_dim(metric, (4, 5), 'weyl_square')
    return _field(metric, 'C2', (0, 0), 'weyl_square')


def cotton3(metric):
    _require_dim(metric, (3,), 'cotton3')
    return _field(metric, 'Cotton', (0, 3), 'cotton', order=3)


def weyl_connection_residual(metric, nu):
    """R_(ij) - (1/3) R g_ij for the Weyl connection of (g, nu)."""
    _require_dim(metric, (3,), 'weyl_connection_residual')
    return _field(metric, 'EinsteinWeyl', (0, 2), 'einstein_weyl', nu=nu)


def einstein_residual(metric):
    return _field(metric, 'Einstein', (0, 2), 'einstein')


def first_bianchi(metric):
    return _field(metric, 'Bianchi', (1, 3), 'bianchi')


def metric_compatibility(metric):
    return _field(metric, 'NablaG', (0, 3), 'covariant_metric')


def weyl_traces(metric):
    """The three independent single traces of Weyl, stacked."""
    weyl(metric)
    engine = engine_for(metric)
    patterns = ('abad->bd', 'abcb->ac', 'abca->bc')

    def evaluate(point):
        signed, magnitude = engine.at(point)
        return (np.stack([_trace(p, signed.ginv, signed.weyl) for p in patterns]),
                np.stack([_trace(p, magnitude.ginv, magnitude.weyl) for p in patterns]))

    return TensorField(metric.chart, 'WeylTrace', (0, 3), evaluate, engine.names, metric.box)


def _trace(pattern, ginv, tensor):
    #contract the two repeated slots of pattern with the inverse metric
    source, target = pattern.split('->')
    repeated = [letter for letter in source if source.count(letter) == 2][0]
    first = source.index(repeated)
    second = source.index(repeated, first + 1)
    renamed = source[:second] + 'z' + source[second + 1:]
    return np.einsum(f'{repeated}z,{renamed}->{target}', ginv, tensor)


def frame_components(tensor, coframe):
    """
    Components of a tensor in the frame dual to coframe.

    Lower indices contract with the frame E (the inverse of the coframe
    matrix), upper indices with the coframe itself.
    """
    chart = tensor.chart
    n = chart.dim
    if len(coframe) != n:
        raise DegenerateCoframeError(f'a coframe on {chart.name} needs {n} forms, got {len(coframe)}')
    entries = [form.coefficient((i,)) for form in coframe for i in range(n)]
    free = set().union(*(e.free_symbols for e in entries))
    names = tuple(sorted(set(tensor.names) | {str(s) for s in free}))
    variables = tuple(sorted(free, key=str))
    upper, lower = tensor.signature

    def matrices(point):
        values = evaluate_many(entries, point, variables)
        theta = mpmath.matrix([values[a * n:(a + 1) * n] for a in range(n)])
        if abs(mpmath.det(theta)) < geometry_setting('DET_FLOOR'):
            raise DegenerateCoframeError(f'coframe is degenerate at {point}')
        frame = mpmath.inverse(theta)
        as_array = lambda m: np.array([[m[i, j] for j in range(n)] for i in range(n)], dtype=object)
        return as_array(theta), as_array(frame)

    def transform(array, theta, frame):
        for slot in range(upper + lower):
            matrix = theta if slot < upper else frame.T
            array = np.moveaxis(np.tensordot(matrix, array, axes=([1], [slot])), 0, slot)
        return array

    def evaluate(point):
        values, magnitudes = tensor.evaluate(point)
        theta, frame = matrices(point)
        absolute = np.vectorize(abs, otypes=[object])
        return transform(values, theta, frame), transform(magnitudes, absolute(theta), absolute(frame))

    index_names = tuple(str(a + 1) for a in range(n))
    return TensorField(chart, f'{tensor.name}@frame', tensor.signature, evaluate, names, tensor.box, index_names)



def metric_field(metric):
    """g itself as a (0,2) tensor field."""
    return _field(metric, 'g', (0, 2), 'g', order=0)
