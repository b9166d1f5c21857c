"""
Probabilistic zero-testing.

An expression is declared identically zero when at every sampled point of its
box |value| <= tol * (1 + S), S being the sum of the magnitudes of its additive
terms at that point. The sample points come from a seeded generator, so the
verdict is a deterministic function of (expression, box, samples, seed, tol).
"""

import logging

import mpmath
import numpy as np
import sympy

from .evaluation import compile_expressions, geometry_setting, infer_box, real_value, to_mpf
from .exceptions import (
    BoxUnusableError,
    DegenerateCoframeError,
    DomainViolationError,
    ResidualAntiderivativeError,
    SingularMetricError,
)
from .symbols import Int, symbol
from .verdicts import ZeroTestVerdict

logger = logging.getLogger(__name__)

#failures at a point that mean "outside the domain", not "wrong"
POINT_FAILURES = (DomainViolationError, SingularMetricError, DegenerateCoframeError, ZeroDivisionError)


def zero_test_options(samples=None, seed=None, tol=None, precision=None):
    return {
        'samples': samples if samples is not None else geometry_setting('SAMPLES'),
        'seed': seed if seed is not None else geometry_setting('SEED'),
        'tol': tol if tol is not None else geometry_setting('TOLERANCE'),
        'precision': precision if precision is not None else geometry_setting('PRECISION'),
    }


def pointwise_zero_test(evaluate, box, names, samples=None, seed=None, tol=None, precision=None):
    """
    Zero-test any pointwise quantity.

    evaluate(point) yields (component, value, scale) triples for one sample
    point; it runs inside the precision context.
    """
    options = zero_test_options(samples, seed, tol, precision)
    rng = np.random.default_rng(options['seed'])
    successes = failures = 0
    worst_ratio, worst = -1.0, None
    while successes < options['samples']:
        point = box.sample(rng, names)
        try:
            with mpmath.workdps(options['precision']):
                entries = list(evaluate(point))
        except POINT_FAILURES as exc:
            failures += 1
            logger.debug('evaluation failed at %s: %s', point, exc)
            if failures > options['samples']:
                raise BoxUnusableError(successes + failures, failures, exc) from exc
            continue
        successes += 1
        for component, value, scale in entries:
            ratio = float(abs(value) / (1 + abs(scale)))
            if ratio > worst_ratio:
                worst_ratio, worst = ratio, (point, float(value), component, float(scale))

    if failures:
        logger.info('%d of %d sample points fell outside the domain', failures, successes + failures)
    if worst is None:
        return ZeroTestVerdict(True, successes, options['seed'], options['tol'], failures=failures)
    point, value, component, scale = worst
    identically_zero = worst_ratio <= options['tol']
    return ZeroTestVerdict(
        identically_zero=identically_zero,
        samples=successes,
        seed=options['seed'],
        tolerance=options['tol'],
        scale=scale,
        worst_ratio=worst_ratio,
        witness=None if identically_zero else dict(point),
        value=None if identically_zero else value,
        component=None if identically_zero else component,
        failures=failures,
    )


def is_zero_all(components, box=None, samples=None, seed=None, tol=None, precision=None):
    """Jointly zero-test a mapping label -> expression; the witness names the worst label."""
    items = [(label, sympy.sympify(e)) for label, e in components.items()]
    if any(e.has(Int) for _, e in items):
        raise ResidualAntiderivativeError('Int node left in an expression to be zero-tested')
    terms, owners = [], []
    for index, (_, e) in enumerate(items):
        for term in sympy.Add.make_args(e):
            terms.append(term)
            owners.append(index)
    free = set().union(*(e.free_symbols for _, e in items)) if items else set()
    names = sorted(str(s) for s in free)
    variables = tuple(symbol(n) for n in names)
    function = compile_expressions(tuple(terms), variables)
    if box is None:
        box = infer_box([e for _, e in items])

    def evaluate(point):
        try:
            raw = function(*(to_mpf(point[n]) for n in names))
        except (ValueError, OverflowError) as exc:
            raise DomainViolationError(str(exc)) from exc
        sums = [mpmath.mpf(0)] * len(items)
        scales = [mpmath.mpf(0)] * len(items)
        for owner, value in zip(owners, raw):
            value = real_value(value)
            sums[owner] += value
            scales[owner] += abs(value)
        return [(label, sums[i], scales[i]) for i, (label, _) in enumerate(items)]

    return pointwise_zero_test(evaluate, box, names, samples, seed, tol, precision)


def is_zero(expr, box=None, samples=None, seed=None, tol=None, precision=None):
    verdict = is_zero_all({None: expr}, box, samples, seed, tol, precision)
    logger.debug('zero-test of %s: %s', expr, verdict.verdict)
    return verdict
