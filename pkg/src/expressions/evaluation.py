"""Numeric evaluation in extended precision, and the sampling boxes it runs on."""

import functools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import sympy
from django.conf import settings

from .exceptions import (
    BoxUnusableError,
    DomainBoxError,
    DomainViolationError,
    ResidualAntiderivativeError,
    UnboundSymbolError,
)
from .symbols import Int, as_symbol

logger = logging.getLogger(__name__)

#rejection sampling gives up after this many draws for a single point
MAX_DRAWS = 500


def geometry_setting(key):
    return settings.GEOMETRY[key]


@functools.lru_cache(maxsize=4096)
def compile_expressions(exprs, variables):
    """Compile a tuple of expressions into one mpmath callable returning a list."""
    return sympy.lambdify(variables, list(exprs), modules='mpmath', cse=True)


def to_mpf(value):
    if isinstance(value, sympy.Rational):
        return mpmath.mpf(value.p) / value.q
    if isinstance(value, sympy.Basic):
        return mpmath.mpf(sympy.Float(value, mpmath.mp.dps + 5))
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


def real_value(value):
    """Reject complex or non-finite results; they mean the point left the domain."""
    if isinstance(value, mpmath.mpc):
        if abs(value.imag) > mpmath.mpf(10) ** (-mpmath.mp.dps // 2) * (1 + abs(value.real)):
            raise DomainViolationError(f'complex value {value}')
        value = value.real
    value = mpmath.mpf(value)
    if not mpmath.isfinite(value):
        raise DomainViolationError(f'non-finite value {value}')
    return value


def evaluate_many(exprs, point, variables=None):
    """Evaluate several expressions at one point; the caller owns the precision context."""
    exprs = tuple(sympy.sympify(e) for e in exprs)
    if any(e.has(Int) for e in exprs):
        raise ResidualAntiderivativeError('Int node left in an expression to be evaluated')
    point = {as_symbol(key): value for key, value in point.items()}
    if variables is None:
        free = set().union(*(e.free_symbols for e in exprs)) if exprs else set()
        missing = free - point.keys()
        if missing:
            raise UnboundSymbolError(str(s) for s in missing)
        variables = tuple(sorted(free, key=str))
    function = compile_expressions(exprs, tuple(variables))
    try:
        values = function(*(to_mpf(point[s]) for s in variables))
    except (ZeroDivisionError, ValueError, OverflowError) as exc:
        raise DomainViolationError(str(exc)) from exc
    return [real_value(v) for v in values]


def eval_numeric(expr, point, precision=None):
    precision = precision or geometry_setting('PRECISION')
    with mpmath.workdps(precision):
        return evaluate_many((expr,), point)[0]


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    #singular values kept at a distance of at least the box margin
    exclude: tuple = ()

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise DomainBoxError(f'empty interval [{self.lo}, {self.hi}]')

    @property
    def center(self):
        return (self.lo + self.hi) / 2

    def draw(self, rng):
        if self.lo == self.hi:
            return float(self.lo)
        return float(rng.uniform(self.lo, self.hi))


@dataclass(frozen=True)
class DomainBox:
    """
    Per-symbol closed intervals plus constraints that must exceed the margin.

    Symbols without an interval use the default interval.
    """
    intervals: dict = field(default_factory=dict)
    constraints: tuple = ()
    margin: float = 0.05
    default: tuple = (-1, 1)

    def __post_init__(self):
        if self.margin <= 0:
            raise DomainBoxError('box margin must be strictly positive')
        object.__setattr__(self, 'intervals', {str(k): v for k, v in self.intervals.items()})

    @classmethod
    def from_bounds(cls, bounds=None, constraints=(), margin=None, exclude=None):
        """from_bounds({'q': (0.1, 10)}, exclude={'y': (0,)})"""
        margin = margin if margin is not None else geometry_setting('BOX_MARGIN')
        exclude = exclude or {}
        intervals = {}
        for name, (lo, hi) in (bounds or {}).items():
            intervals[str(name)] = Interval(float(lo), float(hi), tuple(exclude.get(str(name), ())))
        for name, values in exclude.items():
            if str(name) not in intervals:
                lo, hi = geometry_setting('DEFAULT_INTERVAL')
                intervals[str(name)] = Interval(float(lo), float(hi), tuple(values))
        return cls(intervals, tuple(sympy.sympify(c) for c in constraints), margin,
                   tuple(geometry_setting('DEFAULT_INTERVAL')))

    @staticmethod
    def parse_items(items):
        """Parse repeated 'sym:lo:hi' items into a bounds mapping."""
        bounds = {}
        for item in items or ():
            parts = item.split(':')
            if len(parts) != 3:
                raise DomainBoxError(f'box item {item!r} is not of the form sym:lo:hi')
            name, lo, hi = parts
            try:
                bounds[name.strip()] = (float(lo), float(hi))
            except ValueError as exc:
                raise DomainBoxError(f'box item {item!r} has a non-numeric bound') from exc
            if bounds[name.strip()][0] > bounds[name.strip()][1]:
                raise DomainBoxError(f'box item {item!r} is empty')
        return bounds

    def interval(self, name):
        name = str(name)
        if name in self.intervals:
            return self.intervals[name]
        return Interval(float(self.default[0]), float(self.default[1]))

    def merged(self, bounds=None, constraints=()):
        """Copy with some intervals replaced and extra constraints appended."""
        intervals = dict(self.intervals)
        for name, (lo, hi) in (bounds or {}).items():
            previous = intervals.get(str(name))
            intervals[str(name)] = Interval(float(lo), float(hi), previous.exclude if previous else ())
        extra = tuple(sympy.sympify(c) for c in constraints if sympy.sympify(c) not in self.constraints)
        return DomainBox(intervals, self.constraints + extra, self.margin, self.default)

    def admissible(self, point):
        for name, value in point.items():
            interval = self.interval(name)
            if any(abs(value - singular) < self.margin for singular in interval.exclude):
                return False
        if not self.constraints:
            return True
        try:
            values = evaluate_many(self.constraints, point)
        except (DomainViolationError, UnboundSymbolError):
            return False
        return all(v > self.margin for v in values)

    def sample(self, rng, names):
        names = sorted(set(str(n) for n in names) | {str(s) for c in self.constraints for s in c.free_symbols})
        for _ in range(MAX_DRAWS):
            point = {name: self.interval(name).draw(rng) for name in names}
            with mpmath.workdps(geometry_setting('PRECISION')):
                if self.admissible(point):
                    return point
        raise BoxUnusableError(MAX_DRAWS, MAX_DRAWS, 'no admissible point satisfies the box constraints')

    def center(self, names):
        names = set(str(n) for n in names) | {str(s) for c in self.constraints for s in c.free_symbols}
        return {name: self.interval(name).center for name in sorted(names)}

    def reference_point(self, names, rng):
        """The box center when admissible, otherwise the first admissible sample."""
        point = self.center(names)
        with mpmath.workdps(geometry_setting('PRECISION')):
            if self.admissible(point):
                return point
        return self.sample(rng, names)

    def describe(self):
        from .printer import to_formula
        return {
            'intervals': {name: [i.lo, i.hi] + ([list(i.exclude)] if i.exclude else [])
                          for name, i in sorted(self.intervals.items())},
            'constraints': [to_formula(c) + ' > margin' for c in self.constraints],
            'margin': self.margin,
            'default': list(self.default),
        }


def infer_box(expr, bounds=None, margin=None, constraints=()):
    """
    Build a box for expr, inferring singular-locus margins from its tree.

    Bases of fractional or symbolic powers and arguments of log must stay
    positive; bases of negative powers must stay away from zero. A bare symbol
    gets its interval or exclusion adjusted; composite bases become constraints.
    """
    expressions = expr if isinstance(expr, (list, tuple)) else [expr]
    margin = margin if margin is not None else geometry_setting('BOX_MARGIN')
    bounds = {str(k): v for k, v in (bounds or {}).items()}
    lo_default, hi_default = geometry_setting('DEFAULT_INTERVAL')
    positive, nonzero = set(), set()
    for e in expressions:
        for node in sympy.preorder_traversal(sympy.sympify(e)):
            if isinstance(node, sympy.Pow):
                base, exponent = node.args
                if not (exponent.is_Integer):
                    positive.add(base)
                elif exponent.is_negative:
                    nonzero.add(base)
            elif isinstance(node, sympy.log):
                positive.add(node.args[0])

    inferred, exclude, extra = {}, {}, list(constraints)
    for base in positive:
        if isinstance(base, sympy.Symbol) and base.name not in bounds:
            inferred[base.name] = (max(margin * 2, lo_default), max(hi_default, margin * 4))
        elif isinstance(base, sympy.Symbol) and bounds[base.name][0] > margin:
            continue
        elif not base.is_number:
            extra.append(base)
    for base in nonzero - positive:
        if isinstance(base, sympy.Symbol):
            exclude.setdefault(base.name, (0,))
        elif not base.is_number:
            extra.append(sympy.Abs(base))
    inferred.update(bounds)
    box = DomainBox.from_bounds(inferred, extra, margin, exclude)
    logger.debug('inferred box %s', box.describe())
    return box
