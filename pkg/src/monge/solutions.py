"""
Parametrized solutions x(t, w, w', ...), y(...), z(...) of Monge equations.

w_k stands for the k-th derivative of the free function w(t); Int(body, t)
is a formal antiderivative and disappears once differentiated in t.
"""

import logging
from dataclasses import dataclass, field, replace

import sympy
from sympy.core.sorting import default_sort_key

from expressions.calculus import differentiate
from expressions.evaluation import infer_box
from expressions.exceptions import ChartMismatchError, VanishingTangentError
from expressions.parser import parse
from expressions.printer import to_formula
from expressions.symbols import Int, family_member, family_of, symbol
from expressions.zerotest import is_zero

logger = logging.getLogger(__name__)

t = symbol('t')
w0, w1, w2 = (family_member('w', k) for k in range(3))

COMPONENTS = ('x', 'y', 'z')


@dataclass(frozen=True)
class ParametrizedSolution:
    x: sympy.Expr
    y: sympy.Expr
    z: sympy.Expr
    name: str = ''
    parameters: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        for component in COMPONENTS:
            expr = sympy.sympify(getattr(self, component))
            stray = {s.name for s in expr.free_symbols
                     if s != t and family_of(s) is None and s.name not in self.parameters}
            if stray:
                raise ChartMismatchError(f'{component}(t) uses {", ".join(sorted(stray))} besides t and w_k')
            object.__setattr__(self, component, expr)

    @classmethod
    def from_dict(cls, data):
        """{'x': formula, 'y': formula, 'z': formula} with optional 'name' and 'parameters'."""
        parameters = dict(data.get('parameters') or {})
        expressions = {}
        for component in COMPONENTS:
            expr = parse(data[component])
            expressions[component] = expr.subs({symbol(k): sympy.Rational(str(v)) for k, v in parameters.items()})
        return cls(name=data.get('name', ''), **expressions)

    def as_dict(self):
        return {'name': self.name, **{c: to_formula(getattr(self, c)) for c in COMPONENTS}}

    def jets(self, order):
        """(x_t, y', y'', z') along the curve; y'' only when order is 2."""
        x_t = differentiate(self.x, t)
        y_p = differentiate(self.y, t) / x_t
        z_p = differentiate(self.z, t) / x_t
        y_pp = differentiate(y_p, t) / x_t if order == 2 else None
        return x_t, y_p, y_pp, z_p


def integral_free_solution():
    """x = w''/2, y = (t w'' - w')/2, z = t^2 w''/2 - t w' + w, solving z' = (y')^2."""
    half = sympy.Rational(1, 2)
    return ParametrizedSolution(
        x=half * w2,
        y=half * t * w2 - half * w1,
        z=half * t ** 2 * w2 - t * w1 + w0,
        name='integral-free',
    )


def cartan_solution(k):
    """Solution of z' = (y'')^k / k with only w''^2 under the integral."""
    k = sympy.Integer(k)
    r = (k - 2) / (k - 1)
    return ParametrizedSolution(
        x=(k - 1) * t ** r * w2,
        y=((k - 1) ** 2 / 2 * t ** (1 + r) * w2 ** 2 - (k - 1) * t ** r * w1 * w2
           + (k - 1) / 2 * Int(t ** r * w2 ** 2, t)),
        z=(k - 1) / k * t ** 2 * w2 - t * w1 + w0,
        name=f'cartan-k{k}',
    )


def quadrature_solution(k):
    """x = t, y = w, z = Int(w''^k / k)."""
    k = sympy.Integer(k)
    return ParametrizedSolution(x=t, y=w0, z=Int(w2 ** k / k, t), name=f'quadrature-k{k}')


def terms(solution, component):
    """Additive terms of a component in a fixed order."""
    return sorted(sympy.Add.make_args(getattr(solution, component)), key=default_sort_key)


def mutate(solution, component, index):
    """Raise the numeric coefficient of one term of one component by 1."""
    chosen = terms(solution, component)
    coefficient, rest = chosen[index].as_coeff_Mul()
    chosen[index] = (coefficient + 1) * rest
    return replace(solution, **{component: sympy.Add(*chosen)},
                   name=f'{solution.name}:{component}[{index}]+1')


def solution_residual(eq, solution):
    """z' - F(x, y, y', y'', z) along the curve, with the tangent x_t."""
    x_t, y_p, y_pp, z_p = solution.jets(eq.order)
    residual = z_p - eq.along(solution.x, solution.y, y_p, solution.z, q=y_pp)
    return x_t, residual


def verify_parametrized_solution(eq, solution, box=None, samples=None, seed=None, tol=None, precision=None):
    """Zero-test the equation residual over random t and w_k."""
    options = dict(samples=samples, seed=seed, tol=tol, precision=precision)
    x_t = differentiate(solution.x, t)
    if x_t == 0 or is_zero(x_t, box or infer_box(x_t), **options).identically_zero:
        raise VanishingTangentError(f'dx/dt vanishes along {solution.name or "the solution"}')
    x_t, residual = solution_residual(eq, solution)
    verdict = is_zero(residual, box or infer_box([residual, x_t]), **options)
    logger.info('%s against %s: %s', solution.name or 'solution', eq.subject, verdict.verdict)
    return verdict
