"""
The dispersionless KP bridge.

A function u(x, y, t) gives two Pfaffian forms on (x, y, t, v); their
Frobenius condition is the dKP equation u_yy + u_x^2 - u_xt + u u_xx = 0.
"""

import logging
from dataclasses import dataclass

import sympy

from exterior.charts import DKP
from exterior.differential import DifferentialForm, wedge
from expressions.calculus import partial
from expressions.evaluation import infer_box
from expressions.exceptions import ChartMismatchError, NotADkpSolutionError
from expressions.symbols import symbols
from expressions.zerotest import is_zero, is_zero_all

logger = logging.getLogger(__name__)

x, y, t, v = symbols('x y t v')

VOLUME = (0, 1, 2, 3)


def _check_u(u):
    u = sympy.sympify(u)
    if v in u.free_symbols:
        raise ChartMismatchError('u must not depend on v')
    DKP.check_expression(u)
    return u


def pfaffian_forms(u):
    """omega1 = dx + (u + v^2) dt + v dy, omega4 = dv - (u_y + u_x v) dt - u_x dy."""
    u_x, u_y = partial(u, 'x'), partial(u, 'y')
    omega1 = DifferentialForm.one_form(DKP, {'x': 1, 't': u + v ** 2, 'y': v})
    omega4 = DifferentialForm.one_form(DKP, {'v': 1, 't': -(u_y + u_x * v), 'y': -u_x})
    return omega1, omega4


@dataclass(frozen=True)
class DkpFrobenius:
    first: sympy.Expr
    second: sympy.Expr
    scalar: sympy.Expr


def dkp_frobenius(u):
    """
    Coefficients of d omega1 ^ omega1 ^ omega4 and d omega4 ^ omega1 ^ omega4
    on dx^dy^dt^dv, next to the dKP scalar they encode.
    """
    u = _check_u(u)
    omega1, omega4 = pfaffian_forms(u)
    first = wedge(omega1.d(), omega1, omega4).coefficient(VOLUME)
    second = wedge(omega4.d(), omega1, omega4).coefficient(VOLUME)
    u_x = partial(u, 'x')
    scalar = partial(u, 'y', 'y') + u_x ** 2 - partial(u_x, 't') + u * partial(u_x, 'x')
    return DkpFrobenius(first, second, scalar)


def dkp_residual(u):
    """u_yy + u_x^2 - u_xt + u u_xx, read off the second Frobenius 4-form."""
    frobenius = dkp_frobenius(u)
    return sympy.expand(-frobenius.second)


@dataclass
class DkpCoframe:
    omega1: DifferentialForm
    omega2: DifferentialForm
    omega3: DifferentialForm
    omega4: DifferentialForm
    residual: object
    membership: object = None

    @property
    def forms(self):
        return (self.omega1, self.omega2, self.omega3, self.omega4)

    def as_dict(self):
        data = {f'omega{i}': form.as_dict() for i, form in enumerate(self.forms, start=1)}
        data['residual'] = self.residual.as_dict()
        if self.membership is not None:
            data['membership'] = self.membership.as_dict()
        return data


def dkp_coframe(u, X=None, box=None, samples=None, seed=None, tol=None, precision=None):
    """
    The coframe of the third-order class attached to a dKP solution.

    With X given, also checks that dX lies in the class of omega4 modulo
    omega1, i.e. dX ^ omega4 ^ omega1 = 0.
    """
    options = dict(samples=samples, seed=seed, tol=tol, precision=precision)
    u = _check_u(u)
    residual_expr = dkp_residual(u)
    residual_box = box or infer_box([u, residual_expr])
    residual = is_zero(residual_expr, residual_box, **options)
    if not residual.identically_zero:
        raise NotADkpSolutionError(f'u = {u} does not solve dKP (witness {residual.witness})')

    omega1, omega4 = pfaffian_forms(u)
    u_xx = partial(u, 'x', 'x')
    u_xy = partial(u, 'x', 'y')
    omega2 = DifferentialForm.one_form(DKP, {
        't': -u * u_xx - 2 * u_xy * v + u_xx * v ** 2,
        'x': -u_xx,
        'y': -u_xy,
    })
    omega3 = DifferentialForm.one_form(DKP, {
        't': -u * u_xx ** 2 - 4 * u_xy ** 2 + 4 * u_xx * u_xy * v - u_xx ** 2 * v ** 2,
        'x': -u_xx ** 2,
        'y': u_xx * (-2 * u_xy + u_xx * v),
    })
    coframe = DkpCoframe(omega1, omega2, omega3, omega4, residual)
    if X is not None:
        X = DKP.check_expression(sympy.sympify(X))
        membership = wedge(DifferentialForm.function(DKP, X).d(), omega4, omega1)
        components = membership.components() or {'dx^dy^dt': 0}
        coframe.membership = is_zero_all(components, box or infer_box([u, X] + list(components.values())),
                                         **options)
        logger.info('dX in the omega4 class: %s', coframe.membership.verdict)
    return coframe
