"""The degenerate conformal metric and the Weyl 1-form carried by y''' = F."""

import logging

from exterior.charts import J2_3RD
from exterior.differential import DifferentialForm, SymmetricForm, lie_derivative
from exterior.transport import conformal_transport_factor
from expressions.calculus import partial
from expressions.symbols import symbols
from expressions.zerotest import is_zero_all

from .invariants import THIRD, ode3_invariants

logger = logging.getLogger(__name__)

p, q = symbols('p q')


def contact_forms():
    """omega1 = dy - p dx, omega2 = dp - q dx, dx."""
    omega1 = DifferentialForm.one_form(J2_3RD, {'y': 1, 'x': -p})
    omega2 = DifferentialForm.one_form(J2_3RD, {'p': 1, 'x': -q})
    return omega1, omega2, DifferentialForm.basis(J2_3RD, 'x')


def metric_tilde(ode, invariants=None):
    """
    2 [dy - p dx][dq - F_q/3 dp + K dy + (q F_q/3 - F - p K) dx] - [dp - q dx]^2

    Degenerate, with D spanning its kernel.
    """
    invariants = invariants or ode3_invariants(ode)
    F, K = ode.F, invariants.K
    F_q = partial(F, 'q')
    omega1, omega2, _ = contact_forms()
    beta = DifferentialForm.one_form(J2_3RD, {
        'q': 1,
        'p': -THIRD * F_q,
        'y': K,
        'x': THIRD * q * F_q - F - p * K,
    })
    return 2 * SymmetricForm.product(omega1, beta) - SymmetricForm.square(omega2)


def nu_tilde(ode):
    """-nu = 2/3 (F_qp - D F_qq) omega1 + 2/3 F_qq omega2 + 2/3 F_q dx, in the gauge beta = 1."""
    F, D = ode.F, ode.D
    F_q = partial(F, 'q')
    F_qq = partial(F_q, 'q')
    omega1, omega2, dx = contact_forms()
    return -(2 * THIRD) * ((partial(F_q, 'p') - D(F_qq)) * omega1 + F_qq * omega2 + F_q * dx)


def transport_check(ode, samples=None, seed=None, tol=None, precision=None):
    """Is the conformal class of the metric preserved along D?"""
    return conformal_transport_factor(ode.D, metric_tilde(ode), ode.box, samples, seed, tol, precision)


def closedness_check(ode, samples=None, seed=None, tol=None, precision=None):
    """Zero-test d(L_D nu); it vanishes exactly when L_D nu is a total differential."""
    curl = lie_derivative(ode.D, nu_tilde(ode)).d()
    components = curl.components() or {'dx^dy': 0}
    verdict = is_zero_all(components, ode.box, samples, seed, tol, precision)
    logger.info('closedness of L_D nu: %s', verdict.verdict)
    return verdict


def kernel_check(ode, samples=None, seed=None, tol=None, precision=None):
    """Zero-test g(D, .)."""
    contraction = metric_tilde(ode).contract(ode.D)
    components = contraction.components() or {'dx': 0}
    return is_zero_all(components, ode.box, samples, seed, tol, precision)
