"""
The (3,2)-signature conformal metric of z' = F(x, y, p, q, z), F_qq != 0.

The representative is stored as a term table over the tilded coframe

    w1 = dy - p dx
    w2 = dz - F dx - F_q (dp - q dx)
    w3 = dp - q dx
    w4 = dq
    w5 = dx

one formula per printed monomial. DF_qq is D(F_qq), DDF_q is D(D(F_q)),
with D = d_x + p d_y + q d_p + F d_z.
"""

import logging
import re

import sympy

from curvature.metric import MetricTensor
from exterior.charts import MONGE2
from exterior.differential import DifferentialForm, SymmetricForm
from exterior.transport import proportionality
from expressions.calculus import partial
from expressions.exceptions import VanishingHessianError
from expressions.parser import parse
from expressions.printer import to_formula
from expressions.symbols import symbol, symbols
from expressions.zerotest import is_zero

logger = logging.getLogger(__name__)

p, q = symbols('p q')

#(a, b) -> monomials of the coefficient of w_a w_b
G32_TERMS = {
    (1, 1): (
        '(DF_qq)^2*F_qq^2', '6*DF_q*DF_qqq*F_qq^2', '-6*DF_qqq*F_p*F_qq^2', '-3*DDF_qq*F_qq^3',
        '9*DF_qp*F_qq^3', '-9*F_pp*F_qq^3', '9*DF_qz*F_q*F_qq^3', '-18*F_pz*F_q*F_qq^3',
        '3*DF_z*F_qq^4', '-6*DF_q*F_qq^2*F_qqp', '6*F_p*F_qq^2*F_qqp', '-8*DF_q*DF_qq*F_qq*F_qqq',
        '8*DF_qq*F_p*F_qq*F_qqq', '3*DDF_q*F_qq^2*F_qqq', '-3*DF_p*F_qq^2*F_qqq',
        '-3*DF_z*F_q*F_qq^2*F_qqq', '4*(DF_q)^2*F_qqq^2', '-8*DF_q*F_p*F_qqq^2',
        '-3*(DF_q)^2*F_qq*F_qqqq', '4*F_p^2*F_qqq^2', '6*DF_q*F_p*F_qq*F_qqqq',
        '-3*F_p^2*F_qq*F_qqqq', '-6*DF_q*F_q*F_qq^2*F_qqz', '6*F_p*F_q*F_qq^2*F_qqz',
        '-3*DF_q*F_qq^3*F_qz', '12*F_p*F_qq^3*F_qz', '3*F_qq^2*F_qqq*F_y',
        '-6*DF_qqq*F_q*F_qq^2*F_z', '4*DF_qq*F_qq^3*F_z', '6*F_q*F_qq^2*F_qqp*F_z',
        '8*DF_qq*F_q*F_qq*F_qqq*F_z', '-4*DF_q*F_qq^2*F_qqq*F_z', '-9*F_qp*F_qq^3*F_z',
        'F_p*F_qq^2*F_qqq*F_z', '-8*DF_q*F_q*F_qqq^2*F_z', '8*F_p*F_q*F_qqq^2*F_z',
        '6*DF_q*F_q*F_qq*F_qqqq*F_z', '-6*F_p*F_q*F_qq*F_qqqq*F_z', '18*F_qq^3*F_qy',
        '6*F_q^2*F_qq^2*F_qqz*F_z', '3*F_q*F_qq^3*F_qz*F_z', '-2*F_qq^4*F_z^2',
        'F_q*F_qq^2*F_qqq*F_z^2', '4*F_q^2*F_qqq^2*F_z^2', '-3*F_q^2*F_qq*F_qqqq*F_z^2',
        '-9*F_q^2*F_qq^3*F_zz',
    ),
    (1, 2): (
        '6*DF_qqq*F_qq^2', '-6*F_qq^2*F_qqp', '-8*DF_qq*F_qq*F_qqq', '8*DF_q*F_qqq^2',
        '-8*F_p*F_qqq^2', '-6*DF_q*F_qq*F_qqqq', '6*F_p*F_qq*F_qqqq', '-6*F_q*F_qq^2*F_qqz',
        '6*F_qq^3*F_qz', '2*F_qq^2*F_qqq*F_z', '-8*F_q*F_qqq^2*F_z', '6*F_q*F_qq*F_qqqq*F_z',
    ),
    (1, 3): (
        '10*DF_qq*F_qq^3', '-10*DF_q*F_qq^2*F_qqq', '10*F_p*F_qq^2*F_qqq', '-10*F_qq^4*F_z',
        '10*F_q*F_qq^2*F_qqq*F_z',
    ),
    (1, 4): ('30*F_qq^4',),
    (1, 5): ('30*DF_q*F_qq^3', '-30*F_p*F_qq^3', '-30*F_q*F_qq^3*F_z'),
    (2, 2): ('4*F_qqq^2', '-3*F_qq*F_qqqq'),
    (2, 3): ('-10*F_qq^2*F_qqq',),
    (2, 5): ('30*F_qq^3',),
    (3, 3): ('-20*F_qq^4',),
}

_DERIVATIVE_NAME = re.compile(r'^(?P<total>D*)F(_(?P<partials>[xypqz]+))?$')


def resolve_derivative(F, D, name):
    """'DF_qp' -> D(F_qp) for the equation's F and total derivative D."""
    match = _DERIVATIVE_NAME.match(name)
    if match is None:
        raise KeyError(f'{name!r} is not a derivative name')
    value = partial(F, *(match['partials'] or ''))
    for _ in match['total']:
        value = D(value)
    return value


def table_names():
    names = set()
    for monomials in G32_TERMS.values():
        for monomial in monomials:
            names.update(re.findall(r'D*F(?:_[xypqz]+)?', monomial))
    return names


def g32_coefficients(m):
    """(a, b) -> coefficient of w_a w_b for the equation m."""
    names = table_names()
    bindings = {symbol(name): resolve_derivative(m.F, m.D, name) for name in names}
    coefficients = {}
    for pair, monomials in G32_TERMS.items():
        total = sum((parse(monomial, allowed=names) for monomial in monomials), sympy.S.Zero)
        coefficients[pair] = total.xreplace(bindings)
    return coefficients


def tilde_coframe(F):
    """(w1, ..., w5) on Monge2; F only enters w2."""
    F_q = partial(F, 'q')
    return (
        DifferentialForm.one_form(MONGE2, {'y': 1, 'x': -p}),
        DifferentialForm.one_form(MONGE2, {'z': 1, 'x': -F + q * F_q, 'p': -F_q}),
        DifferentialForm.one_form(MONGE2, {'p': 1, 'x': -q}),
        DifferentialForm.basis(MONGE2, 'q'),
        DifferentialForm.basis(MONGE2, 'x'),
    )


def assemble(coefficients, coframe):
    """sum of c_ab w_a w_b, products symmetrized."""
    form = SymmetricForm.zero(coframe[0].chart)
    for (a, b), coefficient in coefficients.items():
        if coefficient != 0:
            form = form + coefficient * SymmetricForm.product(coframe[a - 1], coframe[b - 1])
    return form


def require_hessian(m, samples=None, seed=None, tol=None, precision=None):
    F_qq = partial(m.F, 'q', 'q')
    if F_qq == 0 or is_zero(F_qq, m.box, samples, seed, tol, precision).identically_zero:
        raise VanishingHessianError(f'F_qq vanishes identically for {m.subject}')
    return F_qq


def g32_metric(m, samples=None, seed=None, tol=None, precision=None):
    require_hessian(m, samples, seed, tol, precision)
    form = assemble(g32_coefficients(m), tilde_coframe(m.F))
    logger.debug('assembled the (3,2) metric of %s', m.subject)
    return MetricTensor.from_form(form, m.box, signature=(3, 2))


def frame_coefficients(theta_in_tilde, frame_metric_matrix):
    """
    Coefficients c_ab (a <= b) of a frame metric rewritten over the tilded
    coframe; theta_in_tilde[i][j] is the w_j coefficient of theta_i.
    """
    T = sympy.Matrix(theta_in_tilde)
    M = T.T * sympy.Matrix(frame_metric_matrix) * T
    return {(a + 1, b + 1): M[a, b] * (1 if a == b else 2)
            for a in range(5) for b in range(a, 5)}


def conformal_agreement(metric, other, samples=None, seed=None, tol=None, precision=None):
    """Is metric = lambda * other for a single function lambda?"""
    result = proportionality(metric.form, other.form, metric.box, samples, seed, tol, precision)
    logger.info('conformal agreement: factor %s, %s', to_formula(result.factor), result.verdict.verdict)
    return result
