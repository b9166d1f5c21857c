"""The Fefferman split-signature metric of y'' = Q and its point invariants w1, w2."""

import logging
from dataclasses import dataclass

import sympy

from curvature.metric import MetricTensor, tensor_is_zero
from curvature.tensors import weyl
from exterior.charts import J1EXT
from exterior.differential import DifferentialForm, SymmetricForm
from expressions.calculus import partial
from expressions.printer import to_formula
from expressions.symbols import symbol
from expressions.verdicts import InvariantReport
from expressions.zerotest import is_zero

logger = logging.getLogger(__name__)

p = symbol('p')

FLAT = 'flat'
CURVED = 'curved'


def fefferman_metric(ode):
    """
    g = 2 [ (dp - Q dx) dx - (dy - p dx)(dphi + 2/3 Q_p dx + 1/6 Q_pp (dy - p dx)) ]
    """
    Q = ode.Q
    Q_p = partial(Q, 'p')
    Q_pp = partial(Q_p, 'p')
    dx = DifferentialForm.basis(J1EXT, 'x')
    contact = DifferentialForm.one_form(J1EXT, {'y': 1, 'x': -p})
    slope = DifferentialForm.one_form(J1EXT, {'p': 1, 'x': -Q})
    fibre = (DifferentialForm.basis(J1EXT, 'phi') + sympy.Rational(2, 3) * Q_p * dx
             + sympy.Rational(1, 6) * Q_pp * contact)
    form = 2 * SymmetricForm.product(slope, dx) - 2 * SymmetricForm.product(contact, fibre)
    return MetricTensor.from_form(form, ode.box, signature=(2, 2))


@dataclass(frozen=True)
class Ode2Invariants:
    w1: sympy.Expr
    w2: sympy.Expr

    def as_dict(self):
        return {'w1': to_formula(self.w1), 'w2': to_formula(self.w2)}


def ode2_invariants(ode):
    Q, D = ode.Q, ode.D
    Q_p, Q_y = partial(Q, 'p'), partial(Q, 'y')
    Q_pp, Q_py = partial(Q_p, 'p'), partial(Q_p, 'y')
    w1 = (D(D(Q_pp)) - 4 * D(Q_py) - D(Q_pp) * Q_p + 4 * Q_p * Q_py - 3 * Q_pp * Q_y
          + 6 * partial(Q_y, 'y'))
    w2 = partial(Q_pp, 'p', 'p')
    return Ode2Invariants(w1, w2)


def fefferman_flatness_check(ode, samples=None, seed=None, tol=None, precision=None):
    """Weyl of the Fefferman metric against the joint vanishing of w1 and w2."""
    options = dict(samples=samples, seed=seed, tol=tol, precision=precision)
    invariants = ode2_invariants(ode)
    metric = fefferman_metric(ode)
    report = InvariantReport(subject=f"y'' = {to_formula(ode.Q)}", verdict=CURVED)
    report.checks['w1'] = is_zero(invariants.w1, ode.box, **options)
    report.checks['w2'] = is_zero(invariants.w2, ode.box, **options)
    report.checks['weyl'] = tensor_is_zero(weyl(metric), ode.box, **options)
    invariants_vanish = report.vanishes('w1') and report.vanishes('w2')
    if report.vanishes('weyl'):
        report.verdict = FLAT
    report.details['consistent'] = report.vanishes('weyl') == invariants_vanish
    report.details['invariants'] = invariants.as_dict()
    report.details['box'] = ode.box.describe()
    if not report.details['consistent']:
        report.notes.append('Weyl vanishing disagrees with w1 = w2 = 0')
        logger.warning('inconsistent flatness verdict for %s', report.subject)
    logger.info('Fefferman metric of %s is %s', report.subject, report.verdict)
    return report
