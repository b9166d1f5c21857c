import logging

from expressions.calculus import partial
from expressions.printer import to_formula
from expressions.verdicts import InvariantReport
from expressions.zerotest import is_zero

logger = logging.getLogger(__name__)

#first order: solutions depend on w up to w'' (cc1) or only up to w' (cc2)
BRANCH_CC1 = 'branch-cc1'
BRANCH_CC2 = 'branch-cc2'

#second order
INTEGRAL_FREE = 'integral-free'
G2 = 'g2'


def monge1_conditions(m):
    """F_pp and D F_p - F_y - F_p F_z, with D = d_x + p d_y + F d_z."""
    F = m.F
    F_p = partial(F, 'p')
    return {
        'F_pp': partial(F_p, 'p'),
        'DF_p-F_y-F_pF_z': m.D(F_p) - partial(F, 'y') - F_p * partial(F, 'z'),
    }


def classify_monge1(m, samples=None, seed=None, tol=None, precision=None):
    """
    branch-cc2 when both conditions vanish: the equation is equivalent to
    (dz, dy - p dx) and its general solution needs w and w' only.
    branch-cc1 otherwise, with solutions in w, w' and w''.
    """
    options = dict(samples=samples, seed=seed, tol=tol, precision=precision)
    report = InvariantReport(subject=m.subject, verdict=BRANCH_CC1)
    for name, residual in monge1_conditions(m).items():
        report.checks[name] = is_zero(residual, m.box, **options)
        report.details[name] = to_formula(residual)
    if all(check.identically_zero for check in report.checks.values()):
        report.verdict = BRANCH_CC2
        report.notes.append('integral-free solutions x(t, w, w\'), y(t, w, w\'), z(t, w, w\')')
    else:
        report.notes.append("integral-free solutions x(t, w, w', w''), y(...), z(...)")
    report.details['box'] = m.box.describe()
    logger.info('classified %s as %s', report.subject, report.verdict)
    return report


def classify_monge2(m, samples=None, seed=None, tol=None, precision=None):
    """integral-free when F_qq vanishes, g2 otherwise."""
    F_qq = partial(m.F, 'q', 'q')
    report = InvariantReport(subject=m.subject, verdict=G2)
    report.checks['F_qq'] = is_zero(F_qq, m.box, samples, seed, tol, precision)
    report.details['F_qq'] = to_formula(F_qq)
    report.details['box'] = m.box.describe()
    if report.vanishes('F_qq'):
        report.verdict = INTEGRAL_FREE
    else:
        report.notes.append('F_qq does not vanish: the equation carries a (3,2) conformal class')
    logger.info('classified %s as %s', report.subject, report.verdict)
    return report
