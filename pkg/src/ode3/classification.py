import logging

from expressions.printer import to_formula
from expressions.verdicts import InvariantReport
from expressions.zerotest import is_zero, is_zero_all

from .invariants import ode3_invariants

logger = logging.getLogger(__name__)

GENERIC = 'generic'
WUENSCHMANN = 'wuenschmann'
EINSTEIN_WEYL = 'einstein-weyl'


def classify3(ode, samples=None, seed=None, tol=None, precision=None):
    """
    Contact classification of y''' = F.

    generic when A does not vanish, wuenschmann when only A vanishes,
    einstein-weyl when A and G both vanish. In the last two cases the
    Cotton components are tested as well.
    """
    options = dict(samples=samples, seed=seed, tol=tol, precision=precision)
    invariants = ode3_invariants(ode)
    report = InvariantReport(subject=f"y''' = {to_formula(ode.F)}", verdict=GENERIC)
    report.details['box'] = ode.box.describe()
    report.checks['A'] = is_zero(invariants.A, ode.box, **options)
    report.checks['G'] = is_zero(invariants.G, ode.box, **options)
    if report.vanishes('A'):
        report.verdict = EINSTEIN_WEYL if report.vanishes('G') else WUENSCHMANN
        cotton = is_zero_all(invariants.cotton, ode.box, **options)
        report.checks['C'] = cotton
        report.details['conformally_flat'] = cotton.identically_zero
        if cotton.identically_zero:
            report.notes.append('C1 to C5 vanish: the solution space is conformally flat')
    logger.info('classified %s as %s', report.subject, report.verdict)
    return report
