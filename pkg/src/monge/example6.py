"""
z' = F(y'') with F'' != 0: an explicit coframe, its one surviving scalar
invariant a5, the Einstein scale of its (3,2) metric and the Weyl pattern.
"""

import logging
from dataclasses import dataclass

import numpy as np
import sympy

from curvature.metric import MetricTensor, TensorField, conformal_rescale, tensor_is_zero
from curvature.tensors import einstein_residual, frame_components, weyl
from exterior.charts import MONGE2
from exterior.differential import DifferentialForm, SymmetricForm, wedge
from expressions.calculus import differentiate
from expressions.evaluation import compile_expressions, evaluate_many, geometry_setting, infer_box, real_value, to_mpf
from expressions.exceptions import ChartMismatchError, DomainViolationError, VanishingHessianError
from expressions.parser import parse
from expressions.printer import to_formula
from expressions.symbols import family_member, symbol
from expressions.verdicts import InvariantReport
from expressions.zerotest import is_zero, is_zero_all

from .equations import MongeSecond
from .g32 import frame_coefficients, g32_coefficients, resolve_derivative, tilde_coframe

logger = logging.getLogger(__name__)

q = symbol('q')

DEFAULT_BOUNDS = {'q': (0.5, 2)}

#2 theta1 theta5 - 2 theta2 theta4 + 4/3 theta3^2
FRAME_METRIC = (
    (0, 0, 0, 0, 1),
    (0, 0, 0, -1, 0),
    (0, 0, sympy.Rational(4, 3), 0, 0),
    (0, -1, 0, 0, 0),
    (1, 0, 0, 0, 0),
)

#alpha = (theta1, theta2, 2/sqrt(3) theta3, theta4, theta5)
ALPHA_SCALES = (1, 1, 2 * sympy.sqrt(3) / 3, 1, 1)

#frame Weyl C_2525 = WEYL_FRAME_SIGN * a5, 1-based alpha indices
WEYL_FRAME_SIGN = -1
WEYL_PATTERN = {(1, 4, 1, 4): 1, (4, 1, 4, 1): 1, (1, 4, 4, 1): -1, (4, 1, 1, 4): -1}

#coordinate form of the z' = F(y'') representative, in symmetric products
REPRESENTATIVE_TERMS = {
    ('q', 'y'): '30*F_qq^4',
    ('x', 'q'): '-30*p*F_qq^4',
    ('z', 'z'): '4*F_qqq^2 - 3*F_qq*F_qqqq',
    ('p', 'z'): '2*(-5*F_qq^2*F_qqq - 4*F_q*F_qqq^2 + 3*F_q*F_qq*F_qqqq)',
    ('x', 'z'): ('2*(15*F_qq^3 + 5*q*F_qq^2*F_qqq - 4*F*F_qqq^2 + 4*q*F_q*F_qqq^2 + 3*F*F_qq*F_qqqq'
                 ' - 3*q*F_q*F_qq*F_qqqq)'),
    ('p', 'p'): '-20*F_qq^4 + 10*F_q*F_qq^2*F_qqq + 4*F_q^2*F_qqq^2 - 3*F_q^2*F_qq*F_qqqq',
    ('x', 'p'): ('2*(-15*F_q*F_qq^3 + 20*q*F_qq^4 + 5*F*F_qq^2*F_qqq - 10*q*F_q*F_qq^2*F_qqq'
                 ' + 4*F*F_q*F_qqq^2 - 4*q*F_q^2*F_qqq^2 - 3*F*F_q*F_qq*F_qqqq + 3*q*F_q^2*F_qq*F_qqqq)'),
    ('x', 'x'): ('-30*F*F_qq^3 + 30*q*F_q*F_qq^3 - 20*q^2*F_qq^4 - 10*q*F*F_qq^2*F_qqq'
                 ' + 10*q^2*F_q*F_qq^2*F_qqq + 4*F^2*F_qqq^2 - 8*q*F*F_q*F_qqq^2 + 4*q^2*F_q^2*F_qqq^2'
                 ' - 3*F^2*F_qq*F_qqqq + 6*q*F*F_q*F_qq*F_qqqq - 3*q^2*F_q^2*F_qq*F_qqqq'),
}

HOLDS = 'holds'
FAILS = 'fails'

A5_PATTERN = 'a5-pattern'
FLAT = 'flat'
MISMATCH = 'mismatch'


def example6_derivatives(F):
    """(F, F', F'', ..., F^(6)) for F depending on q alone."""
    F = sympy.sympify(F)
    foreign = {s.name for s in F.free_symbols} - {'q'}
    if foreign:
        raise ChartMismatchError(f'F must depend on q alone, not on {", ".join(sorted(foreign))}')
    derivatives = [F]
    for _ in range(6):
        derivatives.append(differentiate(derivatives[-1], q))
    return tuple(derivatives)


def _box(exprs, bounds):
    return infer_box(list(exprs), bounds=bounds if bounds is not None else DEFAULT_BOUNDS)


def _require_hessian(F, box, samples=None, seed=None, tol=None, precision=None):
    b = example6_derivatives(F)[2]
    if b == 0 or is_zero(b, box, samples, seed, tol, precision).identically_zero:
        raise VanishingHessianError(f"F'' vanishes identically for F = {to_formula(F)}")
    return b


def theta_in_tilde(F):
    """theta_i = sum_j T[i][j] w_j over the tilded coframe."""
    _, _, b, c, e = example6_derivatives(F)[:5]
    third = sympy.Rational(1, 3)
    K = (4 * c ** 2 - 3 * b * e) / 30
    return (
        (1, 0, 0, 0, 0),
        (0, 1, 0, 0, 0),
        (0, 0, -b ** third, 0, 0),
        (0, K * b ** sympy.Rational(-10, 3), -third * c * b ** sympy.Rational(-4, 3), 0, b ** -third),
        (0, 0, 0, -b ** (2 * third), 0),
    )


@dataclass
class Example6Coframe:
    theta: tuple
    omega2: DifferentialForm
    omega6: DifferentialForm
    alpha: tuple

    def as_dict(self):
        data = {f'theta{i}': form.as_dict() for i, form in enumerate(self.theta, start=1)}
        data['Omega2'] = self.omega2.as_dict()
        data['Omega6'] = self.omega6.as_dict()
        return data


def example6_coframe(F):
    """theta1..theta5, the connection forms Omega2 and Omega6, and the alpha coframe."""
    derivatives = example6_derivatives(F)
    if derivatives[2] == 0:
        raise VanishingHessianError("F'' vanishes identically")
    _, _, b, c, e, f5, _ = derivatives
    tilde = tilde_coframe(derivatives[0])
    theta = tuple(
        sum((coefficient * form for coefficient, form in zip(row, tilde) if coefficient != 0),
            DifferentialForm(MONGE2, 1))
        for row in theta_in_tilde(derivatives[0])
    )
    K = (4 * c ** 2 - 3 * b * e) / 30
    M = (-45 * b * c * e + 40 * c ** 3 + 9 * b ** 2 * f5) / 90
    omega2 = M * b ** -5 * theta[1] + K * b ** sympy.Rational(-10, 3) * theta[2]
    omega6 = -K * b ** sympy.Rational(-10, 3) * theta[4]
    alpha = tuple(scale * form for scale, form in zip(ALPHA_SCALES, theta))
    return Example6Coframe(theta, omega2, omega6, alpha)


def example6_a5(F):
    _, _, b, c, e, f5, f6 = example6_derivatives(F)
    if b == 0:
        raise VanishingHessianError("F'' vanishes identically")
    numerator = (-224 * c ** 4 + 336 * b * c ** 2 * e - 80 * b ** 2 * c * f5
                 + b ** 2 * (-51 * e ** 2 + 10 * b * f6))
    return numerator / (100 * b ** sympy.Rational(20, 3))


def frame_metric(F, bounds=None):
    """2 theta1 theta5 - 2 theta2 theta4 + 4/3 theta3^2 on Monge2."""
    theta = example6_coframe(F).theta
    form = (2 * SymmetricForm.product(theta[0], theta[4]) - 2 * SymmetricForm.product(theta[1], theta[3])
            + sympy.Rational(4, 3) * SymmetricForm.square(theta[2]))
    return MetricTensor.from_form(form, _box(form.matrix, bounds), signature=(3, 2))


def representative_metric(F, bounds=None):
    """The coordinate representative quoted for z' = F(y'')."""
    F = example6_derivatives(F)[0]
    names = {'F', 'F_q', 'F_qq', 'F_qqq', 'F_qqqq', 'p', 'q'}
    bindings = {symbol(name): resolve_derivative(F, None, name) for name in names if name.startswith('F')}
    form = SymmetricForm.zero(MONGE2)
    for (a, b), text in REPRESENTATIVE_TERMS.items():
        coefficient = parse(text, allowed=names).xreplace(bindings)
        form = form + coefficient * SymmetricForm.product(DifferentialForm.basis(MONGE2, a),
                                                          DifferentialForm.basis(MONGE2, b))
    return MetricTensor.from_form(form, _box(form.matrix, bounds), signature=(3, 2))


def transcription_report(F, bounds=None, samples=None, seed=None, tol=None, precision=None):
    """
    Check the (3,2) term table pair by pair against the frame construction.

    Returns (factor, {pair: verdict}); with factor -15 F''^(10/3) every
    verdict should vanish.
    """
    m = MongeSecond(F, _box([F], bounds))
    b = _require_hessian(m.F, m.box, samples, seed, tol, precision)
    factor = -15 * b ** sympy.Rational(10, 3)
    derived = frame_coefficients(theta_in_tilde(m.F), FRAME_METRIC)
    table = g32_coefficients(m)
    verdicts = {}
    for pair in sorted(derived):
        residual = table.get(pair, sympy.S.Zero) - factor * derived[pair]
        verdicts[f'w{pair[0]}w{pair[1]}'] = is_zero(residual, _box([residual], bounds),
                                                   samples, seed, tol, precision)
    mismatches = [label for label, verdict in verdicts.items() if not verdict.identically_zero]
    if mismatches:
        logger.warning('term table disagrees with the frame construction on %s', ', '.join(mismatches))
    return factor, verdicts


def einstein_scale_relation(F, upsilon2=None):
    """
    Upsilon_4, Upsilon_3, Upsilon_2 as functions of q and Upsilon_1.

    The default Upsilon_2 solves
    10 F''^2 (Upsilon'' - Upsilon'^2) - 40 F'' F''' Upsilon' + 17 F'' F'''' - 56 F'''^2 = 0;
    the higher members follow by differentiating it.
    """
    _, _, b, c, e = example6_derivatives(F)[:5]
    u1, u2, u3, u4 = (family_member('Upsilon', k) for k in range(1, 5))
    if upsilon2 is None:
        upsilon2 = u1 ** 2 + 4 * c * u1 / b + (56 * c ** 2 - 17 * b * e) / (10 * b ** 2)
    upsilon3 = differentiate(upsilon2, q).xreplace({u2: upsilon2})
    upsilon4 = differentiate(upsilon3, q).xreplace({u2: upsilon2})
    return {u4: upsilon4, u3: upsilon3, u2: upsilon2}


def einstein_scale_residual(F, bounds=None, upsilon2=None):
    """
    Trace-free Ricci of e^(2 Upsilon) times the coordinate representative, with
    Upsilon(q) formal: Upsilon_0 and Upsilon_1 are sampled, the higher jets
    are eliminated through the scale equation.
    """
    scaled = conformal_rescale(representative_metric(F, bounds), family_member('Upsilon', 0))
    tensor = einstein_residual(scaled)
    relations = einstein_scale_relation(F, upsilon2)
    inputs = (q, family_member('Upsilon', 1))
    function = compile_expressions(tuple(relations.values()), inputs)
    eliminated = {str(s) for s in relations}
    names = tuple(sorted((set(tensor.names) - eliminated) | {str(s) for s in inputs}))

    def evaluate(point):
        try:
            raw = function(*(to_mpf(point[str(s)]) for s in inputs))
        except (ZeroDivisionError, ValueError, OverflowError) as exc:
            raise DomainViolationError(str(exc)) from exc
        completed = dict(point)
        completed.update({str(s): real_value(value) for s, value in zip(relations, raw)})
        return tensor.evaluate(completed)

    return TensorField(scaled.chart, 'EinsteinScale', (0, 2), evaluate, names, scaled.box)


def example6_structure_check(F, bounds=None, samples=None, seed=None, tol=None, precision=None):
    """The structure equations the coframe forms satisfy, with a5 the only invariant."""
    options = dict(samples=samples, seed=seed, tol=tol, precision=precision)
    coframe = example6_coframe(F)
    t1, t2, t3, t4, t5 = coframe.theta
    o2, o6 = coframe.omega2, coframe.omega6
    a5 = example6_a5(F)
    equations = {
        'dtheta1': t1.d() - (t2 ^ o2) - (t3 ^ t4),
        'dtheta2': t2.d() - (t3 ^ t5),
        'dtheta3': t3.d() - (t2 ^ o6) - (t4 ^ t5),
        'dtheta4': t4.d() - sympy.Rational(4, 3) * (t3 ^ o6) - (t5 ^ o2),
        'dtheta5': t5.d(),
        'dOmega2': o2.d() + (t4 ^ o6) - a5 * (t2 ^ t5),
        'dOmega6': o6.d(),
        'theta5^Omega6': wedge(t5, o6),
    }
    report = InvariantReport(subject=f"z' = {to_formula(sympy.sympify(F))}", verdict=HOLDS)
    for name, form in equations.items():
        components = form.components() or {'0': 0}
        report.checks[name] = is_zero_all(components, _box(components.values(), bounds), **options)
    if not all(check.identically_zero for check in report.checks.values()):
        report.verdict = FAILS
    report.details['a5'] = to_formula(a5)
    logger.info('structure equations for %s: %s', report.subject, report.verdict)
    return report


def _pattern_residual(frame_weyl, a5):
    """frame Weyl minus the pattern generated by a5 alpha2 ^ alpha5."""
    variables = tuple(sorted(a5.free_symbols, key=str))
    names = tuple(sorted(set(frame_weyl.names) | {str(s) for s in variables}))

    def evaluate(point):
        values, magnitudes = frame_weyl.evaluate(point)
        a5_value = evaluate_many((a5,), point, variables)[0]
        values, magnitudes = np.array(values, dtype=object), np.array(magnitudes, dtype=object)
        for index, sign in WEYL_PATTERN.items():
            values[index] -= sign * WEYL_FRAME_SIGN * a5_value
            magnitudes[index] += abs(a5_value)
        return values, magnitudes

    return TensorField(frame_weyl.chart, 'WeylPattern', frame_weyl.signature, evaluate, names,
                       frame_weyl.box, frame_weyl.index_names)


def weyl_frame_pattern_check(F, bounds=None, samples=None, seed=None, tol=None, precision=None):
    """
    Frame Weyl components of the frame metric against the a5 pattern: only
    C_2525-type components survive and they equal WEYL_FRAME_SIGN * a5.
    """
    options = dict(samples=samples, seed=seed, tol=tol, precision=precision)
    metric = frame_metric(F, bounds)
    _require_hessian(F, metric.box, **options)
    a5 = example6_a5(F)
    frame_weyl = frame_components(weyl(metric), example6_coframe(F).alpha)
    report = InvariantReport(subject=f"z' = {to_formula(sympy.sympify(F))}", verdict=MISMATCH)
    report.checks['pattern'] = tensor_is_zero(_pattern_residual(frame_weyl, a5), metric.box, **options)
    report.checks['a5'] = is_zero(a5, metric.box, **options)
    if report.vanishes('pattern'):
        report.verdict = FLAT if report.vanishes('a5') else A5_PATTERN
    seed = options['seed'] if options['seed'] is not None else geometry_setting('SEED')
    reference = metric.box.reference_point(frame_weyl.names, np.random.default_rng(seed))
    report.details['a5'] = to_formula(a5)
    report.details['point'] = reference
    report.details['C_2525'] = float(frame_weyl.at(reference, precision)[1, 4, 1, 4])
    report.details['sign'] = WEYL_FRAME_SIGN
    logger.info('frame Weyl pattern of %s: %s', report.subject, report.verdict)
    return report
