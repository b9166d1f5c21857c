"""
Every command-line subject mapped onto the geometry apps.

run_operation(family, action, inputs, config) is shared by the management
commands and the catalog suite; it returns an Outcome whose verdicts are
plain JSON values, so catalog expectations compare against them directly.
"""

import json
import logging
from dataclasses import dataclass, field

import sympy
from pandas import DataFrame

from curvature.metric import tensor_is_zero
from curvature.tensors import weyl, weyl_square
from expressions.evaluation import DomainBox, infer_box
from expressions.exceptions import CatalogError, ChartMismatchError, ConfigurationError
from expressions.parser import parse
from expressions.printer import to_formula
from expressions.verdicts import ZeroTestVerdict
from expressions.zerotest import is_zero
from liealgebra.invariants import (
    commutator_closure_check,
    invariant_bilinear_form,
    invariant_three_form,
    proportional,
)
from liealgebra.matrices import CONNECTIONS, matrix_rep
from liealgebra.structure import (
    SYSTEMS,
    flat_structure_constants,
    jacobi_check,
    killing_analysis,
    structure_d_squared,
)
from monge.classification import classify_monge1, classify_monge2
from monge.equations import MongeFirst, MongeSecond
from monge.example6 import (
    DEFAULT_BOUNDS,
    einstein_scale_residual,
    example6_a5,
    example6_coframe,
    example6_structure_check,
    representative_metric,
    transcription_report,
    weyl_frame_pattern_check,
)
from monge.g32 import g32_metric
from monge.psi import PsiInvariants
from monge.solutions import (
    ParametrizedSolution,
    cartan_solution,
    integral_free_solution,
    quadrature_solution,
    verify_parametrized_solution,
)
from ode2.equations import SecondOrderODE
from ode2.fefferman import fefferman_flatness_check, fefferman_metric, ode2_invariants
from ode3.classification import classify3
from ode3.dkp import dkp_coframe, dkp_frobenius, dkp_residual
from ode3.equations import ThirdOrderODE
from ode3.geometry import closedness_check, kernel_check, metric_tilde, nu_tilde, transport_check
from ode3.invariants import ode3_invariants

logger = logging.getLogger(__name__)

ACTIONS = {
    'ode3': ('invariants', 'classify', 'metric', 'nu'),
    'dkp': ('residual', 'coframe'),
    'ode2': ('metric', 'invariants', 'flatness'),
    'monge': ('classify1', 'classify2', 'verify-solution', 'g32', 'example6'),
    'lie': ('verify',),
}

EXAMPLE6_PARTS = ('coframe', 'a5', 'structure', 'pattern', 'einstein', 'weyl-square', 'transcription')

NAMED_SOLUTIONS = {
    'integral-free': lambda k: integral_free_solution(),
    'cartan': cartan_solution,
    'quadrature': quadrature_solution,
}

LIE_SYSTEMS = tuple(SYSTEMS) + tuple(CONNECTIONS)

#flat table each matrix connection must reproduce
FLAT_COUNTERPARTS = {'conpoint': 'syspoint', 'caln': 'syspoint', 'ccg2': 'g2-flat'}


@dataclass
class Outcome:
    subject: str
    verdicts: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    payload: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    #witnesses of nested runs, keyed by entry id
    nested: dict = field(default_factory=dict)

    @classmethod
    def from_report(cls, report):
        outcome = cls(report.subject, {'verdict': report.verdict}, payload=report.as_dict())
        for name, check in report.checks.items():
            if isinstance(check, ZeroTestVerdict):
                outcome.record(name, check)
        return outcome

    def record(self, name, verdict):
        self.checks[name] = verdict
        self.verdicts[name] = verdict.verdict
        return verdict

    def witnesses(self):
        own = {name: check.as_dict()['witness'] for name, check in self.checks.items()
               if not check.identically_zero}
        return {**self.nested, **own}


def _require(inputs, *names):
    missing = [name for name in names if not inputs.get(name)]
    if missing:
        raise ConfigurationError(f'missing input(s): {", ".join(missing)}')


def _zero_tensor(outcome, name, tensor, box, options):
    return outcome.record(name, tensor_is_zero(tensor, box, **options))


def ode3_outcome(action, inputs, options):
    _require(inputs, 'formula')
    ode = ThirdOrderODE.from_formula(inputs['formula'], inputs.get('parameters'), inputs.get('bounds'))
    if action == 'classify':
        return Outcome.from_report(classify3(ode, **options))
    outcome = Outcome(f"y''' = {to_formula(ode.F)}", payload={'box': ode.box.describe()})
    if action == 'invariants':
        invariants = ode3_invariants(ode)
        outcome.payload['invariants'] = invariants.as_dict()
        for name in ('A', 'G'):
            outcome.record(name, is_zero(getattr(invariants, name), ode.box, **options))
    elif action == 'metric':
        outcome.payload['metric'] = metric_tilde(ode).as_dict()
        outcome.record('kernel', kernel_check(ode, **options))
        transport = transport_check(ode, **options)
        outcome.payload['transport'] = transport.as_dict()
        outcome.record('transport', transport.verdict)
    elif action == 'nu':
        outcome.payload['nu'] = nu_tilde(ode).as_dict()
        outcome.record('closedness', closedness_check(ode, **options))
    return outcome


def dkp_outcome(action, inputs, options):
    _require(inputs, 'u')
    u = parse(inputs['u'], allowed={'x', 'y', 't'})
    outcome = Outcome(f'u = {to_formula(u)}')
    if action == 'residual':
        residual = dkp_residual(u)
        frobenius = dkp_frobenius(u)
        outcome.payload.update({
            'residual': to_formula(residual),
            'frobenius': {'first': to_formula(sympy.expand(frobenius.first)), 'second': to_formula(frobenius.second)},
        })
        outcome.record('residual', is_zero(residual, infer_box([u, residual], bounds=inputs.get('bounds')),
                                           **options))
        return outcome
    X = parse(inputs['X'], allowed={'x', 'y', 't', 'v'}) if inputs.get('X') else None
    box = infer_box([u] + ([X] if X is not None else []), bounds=inputs['bounds']) if inputs.get('bounds') else None
    coframe = dkp_coframe(u, X, box=box, **options)
    outcome.payload['coframe'] = coframe.as_dict()
    outcome.record('residual', coframe.residual)
    if coframe.membership is not None:
        outcome.record('membership', coframe.membership)
    return outcome


def ode2_outcome(action, inputs, options):
    _require(inputs, 'formula')
    ode = SecondOrderODE.from_formula(inputs['formula'], inputs.get('parameters'), inputs.get('bounds'))
    if action == 'flatness':
        report = fefferman_flatness_check(ode, **options)
        outcome = Outcome.from_report(report)
        outcome.verdicts['consistent'] = report.details['consistent']
        return outcome
    outcome = Outcome(f"y'' = {to_formula(ode.Q)}", payload={'box': ode.box.describe()})
    if action == 'metric':
        metric = fefferman_metric(ode)
        outcome.payload['metric'] = metric.as_dict()
        reference = ode.box.center(metric.free_symbols())
        outcome.verdicts['signature'] = list(metric.form.signature_at(reference, options.get('precision')))
    elif action == 'invariants':
        invariants = ode2_invariants(ode)
        outcome.payload['invariants'] = invariants.as_dict()
        outcome.record('w1', is_zero(invariants.w1, ode.box, **options))
        outcome.record('w2', is_zero(invariants.w2, ode.box, **options))
    return outcome


def load_solution(inputs):
    """A named solution family or a {'x': .., 'y': .., 'z': ..} document."""
    document = inputs.get('solution_document')
    if document is not None:
        if isinstance(document, str):
            try:
                with open(document, encoding='utf-8') as handle:
                    document = json.load(handle)
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigurationError(f'cannot read solution document {inputs["solution_document"]}: {exc}') from exc
        try:
            return ParametrizedSolution.from_dict(document)
        except KeyError as exc:
            raise ConfigurationError(f'solution document lacks the {exc.args[0]!r} component') from exc
    _require(inputs, 'solution')
    try:
        build = NAMED_SOLUTIONS[inputs['solution']]
    except KeyError:
        raise ConfigurationError(
            f'unknown solution {inputs["solution"]!r}; expected one of {", ".join(NAMED_SOLUTIONS)}'
        ) from None
    return build(int(inputs.get('k') or 3))


def transcription_table(verdicts):
    """One row per metric slot of the transcription check."""
    rows = [{'slot': label, 'verdict': verdict.verdict, 'worst_ratio': verdict.worst_ratio,
             'witness': verdict.witness} for label, verdict in verdicts.items()]
    return DataFrame(rows, columns=['slot', 'verdict', 'worst_ratio', 'witness'])


def example6_outcome(inputs, options):
    _require(inputs, 'formula')
    F = parse(inputs['formula'], allowed={'q'})
    bounds = inputs.get('bounds') or None
    part = inputs.get('part') or 'structure'
    subject = f"z' = {to_formula(F)}"
    if part == 'structure':
        return Outcome.from_report(example6_structure_check(F, bounds, **options))
    if part == 'pattern':
        report = weyl_frame_pattern_check(F, bounds, **options)
        outcome = Outcome.from_report(report)
        outcome.verdicts['C_2525'] = round(report.details['C_2525'], 2)
        return outcome
    outcome = Outcome(subject)
    if part == 'coframe':
        outcome.payload['coframe'] = example6_coframe(F).as_dict()
    elif part == 'a5':
        a5 = example6_a5(F)
        outcome.payload['psi'] = PsiInvariants.example6(a5).as_dict()
        outcome.payload['a5'] = to_formula(a5)
        outcome.record('a5', is_zero(a5, infer_box(a5, bounds=bounds or DEFAULT_BOUNDS), **options))
    elif part == 'einstein':
        _zero_tensor(outcome, 'einstein_scale', einstein_scale_residual(F, bounds), None, options)
    elif part == 'weyl-square':
        metric = representative_metric(F, bounds)
        _zero_tensor(outcome, 'weyl_square', weyl_square(metric), metric.box, options)
    elif part == 'transcription':
        factor, verdicts = transcription_report(F, bounds, **options)
        table = transcription_table(verdicts)
        for label, verdict in verdicts.items():
            outcome.checks[label] = verdict
        mismatched = table.loc[table['verdict'] != 'identically-zero', 'slot'].tolist()
        outcome.verdicts['transcription'] = 'agrees' if not mismatched else 'mismatch'
        outcome.payload.update({'factor': to_formula(factor), 'mismatched': mismatched,
                                'table': table.drop(columns='witness').to_dict(orient='records')})
        outcome.tables['transcription'] = table
    else:
        raise ConfigurationError(f'unknown example6 part {part!r}; expected one of {", ".join(EXAMPLE6_PARTS)}')
    return outcome


def monge_outcome(action, inputs, options):
    if action == 'example6':
        return example6_outcome(inputs, options)
    _require(inputs, 'formula')
    first_order = action == 'classify1' or (action == 'verify-solution' and inputs.get('equation') == 'monge1')
    equation = (MongeFirst if first_order else MongeSecond).from_formula(
        inputs['formula'], inputs.get('parameters'), inputs.get('bounds'))
    if action == 'classify1':
        return Outcome.from_report(classify_monge1(equation, **options))
    if action == 'classify2':
        return Outcome.from_report(classify_monge2(equation, **options))
    outcome = Outcome(equation.subject)
    if action == 'verify-solution':
        solution = load_solution(inputs)
        box = DomainBox.from_bounds(inputs['bounds']) if inputs.get('bounds') else None
        outcome.payload['solution'] = solution.as_dict()
        outcome.record('solution', verify_parametrized_solution(equation, solution, box, **options))
    elif action == 'g32':
        metric = g32_metric(equation, **options)
        outcome.payload['metric'] = metric.as_dict()
        _zero_tensor(outcome, 'weyl', weyl(metric), metric.box, options)
    return outcome


def structure_table_outcome(system):
    table = flat_structure_constants(system)
    outcome = Outcome(system, payload={'structure_constants': table.as_dict()})
    jacobi = jacobi_check(table)
    squares = structure_d_squared(table)
    killing = killing_analysis(table)
    outcome.verdicts.update({
        'jacobi': 'holds' if jacobi.holds else 'fails',
        'd_squared': 'zero' if all(form.is_structurally_zero() for form in squares.values()) else 'nonzero',
        'nondegenerate': killing.nondegenerate,
        'killing_signature': list(killing.signature),
    })
    outcome.payload.update({'jacobi': jacobi.as_dict(), 'killing': killing.as_dict()})
    return outcome


def _inertia(signature):
    """Inertia up to an overall sign of the form."""
    positive, negative, zero = signature
    return [max(positive, negative), min(positive, negative), zero]


def connection_outcome(system, invariants):
    basis = matrix_rep(system, invariants)
    closure = commutator_closure_check(basis)
    outcome = Outcome(system, payload={'basis': basis.as_dict(), 'closure': closure.as_dict()})
    outcome.verdicts['closed'] = closure.closed
    if closure.closed:
        differences = closure.table.differences(flat_structure_constants(FLAT_COUNTERPARTS[system]))
        outcome.verdicts['jacobi'] = 'holds' if jacobi_check(closure.table).holds else 'fails'
        if not invariants:
            outcome.verdicts['matches_flat'] = not differences
            outcome.payload['differences'] = [list(triple) for triple in differences]
    bilinear = invariant_bilinear_form(basis)
    outcome.payload['bilinear'] = bilinear.as_dict()
    outcome.verdicts['bilinear_dimension'] = bilinear.dimension
    if bilinear.signature is not None:
        outcome.verdicts['bilinear_inertia'] = _inertia(bilinear.signature)
    if system == 'ccg2':
        three_forms = invariant_three_form(basis)
        outcome.payload['three_form'] = three_forms.as_dict()
        outcome.verdicts['three_form_dimension'] = three_forms.dimension
        outcome.verdicts['three_form_generic'] = three_forms.generic
        if three_forms.generic and bilinear.forms:
            outcome.verdicts['proportional'] = proportional(three_forms.induced[0], bilinear.forms[0])
    return outcome


def lie_outcome(action, inputs, options):
    _require(inputs, 'system')
    system = inputs['system']
    if system in SYSTEMS:
        return structure_table_outcome(system)
    if system in CONNECTIONS:
        return connection_outcome(system, inputs.get('invariants') or {})
    raise ChartMismatchError(f'unknown system {system!r}; expected one of {", ".join(LIE_SYSTEMS)}')


FAMILIES = {
    'ode3': ode3_outcome,
    'dkp': dkp_outcome,
    'ode2': ode2_outcome,
    'monge': monge_outcome,
    'lie': lie_outcome,
}


def run_operation(family, action, inputs, config):
    """Dispatch one subject; inputs['bounds'] already merges the run-wide box."""
    if family not in FAMILIES:
        raise CatalogError(f'unknown family {family!r}; expected one of {", ".join(FAMILIES)}')
    if action not in ACTIONS[family]:
        raise CatalogError(f'unknown {family} action {action!r}; expected one of {", ".join(ACTIONS[family])}')
    logger.info('running %s %s', family, action)
    return FAMILIES[family](action, inputs, config.options)
