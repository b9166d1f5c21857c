"""JSON and human renderings of one run."""

import json

OK = 'ok'
MISMATCH = 'mismatch'

REPORT_KEYS = ('command', 'inputs', 'config', 'verdicts', 'witnesses', 'timings', 'status')


def compare(verdicts, expected):
    """Names whose observed verdict differs from the expected one."""
    return sorted(name for name, value in (expected or {}).items() if verdicts.get(name) != value)


def build_report(command, inputs, config, outcome, timings, expected=None):
    mismatches = compare(outcome.verdicts, expected)
    report = {
        'command': command,
        'inputs': inputs,
        'config': config.as_dict(),
        'verdicts': dict(outcome.verdicts),
        'witnesses': outcome.witnesses(),
        'timings': timings,
        'status': MISMATCH if mismatches else OK,
    }
    if expected:
        report['expected'] = dict(expected)
        report['mismatches'] = mismatches
    report['details'] = outcome.payload
    return report


def to_json(report):
    return json.dumps(report, indent=2, sort_keys=False, default=str)


def render_human(report, tables=None):
    lines = [f"{report['command']}: {report['status']}"]
    for name, value in report['verdicts'].items():
        lines.append(f'  {name}: {value}')
    for name, witness in report['witnesses'].items():
        if 'point' in witness:
            lines.append(f"  witness for {name}: {witness['point']} -> {witness['value']}")
        else:
            lines.append(f'  witnesses in {name}: {", ".join(sorted(witness))}')
    for name in report.get('mismatches', ()):
        lines.append(f"  expected {name} = {report['expected'][name]}")
    for name, table in (tables or {}).items():
        lines.append(f'{name}:')
        lines.append(table.to_string(index=False))
    lines.append(f"  elapsed {report['timings']['total']:.2f}s")
    return '\n'.join(lines)


def write_report(report, path):
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(to_json(report))
        handle.write('\n')
