"""
Shared machinery of the geometry management commands.

Exit status: 0 when every expected verdict holds, 1 on a mismatch against
--expect (after the report is written), 2 on bad input or configuration.
"""

import json
import logging
import time

from django.core.management.base import BaseCommand, CommandError

from expressions.exceptions import ConfigurationError, GeometryError

from .config import load_run_config
from .operations import ACTIONS, run_operation
from .reports import MISMATCH, build_report, render_human, to_json, write_report

logger = logging.getLogger(__name__)


def parse_assignments(items, option):
    """['alpha=1/2', 'verdict=flat'] -> {'alpha': '1/2', 'verdict': 'flat'}; JSON literals are decoded."""
    values = {}
    for item in items or ():
        name, sep, text = item.partition('=')
        if not sep or not name.strip():
            raise ConfigurationError(f'{option} expects NAME=VALUE, got {item!r}')
        try:
            values[name.strip()] = json.loads(text)
        except json.JSONDecodeError:
            values[name.strip()] = text
    return values


class GeometryCommand(BaseCommand):
    family = None

    def add_arguments(self, parser):
        parser.add_argument('action', choices=self.actions())
        self.add_subject_arguments(parser)
        run = parser.add_argument_group('run configuration')
        run.add_argument('--tol', type=float, help='relative zero-test tolerance')
        run.add_argument('--samples', type=int, help='sample points per zero-test')
        run.add_argument('--seed', type=int, help='random seed of the sample points')
        run.add_argument('--precision', type=int, help='decimal digits of the evaluation')
        run.add_argument('--box', action='append', metavar='SYM:LO:HI', help='interval of one symbol, repeatable')
        run.add_argument('--json', action='store_true', help='print the JSON report')
        run.add_argument('--config', help='JSON configuration file, overriding the environment')
        run.add_argument('--expect', action='append', metavar='NAME=VALUE',
                         help='expected verdict; a mismatch exits with status 1')
        run.add_argument('--report', help='also write the JSON report to this file')

    def actions(self):
        return ACTIONS[self.family]

    def add_subject_arguments(self, parser):
        pass

    def subject_inputs(self, options):
        return {}

    def run(self, action, inputs, config):
        return run_operation(self.family, action, inputs, config)

    def expectations(self, outcome, expected):
        return expected

    def handle(self, *args, **options):
        action = options['action']
        try:
            config = load_run_config({
                'tolerance': options['tol'],
                'samples': options['samples'],
                'seed': options['seed'],
                'precision': options['precision'],
                'box': options['box'],
                'output': 'json' if options['json'] else None,
            }, path=options['config'])
            expected = parse_assignments(options['expect'], '--expect')
            inputs = self.subject_inputs(options)
        except ConfigurationError as exc:
            raise CommandError(str(exc), returncode=2) from exc
        inputs['bounds'] = dict(config.box) or None

        started = time.perf_counter()
        try:
            outcome = self.run(action, inputs, config)
        except GeometryError as exc:
            logger.info('%s %s failed: %s', self.family, action, exc)
            raise CommandError(f'{type(exc).__name__}: {exc}', returncode=2) from exc
        timings = {'total': round(time.perf_counter() - started, 3)}
        expected = self.expectations(outcome, expected)

        command = f'{self.family} {action}'
        report = build_report(command, inputs, config, outcome, timings, expected)
        if config.output == 'json':
            self.stdout.write(to_json(report))
        else:
            self.stdout.write(render_human(report, outcome.tables))
        if options['report']:
            write_report(report, options['report'])
        if report['status'] == MISMATCH:
            raise CommandError(f'{command}: unexpected {", ".join(report["mismatches"])}', returncode=1)
