from runner.commands import GeometryCommand
from runner.operations import Outcome
from runner.suite import PASS, verify_paper


class Command(GeometryCommand):
    help = 'Run the checked-in catalog of examples and compare every expected verdict'
    family = 'verify'

    def actions(self):
        return ('paper',)

    def add_subject_arguments(self, parser):
        parser.add_argument('--only', action='append', metavar='PREFIX', help='keep catalog ids with this prefix')
        parser.add_argument('--catalog', help='catalog file instead of the checked-in one')

    def subject_inputs(self, options):
        return {'only': options['only'], 'catalog': options['catalog']}

    def run(self, action, inputs, config):
        summary = verify_paper(config, only=inputs['only'], catalog=inputs['catalog'])
        return Outcome('catalog', dict(zip(summary.frame['id'], summary.frame['status'])),
                       payload=summary.as_dict(), tables={'summary': summary.frame.drop(columns='anchor')},
                       nested=summary.witnesses)

    def expectations(self, outcome, expected):
        """Every entry must pass; --expect may still pin individual statuses."""
        return {**{entry_id: PASS for entry_id in outcome.verdicts}, **expected}
