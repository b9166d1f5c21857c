from runner.commands import GeometryCommand, parse_assignments
from runner.operations import EXAMPLE6_PARTS, NAMED_SOLUTIONS


class Command(GeometryCommand):
    help = "Monge equations z' = F: classification, solutions, the (3,2) metric and the z' = F(y'') family"
    family = 'monge'

    def add_subject_arguments(self, parser):
        parser.add_argument('--F', help="right-hand side in x, y, p = y', q = y'', z")
        parser.add_argument('--param', action='append', metavar='NAME=VALUE', help='parameter value, repeatable')
        parser.add_argument('--equation', choices=('monge1', 'monge2'), default='monge2',
                            help='order of the equation a solution is checked against')
        parser.add_argument('--solution', choices=tuple(NAMED_SOLUTIONS), help='named solution family')
        parser.add_argument('--k', type=int, default=3, help='exponent of the named solution family')
        parser.add_argument('--solution-file', help="JSON document {'x': .., 'y': .., 'z': ..} in t and w_k")
        parser.add_argument('--part', choices=EXAMPLE6_PARTS, default='structure',
                            help="what to compute for z' = F(y'')")

    def subject_inputs(self, options):
        return {
            'formula': options['F'],
            'parameters': parse_assignments(options['param'], '--param'),
            'equation': options['equation'],
            'solution': options['solution'],
            'k': options['k'],
            'solution_document': options['solution_file'],
            'part': options['part'],
        }
