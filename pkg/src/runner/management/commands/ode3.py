from runner.commands import GeometryCommand, parse_assignments


class Command(GeometryCommand):
    help = "Invariants, classification, metric and Weyl form of y''' = F(x, y, y', y'')"
    family = 'ode3'

    def add_subject_arguments(self, parser):
        parser.add_argument('--F', help="right-hand side in x, y, p = y', q = y''")
        parser.add_argument('--param', action='append', metavar='NAME=VALUE', help='parameter value, repeatable')

    def subject_inputs(self, options):
        return {'formula': options['F'], 'parameters': parse_assignments(options['param'], '--param')}
