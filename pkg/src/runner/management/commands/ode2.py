from runner.commands import GeometryCommand, parse_assignments


class Command(GeometryCommand):
    help = "Fefferman metric, point invariants and conformal flatness of y'' = Q(x, y, y')"
    family = 'ode2'

    def add_subject_arguments(self, parser):
        parser.add_argument('--Q', help="right-hand side in x, y, p = y'")
        parser.add_argument('--param', action='append', metavar='NAME=VALUE', help='parameter value, repeatable')

    def subject_inputs(self, options):
        return {'formula': options['Q'], 'parameters': parse_assignments(options['param'], '--param')}
