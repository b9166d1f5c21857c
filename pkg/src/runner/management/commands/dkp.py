from runner.commands import GeometryCommand


class Command(GeometryCommand):
    help = 'dKP residual of u(x, y, t) and the coframe it induces'
    family = 'dkp'

    def add_subject_arguments(self, parser):
        parser.add_argument('--u', help='candidate solution in x, y, t')
        parser.add_argument('--X', help='coordinate in x, y, t, v whose differential is tested against omega4')

    def subject_inputs(self, options):
        return {'u': options['u'], 'X': options['X']}
