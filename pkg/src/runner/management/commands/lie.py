from runner.commands import GeometryCommand, parse_assignments
from runner.operations import LIE_SYSTEMS


class Command(GeometryCommand):
    help = 'Jacobi, Killing form, commutator closure and invariant forms of the flat algebras'
    family = 'lie'

    def add_subject_arguments(self, parser):
        parser.add_argument('system', choices=LIE_SYSTEMS)
        parser.add_argument('--invariant', action='append', metavar='NAME=VALUE',
                            help='value of a curvature invariant in the caln connection, repeatable')

    def subject_inputs(self, options):
        return {'system': options['system'], 'invariants': parse_assignments(options['invariant'], '--invariant')}
