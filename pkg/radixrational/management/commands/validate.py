from radixrational.exactnum import format_scalar
from radixrational.linrep import validate
from radixrational.management.base import RadixCommand


class Command(RadixCommand):
    help = 'Parse a representation file and report its structural diagnostics'
    report_name = 'validate'

    def add_arguments(self, parser):
        parser.add_argument('path', help='Representation file (JSON)')
        super().add_arguments(parser)

    def run(self, config, path, **options):
        rep = self.load(path)
        diagnostics = validate(rep)
        return {
            'path': path,
            'name': rep.name,
            'radix': rep.radix,
            'dim': rep.dim,
            'scalar': rep.domain,
            'ok': diagnostics.ok,
            'errors': diagnostics.errors,
            'insensitive': diagnostics.insensitive,
            'Q': [[format_scalar(v) for v in row] for row in diagnostics.Q.entries],
        }
