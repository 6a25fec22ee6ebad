import json
from pathlib import Path

from django.core.management.base import CommandError

from radixrational.catalog import GENERATORS
from radixrational.exceptions import NotRecognized
from radixrational.linrep import infer_representation
from radixrational.management.base import RadixCommand
from radixrational.repfile import dump_repfile, repfile_document


def values_oracle(path):
    """Terms from a JSON list or a whitespace separated text file"""
    text = Path(path).read_text(encoding='utf-8')
    try:
        values = json.loads(text)
    except json.JSONDecodeError:
        values = text.split()
    if not isinstance(values, list):
        raise NotRecognized(f"{path} does not hold a list of terms")

    def oracle(n):
        if n >= len(values):
            raise NotRecognized(f"{path} holds {len(values)} terms; inference needs index {n}")
        return values[n]

    return oracle, len(values)


class Command(RadixCommand):
    help = 'Infer a linear representation from term values or a named generator'
    report_name = 'inferred'

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--values', help='File with the terms u(0), u(1), ...')
        source.add_argument('--generator', choices=sorted(GENERATORS))
        parser.add_argument('--radix', type=int, default=2)
        parser.add_argument('--horizon', type=int, help='Number of terms compared per subsequence')
        super().add_arguments(parser)

    def run(self, config, values=None, generator=None, radix=2, horizon=None, **options):
        if radix < 2:
            raise CommandError("radix must be at least 2", returncode=1)
        if generator:
            oracle = GENERATORS[generator]
            horizon = horizon or config.infer_horizon
        else:
            oracle, count = values_oracle(values)
            horizon = horizon or max(1, min(config.infer_horizon, count // radix ** 2))
        rep = infer_representation(oracle, radix, config.infer_max_level, horizon)
        path = self.output_path(options, 'representation.json')
        if path is not None:
            dump_repfile(rep, path)
        return repfile_document(rep)
