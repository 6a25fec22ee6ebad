import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from radixrational.conf import RunConfig
from radixrational.exceptions import RadixRationalError
from radixrational.repfile import dumps, load_repfile

logger = logging.getLogger('radixrational.commands')


class RadixCommand(BaseCommand):
    """
    Shared surface of the radixrational commands.

    Subclasses implement run(config, **options) and return the report dict;
    it is printed as JSON and, with --out, saved as <out>/<name>.json.
    Library errors become CommandError with the error's exit code.
    """
    report_name = None

    def add_arguments(self, parser):
        parser.add_argument('--tol', type=float, help='Relative tolerance for numeric decisions')
        parser.add_argument('--depth', type=int, help='Grid depth m (B**m + 1 nodes)')
        parser.add_argument('--out', help='Directory for report files')
        parser.add_argument('--seed', type=int, help='Seed for randomized sampling')

    def config_from(self, options):
        return RunConfig.from_settings(
            tolerance=options.get('tol'),
            grid_depth=options.get('depth'),
            output_dir=options.get('out'),
            seed=options.get('seed'),
        )

    def load(self, path):
        return load_repfile(path)

    def output_path(self, options, filename):
        if not options.get('out'):
            return None
        directory = Path(options['out'])
        directory.mkdir(parents=True, exist_ok=True)
        return directory / filename

    def handle(self, *args, **options):
        config = self.config_from(options)
        try:
            report = self.run(config, **options)
        except RadixRationalError as exc:
            logger.info("%s failed: %s", self.report_name, exc)
            raise CommandError(str(exc), returncode=exc.exit_code) from exc
        report.setdefault('config', config.as_dict())
        text = dumps(report)
        path = self.output_path(options, f"{self.report_name}.json")
        if path is not None:
            path.write_text(text + '\n', encoding='utf-8')
            logger.info("wrote %s", path)
        self.stdout.write(text)
        self.after_report(report, **options)

    def run(self, config, **options):
        raise NotImplementedError

    def after_report(self, report, **options):
        """Hook for exit decisions taken after the report is written"""
