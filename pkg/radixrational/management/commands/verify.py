from django.core.management.base import CommandError

from radixrational.expansion import INTEGERS, lrtoae2
from radixrational.harness import compare_integers, empirical_periodic
from radixrational.management.base import RadixCommand
from radixrational.repfile import (
    check_expansion_report,
    load_expansion_report,
    write_comparison_csv,
    write_scatter_csv,
)

ENVELOPE_VIOLATION = 3


class Command(RadixCommand):
    help = 'Compare the integer expansion with brute-force running sums under the fitted-envelope rule'
    report_name = 'verify'

    def add_arguments(self, parser):
        parser.add_argument('path', help='Representation file (JSON)')
        parser.add_argument('--nmax', type=int, help='Largest N compared')
        parser.add_argument('--expansion', help='Expansion report to check against the representation')
        parser.add_argument('--scalar', action='store_true', help='Compare L Sigma_N instead of the vector')
        parser.add_argument('--override', action='store_true', help='Solve dilation systems even when not admissible')
        super().add_arguments(parser)

    def run(self, config, path, nmax=None, expansion=None, scalar=False, override=False, **options):
        rep = self.load(path)
        nmax = nmax or config.nmax
        built = lrtoae2(rep, config=config, tol=config.tolerance, override=override)
        if expansion:
            check_expansion_report(load_expansion_report(expansion), built, config.tolerance)
        N_range = (rep.radix, nmax)
        comparison = compare_integers(
            rep, built, N_range, config.sample_points, scalar=scalar, max_n=config.brute_force_max_n
        )
        scatter = empirical_periodic(rep, built, N_range, config.sample_points, config.tolerance)

        path = self.output_path(options, 'comparison.csv')
        if path is not None:
            write_comparison_csv(path, comparison)
            write_scatter_csv(self.output_path(options, 'scatter.csv'), scatter)
        return {
            'name': rep.name,
            'mode': INTEGERS,
            'error': built.error.as_dict(),
            'comparison': comparison.as_dict(),
            'scatter': {'rho': scatter.rho, 's': scatter.s, 'points': len(scatter.N), 'max_gap': scatter.max_gap},
            'passed': comparison.passed,
        }

    def after_report(self, report, **options):
        if not report['passed']:
            raise CommandError(
                f"fitted envelope violated: validation ratio {report['comparison']['validation_ratio']:.6g} "
                f"exceeds twice the fitted constant {report['comparison']['constant']:.6g}",
                returncode=ENVELOPE_VIOLATION,
            )
