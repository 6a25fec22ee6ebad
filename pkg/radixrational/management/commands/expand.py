import numpy as np

from radixrational.expansion import INTEGERS, MODES, lrtoae1, lrtoae2, periodic_profile, periodicity
from radixrational.management.base import RadixCommand
from radixrational.repfile import write_grid_csv, write_profile_csv


class Command(RadixCommand):
    help = 'Asymptotic expansion of the running sums over words or over integers'
    report_name = 'expansion'

    def add_arguments(self, parser):
        parser.add_argument('path', help='Representation file (JSON)')
        parser.add_argument('--mode', choices=MODES, default=INTEGERS)
        parser.add_argument('--override', action='store_true', help='Solve dilation systems even when not admissible')
        super().add_arguments(parser)

    def run(self, config, path, mode, override=False, **options):
        rep = self.load(path)
        build = lrtoae2 if mode == INTEGERS else lrtoae1
        expansion = build(rep, config=config, tol=config.tolerance, override=override)
        report = expansion.report(config)

        classes = sorted({term.rho for term in expansion.terms}, reverse=True)
        report['periodicity'] = []
        for rho in classes:
            period = periodicity(expansion, rho, config.period_max_q, config.tolerance)
            report['periodicity'].append({'rho': rho, 'period': period, 'periodic': period is not None})

        for index, grid in sorted(expansion.grids.items()):
            path = self.output_path(options, f"chain{index}.csv")
            if path is not None:
                write_grid_csv(path, grid)
        if mode == INTEGERS:
            t_grid = np.linspace(1.0, 2.0, config.profile_points, endpoint=False)
            for k, rho in enumerate(classes):
                path = self.output_path(options, f"profile{k}.csv")
                if path is not None:
                    profile = periodic_profile(expansion, rho, t_grid, max_q=config.period_max_q, tol=config.tolerance)
                    write_profile_csv(path, profile)
        return report
