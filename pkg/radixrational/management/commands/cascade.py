import numpy as np

from radixrational.dilation import (
    DilationSystem,
    cascade_grid,
    contraction_ratios,
    holder_constant,
    holder_exponent,
    residual,
    solve_system,
)
from radixrational.exceptions import UnsupportedOperation
from radixrational.expansion import analyze, choose_lambda
from radixrational.jsr import jsr_estimate
from radixrational.management.base import RadixCommand
from radixrational.repfile import write_grid_csv


def dominant_chain(decomposition, tol):
    """Index of the chain of largest modulus carrying a nonzero coordinate of C"""
    best = None
    for index, _, _ in decomposition.nonzero(tol):
        chain = decomposition.chains[index]
        if best is None or chain.rho > decomposition.chains[best].rho:
            best = index
    return best


class Command(RadixCommand):
    help = 'Solve the dominant dilation system by cascade iteration and report its convergence'
    report_name = 'cascade'

    def add_arguments(self, parser):
        parser.add_argument('path', help='Representation file (JSON)')
        parser.add_argument('--iters', type=int, help='Number of cascade iterations')
        parser.add_argument('--override', action='store_true', help='Iterate even when the system is not admissible')
        super().add_arguments(parser)

    def run(self, config, path, iters=None, override=False, **options):
        rep = self.load(path)
        tol = config.tolerance
        iterations = iters or config.cascade_iterations
        depth = config.grid_depth_for(rep.radix)
        jsr = jsr_estimate(rep, budget=config.jsr_budget, T_max=config.jsr_max_t, tol=tol)
        _, _, decomposition = analyze(rep, tol)
        lam = choose_lambda([c.rho for c in decomposition.chains], jsr, tol)
        index = dominant_chain(decomposition, tol)
        if index is None:
            raise UnsupportedOperation(f"{rep.name or 'representation'}: C is zero, no dilation system to iterate")
        chain = decomposition.chains[index]
        system = DilationSystem.from_chain(rep, chain, jsr, override)

        grid = cascade_grid(system, depth, iterations)
        report = {
            'name': rep.name,
            'chain': index,
            'rho': chain.rho,
            'height': chain.height,
            'lambda': lam.value,
            'depth': depth,
            'iterations': iterations,
            'differences': grid.differences,
            'contraction_ratios': contraction_ratios(grid),
            'residual': residual(system, grid),
        }
        admissible, _ = system.admissibility()
        if admissible:
            exact = solve_system(system, depth)
            report['distance_to_exact'] = float(np.abs(grid.values - exact.values).max())
        if 0 < lam.value < chain.rho <= rep.radix * lam.value:
            alpha = holder_exponent(chain.rho, lam.value, rep.radix)
            report['holder'] = {'exponent': alpha, 'constant': holder_constant(grid, alpha)}

        path = self.output_path(options, 'cascade.csv')
        if path is not None:
            write_grid_csv(path, grid)
        return report
