from radixrational.exactnum import format_scalar
from radixrational.expansion import analyze
from radixrational.jsr import jsr_estimate, lie_algebra_closure
from radixrational.management.base import RadixCommand


def chain_report(chain):
    return {
        'eigenvalue': str(chain.eigenvalue),
        'rho': chain.rho,
        'height': chain.height,
        'vectors': [[format_scalar(v) for v in vector] for vector in chain.vectors],
        'residual': chain.residual,
    }


class Command(RadixCommand):
    help = 'Joint spectral radius, eigenstructure, Jordan chains and C decomposition of a representation'
    report_name = 'analyze'

    def add_arguments(self, parser):
        parser.add_argument('path', help='Representation file (JSON)')
        super().add_arguments(parser)

    def run(self, config, path, **options):
        rep = self.load(path)
        tol = config.tolerance
        jsr = jsr_estimate(rep, budget=config.jsr_budget, T_max=config.jsr_max_t, tol=tol)
        lie = jsr.lie or lie_algebra_closure(rep.A, tol)
        structure, chains, decomposition = analyze(rep, tol)
        return {
            'name': rep.name,
            'radix': rep.radix,
            'dim': rep.dim,
            'jsr': jsr.as_dict(),
            'lie': {
                'dimension': len(lie.basis),
                'derived_dims': lie.derived_dims,
                'solvable': lie.solvable,
            },
            'eigenvalues': structure.as_dict(),
            'eigen_residual': structure.residual,
            'chains': [chain_report(c) for c in chains],
            'decomposition': {
                'coefficients': [[format_scalar(g) for g in gammas] for gammas in decomposition.coefficients],
                'residual': decomposition.residual,
            },
        }
