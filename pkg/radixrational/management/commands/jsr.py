from radixrational.exactnum import NORM_KINDS, format_scalar
from radixrational.jsr import jsr_estimate, max_product_norm
from radixrational.management.base import RadixCommand


class Command(RadixCommand):
    help = 'Joint spectral radius bounds and the lambda_T table of a representation'
    report_name = 'jsr'

    def add_arguments(self, parser):
        parser.add_argument('path', help='Representation file (JSON)')
        parser.add_argument('--T', dest='T_max', type=int, help='Longest product length enumerated')
        parser.add_argument('--norm', choices=NORM_KINDS, help='Restrict the table to one induced norm')
        super().add_arguments(parser)

    def run(self, config, path, T_max=None, norm=None, **options):
        rep = self.load(path)
        T_max = T_max or config.jsr_max_t
        estimate = jsr_estimate(rep, budget=config.jsr_budget, T_max=T_max, tol=config.tolerance)
        kinds = (norm,) if norm else NORM_KINDS
        table = []
        for T in range(1, estimate_length(rep.radix, T_max, config.jsr_budget) + 1):
            for kind in kinds:
                best, _ = max_product_norm(rep, T, kind, config.jsr_budget)
                table.append({
                    'T': T,
                    'norm': kind,
                    'max_norm': best if isinstance(best, float) else format_scalar(best),
                    'lambda_T': float(best) ** (1.0 / T),
                })
        return {'name': rep.name, 'radix': rep.radix, 'jsr': estimate.as_dict(), 'table': table}


def estimate_length(radix, T_max, budget):
    """Largest T not above T_max whose enumeration fits the budget"""
    while T_max > 1 and sum(radix ** T for T in range(1, T_max + 1)) > budget:
        T_max -= 1
    return T_max
