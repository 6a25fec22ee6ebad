import dataclasses
from dataclasses import dataclass

from django.conf import settings


@dataclass(frozen=True)
class RunConfig:
    """
    Run parameters shared by the library entry points and the commands.

    Attributes:
        tolerance (float): Relative tolerance for numeric rank and modulus decisions
        grid_depth (int): Depth m of coefficient grids (B**m + 1 nodes)
        grid_max_nodes (int): Upper bound on B**m; the depth is reduced to fit
        jsr_max_t (int): Longest product length enumerated for JSR bounds
        jsr_budget (int): Maximum number of products per enumeration
        naive_max_k (int): Longest word length for naive running sums
        brute_force_max_n (int): Largest N accumulated by brute force
        infer_max_level (int): Deepest subsequence level for inference
        infer_horizon (int): Value window used by inference
        period_max_q (int): Largest period searched for roots of unity
        nmax (int): Default upper end of verification ranges
        cascade_iterations (int): Default number of cascade iterations
        profile_points (int): Default number of t samples for profiles
        sample_points (int): Maximum number of N values compared
        seed (int): Seed for every randomized choice
        output_dir (str): Directory for report files
    """
    tolerance: float = 1e-9
    grid_depth: int = 12
    grid_max_nodes: int = 2 ** 16
    jsr_max_t: int = 4
    jsr_budget: int = 10 ** 6
    naive_max_k: int = 16
    brute_force_max_n: int = 2 ** 24
    infer_max_level: int = 8
    infer_horizon: int = 1024
    period_max_q: int = 64
    nmax: int = 2 ** 16
    cascade_iterations: int = 25
    profile_points: int = 1000
    sample_points: int = 2048
    seed: int = 0
    output_dir: str = 'out'

    @classmethod
    def from_settings(cls, **overrides):
        """Build a config from settings.RADIXRATIONAL, then apply non-None overrides"""
        values = {}
        configured = getattr(settings, 'RADIXRATIONAL', {})
        for field in dataclasses.fields(cls):
            key = field.name.upper()
            if key in configured:
                values[field.name] = configured[key]
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def grid_depth_for(self, radix):
        """Largest depth not above grid_depth with radix**depth within the node budget"""
        depth = max(1, self.grid_depth)
        while depth > 1 and radix ** depth > self.grid_max_nodes:
            depth -= 1
        return depth

    def as_dict(self):
        return dataclasses.asdict(self)
