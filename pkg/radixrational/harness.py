"""
Checks of expansions against brute-force running sums.

Big-oh claims are checked with a fitted envelope: the constant c is the
largest deviation/envelope ratio on the first half of the (logarithmic)
range and the second half must stay within 2c.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .catalog import rosette, triangular_tiling
from .dilation import DilationSystem, solve_system
from .exactnum import DEFAULT_TOLERANCE, binomial
from .exceptions import UnsupportedOperation
from .expansion import (
    analyze,
    eval_expansion_integers,
    eval_expansion_words,
    lrtoae2,
    regular_part_at,
    scale_coefficients,
)
from .jsr import jsr_estimate
from .linrep import brute_running_sums, integer_log, running_sum_grid, running_sum_words

logger = logging.getLogger(__name__)

# Relative size of float noise tolerated on top of the fitted envelope
NOISE = 1e-9


@dataclass
class ConvergenceProbe:
    """
    Distance between F_K = S_K / R(K) and its limit on a grid.

    Attributes:
        K (list): Probed word lengths
        normalization (list): R(K) = C(K, nu - 1) alpha^(K - nu + 1)
        sup_errors (list): max over grid nodes of |F_K - F|
        rate (float): Fitted geometric decay rate of sup_errors
        bound (float): lambda_T / rho for the rate assertion
        eigenvector (bool): Whether C is a multiple of a single eigenvector
        passed (bool): rate <= bound + 0.1, or True when the assertion does not apply
    """
    K: list
    normalization: list
    sup_errors: list
    rate: float
    bound: float
    eigenvector: bool
    passed: bool

    def as_dict(self):
        return {
            'K': self.K,
            'normalization': [complex(r).real if complex(r).imag == 0 else str(r) for r in self.normalization],
            'sup_errors': self.sup_errors,
            'rate': self.rate,
            'bound': self.bound,
            'eigenvector': self.eigenvector,
            'passed': self.passed,
        }


@dataclass
class ComparisonReport:
    """
    Deviations of an expansion from brute-force values.

    Attributes:
        points (list): Evaluation points (N for integers, (K, x) for words)
        deviations (list): Infinity-norm deviations
        envelopes (list): Error-class envelope at each point
        constant (float): Fitted constant c on the first half
        ratio (float): Largest deviation/envelope on the second half
        passed (bool): Second half within 2c plus float noise
    """
    points: list
    deviations: list
    envelopes: list
    constant: float
    ratio: float
    passed: bool
    noise: list = field(default_factory=list, repr=False)

    def as_dict(self):
        return {
            'range': [self.points[0], self.points[-1]] if self.points else [],
            'count': len(self.points),
            'max_deviation': max(self.deviations, default=0.0),
            'constant': self.constant,
            'validation_ratio': self.ratio,
            'passed': self.passed,
        }

    def rows(self):
        for point, deviation, envelope in zip(self.points, self.deviations, self.envelopes):
            yield [point, deviation, envelope, deviation / envelope if envelope else 0.0]


def fitted_envelope(positions, deviations, envelopes, noise=None):
    """
    (c, validation ratio, passed) for the fitted-envelope rule.

    positions are logarithmic coordinates; the first half of their range
    fits c and the second half must satisfy deviation <= 2c envelope + noise.
    """
    if not positions:
        return 0.0, 0.0, True
    noise = noise or [0.0] * len(positions)
    middle = (positions[0] + positions[-1]) / 2
    c, ratio, passed = 0.0, 0.0, True
    for position, deviation, envelope in zip(positions, deviations, envelopes):
        if position <= middle:
            c = max(c, deviation / envelope if envelope else (math.inf if deviation else 0.0))
    for position, deviation, envelope, slack in zip(positions, deviations, envelopes, noise):
        if position > middle:
            if envelope:
                ratio = max(ratio, deviation / envelope)
            if deviation > 2 * c * envelope + slack:
                passed = False
    return c, ratio, passed


def _resolve_chain(decomposition, chain):
    if chain is None:
        for index, gammas in enumerate(decomposition.coefficients):
            if any(gammas) and decomposition.chains[index].rho > 0:
                return index
        raise UnsupportedOperation("C is zero; nothing to probe")
    if isinstance(chain, int):
        return chain
    for index, candidate in enumerate(decomposition.chains):
        if candidate.eigenvalue == chain.eigenvalue and candidate.height == chain.height:
            return index
    raise UnsupportedOperation(f"no chain of eigenvalue {chain.eigenvalue} in the Jordan basis")


def _fit_rate(K, errors):
    pairs = [(k, math.log(e)) for k, e in zip(K, errors) if e > 0]
    if len(pairs) < 2:
        return 0.0
    slope = np.polyfit([k for k, _ in pairs], [v for _, v in pairs], 1)[0]
    return float(math.exp(slope))


def probe_fk_convergence(rep, chain=None, K_range=range(1, 13), grid_depth=12, jsr=None, tol=DEFAULT_TOLERANCE):
    """
    sup over the depth-m grid of |S_K / R(K) - gamma F^(0)| for K in K_range.

    gamma is the coordinate of C on the top of the chain. Raises
    NoSolutionGuarantee when rho does not exceed lambda*.
    """
    jsr = jsr if jsr is not None else jsr_estimate(rep, tol=tol)
    _, _, decomposition = analyze(rep, tol)
    index = _resolve_chain(decomposition, chain)
    chain = decomposition.chains[index]
    gamma = complex(decomposition.coefficients[index][-1])
    grid = solve_system(DilationSystem.from_chain(rep, chain, jsr), grid_depth)
    target = gamma * grid.column(0)
    alpha, nu = complex(chain.value), chain.height
    K_values, normalization, errors = [], [], []
    for K in K_range:
        R = binomial(K, nu - 1) * alpha ** (K - nu + 1) if K >= nu - 1 else 0
        if R == 0:
            continue
        S = running_sum_grid(rep, K, grid_depth)
        K_values.append(K)
        normalization.append(R)
        errors.append(float(np.abs(S / R - target).max()))
        logger.debug("probe K=%d sup error %.3e", K, errors[-1])
    rate = _fit_rate(K_values, errors)
    others = [g for i, gs in enumerate(decomposition.coefficients) for j, g in enumerate(gs)
              if (i, j) != (index, nu - 1) and g]
    eigenvector = nu == 1 and not others
    bound = jsr.upper / chain.rho
    passed = rate <= bound + 0.1 if eigenvector else True
    return ConvergenceProbe(K_values, normalization, errors, rate, bound, eigenvector, passed)


def sample_integers(start, stop, count):
    """All integers in [start, stop] or `count` of them spread geometrically"""
    if stop - start + 1 <= count:
        return list(range(start, stop + 1))
    values = np.unique(np.round(np.geomspace(start, stop, count)).astype(np.int64))
    return [int(v) for v in values]


def _project(rep, vector, scalar):
    if scalar:
        return np.array([rep.L.to_numpy()[0] @ vector])
    return vector


def compare_integers(rep, expansion, N_range, sample_points=2048, scalar=False, max_n=2 ** 24):
    """
    Exact Sigma_N by accumulation against the integer expansion.

    With scalar=True the comparison is on L Sigma_N instead of the vector.
    """
    start, stop = max(1, N_range[0]), N_range[1]
    sums = brute_running_sums(rep, stop, max_n)
    points = sample_integers(start, stop, sample_points)
    deviations, envelopes, noise = [], [], []
    for N in points:
        exact = np.array([complex(v) for v in sums.at(N)])
        approx = eval_expansion_integers(expansion, N)
        exact, approx = _project(rep, exact, scalar), _project(rep, approx, scalar)
        deviations.append(float(np.abs(exact - approx).max()))
        envelopes.append(expansion.error.integer_envelope(N, rep.radix))
        noise.append(NOISE * max(1.0, float(np.abs(exact).max())))
    positions = [math.log(N) for N in points]
    c, ratio, passed = fitted_envelope(positions, deviations, envelopes, noise)
    logger.info("integer comparison on [%d, %d]: c=%.6g, validation ratio %.6g", start, stop, c, ratio)
    return ComparisonReport(points, deviations, envelopes, c, ratio, passed, noise)


def compare_words(rep, expansion, K_range, x_points=33, seed=0):
    """
    Exact S_K(x) by the digit recursion against the word expansion.

    The x are B-adic nodes of depth max(K) drawn with the seed, plus 1.
    """
    B = rep.radix
    K_values = list(K_range)
    depth = max(K_values)
    generator = np.random.default_rng(seed)
    nodes = sorted({int(k) for k in generator.integers(0, B ** depth, size=x_points)})
    xs = [Fraction(k, B ** depth) for k in nodes] + [Fraction(1)]
    points, deviations, envelopes, noise = [], [], [], []
    for K in K_values:
        worst, scale = 0.0, 1.0
        for x in xs:
            exact = np.array([complex(v) for v in running_sum_words(rep, K, x).flat()])
            approx = eval_expansion_words(expansion, K, x)
            worst = max(worst, float(np.abs(exact - approx).max()))
            scale = max(scale, float(np.abs(exact).max()))
        points.append(K)
        deviations.append(worst)
        envelopes.append(expansion.error.word_envelope(K))
        noise.append(NOISE * scale)
    c, ratio, passed = fitted_envelope([float(K) for K in points], deviations, envelopes, noise)
    return ComparisonReport(points, deviations, envelopes, c, ratio, passed, noise)


# Periodic behaviour

def _dominant_scale(expansion, tol=DEFAULT_TOLERANCE):
    top = max((t.rho for t in expansion.terms), default=1.0)
    levels = [t.level for t in expansion.terms if abs(t.rho - top) <= tol * max(1.0, top)]
    return top, max(levels, default=0)


@dataclass
class EmpiricalScatter:
    """
    Pairs ({log_B N}, residual) with the theoretical fluctuation overlaid.

    Attributes:
        rho (float): Modulus of the scale N^(log_B rho) C(K, s) divided out
        s (int): Binomial index of that scale
        N (list): Sampled integers in increasing order
        t (list): Fractional parts of log_B N
        residual (list): L (Sigma_N - lower order terms) / (N^(log_B rho) C(K, s))
        theoretical (list): L Phi_{rho,s}(log_B N)
    """
    rho: float
    s: int
    N: list
    t: list
    residual: list
    theoretical: list

    @property
    def max_gap(self):
        return max((abs(a - b) for a, b in zip(self.residual, self.theoretical)), default=0.0)

    def rows(self):
        for N, t, residual, theoretical in zip(self.N, self.t, self.residual, self.theoretical):
            yield [N, t, residual.real, residual.imag, theoretical.real, theoretical.imag]


def empirical_periodic(rep, expansion, N_range, sample_points=2048, tol=DEFAULT_TOLERANCE):
    """Scatter of the dominant fluctuation extracted from exact running sums"""
    rho, s = _dominant_scale(expansion, tol)
    start, stop = max(1, N_range[0]), N_range[1]
    sums = brute_running_sums(rep, stop)
    L = rep.L.to_numpy()[0]
    B = rep.radix
    scatter = EmpiricalScatter(rho, s, [], [], [], [])
    for N in sample_integers(start, stop, sample_points):
        K = integer_log(N, B)
        t = K + min(math.log(N / B ** K) / math.log(B), math.nextafter(1.0, 0.0))
        scale = N ** (math.log(rho) / math.log(B)) * binomial(K, s) if rho > 0 else 0.0
        if not scale:
            continue
        pieces = scale_coefficients(expansion, t, tol)
        dominant = sum(
            (v for (key, level), v in pieces.items() if abs(key - rho) <= tol * max(1.0, rho) and level == s),
            np.zeros(rep.dim, dtype=complex),
        )
        regular = eval_expansion_integers(expansion, N)
        exact = np.array([complex(v) for v in sums.at(N)])
        lower = regular - scale * dominant
        scatter.N.append(N)
        scatter.t.append(t - K)
        scatter.residual.append(complex(L @ (exact - lower)) / scale)
        scatter.theoretical.append(complex(L @ dominant))
    return scatter


# Rosettes

def _rotate(vector, theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([c * vector[0] - s * vector[1], s * vector[0] + c * vector[1]])


def _rotation_order(theta, max_q, tol=1e-9):
    unit = cmath.exp(1j * theta)
    for q in range(1, max_q + 1):
        if abs(unit ** q - 1) <= tol:
            return q
    return None


@dataclass
class RosetteReport:
    """
    Geometry of Gamma(t), the regular part of the rosette running sum.

    Attributes:
        theta (float): Rotation angle
        center (tuple): Omega = sin(theta/2) (sin(theta/2), cos(theta/2))
        radius (float): cos(theta/2), the radius of the circle through the Gamma(K)
        rotation_error (float): max |Gamma(t+1) - (R(Gamma(t) - Omega) + Omega)|
        closed_form_error (float): max over integer K of |Gamma(K) - closed form|
        circle_error (float): max over integer K of ||Gamma(K) - Omega| - radius|
        period (int): Smallest period <= max_q, or None
        period_error (float): max |Gamma(t + period) - Gamma(t)| when a period exists
        antipodal_error (float): max |Gamma(t + period/2) + Gamma(t) - 2 Omega| when a period exists
        antipodal (str): 'checked' for an integral half period, 'measured' for a
            half-integer one (reported but not part of passed()), or 'no period'
    """
    theta: float
    center: tuple
    radius: float
    rotation_error: float
    closed_form_error: float
    circle_error: float
    period: int | None
    period_error: float | None
    antipodal_error: float | None
    antipodal: str

    def passed(self, tol=1e-6):
        checks = [self.rotation_error, self.circle_error, self.closed_form_error]
        if self.period_error is not None:
            checks.append(self.period_error)
        if self.antipodal == 'checked':
            checks.append(self.antipodal_error)
        return all(e <= tol for e in checks)

    def as_dict(self):
        report = {k: v for k, v in self.__dict__.items()}
        report['center'] = list(self.center)
        report['passed'] = self.passed()
        return report


def rosette_check(theta, t_points=1000, K_max=50, max_q=64, config=None):
    """Rotation, closed form, circle and period checks on Gamma(t) = regular part at N = 2^t"""
    rep = rosette(theta)
    expansion = lrtoae2(rep, config=config)
    half = theta / 2
    center = np.array([math.sin(half) ** 2, math.sin(half) * math.cos(half)])
    radius = math.cos(half)

    def gamma(t):
        return regular_part_at(expansion, t).real

    grid = np.linspace(1.0, 2.0, t_points, endpoint=False)
    rotation_error = max(
        float(np.abs(gamma(t + 1) - (_rotate(gamma(t) - center, theta) + center)).max()) for t in grid
    )
    closed_form_error, circle_error = 0.0, 0.0
    for K in range(1, K_max + 1):
        value = gamma(float(K))
        expected = center + radius * np.array([math.cos((K - 0.5) * theta), math.sin((K - 0.5) * theta)])
        closed_form_error = max(closed_form_error, float(np.abs(value - expected).max()))
        circle_error = max(circle_error, abs(float(np.linalg.norm(value - center)) - radius))

    period = _rotation_order(theta, max_q)
    period_error = antipodal_error = None
    if period is None:
        antipodal = 'no period'
    else:
        period_error = max(float(np.abs(gamma(t + period) - gamma(t)).max()) for t in grid)
        shift = period // 2 if period % 2 == 0 else period / 2
        antipodal_error = max(
            float(np.abs(gamma(t + shift) + gamma(t) - 2 * center).max()) for t in grid
        )
        if period % 2 == 0:
            antipodal = 'checked'
        else:
            logger.warning(
                "half period %s is not an integer; antipodal error %.3g is reported, not checked",
                shift, antipodal_error,
            )
            antipodal = 'measured'
    return RosetteReport(
        theta, tuple(center), radius, rotation_error, closed_form_error, circle_error,
        period, period_error, antipodal_error, antipodal,
    )


@dataclass
class TriangularGrowth:
    """
    Running sums S_{2K}(y_{2K}) at y_{2K} = (0.(01)^K)_2 for the triangular tiling.

    Attributes:
        K (list): Half word lengths
        values (list): The sums as real 2-vectors
        max_error (float): max |S_{2K}(y_{2K}) - (K V_{-2pi/3} + V_0)|
    """
    K: list
    values: list
    max_error: float

    @property
    def norms(self):
        return [float(np.linalg.norm(v)) for v in self.values]


def triangular_growth(K_max=12, theta=math.pi / 3):
    """Linear growth of S_{2K} along (0.(01)^K)_2 when rho = lambda* = 1"""
    rep = triangular_tiling(theta)
    expected_step = np.array([math.cos(-2 * theta), math.sin(-2 * theta)])
    start = np.array([1.0, 0.0])
    K_values, values, worst = [], [], 0.0
    for K in range(1, K_max + 1):
        y = Fraction(sum(4 ** (K - 1 - i) for i in range(K)), 4 ** K)
        value = np.array([complex(v).real for v in running_sum_words(rep, 2 * K, y).flat()])
        worst = max(worst, float(np.abs(value - (K * expected_step + start)).max()))
        K_values.append(K)
        values.append(value)
    return TriangularGrowth(K_values, values, worst)
