"""
Asymptotic expansions of running sums.

Word expansions describe S_K(x) as K grows; integer expansions describe the
vector sum Sigma_N as N grows, with K = floor(log_B N) and t = log_B N.
Both are built from the Jordan chains of Q that carry a nonzero coordinate
of C and whose eigenvalue modulus exceeds the cut lambda. Coefficient
functions are the solutions of the attached dilation systems.
"""
from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .conf import RunConfig
from .dilation import DilationSystem, eval_numeric, eval_point, holder_exponent, solve_system
from .exactnum import DEFAULT_TOLERANCE, Matrix, binomial
from .jsr import jsr_estimate
from .linrep import DigitWord, fractional_digits, integer_digits, integer_log
from .spectral import (
    JordanChain,
    decompose_C,
    eigen_structure,
    geometric_sum_on_chain,
    jordan_basis,
)

logger = logging.getLogger(__name__)

WORDS = 'words'
INTEGERS = 'integers'
MODES = (WORDS, INTEGERS)

# Longest B-adic digit expansion unrolled as is; other points go through eval_point
MAX_EXACT_DIGITS = 64


@dataclass(frozen=True)
class LambdaChoice:
    """
    The cut lambda separating expansion terms from the error.

    Attributes:
        value (float): lambda
        provenance (str): 'attained', 'midpoint' or 'upper-bound'
        jsr_upper (float): Upper bound on lambda* the choice started from
    """
    value: float
    provenance: str
    jsr_upper: float


@dataclass(frozen=True)
class ErrorClass:
    """
    Order of the error term.

    Attributes:
        kind (str): 'lambda' for O(lambda^K), 'attained' for O(lambda*^K K^m), 'zero' when C = 0
        lam (float): lambda, or lambda* when attained
        m (int): Power of K (of log N for integers); 0 unless attained
        attained (str): Attainment tri-state of the jsr estimate
    """
    kind: str
    lam: float
    m: int = 0
    attained: str = 'unknown'

    def describe(self, mode=WORDS, radix=None):
        if self.kind == 'zero':
            return '0'
        lam = 'lambda*' if self.kind == 'attained' else 'lambda'
        if mode == WORDS:
            power = f" K^{self.m}" if self.m else ""
            return f"O({lam}^K{power}), {lam} = {self.lam:.6g}"
        exponent = f"{math.log(self.lam) / math.log(radix):.6g}" if radix and self.lam > 0 else f"log_B {lam}"
        power = f" log^{self.m} N" if self.m else ""
        return f"O(N^{exponent}{power}), {lam} = {self.lam:.6g}"

    def word_envelope(self, K):
        if self.kind == 'zero':
            return 0.0
        return self.lam ** K * max(1, K) ** self.m

    def integer_envelope(self, N, radix):
        """N^(log_B lambda) * max(1, log_B N)^m"""
        if self.kind == 'zero':
            return 0.0
        t = math.log(N) / math.log(radix)
        lam = max(self.lam, 1e-300)
        return math.exp(t * math.log(lam)) * max(1.0, t) ** self.m

    def as_dict(self):
        return {'kind': self.kind, 'lambda': self.lam, 'm': self.m, 'attained': self.attained}


@dataclass(frozen=True)
class ExpansionTerm:
    """
    Contribution of one generalized eigenvector V^(level) with gamma != 0.

    Attributes:
        chain (int): Index of the chain in the C decomposition
        level (int): j, the position of the vector in its chain; also the top binomial index
        eigenvalue: rho * omega (Fraction when exact)
        rho (float): Modulus
        omega (complex): Unit part
        gamma: Coordinate of C on V^(level)
        block (str): 'grid' for words; 'X' or 'Z' for the first block of integer terms
    """
    chain: int
    level: int
    eigenvalue: object
    rho: float
    omega: complex
    gamma: object
    block: str = 'grid'

    @property
    def alpha(self):
        return complex(self.eigenvalue)

    def as_dict(self):
        gamma = complex(self.gamma)
        return {
            'rho': self.rho,
            'omega_re': self.omega.real,
            'omega_im': self.omega.imag,
            'ell': self.level,
            'chain': self.chain,
            'gamma_re': gamma.real,
            'gamma_im': gamma.imag,
            'block': self.block,
            'coefficient_grid_ref': f"chain{self.chain}",
        }


@dataclass
class WordExpansion:
    """
    Expansion of S_K(x): sum of gamma * column j of F(x) J^K over kept vectors.

    Attributes:
        rep (LinearRep): Source representation
        terms (list): ExpansionTerm records
        error (ErrorClass): Error order
        lam (LambdaChoice): The cut and its provenance
        jsr (JsrEstimate): The estimate used
        chains (dict): Chain index -> chain truncated to the highest kept level
        systems (dict): Chain index -> DilationSystem
        grids (dict): Chain index -> SolutionGrid
    """
    rep: object
    terms: list
    error: ErrorClass
    lam: LambdaChoice
    jsr: object
    chains: dict = field(default_factory=dict)
    systems: dict = field(default_factory=dict)
    grids: dict = field(default_factory=dict)

    mode = WORDS

    @property
    def radix(self):
        return self.rep.radix

    @property
    def dim(self):
        return self.rep.dim

    def holder_exponent(self):
        """Smallest Hoelder exponent log_B(rho / lambda) over the kept terms, capped at 1"""
        lam = self.lam.value
        exponents = [1.0]
        for term in self.terms:
            if lam > 0 and term.rho <= self.radix * lam:
                exponents.append(holder_exponent(term.rho, lam, self.radix))
        return min(exponents)

    def report(self, config=None):
        report = {
            'mode': self.mode,
            'name': self.rep.name,
            'radix': self.radix,
            'lambda': {
                'value': self.lam.value,
                'provenance': self.lam.provenance,
                'jsr_upper': self.lam.jsr_upper,
            },
            'terms': [t.as_dict() for t in self.terms],
            'holder_exponent': self.holder_exponent(),
            'error': dict(self.error.as_dict(), description=self.error.describe(self.mode, self.radix)),
            'jsr': self.jsr.as_dict(),
            'grids': {
                f"chain{index}": {'depth': grid.depth, 'height': self.chains[index].height}
                for index, grid in sorted(self.grids.items())
            },
        }
        if config is not None:
            report['config'] = config.as_dict()
        return report


@dataclass
class IntegerExpansion(WordExpansion):
    """
    Expansion of Sigma_N.

    Attributes:
        branch (str): 'lambda>=1' (first blocks X) or 'lambda<1' (first blocks Z)
        lambda_at_one (bool): lambda lies within tolerance of 1 and took the lambda>=1 branch
        I_minus_A0 (numpy.ndarray): I - A_0 as a complex array
        constants (dict): Chain index -> the constant block Y of each kept vector, keyed by level
        tail (numpy.ndarray): Limit of the geometric sums of the dropped chains (lambda < 1 only)
    """
    branch: str = 'lambda>=1'
    lambda_at_one: bool = False
    I_minus_A0: np.ndarray = None
    constants: dict = field(default_factory=dict)
    tail: np.ndarray = None

    mode = INTEGERS

    def report(self, config=None):
        report = super().report(config)
        report['branch'] = self.branch
        report['lambda_at_one'] = self.lambda_at_one
        return report


# Cut and error class

def _close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def choose_lambda(moduli, jsr, tol=DEFAULT_TOLERANCE):
    """
    lambda* when attained; otherwise the midpoint between the jsr upper bound
    and the smallest eigenvalue modulus above it.
    """
    upper = jsr.upper
    if jsr.is_attained:
        choice = LambdaChoice(upper, 'attained', upper)
    else:
        above = [rho for rho in moduli if rho > upper and not _close(rho, upper, tol)]
        if above:
            choice = LambdaChoice((upper + min(above)) / 2, 'midpoint', upper)
        else:
            choice = LambdaChoice(upper, 'upper-bound', upper)
    logger.debug("lambda = %.17g (%s)", choice.value, choice.provenance)
    return choice


def _nonzero(gamma, tol):
    if isinstance(gamma, Fraction):
        return gamma != 0
    return abs(gamma) > tol


def error_class(decomposition, jsr, lam=None, tol=DEFAULT_TOLERANCE):
    """
    Error order: O(lambda*^K K^m) when lambda* is attained, where m is the
    largest height j + 1 of a vector at modulus lambda* with gamma != 0;
    O(lambda^K) otherwise.
    """
    coordinates = decomposition.nonzero()
    coordinates = [(i, j, g) for i, j, g in coordinates if _nonzero(g, tol)]
    if not coordinates:
        return ErrorClass('zero', 0.0, 0, jsr.attained.value)
    if jsr.is_attained:
        lam_star = jsr.upper
        m = 0
        for index, level, _ in coordinates:
            if _close(decomposition.chains[index].rho, lam_star, tol):
                m = max(m, level + 1)
        return ErrorClass('attained', lam_star, m, jsr.attained.value)
    if lam is None:
        lam = choose_lambda([c.rho for c in decomposition.chains], jsr, tol).value
    return ErrorClass('lambda', lam, 0, jsr.attained.value)


# Construction

def analyze(rep, tol=DEFAULT_TOLERANCE):
    """Eigen structure, Jordan chains of Q and coordinates of C over them"""
    structure = eigen_structure(rep.Q, tol, rep.eigen_hints)
    chains = jordan_basis(rep.Q, tol, structure, rep.eigen_hints)
    decomposition = decompose_C(chains, rep.C, tol)
    return structure, chains, decomposition


def _kept(decomposition, lam, tol):
    kept = {}
    for index, level, gamma in decomposition.nonzero():
        chain = decomposition.chains[index]
        if _nonzero(gamma, tol) and chain.rho > lam and not _close(chain.rho, lam, tol):
            kept.setdefault(index, []).append((level, gamma))
    return kept


def _build(cls, rep, jsr, config, tol, depth, override, **extra):
    config = config if config is not None else RunConfig.from_settings()
    if jsr is None:
        jsr = jsr_estimate(rep, budget=config.jsr_budget, T_max=config.jsr_max_t, tol=tol)
    if depth is None:
        depth = config.grid_depth_for(rep.radix)
    _, _, decomposition = analyze(rep, tol)
    lam = choose_lambda([c.rho for c in decomposition.chains], jsr, tol)
    error = error_class(decomposition, jsr, lam.value, tol)
    expansion = cls(rep, [], error, lam, jsr, **extra)
    for index, levels in sorted(_kept(decomposition, lam.value, tol).items()):
        chain = decomposition.chains[index]
        top = max(level for level, _ in levels)
        truncated = JordanChain(chain.eigenvalue, chain.vectors[:top + 1], chain.residual)
        system = DilationSystem.from_chain(rep, truncated, jsr, override)
        expansion.chains[index] = truncated
        expansion.systems[index] = system
        expansion.grids[index] = solve_system(system, depth)
        for level, gamma in sorted(levels, key=lambda item: item[0]):
            expansion.terms.append(
                ExpansionTerm(index, level, chain.value, chain.rho, chain.omega, gamma)
            )
    return expansion, decomposition


def lrtoae1(rep, jsr=None, config=None, tol=DEFAULT_TOLERANCE, depth=None, override=False):
    """Word expansion of S_K(x)"""
    expansion, _ = _build(WordExpansion, rep, jsr, config, tol, depth, override)
    logger.debug("word expansion with %d terms, error %s", len(expansion.terms), expansion.error.describe())
    return expansion


def _vector(values):
    return np.array([complex(v) for v in values])


def _constant_block(I_minus_A0, chain, level):
    """Y = sum_l (-1)^(l+1) / (alpha - 1)^(l+1) (I - A_0) V^(level - l)"""
    alpha = complex(chain.value)
    total = np.zeros(len(chain.vectors[0]), dtype=complex)
    for ell in range(level + 1):
        total += (-1) ** (ell + 1) / (alpha - 1) ** (ell + 1) * _vector(chain.vectors[level - ell])
    return I_minus_A0 @ total


def lrtoae2(rep, jsr=None, config=None, tol=DEFAULT_TOLERANCE, depth=None, override=False):
    """
    Integer expansion of Sigma_N.

    With lambda >= 1 each kept vector contributes X = Z - Y and the
    constant Y falls into the error; with lambda < 1 the full first block Z
    is kept, and dropped chains (rho <= lambda < 1) contribute the limit of
    their geometric sums.
    """
    I_minus_A0 = (Matrix.identity(rep.dim, rep.domain) - rep.A[0]).to_numpy()
    expansion, decomposition = _build(
        IntegerExpansion, rep, jsr, config, tol, depth, override, I_minus_A0=I_minus_A0
    )
    lam = expansion.lam.value
    at_one = abs(lam - 1) <= tol
    expansion.lambda_at_one = at_one
    if at_one and lam != 1:
        logger.warning("lambda = %.17g is within tolerance of 1; taking the lambda >= 1 branch", lam)
    expansion.branch = 'lambda>=1' if lam >= 1 or at_one else 'lambda<1'

    terms = []
    for term in expansion.terms:
        chain = expansion.chains[term.chain]
        unit = expansion.branch == 'lambda<1' and _is_unit(chain.value, tol)
        if not unit:
            expansion.constants.setdefault(term.chain, {})[term.level] = _constant_block(
                I_minus_A0, chain, term.level
            )
        block = 'X' if expansion.branch == 'lambda>=1' else 'Z'
        terms.append(dataclasses.replace(term, block=block))
    expansion.terms = terms

    tail = np.zeros(rep.dim, dtype=complex)
    if expansion.branch == 'lambda<1':
        kept = {(t.chain, t.level) for t in terms}
        for index, level, gamma in decomposition.nonzero():
            if (index, level) in kept or not _nonzero(gamma, tol):
                continue
            chain = decomposition.chains[index]
            tail += complex(gamma) * _constant_block(I_minus_A0, chain, level)
    expansion.tail = tail
    logger.debug(
        "integer expansion with %d terms, branch %s, error %s",
        len(terms), expansion.branch, expansion.error.describe(INTEGERS, rep.radix),
    )
    return expansion


def _is_unit(value, tol):
    if isinstance(value, Fraction):
        return value == 1
    return abs(complex(value) - 1) <= tol


# Evaluation

def _exact_digits(x, radix):
    """Digits of a B-adic x in [0, 1) or None when x is not representable exactly"""
    if isinstance(x, DigitWord):
        return list(x.digits)
    if isinstance(x, float):
        return None
    try:
        digits = fractional_digits(Fraction(x), radix)
    except ValueError:
        return None
    return digits if len(digits) <= MAX_EXACT_DIGITS else None


def coefficient_values(expansion, index, x):
    """F^(0..j)(x) of one kept chain as a complex (d, nu) array"""
    system = expansion.systems[index]
    value = x.value if isinstance(x, DigitWord) else x
    if value <= 0:
        return np.zeros((system.dim, system.height), dtype=complex)
    if value >= 1:
        return system.arrays['V'].copy()
    digits = _exact_digits(x, expansion.radix)
    if digits is not None:
        return eval_numeric(system, digits)
    return eval_point(system, value)


def _column(alpha, K, level, F):
    """Column `level` of F J^K: sum_i C(K, level - i) alpha^(K - level + i) F^(i)"""
    total = np.zeros(F.shape[0], dtype=complex)
    for i in range(level + 1):
        coefficient = binomial(K, level - i)
        if coefficient:
            total += coefficient * alpha ** (K - level + i) * F[:, i]
    return total


def _coefficients(expansion, x):
    return {index: coefficient_values(expansion, index, x) for index in expansion.systems}


def eval_expansion_words(expansion, K, x):
    """Regular part of S_K(x) as a complex d-vector"""
    if K < 0:
        raise ValueError("K must be nonnegative")
    values = _coefficients(expansion, x)
    total = np.zeros(expansion.dim, dtype=complex)
    for term in expansion.terms:
        total += complex(term.gamma) * _column(term.alpha, K, term.level, values[term.chain])
    return total


def _first_block(expansion, term, K):
    chain = expansion.chains[term.chain]
    Z = expansion.I_minus_A0 @ _vector(geometric_sum_on_chain(chain, K, term.level))
    if term.block == 'X':
        return Z - expansion.constants[term.chain][term.level]
    return Z


def _regular(expansion, K, values):
    total = expansion.tail.copy()
    for term in expansion.terms:
        block = _first_block(expansion, term, K)
        block = block + _column(term.alpha, K + 1, term.level, values[term.chain])
        total += complex(term.gamma) * block
    return total


def eval_expansion_integers(expansion, N):
    """Regular part of Sigma_N as a complex d-vector, N >= 1"""
    if N < 1:
        raise ValueError("N must be at least 1")
    B = expansion.radix
    K = integer_log(N, B)
    x = DigitWord(tuple(integer_digits(N, B)), B, fractional=True)
    return _regular(expansion, K, _coefficients(expansion, x))


def _split(t, radix):
    K = math.floor(t)
    frac = t - K
    if frac == 0:
        return K, 0.0, Fraction(1, radix)
    return K, frac, radix ** (frac - 1)


def regular_part_at(expansion, t):
    """Regular part of Sigma_N at N = B^t for real t >= 0"""
    if t < 0:
        raise ValueError("t must be nonnegative")
    K, _, x = _split(t, expansion.radix)
    return _regular(expansion, K, _coefficients(expansion, x))


# Scale elements

def _group_key(groups, rho, tol):
    for key in groups:
        if _close(key, rho, tol):
            return key
    return rho


def scale_coefficients(expansion, t, tol=DEFAULT_TOLERANCE):
    """
    The regular part at N = B^t split over the scale N^(log_B rho) C(K, s).

    Returns {(rho, s): Phi_{rho,s}(t)} with
    regular part = sum N^(log_B rho) C(floor t, s) Phi_{rho,s}(t).
    """
    if expansion.mode != INTEGERS:
        raise ValueError("scale coefficients are defined for integer expansions")
    K, frac, x = _split(t, expansion.radix)
    values = _coefficients(expansion, x)
    pieces = {}  # (rho, s) -> vector of alpha^(K-s)-normalized coefficient, times omega^K etc.

    def add(rho, s, vector):
        key = (_group_key([k for k, _ in pieces], rho, tol), s)
        pieces[key] = pieces.get(key, 0) + vector

    constant = expansion.tail.copy()
    for term in expansion.terms:
        chain = expansion.chains[term.chain]
        alpha, j, gamma = term.alpha, term.level, complex(term.gamma)
        F = values[term.chain]
        vectors = [expansion.I_minus_A0 @ _vector(v) for v in chain.vectors]
        scaled = {}
        for s in range(j + 1):
            piece = alpha * F[:, j - s]
            if j - s - 1 >= 0:
                piece = piece + F[:, j - s - 1]
            scaled[s] = piece
        if _is_unit(chain.value, tol) and term.block == 'Z':
            # sum_k C(k, l) = C(K, l + 1) + C(K, l)
            for i in range(j + 1):
                ell = j - i
                scaled[ell] = scaled.get(ell, 0) + vectors[i]
                scaled[ell + 1] = scaled.get(ell + 1, 0) + vectors[i]
        else:
            for s in range(j + 1):
                total = 0
                for i in range(j - s + 1):
                    q = j - i - s
                    weight = alpha / (alpha - 1) if q == 0 else (-1) ** q / (alpha - 1) ** (q + 1)
                    total = total + weight * vectors[i]
                scaled[s] = scaled[s] + total
            if term.block == 'Z':
                constant = constant + gamma * expansion.constants[term.chain][j]
        for s, vector in scaled.items():
            # alpha^(K - s) = rho^K omega^K alpha^-s
            factor = term.rho ** -frac * term.omega ** K * alpha ** -s
            add(term.rho, s, gamma * factor * vector)
    if np.any(constant != 0):
        add(1.0, 0, constant)
    return pieces


def _order(omega, max_q, tol):
    for q in range(1, max_q + 1):
        if abs(omega ** q - 1) <= tol:
            return q
    return None


@dataclass
class PeriodicProfile:
    """
    Sampled fluctuation of one modulus class.

    Attributes:
        rho (float): Selected modulus
        t (numpy.ndarray): Sample points
        values (numpy.ndarray): Phi(t) vectors, shape (n, d)
        scalar (numpy.ndarray): L Phi(t)
        period (int): Period in t when every omega of the class is a root of unity
        periodic (bool): Whether the profile is periodic (else pseudo-periodic)
    """
    rho: float
    t: np.ndarray
    values: np.ndarray
    scalar: np.ndarray
    period: int | None
    periodic: bool


def periodicity(expansion, rho, max_q=64, tol=DEFAULT_TOLERANCE):
    """Period in t of the modulus class rho, or None when some omega has no order <= max_q"""
    period = 1
    for term in expansion.terms:
        if not _close(term.rho, rho, tol):
            continue
        q = _order(term.omega, max_q, tol)
        if q is None:
            return None
        period = math.lcm(period, q)
    return period


def periodic_profile(expansion, rho, t_grid, s=None, max_q=64, tol=DEFAULT_TOLERANCE):
    """
    Phi(t): the regular part restricted to the modulus class rho, divided by
    N^(log_B rho). Only scale s is kept when given; otherwise the binomial
    factors C(floor t, s) are included.
    """
    if not any(_close(t.rho, rho, tol) for t in expansion.terms) and not _close(rho, 1.0, tol):
        raise ValueError(f"no expansion term with modulus {rho}")
    period = periodicity(expansion, rho, max_q, tol)
    L = expansion.rep.L.to_numpy()[0]
    t_grid = np.asarray(t_grid, dtype=float)
    values = np.zeros((len(t_grid), expansion.dim), dtype=complex)
    for n, t in enumerate(t_grid):
        K = math.floor(t)
        for (key, scale), vector in scale_coefficients(expansion, float(t), tol).items():
            if not _close(key, rho, tol) or (s is not None and scale != s):
                continue
            values[n] += (binomial(K, scale) if s is None else 1) * vector
    return PeriodicProfile(rho, t_grid, values, values @ L, period, period is not None)
