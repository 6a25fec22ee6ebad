"""
Dilation equations and their Jordan system generalization.

For a chain matrix V (columns V^(0)..V^(nu-1)) and the Jordan block J of the
eigenvalue rho * omega, the coefficient matrix F satisfies

    F(x) J = sum_{r < x_1} A_r V + A_{x_1} F(Bx - x_1),  F(0) = 0,  F(1) = V.

Values at B-adic points come from the finite unrolling of this recursion;
the cascade iteration starting from G_0(x) = xV is kept to measure
convergence rates.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .exactnum import COMPLEX, RATIONAL, Matrix
from .exceptions import NoSolutionGuarantee, UnsupportedOperation
from .jsr import jsr_estimate
from .linrep import DigitWord, fractional_digits
from .spectral import jordan_block_power

logger = logging.getLogger(__name__)

# Digits of a double: cells of width B^-digits reach float resolution
FLOAT_BITS = 53

OBSTRUCTION_NOTE = (
    "no continuous solution guaranteed: rho does not exceed the joint spectral radius "
    "(with rotation digit matrices, rho = lambda* = 1 and the basic equation has no solution)"
)


@dataclass(frozen=True)
class DilationSystem:
    """
    Jordan system of dilation equations attached to one eigenvalue.

    Attributes:
        rep (LinearRep): Representation providing the digit matrices A_r
        eigenvalue: The eigenvalue rho * omega (Fraction when exact)
        V (Matrix): d x nu chain matrix
        jsr (JsrEstimate): Joint spectral radius estimate used for admissibility
        override (bool): Proceed even when the system is not admissible
    """
    rep: object
    eigenvalue: object
    V: Matrix
    jsr: object = None
    override: bool = False

    @classmethod
    def from_chain(cls, rep, chain, jsr=None, override=False):
        return cls(rep, chain.value, chain.matrix(), jsr, override)

    @classmethod
    def basic(cls, rep, eigenvalue, vector, jsr=None, override=False):
        """The single equation for an eigenvector (nu = 1)"""
        return cls(rep, eigenvalue, Matrix.from_rows([[v] for v in vector]), jsr, override)

    @property
    def radix(self):
        return self.rep.radix

    @property
    def dim(self):
        return self.V.rows

    @property
    def height(self):
        return self.V.cols

    @property
    def rho(self):
        return float(abs(self.eigenvalue))

    @property
    def omega(self):
        return complex(self.eigenvalue) / self.rho if self.rho else 1 + 0j

    @property
    def exact(self):
        return (
            self.rep.domain == RATIONAL
            and self.V.domain == RATIONAL
            and isinstance(self.eigenvalue, Fraction)
        )

    def J(self):
        nu = self.height
        if self.exact:
            return Matrix.from_rows(jordan_block_power(self.eigenvalue, nu, 1))
        return Matrix.from_rows(jordan_block_power(complex(self.eigenvalue), nu, 1), COMPLEX)

    def J_inverse(self):
        if self.rho == 0:
            raise UnsupportedOperation("the Jordan block of eigenvalue 0 is not invertible")
        nu = self.height
        if self.exact:
            return Matrix.from_rows(jordan_block_power(self.eigenvalue, nu, -1))
        return Matrix.from_rows(jordan_block_power(complex(self.eigenvalue), nu, -1), COMPLEX)

    @cached_property
    def arrays(self):
        """numpy forms: digit stack (B, d, d), partial sums sum_{s<r} A_s V (B, d, nu), V, J, J^-1"""
        stack = self.rep.stack()
        V = self.V.to_numpy()
        partial = np.concatenate(
            [np.zeros((1,) + V.shape, dtype=complex), np.cumsum(stack @ V, axis=0)[:-1]]
        )
        return {
            'A': stack,
            'partial': partial,
            'V': V,
            'J': self.J().to_numpy(),
            'J_inverse': self.J_inverse().to_numpy(),
        }

    def admissibility(self):
        """(admissible, lambda bound) comparing rho with the jsr upper bound"""
        estimate = self.jsr if self.jsr is not None else jsr_estimate(self.rep)
        bound = estimate.upper
        return self.rho > bound * (1 + 1e-9), bound

    def check_admissible(self):
        admissible, bound = self.admissibility()
        if admissible:
            return
        if not self.override:
            raise NoSolutionGuarantee(self.rho, bound, OBSTRUCTION_NOTE)
        logger.warning(
            "admissibility overridden: rho=%.17g does not exceed lambda bound %.17g", self.rho, bound
        )


@dataclass
class SolutionGrid:
    """
    Values of F at the nodes k / B**depth, k = 0..B**depth.

    Attributes:
        radix (int): The radix B
        depth (int): Grid depth m
        values (numpy.ndarray): Array of shape (B**m + 1, d, nu)
        V (numpy.ndarray): Boundary value F(1), used right of 1
        method (str): 'exact' (unrolled recursion) or 'cascade'
        differences (list): sup |G_{K+1} - G_K| per cascade iteration
    """
    radix: int
    depth: int
    values: np.ndarray
    V: np.ndarray
    method: str = 'exact'
    differences: list = field(default_factory=list)

    @property
    def nodes(self):
        return self.radix ** self.depth

    @property
    def x(self):
        return np.arange(self.nodes + 1) / self.nodes

    def column(self, j):
        return self.values[:, :, j]

    def interpolate(self, x):
        """Piecewise-linear value at x; 0 left of 0 and V right of 1"""
        if x <= 0:
            return np.zeros_like(self.V)
        if x >= 1:
            return self.V.copy()
        position = x * self.nodes
        k = min(int(math.floor(position)), self.nodes - 1)
        weight = position - k
        return (1 - weight) * self.values[k] + weight * self.values[k + 1]


# Exact evaluation

def _digits_of(x, radix):
    if isinstance(x, DigitWord):
        if not x.fractional:
            raise ValueError("dilation values need a fractional digit word")
        if x.radix != radix:
            raise ValueError(f"digit word in radix {x.radix}, system in radix {radix}")
        return list(x.digits), x.value
    x = Fraction(x)
    if x == 1:
        return None, x
    return fractional_digits(x, radix), x


def eval_exact_badic(sys, x):
    """
    F(x) at a B-adic x as a d x nu Matrix (exact for rational systems).

    F(x) = sum_k A_{x_1}...A_{x_{k-1}} (sum_{r<x_k} A_r V) J^-k; F(1) = V.
    """
    if sys.rho == 0:
        raise UnsupportedOperation("dilation values need rho > 0")
    digits, value = _digits_of(x, sys.radix)
    if digits is None:
        return sys.V
    if value > 1 or value < 0:
        raise ValueError(f"x = {value} is outside [0, 1]")
    domain = RATIONAL if sys.exact else COMPLEX
    A = sys.rep.A if domain == RATIONAL else tuple(m.to_complex() for m in sys.rep.A)
    V = sys.V if domain == RATIONAL else sys.V.to_complex()
    inverse = sys.J_inverse()
    result = Matrix.zeros(sys.dim, sys.height, domain)
    prefix = Matrix.identity(sys.dim, domain)
    scale = Matrix.identity(sys.height, domain)
    for digit in digits:
        scale = scale @ inverse
        if digit:
            partial = A[0]
            for m in A[1:digit]:
                partial = partial + m
            result = result + prefix @ partial @ V @ scale
        prefix = prefix @ A[digit]
    return result


def eval_numeric(sys, digits):
    """F at the B-adic point with the given digits, as a complex (d, nu) array"""
    arrays = sys.arrays
    A, partial, inverse = arrays['A'], arrays['partial'], arrays['J_inverse']
    result = np.zeros_like(arrays['V'])
    prefix = np.eye(sys.dim, dtype=complex)
    scale = np.eye(sys.height, dtype=complex)
    for digit in digits:
        scale = scale @ inverse
        if digit:
            result = result + prefix @ partial[digit] @ scale
        prefix = prefix @ A[digit]
    return result


def eval_point(sys, x, digits=None):
    """
    F at a real x in [0, 1], as a complex (d, nu) array.

    The first `digits` base-B digits of x are unrolled exactly at both ends of
    the cell holding x; only the last cell, of width B^-digits, is interpolated.
    """
    x = Fraction(x)
    if x <= 0:
        return np.zeros_like(sys.arrays['V'])
    if x >= 1:
        return sys.arrays['V'].copy()
    B = sys.radix
    if digits is None:
        digits = max(1, int(FLOAT_BITS / math.log2(B)))
    nodes = B ** digits
    position = x * nodes
    k = math.floor(position)
    weight = float(position - k)
    left = eval_numeric(sys, _padded_digits(k, B, digits))
    if not weight:
        return left
    right = sys.arrays['V'] if k + 1 == nodes else eval_numeric(sys, _padded_digits(k + 1, B, digits))
    return (1 - weight) * left + weight * right


def _padded_digits(k, radix, length):
    digits = []
    for _ in range(length):
        k, digit = divmod(k, radix)
        digits.append(digit)
    return digits[::-1]


def _exact_levels(sys, depth):
    arrays = sys.arrays
    A, partial, V, inverse = arrays['A'], arrays['partial'], arrays['V'], arrays['J_inverse']
    B = sys.radix
    values = np.stack([np.zeros_like(V), V])
    for level in range(1, depth + 1):
        nodes = B ** level
        step = B ** (level - 1)
        index = np.arange(nodes)
        digit = index // step
        child = index - digit * step
        updated = np.empty((nodes + 1,) + V.shape, dtype=complex)
        updated[:nodes] = (partial[digit] + A[digit] @ values[child]) @ inverse
        updated[nodes] = V
        values = updated
    return values


def solve_jordan_system(rep, chain, jsr, depth, override=False):
    """Grid of the unique continuous solution, by exact unrolling at every node"""
    sys = DilationSystem.from_chain(rep, chain, jsr, override)
    return solve_system(sys, depth)


def solve_system(sys, depth):
    sys.check_admissible()
    values = _exact_levels(sys, depth)
    logger.debug("solved dilation system rho=%.6g nu=%d on depth %d", sys.rho, sys.height, depth)
    return SolutionGrid(sys.radix, depth, values, sys.arrays['V'].copy(), 'exact')


# Cascade

def cascade_step(sys, values, depth):
    """One application of the dilation operator to node values on a depth-m grid"""
    arrays = sys.arrays
    A, partial, inverse = arrays['A'], arrays['partial'], arrays['J_inverse']
    B = sys.radix
    nodes = B ** depth
    index = np.arange(nodes)
    digit = index // B ** (depth - 1)
    child = (index % B ** (depth - 1)) * B
    updated = np.empty_like(values)
    updated[:nodes] = (partial[digit] + A[digit] @ values[child]) @ inverse
    updated[nodes] = arrays['V']
    return updated


def cascade_grid(sys, depth, iterations):
    """
    Iterate G_{K+1} = L G_K from G_0(x) = xV on the depth-m grid.

    Returns the final grid; its differences list holds sup |G_{K+1} - G_K|.
    """
    sys.check_admissible()
    V = sys.arrays['V']
    nodes = sys.radix ** depth
    values = (np.arange(nodes + 1) / nodes)[:, None, None] * V[None]
    differences = []
    for iteration in range(iterations):
        updated = cascade_step(sys, values, depth)
        differences.append(float(np.abs(updated - values).max()))
        values = updated
        logger.debug("cascade iteration %d: sup difference %.3e", iteration + 1, differences[-1])
    return SolutionGrid(sys.radix, depth, values, V.copy(), 'cascade', differences)


def contraction_ratios(grid):
    """Successive ratios of the cascade differences"""
    d = grid.differences
    return [d[k + 1] / d[k] if d[k] else 0.0 for k in range(len(d) - 1)]


# Regularity

def holder_exponent(rho, lam, radix):
    """log_B(rho / lambda), defined for 0 < lambda < rho <= B lambda"""
    rho, lam = float(rho), float(lam)
    if not 0 < lam < rho:
        raise ValueError(f"need 0 < lambda < rho, got lambda={lam}, rho={rho}")
    if rho > radix * lam * (1 + 1e-12):
        raise ValueError(f"need rho <= B lambda, got rho={rho}, B lambda={radix * lam}")
    return min(1.0, math.log(rho / lam) / math.log(radix))


def residual(sys, grid):
    """max over nodes of |F(x) J - sum_{r<x_1} A_r V - A_{x_1} F(Bx - x_1)|"""
    if grid.depth < 1:
        raise ValueError("residual needs a grid of depth >= 1")
    arrays = sys.arrays
    A, partial, J = arrays['A'], arrays['partial'], arrays['J']
    B = sys.radix
    nodes = grid.nodes
    index = np.arange(nodes)
    digit = index // B ** (grid.depth - 1)
    child = (index % B ** (grid.depth - 1)) * B
    values = grid.values
    lhs = values[:nodes] @ J
    rhs = partial[digit] + A[digit] @ values[child]
    return float(np.abs(lhs - rhs).max())


def interpolate(grid, x):
    return grid.interpolate(x)


def holder_constant(grid, alpha):
    """Smallest c with |F(y) - F(x)| <= c h^alpha over node pairs at distance h = B^-j"""
    best = 0.0
    for j in range(1, grid.depth + 1):
        step = grid.radix ** (grid.depth - j)
        h = grid.radix ** -j
        jumps = np.abs(grid.values[step:] - grid.values[:-step]).max()
        best = max(best, float(jumps) / h ** alpha)
    return best
