"""
Eigenstructure of Q, Jordan chains and closed forms on a chain.

Chains are built from the nullity filtration of (Q - lambda I)^k. A chain of
height nu holds vectors V^(0)..V^(nu-1) with Q V^(0) = lambda V^(0) and
Q V^(j) = lambda V^(j) + V^(j-1).
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from .exactnum import (
    COMPLEX,
    DEFAULT_TOLERANCE,
    RATIONAL,
    Matrix,
    binomial,
    induced_norm,
    make_span,
    nullspace,
    parse_scalar,
    solve,
)
from .exceptions import ShapeError, SpectralError

logger = logging.getLogger(__name__)

# Relative singular value threshold for numeric kernels of (Q - lambda I)^k
NUMERIC_RANK_TOLERANCE = 1e-8
HINT_TOLERANCE = 1e-6


@dataclass(frozen=True)
class Eigenvalue:
    """
    One eigenvalue of Q written as rho * omega.

    Attributes:
        value: Fraction when exact, complex otherwise
        multiplicity (int): Algebraic multiplicity
        rho (float): Modulus
        omega (complex): Unit part; 1 when rho = 0
        exact (bool): Whether value is an exact rational
    """
    value: object
    multiplicity: int
    rho: float
    omega: complex
    exact: bool

    @classmethod
    def of(cls, value, multiplicity):
        exact = isinstance(value, Fraction)
        rho = float(abs(value))
        omega = complex(value) / rho if rho else 1 + 0j
        return cls(value, multiplicity, rho, omega, exact)

    def __str__(self):
        if self.exact:
            return str(self.value)
        z = complex(self.value)
        return f"{z.real:.12g}{z.imag:+.12g}i"


@dataclass
class EigenStructure:
    """
    Eigenvalues of a square matrix with multiplicities.

    Attributes:
        eigenvalues (list): Eigenvalue records ordered by decreasing modulus then argument
        residual (float): Largest relative characteristic residual of the numeric eigenvalues
    """
    eigenvalues: list
    residual: float = 0.0

    @property
    def dimension(self):
        return sum(e.multiplicity for e in self.eigenvalues)

    def as_dict(self):
        return [
            {'value': str(e), 'multiplicity': e.multiplicity, 'rho': e.rho}
            for e in self.eigenvalues
        ]


@dataclass(frozen=True)
class JordanChain:
    """
    Jordan chain of Q for one eigenvalue.

    Attributes:
        eigenvalue (Eigenvalue): The eigenvalue rho * omega
        vectors (tuple): V^(0)..V^(nu-1), each a tuple of d scalars
        residual (float): Largest infinity-norm residual of the chain relations
    """
    eigenvalue: Eigenvalue
    vectors: tuple
    residual: float = 0.0

    @property
    def value(self):
        return self.eigenvalue.value

    @property
    def rho(self):
        return self.eigenvalue.rho

    @property
    def omega(self):
        return self.eigenvalue.omega

    @property
    def height(self):
        return len(self.vectors)

    @property
    def domain(self):
        return RATIONAL if all(isinstance(v, Fraction) for vec in self.vectors for v in vec) else COMPLEX

    def matrix(self):
        """The d x nu matrix with columns V^(0)..V^(nu-1)"""
        d = len(self.vectors[0])
        return Matrix(
            tuple(tuple(self.vectors[j][i] for j in range(self.height)) for i in range(d)),
            self.domain,
        )

    def block(self):
        """The nu x nu Jordan block with the eigenvalue on the diagonal and ones above it"""
        domain = self.domain
        value = self.value if domain == RATIONAL else complex(self.value)
        zero, one = (Fraction(0), Fraction(1)) if domain == RATIONAL else (0j, 1 + 0j)
        nu = self.height
        return Matrix(
            tuple(
                tuple(value if i == j else one if j == i + 1 else zero for j in range(nu))
                for i in range(nu)
            ),
            domain,
        )


@dataclass
class CDecomposition:
    """
    Coordinates of C over the union of the Jordan chains.

    Attributes:
        chains (list): The chains, in basis order
        coefficients (list): For each chain, the tuple of gamma_V for V^(0)..V^(nu-1)
        residual (float): Infinity-norm reconstruction residual
    """
    chains: list
    coefficients: list
    residual: float = 0.0

    def component(self, index):
        """sum_j gamma_j V^(j) over one chain"""
        chain = self.chains[index]
        d = len(chain.vectors[0])
        total = [0] * d
        for gamma, vector in zip(self.coefficients[index], chain.vectors):
            for i in range(d):
                total[i] += gamma * vector[i]
        return tuple(total)

    def projection(self, eigenvalue):
        """Component of C in the generalized eigenspace of one eigenvalue"""
        d = len(self.chains[0].vectors[0]) if self.chains else 0
        total = [0] * d
        for index, chain in enumerate(self.chains):
            if chain.eigenvalue == eigenvalue:
                for i, v in enumerate(self.component(index)):
                    total[i] += v
        return tuple(total)

    def nonzero(self, tol=0.0):
        """(chain index, level, gamma) for every coefficient above tol in modulus"""
        return [
            (index, level, gamma)
            for index, gammas in enumerate(self.coefficients)
            for level, gamma in enumerate(gammas)
            if abs(gamma) > tol
        ]


# Eigenvalues

def _sympy_matrix(Q):
    return sympy.Matrix(
        [[sympy.Rational(v.numerator, v.denominator) for v in row] for row in Q.entries]
    )


def _sort_key(e):
    angle = cmath.phase(e.omega) % (2 * math.pi)
    if angle > 2 * math.pi - 1e-12:
        angle = 0.0
    return (-round(e.rho, 12), round(angle, 12), not e.exact)


def _char_residual(Q, value):
    """Smallest singular value of Q - value I relative to max(1, ||Q||)"""
    array = Q.to_numpy() - complex(value) * np.eye(Q.rows)
    singular = np.linalg.svd(array, compute_uv=False)
    return float(singular[-1]) / max(1.0, float(singular[0]) if singular.size else 1.0)


def _cluster(roots, tol):
    clusters = []
    for z in sorted(roots, key=lambda z: (z.real, z.imag)):
        for cluster in clusters:
            if abs(np.mean(cluster) - z) <= tol:
                cluster.append(z)
                break
        else:
            clusters.append([z])
    return clusters


def eigen_structure(Q, tol=DEFAULT_TOLERANCE, hints=()):
    """
    Eigenvalues of Q with algebraic multiplicities.

    Rational matrices: the characteristic polynomial is factored over the
    rationals; linear factors give exact eigenvalues, the other factors are
    solved numerically. Complex matrices: numeric eigenvalues clustered
    within tol * max(1, ||Q||); roots near a hint are replaced by the hint.
    """
    if not Q.is_square:
        raise ShapeError("eigen structure of a non-square matrix")
    d = Q.rows
    if d == 0:
        return EigenStructure([])
    hints = [parse_scalar(h, COMPLEX) for h in hints]
    scale = max(1.0, float(induced_norm(Q, 'one')))
    found = []  # (value, multiplicity)
    numeric = []

    if Q.domain == RATIONAL:
        x = sympy.Symbol('x')
        polynomial = _sympy_matrix(Q).charpoly(x)
        _, factors = sympy.Poly(polynomial.as_expr(), x).factor_list()
        for factor, multiplicity in factors:
            coeffs = factor.all_coeffs()
            if len(coeffs) == 2:
                root = -sympy.Rational(coeffs[1]) / sympy.Rational(coeffs[0])
                found.append((Fraction(int(root.p), int(root.q)), multiplicity))
            else:
                for z in np.roots([complex(sympy.N(c)) for c in coeffs]):
                    numeric.append((complex(z), multiplicity))
    else:
        for cluster in _cluster(list(np.linalg.eigvals(Q.to_numpy())), tol * scale):
            numeric.append((complex(np.mean(cluster)), len(cluster)))

    merged = {}
    for z, multiplicity in numeric:
        for h in hints:
            if abs(z - h) <= HINT_TOLERANCE * scale:
                z = h
                break
        merged[z] = merged.get(z, 0) + multiplicity
    found.extend(merged.items())

    residual = 0.0
    for value, _ in found:
        if not isinstance(value, Fraction):
            residual = max(residual, _char_residual(Q, value))
    if residual > math.sqrt(tol):
        raise SpectralError("numeric eigenvalues fail the characteristic check", residual)
    if residual > tol:
        logger.warning("eigenvalue residual %.3g above tolerance; consider exact hints", residual)

    eigenvalues = sorted((Eigenvalue.of(v, m) for v, m in found), key=_sort_key)
    structure = EigenStructure(eigenvalues, residual)
    if structure.dimension != d:
        raise SpectralError(f"multiplicities sum to {structure.dimension}, expected {d}")
    logger.debug("eigenvalues %s", [(str(e), e.multiplicity) for e in eigenvalues])
    return structure


# Jordan chains

def _apply(M, vector):
    zero = Fraction(0) if M.domain == RATIONAL else 0j
    return tuple(sum((a * b for a, b in zip(row, vector)), zero) for row in M.entries)


def _normalize(vector):
    pivot = max(range(len(vector)), key=lambda i: (abs(vector[i]), -i))
    factor = vector[pivot]
    return tuple(v / factor for v in vector)


def _shifted(Q, value, domain):
    M = Q if domain == RATIONAL else Q.to_complex()
    value = value if domain == RATIONAL else complex(value)
    return M - Matrix.identity(Q.rows, domain).scale(value)


def _chains_for(Q, eigenvalue, tol):
    domain = RATIONAL if Q.domain == RATIONAL and eigenvalue.exact else COMPLEX
    d = Q.rows
    N = _shifted(Q, eigenvalue.value, domain)
    rank_tol = 0.0 if domain == RATIONAL else NUMERIC_RANK_TOLERANCE
    kernels = [[]]
    power = N
    while len(kernels[-1]) < eigenvalue.multiplicity and len(kernels) <= d:
        kernel = nullspace(power, rank_tol)
        if len(kernel) <= len(kernels[-1]):
            break
        kernels.append(kernel)
        power = power @ N
    if len(kernels[-1]) != eigenvalue.multiplicity:
        raise SpectralError(
            f"nullity filtration of eigenvalue {eigenvalue} reaches {len(kernels[-1])}, "
            f"expected {eigenvalue.multiplicity}; supply exact eigenvalue hints"
        )

    tops = []  # (top vector, height)
    for k in range(len(kernels) - 1, 0, -1):
        span = make_span(d, domain, tol)
        for v in kernels[k - 1]:
            span.add(v)
        for top, height in tops:
            w = top
            for _ in range(height - k):
                w = _apply(N, w)
            span.add(w)
        for v in kernels[k]:
            if span.add(v):
                tops.append((_normalize(v), k))

    chains = []
    for top, height in tops:
        vectors = [top]
        for _ in range(height - 1):
            vectors.append(_apply(N, vectors[-1]))
        vectors.reverse()
        chains.append(tuple(vectors))
    return chains, domain


def chain_residual(Q, chain):
    """Largest infinity-norm residual of Q V^(j) - lambda V^(j) - V^(j-1)"""
    domain = chain.domain
    M = Q if domain == RATIONAL and Q.domain == RATIONAL else Q.to_complex()
    value = chain.value if domain == RATIONAL else complex(chain.value)
    worst = 0.0
    for j, vector in enumerate(chain.vectors):
        image = _apply(M, vector)
        previous = chain.vectors[j - 1] if j else (0,) * len(vector)
        worst = max(worst, max(float(abs(a - value * b - c)) for a, b, c in zip(image, vector, previous)))
    return worst


def jordan_basis(Q, tol=DEFAULT_TOLERANCE, structure=None, hints=()):
    """
    Jordan chains of Q covering a basis of the whole space.

    Chains are ordered like the eigenvalues, then by decreasing height. The
    top vector of each chain is scaled so that its first entry of largest
    modulus is 1.
    """
    if structure is None:
        structure = eigen_structure(Q, tol, hints)
    d = Q.rows
    scale = max(1.0, float(induced_norm(Q, 'one')))
    chains = []
    for eigenvalue in structure.eigenvalues:
        vectors, _ = _chains_for(Q, eigenvalue, tol)
        for chain_vectors in vectors:
            chain = JordanChain(eigenvalue, chain_vectors)
            residual = chain_residual(Q, chain)
            if residual > tol * scale:
                raise SpectralError(f"chain relation fails for eigenvalue {eigenvalue}", residual)
            chains.append(JordanChain(eigenvalue, chain_vectors, residual))

    domain = RATIONAL if all(c.domain == RATIONAL for c in chains) else COMPLEX
    span = make_span(d, domain, tol)
    independent = sum(1 for c in chains for v in c.vectors if span.add(v))
    if independent != d:
        raise SpectralError(f"Jordan chains span {independent} of {d} dimensions")
    logger.debug("Jordan chain heights %s", [c.height for c in chains])
    return chains


def decompose_C(chains, C, tol=DEFAULT_TOLERANCE):
    """Coordinates gamma_V of C over the chain vectors, by a linear solve"""
    column = C.column_values(0) if isinstance(C, Matrix) else list(C)
    basis = [v for chain in chains for v in chain.vectors]
    d = len(column)
    if len(basis) != d:
        raise ShapeError(f"{len(basis)} chain vectors for a {d}-dimensional space")
    exact = all(c.domain == RATIONAL for c in chains) and all(isinstance(v, Fraction) for v in column)
    domain = RATIONAL if exact else COMPLEX
    if not exact:
        column = [complex(v) for v in column]
        basis = [tuple(complex(v) for v in vector) for vector in basis]
    P = Matrix(tuple(tuple(basis[j][i] for j in range(d)) for i in range(d)), domain)
    try:
        gammas = solve(P, column, tol)
    except ShapeError as exc:
        raise SpectralError("chain vectors are linearly dependent") from exc

    coefficients, start = [], 0
    for chain in chains:
        coefficients.append(tuple(gammas[start:start + chain.height]))
        start += chain.height
    reconstructed = _apply(P, gammas)
    residual = max((float(abs(a - b)) for a, b in zip(reconstructed, column)), default=0.0)
    size = max((float(abs(v)) for v in column), default=0.0)
    if residual > tol * max(1.0, size):
        raise SpectralError("C is not reconstructed by its chain coordinates", residual)
    return CDecomposition(list(chains), coefficients, residual)


# Closed forms

def _is_one(alpha, tol):
    if isinstance(alpha, Fraction):
        return alpha == 1
    return abs(complex(alpha) - 1) <= tol


def binomial_power_sum(alpha, K, ell, tol=1e-12):
    """
    sum_{k=0}^{K} C(k, ell) alpha^(k - ell) in closed form.

    For alpha = 1 this is C(K, ell + 1) + C(K, ell). Zero when K < ell.
    """
    if K < ell:
        return 0
    if _is_one(alpha, tol):
        return binomial(K, ell + 1) + binomial(K, ell)
    shift = alpha - 1
    total = binomial(K, ell) * alpha ** (K - ell + 1) / shift
    for j in range(1, ell + 1):
        total += (-1) ** j * binomial(K, ell - j) * alpha ** (K - ell + j) / shift ** (j + 1)
    total += (-1) ** (ell + 1) / shift ** (ell + 1)
    return total


def _combine(chain, weights):
    d = len(chain.vectors[0])
    total = [0] * d
    for weight, vector in zip(weights, chain.vectors):
        if weight:
            for i in range(d):
                total[i] += weight * vector[i]
    return tuple(total)


def _chain_value(chain):
    return chain.value if chain.domain == RATIONAL else complex(chain.value)


def qk_on_chain(chain, K, level=None):
    """
    Q^K V^(level), by default level = nu - 1:
    sum_{j<=level} C(K, level - j) lambda^(K - level + j) V^(j).
    """
    if K < 0:
        raise ValueError("K must be nonnegative")
    level = chain.height - 1 if level is None else level
    alpha = _chain_value(chain)
    weights = []
    for j in range(level + 1):
        coefficient = binomial(K, level - j)
        weights.append(coefficient * alpha ** (K - level + j) if coefficient else 0)
    return _combine(chain, weights)


def geometric_sum_on_chain(chain, K, level=None):
    """sum_{k=0}^{K} Q^k V^(level), by default level = nu - 1"""
    if K < 0:
        raise ValueError("K must be nonnegative")
    level = chain.height - 1 if level is None else level
    alpha = _chain_value(chain)
    weights = [binomial_power_sum(alpha, K, level - j) for j in range(level + 1)]
    return _combine(chain, weights)


def jordan_block_power(value, nu, K):
    """(J^K)[i][j] = C(K, j - i) value^(K - j + i) for the nu x nu Jordan block; K may be negative"""
    if K >= 0:
        return [
            [binomial(K, j - i) * value ** (K - j + i) if j >= i else 0 for j in range(nu)]
            for i in range(nu)
        ]
    # J^-1 entries are (-1)^(j-i) value^-(j-i+1)
    inverse = [
        [(-1) ** (j - i) / value ** (j - i + 1) if j >= i else 0 for j in range(nu)]
        for i in range(nu)
    ]
    result = [[1 if i == j else 0 for j in range(nu)] for i in range(nu)]
    for _ in range(-K):
        result = [
            [sum(result[i][m] * inverse[m][j] for m in range(nu)) for j in range(nu)]
            for i in range(nu)
        ]
    return result
