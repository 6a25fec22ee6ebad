"""
Scalar tower and small dense linear algebra.

Entries are either exact ``fractions.Fraction`` values (rational domain) or
Python ``complex`` values (complex domain). Rational matrices use exact
elimination; complex matrices go through numpy. Matrices are immutable.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from numbers import Rational

import numpy as np

from .exceptions import NonFiniteError, ShapeError

RATIONAL = 'rational'
COMPLEX = 'complex'
DOMAINS = (RATIONAL, COMPLEX)

NORM_KINDS = ('one', 'infinity', 'two')

DEFAULT_TOLERANCE = 1e-9


# Scalars

def parse_scalar(value, domain=None):
    """Convert an int, Fraction, 'p/q' string, float, complex or [re, im] pair to a Scalar"""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex entry must be [re, im], got {value!r}")
        return _checked_complex(complex(float(value[0]), float(value[1])))
    if isinstance(value, str):
        if domain == COMPLEX:
            return _checked_complex(complex(Fraction(value)))
        return Fraction(value)
    if isinstance(value, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(value, Rational):
        if domain == COMPLEX:
            return complex(Fraction(value))
        return Fraction(value)
    if isinstance(value, (float, complex, np.floating, np.complexfloating)):
        return _checked_complex(complex(value))
    raise ValueError(f"unsupported scalar {value!r}")


def _checked_complex(z):
    if not cmath.isfinite(z):
        raise NonFiniteError(f"non-finite value {z!r}")
    return z


def is_exact(value):
    return isinstance(value, Fraction)


def to_complex(value):
    return complex(value)


def scalar_abs(value):
    """Exact absolute value for rationals, float modulus otherwise"""
    if isinstance(value, Fraction):
        return abs(value)
    return abs(complex(value))


def format_scalar(value):
    """Render a scalar for JSON: integers stay integers, rationals become 'p/q', complex [re, im]"""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return value.numerator
        return f"{value.numerator}/{value.denominator}"
    z = complex(value)
    return [z.real, z.imag]


# Matrices

@dataclass(frozen=True)
class Matrix:
    """
    Immutable dense matrix over one scalar domain.

    Attributes:
        entries (tuple): Row-major tuple of row tuples
        domain (str): 'rational' (Fraction entries) or 'complex' (complex entries)
    """
    entries: tuple
    domain: str

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise ValueError(f"unknown domain {self.domain!r}")
        widths = {len(row) for row in self.entries}
        if len(widths) > 1:
            raise ShapeError("matrix rows have different lengths")
        if self.domain == COMPLEX:
            for row in self.entries:
                for z in row:
                    _checked_complex(z)

    @classmethod
    def from_rows(cls, rows, domain=None):
        """Build a matrix from nested sequences, inferring the domain when not given"""
        rows = [list(row) for row in rows]
        if domain is None:
            exact = all(
                isinstance(v, (str, Rational)) and not isinstance(v, bool)
                for row in rows for v in row
            )
            domain = RATIONAL if exact else COMPLEX
        converted = tuple(
            tuple(_coerce(parse_scalar(v, domain), domain) for v in row) for row in rows
        )
        return cls(converted, domain)

    @classmethod
    def identity(cls, d, domain=RATIONAL):
        one, zero = _unit(domain), _zero(domain)
        return cls(tuple(tuple(one if i == j else zero for j in range(d)) for i in range(d)), domain)

    @classmethod
    def zeros(cls, rows, cols, domain=RATIONAL):
        zero = _zero(domain)
        return cls(tuple(tuple(zero for _ in range(cols)) for _ in range(rows)), domain)

    @classmethod
    def column(cls, values, domain=None):
        return cls.from_rows([[v] for v in values], domain)

    @classmethod
    def row(cls, values, domain=None):
        return cls.from_rows([list(values)], domain)

    @classmethod
    def from_numpy(cls, array):
        array = np.asarray(array, dtype=complex)
        if array.ndim == 1:
            array = array.reshape(-1, 1)
        return cls(tuple(tuple(complex(v) for v in row) for row in array), COMPLEX)

    @property
    def rows(self):
        return len(self.entries)

    @property
    def cols(self):
        return len(self.entries[0]) if self.entries else 0

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def is_square(self):
        return self.rows == self.cols

    def __getitem__(self, index):
        i, j = index
        return self.entries[i][j]

    def flat(self):
        return [v for row in self.entries for v in row]

    def column_values(self, j=0):
        return [row[j] for row in self.entries]

    def is_zero(self):
        return all(v == 0 for row in self.entries for v in row)

    def to_complex(self):
        if self.domain == COMPLEX:
            return self
        return Matrix(tuple(tuple(complex(v) for v in row) for row in self.entries), COMPLEX)

    def to_numpy(self):
        return np.array([[complex(v) for v in row] for row in self.entries], dtype=complex).reshape(
            self.rows, self.cols
        )

    def transpose(self):
        return Matrix(tuple(zip(*self.entries)) if self.entries else (), self.domain)

    T = property(transpose)

    def _align(self, other):
        if self.domain == other.domain:
            return self, other
        return self.to_complex(), other.to_complex()

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        a, b = self._align(other)
        b_cols = list(zip(*b.entries)) if b.entries else []
        zero = _zero(a.domain)
        product = tuple(
            tuple(sum((x * y for x, y in zip(row, col)), zero) for col in b_cols)
            for row in a.entries
        )
        return Matrix(product, a.domain)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        a, b = self._align(other)
        return Matrix(
            tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a.entries, b.entries)),
            a.domain,
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, factor):
        factor = parse_scalar(factor) if not isinstance(factor, (Fraction, complex)) else factor
        if isinstance(factor, complex) and self.domain == RATIONAL:
            return self.to_complex().scale(factor)
        factor = _coerce(factor, self.domain)
        return Matrix(tuple(tuple(factor * v for v in row) for row in self.entries), self.domain)

    def power(self, k):
        if not self.is_square:
            raise ShapeError("power of a non-square matrix")
        result = Matrix.identity(self.rows, self.domain)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def __str__(self):
        return "[" + ", ".join(
            "[" + ", ".join(str(format_scalar(v)) for v in row) + "]" for row in self.entries
        ) + "]"


def _zero(domain):
    return Fraction(0) if domain == RATIONAL else 0j


def _unit(domain):
    return Fraction(1) if domain == RATIONAL else 1 + 0j


def _coerce(value, domain):
    if domain == RATIONAL:
        if not isinstance(value, Fraction):
            raise ValueError(f"non-rational entry {value!r} in a rational matrix")
        return value
    return complex(value)


def common_domain(matrices):
    return RATIONAL if all(m.domain == RATIONAL for m in matrices) else COMPLEX


def sum_matrices(matrices):
    matrices = list(matrices)
    total = matrices[0]
    for m in matrices[1:]:
        total = total + m
    return total


# Norms and spectra

def induced_norm(M, kind):
    """
    Induced matrix norm of a square matrix.

    'one' is the maximum absolute column sum, 'infinity' the maximum absolute
    row sum (both exact Fractions on rational input), 'two' the largest
    singular value taken from the Gram matrix eigenvalues.
    """
    if not M.is_square:
        raise ShapeError("induced norm of a non-square matrix")
    if kind == 'one':
        return max((sum(scalar_abs(v) for v in col) for col in zip(*M.entries)), default=0)
    if kind == 'infinity':
        return max((sum(scalar_abs(v) for v in row) for row in M.entries), default=0)
    if kind == 'two':
        return two_norm(M.to_numpy())
    raise ValueError(f"unknown norm kind {kind!r}")


def two_norm(array):
    """Largest singular value of a numpy matrix (or stack) via the Gram matrix"""
    array = np.asarray(array, dtype=complex)
    gram = np.conj(np.swapaxes(array, -1, -2)) @ array
    eigenvalues = np.linalg.eigvalsh(gram)
    return np.sqrt(np.clip(eigenvalues[..., -1], 0.0, None))


def spectral_radius(M, tol=DEFAULT_TOLERANCE):
    """Largest eigenvalue modulus, computed by the spectral module's eigenvalue engine"""
    if not M.is_square:
        raise ShapeError("spectral radius of a non-square matrix")
    from .spectral import eigen_structure

    return max((e.rho for e in eigen_structure(M, tol).eigenvalues), default=0.0)


def lie_bracket(A, B):
    """AB - BA"""
    if not (A.is_square and A.shape == B.shape):
        raise ShapeError(f"bracket of {A.shape} and {B.shape}")
    if A.domain != B.domain:
        raise ShapeError("bracket of matrices from different domains")
    return A @ B - B @ A


# Elimination

def rref(rows):
    """Reduced row echelon form of a list of Fraction rows; returns (rows, pivot columns)"""
    rows = [list(r) for r in rows]
    pivots = []
    lead = 0
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    for col in range(n_cols):
        pivot_row = next((i for i in range(lead, n_rows) if rows[i][col] != 0), None)
        if pivot_row is None:
            continue
        rows[lead], rows[pivot_row] = rows[pivot_row], rows[lead]
        inverse = 1 / rows[lead][col]
        rows[lead] = [v * inverse for v in rows[lead]]
        for i in range(n_rows):
            if i != lead and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[lead])]
        pivots.append(col)
        lead += 1
        if lead == n_rows:
            break
    return rows[:lead], pivots


def nullspace(M, tol=0.0):
    """
    Basis of the kernel of M as a list of column tuples.

    Rational matrices are reduced exactly (tol is ignored); the basis is the
    echelon basis with one free variable set to 1. Complex matrices use the
    SVD, treating singular values at most tol times the largest one as zero.
    """
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    if M.domain == RATIONAL:
        reduced, pivots = rref(M.entries) if M.rows else ([], [])
        free = [j for j in range(M.cols) if j not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * M.cols
            v[f] = Fraction(1)
            for row, p in zip(reduced, pivots):
                v[p] = -row[f]
            basis.append(tuple(v))
        return basis
    if tol == 0:
        raise ValueError("complex nullspace needs a positive tolerance")
    array = M.to_numpy()
    _, singular, vh = np.linalg.svd(array)
    scale = singular[0] if singular.size and singular[0] > 0 else 1.0
    rank = int(np.sum(singular > tol * scale))
    return [tuple(complex(v) for v in np.conj(vh[k])) for k in range(rank, M.cols)]


def rank(M, tol=DEFAULT_TOLERANCE):
    if M.domain == RATIONAL:
        return len(rref(M.entries)[1]) if M.rows else 0
    return M.cols - len(nullspace(M, tol)) if M.rows else 0


def solve(M, b, tol=DEFAULT_TOLERANCE):
    """Solve M x = b for square nonsingular M; b is a sequence of scalars"""
    if not M.is_square:
        raise ShapeError("solve needs a square matrix")
    if M.domain == RATIONAL and all(isinstance(v, Fraction) for v in b):
        augmented = [list(row) + [v] for row, v in zip(M.entries, b)]
        reduced, pivots = rref(augmented)
        if pivots[: M.rows] != list(range(M.rows)):
            raise ShapeError("singular system")
        return [row[-1] for row in reduced]
    array = M.to_numpy()
    singular = np.linalg.svd(array, compute_uv=False)
    if singular.size == 0 or singular[-1] <= tol * max(singular[0], 1e-300):
        raise ShapeError("singular system")
    return [complex(v) for v in np.linalg.solve(array, np.array([complex(v) for v in b]))]


class ExactSpan:
    """Incrementally built span of Fraction vectors with exact membership and coordinates."""

    def __init__(self, dim):
        self.dim = dim
        self.basis = []
        self._rows = []  # (pivot, reduced row, combination over basis)

    def __len__(self):
        return len(self.basis)

    def _reduce(self, vector):
        residual = [Fraction(v) for v in vector]
        factors = []
        for pivot, row, _ in self._rows:
            factor = residual[pivot]
            factors.append(factor)
            if factor:
                residual = [a - factor * b for a, b in zip(residual, row)]
        return residual, factors

    def add(self, vector):
        """Add vector if it enlarges the span; returns True when it was added"""
        residual, factors = self._reduce(vector)
        pivot = next((i for i, v in enumerate(residual) if v != 0), None)
        if pivot is None:
            return False
        index = len(self.basis)
        combination = [Fraction(0)] * (index + 1)
        combination[index] = Fraction(1)
        for factor, (_, _, combo) in zip(factors, self._rows):
            if factor:
                for j, c in enumerate(combo):
                    combination[j] -= factor * c
        inverse = 1 / residual[pivot]
        self._rows.append(
            (pivot, [v * inverse for v in residual], [c * inverse for c in combination])
        )
        self.basis.append(tuple(Fraction(v) for v in vector))
        return True

    def coordinates(self, vector):
        """Coordinates over the inserted basis, or None when vector is outside the span"""
        residual, factors = self._reduce(vector)
        if any(residual):
            return None
        coords = [Fraction(0)] * len(self.basis)
        for factor, (_, _, combo) in zip(factors, self._rows):
            if factor:
                for j, c in enumerate(combo):
                    coords[j] += factor * c
        return coords


class FloatSpan:
    """Numeric counterpart of ExactSpan using least squares with a relative tolerance."""

    def __init__(self, dim, tol=DEFAULT_TOLERANCE):
        self.dim = dim
        self.tol = tol
        self.basis = []

    def __len__(self):
        return len(self.basis)

    def _fit(self, vector):
        v = np.array([complex(x) for x in vector])
        if not self.basis:
            return np.zeros(0, dtype=complex), np.linalg.norm(v), np.linalg.norm(v)
        basis = np.array(self.basis, dtype=complex).T
        coords, *_ = np.linalg.lstsq(basis, v, rcond=None)
        residual = np.linalg.norm(basis @ coords - v)
        scale = max(np.linalg.norm(v), np.linalg.norm(basis, 2))
        return coords, residual, scale

    def add(self, vector):
        _, residual, scale = self._fit(vector)
        if residual <= self.tol * max(scale, 1e-300) or residual == 0:
            return False
        self.basis.append(tuple(complex(x) for x in vector))
        return True

    def coordinates(self, vector):
        coords, residual, scale = self._fit(vector)
        if residual > self.tol * max(scale, 1e-300):
            return None
        return [complex(c) for c in coords]


def make_span(dim, domain, tol=DEFAULT_TOLERANCE):
    return ExactSpan(dim) if domain == RATIONAL else FloatSpan(dim, tol)


def binomial(n, k):
    """C(n, k) with the convention C(n, k) = 0 when n < k or k < 0"""
    if k < 0 or n < k:
        return 0
    return comb(n, k)
