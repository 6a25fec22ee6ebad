"""
Linear representations of radix-rational sequences.

A representation (L, A_0..A_{B-1}, C) defines u(n) = L A_w C where w is the
radix-B expansion of n, most significant digit leftmost; n = 0 is the empty
word. Running sums over words S_K(x) and over integers (the vector sums
Sigma_N) are computed exactly for rational representations.
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm

import numpy as np

from .exactnum import (
    COMPLEX,
    RATIONAL,
    Matrix,
    make_span,
    parse_scalar,
    sum_matrices,
)
from .exceptions import (
    BudgetExceeded,
    NotRecognized,
    RepresentationError,
    UnsupportedOperation,
)

logger = logging.getLogger(__name__)

MAX_GROUPED_RADIX = 2 ** 20


@dataclass(frozen=True)
class LinearRep:
    """
    Linear representation of a radix-rational sequence.

    Attributes:
        radix (int): The radix B >= 2
        L (Matrix): 1 x d row vector
        A (tuple): The B matrices A_0..A_{B-1}, each d x d
        C (Matrix): d x 1 column vector
        name (str): Optional label carried into reports
        eigen_hints (tuple): Optional exact eigenvalues of Q (complex) for numeric clustering
    """
    radix: int
    L: Matrix
    A: tuple
    C: Matrix
    name: str = ''
    eigen_hints: tuple = field(default=(), compare=False)

    @classmethod
    def build(cls, radix, L, A, C, name='', eigen_hints=(), domain=None):
        """Convert nested sequences into matrices, unify domains and validate"""
        try:
            if domain is None:
                probe = [Matrix.from_rows([list(L)]), Matrix.from_rows([[c] for c in C])]
                probe += [Matrix.from_rows(m) for m in A]
                domain = RATIONAL if all(p.domain == RATIONAL for p in probe) else COMPLEX
            rep = cls(
                radix=radix,
                L=Matrix.from_rows([list(L)], domain),
                A=tuple(Matrix.from_rows(m, domain) for m in A),
                C=Matrix.from_rows([[c] for c in C], domain),
                name=name,
                eigen_hints=tuple(parse_scalar(h, COMPLEX) for h in eigen_hints),
            )
        except (ValueError, TypeError) as exc:
            raise RepresentationError(str(exc)) from exc
        validate(rep).raise_for_errors()
        return rep

    @property
    def dim(self):
        return self.C.rows

    @property
    def domain(self):
        parts = (self.L, self.C) + tuple(self.A)
        return RATIONAL if all(p.domain == RATIONAL for p in parts) else COMPLEX

    @cached_property
    def Q(self):
        return sum_matrices(self.A)

    def stack(self):
        """The digit matrices as a complex numpy array of shape (B, d, d)"""
        return np.stack([m.to_numpy() for m in self.A])

    def to_complex(self):
        return LinearRep(
            self.radix,
            self.L.to_complex(),
            tuple(m.to_complex() for m in self.A),
            self.C.to_complex(),
            self.name,
            self.eigen_hints,
        )

    def __str__(self):
        return self.name or f"LinearRep(B={self.radix}, d={self.dim})"


@dataclass
class Diagnostics:
    """
    Result of validating a representation.

    Attributes:
        errors (list): Structural problems, each a message with its location
        insensitive (bool): Whether L A_0 = L (None when the shape is broken)
        Q (Matrix): Sum of the digit matrices (None when the shape is broken)
    """
    errors: list = field(default_factory=list)
    insensitive: bool | None = None
    Q: Matrix | None = None

    @property
    def ok(self):
        return not self.errors

    def raise_for_errors(self):
        if self.errors:
            raise RepresentationError("; ".join(self.errors))


@dataclass(frozen=True)
class DigitWord:
    """
    Finite digit word, most significant digit first.

    Attributes:
        digits (tuple): Digits in 0..radix-1
        radix (int): The radix B
        fractional (bool): True for (0.w)_B semantics, False for integer (w)_B
    """
    digits: tuple
    radix: int
    fractional: bool = False

    def __post_init__(self):
        if any(not 0 <= d < self.radix for d in self.digits):
            raise RepresentationError(f"digit out of range for radix {self.radix}")
        if not self.fractional and self.digits and self.digits[0] == 0:
            raise RepresentationError("integer expansion with a leading zero")

    @classmethod
    def from_integer(cls, n, radix):
        return cls(tuple(integer_digits(n, radix)), radix, False)

    @classmethod
    def from_fraction(cls, x, radix):
        return cls(tuple(fractional_digits(x, radix)), radix, True)

    @property
    def value(self):
        total = 0
        for d in self.digits:
            total = total * self.radix + d
        if self.fractional:
            return Fraction(total, self.radix ** len(self.digits))
        return total


def integer_digits(n, radix):
    """Canonical radix expansion of n >= 0, most significant first; [] for 0"""
    if n < 0:
        raise ValueError("negative integer")
    digits = []
    while n:
        n, r = divmod(n, radix)
        digits.append(r)
    return digits[::-1]


def fractional_digits(x, radix):
    """Digits of a B-adic x in [0, 1); raises ValueError when x is not B-adic"""
    x = Fraction(x)
    if not 0 <= x < 1:
        raise ValueError(f"{x} is outside [0, 1)")
    digits = []
    while x:
        if len(digits) > 4096:
            raise ValueError(f"{x} has no finite radix-{radix} expansion")
        x *= radix
        d = x.numerator // x.denominator
        digits.append(d)
        x -= d
    return digits


def integer_log(n, radix):
    """K with radix**K <= n < radix**(K+1), for n >= 1"""
    if n < 1:
        raise ValueError("integer_log needs n >= 1")
    k, power = 0, radix
    while power <= n:
        power *= radix
        k += 1
    return k


# Validation

def validate(rep):
    """Shape and range report; also records insensitivity and Q"""
    diagnostics = Diagnostics()
    errors = diagnostics.errors
    if not isinstance(rep.radix, int) or rep.radix < 2:
        errors.append(f"radix must be an integer >= 2, got {rep.radix!r}")
    if len(rep.A) != rep.radix:
        errors.append(f"expected {rep.radix} digit matrices, got {len(rep.A)}")
    d = rep.C.rows
    if d < 1:
        errors.append("dimension must be at least 1")
    if rep.C.cols != 1:
        errors.append(f"C must be a column vector, got shape {rep.C.shape}")
    if rep.L.shape != (1, d):
        errors.append(f"L must have shape (1, {d}), got {rep.L.shape}")
    for r, m in enumerate(rep.A):
        if m.shape != (d, d):
            errors.append(f"A[{r}] must have shape ({d}, {d}), got {m.shape}")
    if errors:
        return diagnostics
    diagnostics.Q = rep.Q
    diagnostics.insensitive = is_insensitive(rep)
    return diagnostics


def is_insensitive(rep, tol=1e-12):
    """True iff L A_0 = L (exactly for rational reps, within tol otherwise)"""
    product = rep.L @ rep.A[0]
    if product.domain == RATIONAL and rep.L.domain == RATIONAL:
        return product == rep.L
    diff = (product - rep.L).to_numpy()
    scale = max(1.0, float(np.abs(rep.L.to_numpy()).max()))
    return bool(np.abs(diff).max() <= tol * scale)


# Term and running-sum evaluation

def eval_term(rep, n):
    """u(n) = L A_w C over the canonical expansion of n"""
    row = rep.L
    for digit in integer_digits(n, rep.radix):
        row = row @ rep.A[digit]
    return (row @ rep.C)[0, 0]


def word_product(rep, digits):
    product = Matrix.identity(rep.dim, rep.domain)
    for digit in digits:
        product = product @ rep.A[digit]
    return product


def _as_fraction(x, radix):
    if isinstance(x, DigitWord):
        if not x.fractional:
            raise ValueError("running sums need a fractional digit word")
        return x.value
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError(f"x = {x} is outside [0, 1]")
    return x


def running_sum_words(rep, K, x, mode='digitwise', max_naive_k=16):
    """
    S_K(x) = sum of A_w C over words of length K with (0.w)_B <= x.

    'naive' enumerates all B**K words; 'digitwise' follows the recursion
    S_{K+1}(x) = sum_{r<x_1} A_r Q^K C + A_{x_1} S_K(Bx - x_1) with S_0 = C.
    """
    x = _as_fraction(x, rep.radix)
    B = rep.radix
    if mode == 'naive':
        if K > max_naive_k:
            raise BudgetExceeded(f"naive running sum with K={K} exceeds K <= {max_naive_k}")
        last = min(int(x * B ** K), B ** K - 1)
        total = Matrix.zeros(rep.dim, 1, rep.domain)
        for s in range(last + 1):
            digits = [(s // B ** (K - 1 - i)) % B for i in range(K)]
            total = total + word_product(rep, digits) @ rep.C
        return total
    if mode != 'digitwise':
        raise ValueError(f"unknown mode {mode!r}")
    powers = [rep.C]
    for _ in range(K):
        powers.append(rep.Q @ powers[-1])
    if x == 1:
        return powers[K]
    partial = _digit_prefix_sums(rep)
    total = Matrix.zeros(rep.dim, 1, rep.domain)
    prefix = Matrix.identity(rep.dim, rep.domain)
    y = x
    for k in range(1, K + 1):
        y *= B
        digit = y.numerator // y.denominator
        y -= digit
        if digit:
            total = total + prefix @ (partial[digit] @ powers[K - k])
        prefix = prefix @ rep.A[digit]
    return total + prefix @ rep.C


def _digit_prefix_sums(rep):
    """partial[r] = A_0 + ... + A_{r-1}"""
    partial = [Matrix.zeros(rep.dim, rep.dim, rep.domain)]
    for m in rep.A:
        partial.append(partial[-1] + m)
    return partial


def running_sum_integers(rep, N, method='decomposition'):
    """
    Sigma_N = sum over n = 0..N of A_{w(n)} C over canonical expansions.

    'accumulate' adds the terms one by one; 'decomposition' uses
    Sigma_N = (I - A_0) sum_{k<=K} Q^k C + S_{K+1}(N / B^{K+1}), K = floor(log_B N).
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    if N == 0:
        return rep.C
    if method == 'accumulate':
        total = Matrix.zeros(rep.dim, 1, rep.domain)
        for n in range(N + 1):
            total = total + word_product(rep, integer_digits(n, rep.radix)) @ rep.C
        return total
    if method != 'decomposition':
        raise ValueError(f"unknown method {method!r}")
    B = rep.radix
    K = integer_log(N, B)
    geometric = Matrix.zeros(rep.dim, 1, rep.domain)
    power = rep.C
    for _ in range(K + 1):
        geometric = geometric + power
        power = rep.Q @ power
    identity = Matrix.identity(rep.dim, rep.domain)
    head = (identity - rep.A[0]) @ geometric
    return head + running_sum_words(rep, K + 1, Fraction(N, B ** (K + 1)))


def running_sum_grid(rep, K, depth):
    """
    S_K at every node k / B**depth, k = 0..B**depth, in complex doubles.

    Returns an array of shape (B**depth + 1, d).
    """
    B = rep.radix
    A = rep.stack()
    C = rep.C.to_numpy()[:, 0]
    Q = A.sum(axis=0)
    partial = np.concatenate([np.zeros((1,) + A.shape[1:], dtype=complex), np.cumsum(A, axis=0)])
    nodes = B ** depth
    index = np.arange(nodes)
    leading = index // B ** (depth - 1)
    tail = (index % B ** (depth - 1)) * B
    values = np.tile(C, (nodes + 1, 1))
    power = C.copy()
    for _ in range(K):
        head = partial[leading] @ power
        inner = np.einsum('kij,kj->ki', A[leading], values[tail])
        updated = np.empty_like(values)
        updated[:nodes] = head + inner
        power = Q @ power
        updated[nodes] = power
        values = updated
    return values


# Brute-force accumulation

class PrefixSums:
    """
    Exact vector sums Sigma_n for every n <= N.

    Rational representations are accumulated in integers after clearing
    denominators; each level k (the n with k digits) keeps its own scale.
    """

    def __init__(self, rep, levels, exact):
        self.rep = rep
        self.exact = exact
        self._levels = levels  # (start, cumulative sums, scale, total before level)
        self.N = levels[-1][0] + len(levels[-1][1]) - 1

    def at(self, n):
        if not 0 <= n <= self.N:
            raise IndexError(f"n = {n} outside [0, {self.N}]")
        for start, cumulative, scale, before in reversed(self._levels):
            if n >= start:
                row = cumulative[n - start]
                if self.exact:
                    return tuple(b + Fraction(int(v), scale) for b, v in zip(before, row))
                return tuple(b + complex(v) for b, v in zip(before, row))
        raise IndexError(n)

    def as_array(self):
        """All sums as a complex array of shape (N + 1, d)"""
        blocks = []
        for _, cumulative, scale, before in self._levels:
            base = np.array([complex(b) for b in before])
            if self.exact:
                blocks.append(base + np.asarray(cumulative, dtype=float) / float(scale))
            else:
                blocks.append(base + np.asarray(cumulative, dtype=complex))
        return np.concatenate(blocks)


def _integer_scaling(rep):
    denominator = 1
    for m in rep.A:
        for v in m.flat():
            denominator = lcm(denominator, v.denominator)
    c_denominator = 1
    for v in rep.C.flat():
        c_denominator = lcm(c_denominator, v.denominator)
    A = [[[int(v * denominator) for v in row] for row in m.entries] for m in rep.A]
    C = [int(v * c_denominator) for v in rep.C.flat()]
    return A, C, denominator, c_denominator


def brute_running_sums(rep, N, max_n=2 ** 24):
    """Sigma_n for all n <= N by level-wise accumulation of A_{w(n)} C"""
    if N > max_n:
        raise BudgetExceeded(f"brute force up to N={N} exceeds {max_n}")
    B, d = rep.radix, rep.dim
    exact = rep.domain == RATIONAL
    if exact:
        A_int, C_int, denominator, c_denominator = _integer_scaling(rep)
        max_entry = max([abs(v) for m in A_int for row in m for v in row] + [1])
        max_c = max([abs(v) for v in C_int] + [1])
        A_stack = np.array(A_int, dtype=object)
        C_vec = np.array(C_int, dtype=object)
    else:
        A_stack = rep.stack()
        C_vec = rep.C.to_numpy()[:, 0]
        denominator = c_denominator = 1

    levels = []
    before = [Fraction(0)] * d if exact else [0j] * d
    matrices = None
    start, k, bound = 0, 0, 1
    while start <= N:
        if k == 0:
            matrices = np.eye(d, dtype=np.int64 if exact else complex)[None]
        elif k == 1:
            matrices = A_stack[1:]
        else:
            needed = (N - start) // B + 1
            parents = matrices[:needed]
            matrices = (parents[:, None] @ A_stack[None]).reshape(-1, d, d)
        count = min(len(matrices), N - start + 1)
        if exact:
            bound *= max(1, d * max_entry) if k else 1
            if bound * max_c * d * count < 2 ** 62:
                matrices = matrices.astype(np.int64)
                vectors = matrices[:count] @ C_vec.astype(np.int64)
            else:
                matrices = matrices.astype(object)
                vectors = matrices[:count] @ C_vec
            scale = denominator ** k * c_denominator
        else:
            vectors = matrices[:count] @ C_vec
            scale = 1
        cumulative = np.cumsum(vectors, axis=0)
        levels.append((start, cumulative, scale, list(before)))
        last = cumulative[-1]
        if exact:
            before = [b + Fraction(int(v), scale) for b, v in zip(before, last)]
        else:
            before = [b + complex(v) for b, v in zip(before, last)]
        start += count
        k += 1
    logger.debug("brute force accumulated %d terms over %d levels", N + 1, len(levels))
    return PrefixSums(rep, levels, exact)


def term_values(rep, N):
    """u(0..N) by level-wise products, exact for rational representations"""
    sums = brute_running_sums(rep, N)
    L = rep.L.flat()
    values, previous = [], None
    for n in range(N + 1):
        current = sums.at(n)
        vector = current if previous is None else tuple(a - b for a, b in zip(current, previous))
        values.append(sum((l * v for l, v in zip(L, vector)), Fraction(0) if sums.exact else 0j))
        previous = current
    return values


# Transforms

def radix_power(rep, T):
    """Group digits by T: radix B**T with A'_s = A_w for the length-T word w of s"""
    if T < 1:
        raise ValueError("T must be at least 1")
    B = rep.radix
    if B ** T > MAX_GROUPED_RADIX:
        raise BudgetExceeded(f"grouped radix {B}**{T} exceeds {MAX_GROUPED_RADIX}")
    matrices = []
    for s in range(B ** T):
        digits = [(s // B ** (T - 1 - i)) % B for i in range(T)]
        matrices.append(word_product(rep, digits))
    return LinearRep(B ** T, rep.L, tuple(matrices), rep.C, rep.name, rep.eigen_hints)


def scale_rep(rep, alpha):
    """Multiply every digit matrix by alpha"""
    return LinearRep(
        rep.radix, rep.L, tuple(m.scale(alpha) for m in rep.A), rep.C, rep.name, ()
    )


def infer_representation(oracle, radix, max_level=8, check_horizon=1024):
    """
    Guess an insensitive representation from term values.

    Subsequences n -> u(B^k n + r) are visited with k ascending and r
    ascending; the ones whose value windows enlarge the span become the
    basis. Only children of selected subsequences need visiting, since the
    digit action of a dependent subsequence is a combination of the
    children of the basis.
    """
    B, W = radix, check_horizon
    cache = {}

    def value(n):
        if n not in cache:
            cache[n] = parse_scalar(oracle(n))
        return cache[n]

    def window(k, r):
        return [value(B ** k * n + r) for n in range(W)]

    first = window(0, 0)
    domain = RATIONAL if all(isinstance(v, Fraction) for v in first) else COMPLEX
    span = make_span(W, domain)
    selected = []
    queue = [(0, 0)]
    seen = {(0, 0)}
    while queue:
        k, r = heapq.heappop(queue)
        if not span.add(window(k, r)):
            continue
        if k > max_level:
            raise NotRecognized(f"not recognized at level {max_level}: dimension still growing")
        selected.append((k, r))
        for digit in range(B):
            child = (k + 1, r + B ** k * digit)
            if child not in seen:
                seen.add(child)
                heapq.heappush(queue, child)
    one = Fraction(1) if domain == RATIONAL else 1 + 0j
    zero = one * 0
    if not selected:
        rep = LinearRep.build(B, [one], [[[one]]] * B, [zero], name='inferred', domain=domain)
    else:
        d = len(selected)
        matrices = []
        for digit in range(B):
            columns = []
            for k, r in selected:
                coords = span.coordinates(window(k + 1, r + B ** k * digit))
                if coords is None:
                    raise NotRecognized("digit action leaves the span; enlarge the window")
                columns.append(coords)
            matrices.append([[columns[i][l] for i in range(d)] for l in range(d)])
        L = [value(r) for _, r in selected]
        C = [one] + [zero] * (d - 1)
        rep = LinearRep.build(B, L, matrices, C, name='inferred', domain=domain)
    for n in range(W):
        expected, got = value(n), eval_term(rep, n)
        if domain == RATIONAL:
            mismatch = got != expected
        else:
            mismatch = abs(complex(got) - complex(expected)) > 1e-9 * max(1.0, abs(complex(expected)))
        if mismatch:
            raise NotRecognized(f"inferred representation disagrees with the oracle at n={n}")
    logger.info("inferred a dimension-%d representation in radix %d", rep.dim, B)
    return rep


def _closure(start, step, domain, dim):
    span = make_span(dim, domain)
    queue = []
    if span.add(start):
        queue.append(tuple(start))
    while queue:
        vector = queue.pop(0)
        for image in step(vector):
            if span.add(image):
                queue.append(tuple(image))
    return span


def reduce(rep):
    """Minimal-dimension representation of the same formal series (rational only)"""
    if rep.domain != RATIONAL:
        raise UnsupportedOperation("reduce is only defined for rational representations")
    d, B = rep.dim, rep.radix
    A = [m.entries for m in rep.A]
    zero_rep = LinearRep.build(B, [0], [[[0]]] * B, [0], name=rep.name)

    def forward(v):
        return [[sum(row[j] * v[j] for j in range(d)) for row in a] for a in A]

    span = _closure(rep.C.flat(), forward, RATIONAL, d)
    if not span.basis:
        return zero_rep
    basis = span.basis
    s = len(basis)
    A1 = []
    for a in A:
        columns = [span.coordinates([sum(row[j] * p[j] for j in range(d)) for row in a]) for p in basis]
        A1.append([[columns[i][l] for i in range(s)] for l in range(s)])
    C1 = span.coordinates(rep.C.flat())
    L1 = [sum(l * p_j for l, p_j in zip(rep.L.flat(), p)) for p in basis]

    def backward(v):
        return [[sum(v[l] * a[l][i] for l in range(s)) for i in range(s)] for a in A1]

    rows = _closure(L1, backward, RATIONAL, s)
    if not rows.basis:
        return zero_rep
    q = rows.basis
    t = len(q)
    A2 = []
    for a in A1:
        A2.append([rows.coordinates([sum(qi[l] * a[l][i] for l in range(s)) for i in range(s)]) for qi in q])
    L2 = rows.coordinates(L1)
    C2 = [sum(qi[l] * C1[l] for l in range(s)) for qi in q]
    logger.debug("reduced dimension %d -> %d -> %d", d, s, t)
    return LinearRep.build(B, L2, A2, C2, name=rep.name)


def substitution_to_linrep(rules, output, start):
    """
    Representation of the fixed point of a constant-length substitution.

    rules maps each letter to its image word; output maps letters to values.
    Row x of A_r has a single 1 in column sigma_r(x), L selects the start
    letter and C lists the outputs, so u(n) = output(omega_n).
    """
    letters = list(rules)
    lengths = {len(word) for word in rules.values()}
    if len(lengths) != 1:
        raise UnsupportedOperation("only constant-length substitutions are supported")
    B = lengths.pop()
    if B < 2:
        raise UnsupportedOperation("substitution length must be at least 2")
    if start not in rules or rules[start][0] != start:
        raise RepresentationError(f"start letter {start!r} is not a prefix of its image")
    index = {letter: i for i, letter in enumerate(letters)}
    for word in rules.values():
        for letter in word:
            if letter not in index:
                raise RepresentationError(f"letter {letter!r} has no rule")
    d = len(letters)
    matrices = []
    for r in range(B):
        matrices.append([
            [1 if index[rules[x][r]] == j else 0 for j in range(d)] for x in letters
        ])
    L = [1 if x == start else 0 for x in letters]
    C = [output[x] for x in letters]
    return LinearRep.build(B, L, matrices, C, name='substitution')
