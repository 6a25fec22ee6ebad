"""
Joint spectral radius bounds for the digit matrices of a representation.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from .exactnum import (
    DEFAULT_TOLERANCE,
    NORM_KINDS,
    RATIONAL,
    common_domain,
    lie_bracket,
    make_span,
    spectral_radius,
    two_norm,
)
from .exceptions import BudgetExceeded

logger = logging.getLogger(__name__)


class Attained(str, enum.Enum):
    """'yes' when lambda* is certified by coinciding bounds or the Lie shortcut"""
    YES = 'yes'
    UNKNOWN = 'unknown'


@dataclass
class LieClosureReport:
    """
    Lie algebra generated by a set of matrices and its derived series.

    Attributes:
        basis (list): Matrices spanning the bracket closure
        derived_dims (list): Dimensions of D^0, D^1, ... until 0 or stabilization
        solvable (bool): Whether the derived series reaches 0
    """
    basis: list
    derived_dims: list
    solvable: bool


@dataclass
class JsrEstimate:
    """
    Bounds on the joint spectral radius lambda*.

    Attributes:
        lower (float): Largest rho(A_w)^(1/|w|) found
        upper (float): Smallest lambda_T found over the norm menu
        witness_norm (str): Norm giving the upper bound, or 'lie-solvable' for the Lie certificate
        T (int): Product length giving the upper bound
        attained (Attained): yes when certified, unknown otherwise
        certificate (str): Human readable justification
        lie (LieClosureReport): Closure report when it was computed
    """
    lower: float
    upper: float
    witness_norm: str
    T: int
    attained: Attained = Attained.UNKNOWN
    certificate: str = ''
    lie: LieClosureReport | None = field(default=None, repr=False)

    @property
    def value(self):
        """The bound used downstream: the upper bound (equal to lambda* when attained)"""
        return self.upper

    @property
    def is_attained(self):
        return self.attained == Attained.YES

    def as_dict(self):
        report = {
            'lower': self.lower,
            'upper': self.upper,
            'witness_norm': self.witness_norm,
            'T': self.T,
            'attained': self.attained.value,
            'certificate': self.certificate,
        }
        if self.lie is not None:
            report['lie'] = {
                'dimension': len(self.lie.basis),
                'derived_dims': self.lie.derived_dims,
                'solvable': self.lie.solvable,
            }
        return report


# Product enumeration

def _integer_stack(rep):
    denominator = 1
    for m in rep.A:
        for v in m.flat():
            denominator = lcm(denominator, v.denominator)
    stack = np.array(
        [[[int(v * denominator) for v in row] for row in m.entries] for m in rep.A], dtype=object
    )
    return stack, denominator


def _word_products(rep, T, exact, chunk=4096):
    """Yield (first word index, stack of products A_w) for all |w| = T in lexicographic order"""
    B, d = rep.radix, rep.dim
    if exact:
        stack, _ = _integer_stack(rep)
    else:
        stack = rep.stack()
    if T == 0:
        yield 0, np.eye(d, dtype=object if exact else complex)[None]
        return
    prefixes = stack
    for _ in range(T - 2):
        prefixes = (prefixes[:, None] @ stack[None]).reshape(-1, d, d)
    if T == 1:
        yield 0, stack
        return
    for first in range(0, len(prefixes), chunk):
        block = (prefixes[first:first + chunk, None] @ stack[None]).reshape(-1, d, d)
        yield first * B, block


def _exact_norms(block, kind):
    absolute = np.abs(block)
    if kind == 'one':
        return absolute.sum(axis=1).max(axis=1)
    return absolute.sum(axis=2).max(axis=1)


def max_product_norm(rep, T, kind, budget=10 ** 6):
    """
    max over |w| = T of ||A_w|| and one maximizing word index.

    Exact (a Fraction) for rational representations under the one and
    infinity norms; a float otherwise.
    """
    if kind not in NORM_KINDS:
        raise ValueError(f"unknown norm kind {kind!r}")
    count = rep.radix ** T
    if count > budget:
        raise BudgetExceeded(f"{rep.radix}**{T} products exceed the budget {budget}")
    exact = rep.domain == RATIONAL and kind != 'two'
    best, best_index = None, 0
    for first, block in _word_products(rep, T, exact):
        if exact:
            norms = _exact_norms(block, kind)
        elif kind == 'two':
            norms = two_norm(np.asarray(block, dtype=complex))
        else:
            norms = _exact_norms(np.asarray(block, dtype=complex), kind)
        position = int(np.argmax(norms)) if not exact else max(range(len(norms)), key=lambda i: norms[i])
        if best is None or norms[position] > best:
            best, best_index = norms[position], first + position
    if exact:
        _, denominator = _integer_stack(rep)
        best = Fraction(int(best), denominator ** T)
    else:
        best = float(best)
    return best, best_index


def lambda_T(rep, T, kind, budget=10 ** 6):
    """max over |w| = T of ||A_w||^(1/T) under the chosen induced norm"""
    best, _ = max_product_norm(rep, T, kind, budget)
    return float(best) ** (1.0 / T)


def jsr_lower_bound(rep, T_max, budget=10 ** 6):
    """max over words of length 1..T_max of rho(A_w)^(1/|w|)"""
    total = sum(rep.radix ** T for T in range(1, T_max + 1))
    if total > budget:
        raise BudgetExceeded(f"{total} products exceed the budget {budget}")
    best = 0.0
    for T in range(1, T_max + 1):
        for _, block in _word_products(rep, T, exact=False):
            radii = np.abs(np.linalg.eigvals(np.asarray(block, dtype=complex))).max(axis=1)
            best = max(best, float(radii.max()) ** (1.0 / T))
    return best


def _digits(index, radix, T):
    return [(index // radix ** (T - 1 - i)) % radix for i in range(T)]


# Lie algebra closure

def lie_algebra_closure(mats, tol=DEFAULT_TOLERANCE):
    """Bracket closure of mats and the dimensions of its derived series"""
    mats = list(mats)
    if not mats:
        return LieClosureReport([], [0], True)
    domain = common_domain(mats)
    size = mats[0].rows * mats[0].cols
    span = make_span(size, domain, tol)
    basis = []
    for m in mats:
        if span.add(m.flat()):
            basis.append(m)
    k = 0
    while k < len(basis):
        for i in range(k):
            bracket = lie_bracket(basis[i], basis[k])
            if span.add(bracket.flat()):
                basis.append(bracket)
        k += 1

    derived_dims = [len(basis)]
    current = basis
    while derived_dims[-1] > 0:
        span = make_span(size, domain, tol)
        following = []
        for i in range(len(current)):
            for j in range(i + 1, len(current)):
                bracket = lie_bracket(current[i], current[j])
                if span.add(bracket.flat()):
                    following.append(bracket)
        if len(following) == derived_dims[-1]:
            break
        derived_dims.append(len(following))
        current = following
    solvable = derived_dims[-1] == 0
    logger.debug("Lie closure dimension %d, derived series %s", len(basis), derived_dims)
    return LieClosureReport(basis, derived_dims, solvable)


# Estimate

def jsr_estimate(rep, budget=10 ** 6, T_max=4, tol=DEFAULT_TOLERANCE):
    """
    Combine product bounds and the solvable Lie algebra shortcut.

    Bounds coinciding within tol certify attainment; otherwise a solvable
    Lie algebra certifies lambda* = max_r rho(A_r).
    """
    B = rep.radix
    while T_max > 1 and sum(B ** T for T in range(1, T_max + 1)) > budget:
        T_max -= 1
    lower = jsr_lower_bound(rep, T_max, budget)
    upper, witness, witness_T, witness_word = None, None, None, None
    for T in range(1, T_max + 1):
        for kind in NORM_KINDS:
            best, index = max_product_norm(rep, T, kind, budget)
            value = float(best) ** (1.0 / T)
            if upper is None or value < upper - 1e-15:
                upper, witness, witness_T, witness_word = value, kind, T, _digits(index, B, T)
    upper = max(upper, lower)

    if abs(upper - lower) <= tol * max(1.0, upper):
        estimate = JsrEstimate(
            lower, upper, witness, witness_T, Attained.YES,
            f"lambda_{witness_T} under the {witness} norm meets the spectral lower bound "
            f"(extremal word {witness_word})",
        )
        logger.debug("jsr attained by bound coincidence: %.17g", upper)
        return estimate

    lie = lie_algebra_closure(rep.A, tol)
    if lie.solvable:
        radius = max(spectral_radius(m, tol) for m in rep.A)
        return JsrEstimate(
            radius, radius, 'lie-solvable', 1, Attained.YES,
            f"solvable Lie algebra (derived dimensions {lie.derived_dims}); "
            f"lambda* is the largest spectral radius of the digit matrices",
            lie,
        )
    return JsrEstimate(
        lower, upper, witness, witness_T, Attained.UNKNOWN,
        f"bounds from products of length <= {T_max}; extremal word {witness_word}",
        lie,
    )

