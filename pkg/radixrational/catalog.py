"""
Builders for the worked representations and independent term oracles.

Oracles compute terms from their definition (digit counts, pattern counts,
substitution words) and never go through a linear representation; tests
and `infer --generator` compare against them.
"""
import cmath
import dataclasses
import math
from fractions import Fraction
from pathlib import Path

from .exceptions import UnsupportedOperation
from .linrep import LinearRep, radix_power, substitution_to_linrep


# Shipped representation files
REPRESENTATIONS_DIR = Path(__file__).resolve().parent / 'representations'


def representation_path(name):
    return REPRESENTATIONS_DIR / f"{name}.json"


# Representations

def sum_of_digits(radix=2):
    """u(n) = sum of the radix digits of n"""
    A = [[[1, r], [0, 1]] for r in range(radix)]
    return LinearRep.build(radix, [1, 0], A, [0, 1], name='sum-of-digits')


def thue_morse():
    """(-1)^{s_2(n)}: the fixed point of a -> ab, b -> ba with a = 1, b = -1"""
    rep = substitution_to_linrep({'a': 'ab', 'b': 'ba'}, {'a': 1, 'b': -1}, 'a')
    return dataclasses.replace(rep, name='thue-morse')


def period_doubling():
    rep = substitution_to_linrep({'a': 'ab', 'b': 'aa'}, {'a': 0, 'b': 1}, 'a')
    return dataclasses.replace(rep, name='period-doubling')


def rudin_shapiro():
    """(-1) to the number of overlapping 11 blocks"""
    A0 = [[1, 1], [0, 0]]
    A1 = [[0, 0], [1, -1]]
    return LinearRep.build(2, [1, 1], [A0, A1], [1, 0], name='rudin-shapiro')


def rudin_shapiro4():
    """Rudin-Shapiro read two binary digits at a time (Q^2 = 2I)"""
    rep = radix_power(rudin_shapiro(), 2)
    return dataclasses.replace(rep, name='rudin-shapiro4')


def multiples_of_three():
    """Indicator of 3 | n; state = n mod 3 permuted by each digit"""
    A0 = [[1, 0, 0], [0, 0, 1], [0, 1, 0]]
    A1 = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
    return LinearRep.build(2, [1, 0, 0], [A0, A1], [1, 0, 0], name='multiples-of-three')


def mergesort():
    """Difference sequence of the worst-case number of comparisons of mergesort"""
    A0 = [[0, -1, -1, -1], [1, 2, 1, 1], [0, 0, 1, 0], [0, 0, 0, 1]]
    A1 = [[0, 0, 1, 1], [0, 0, -1, -1], [1, 0, -1, -2], [0, 1, 2, 3]]
    return LinearRep.build(2, [0, 0, 0, 1], [A0, A1], [1, 0, 0, 0], name='mergesort')


def billingsley(p0=Fraction(1, 4)):
    """Weights p0, p1 = 1 - p0 on the binary digits; S_K is a distribution function"""
    p0 = Fraction(p0)
    if not 0 < p0 < 1:
        raise ValueError("p0 must lie in (0, 1)")
    return LinearRep.build(2, [1], [[[p0]], [[1 - p0]]], [1], name=f'billingsley-{p0}')


def _rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return [[complex(c), complex(-s)], [complex(s), complex(c)]]


def triangular_tiling(theta=math.pi / 3):
    """Rotations by -theta and theta; rho = lambda* = 1 so no dilation solution exists"""
    hints = [complex(2 * math.cos(theta))]
    return LinearRep.build(
        2, [1, 0], [_rotation(-theta), _rotation(theta)], [1, 0],
        name='triangular-tiling', eigen_hints=hints, domain='complex',
    )


def powers_of_two():
    """Indicator of n being a power of 2"""
    return LinearRep.build(2, [0, 1], [[[1, 0], [0, 1]], [[0, 0], [1, 0]]], [1, 0], name='powers-of-two')


def lipmaa_wallen():
    """Radix-8 representation with eigenvalues 4, 2 (x3) and 1 (x4)"""
    quarter = Fraction(1, 4)
    base = [[Fraction(0)] * 8 for _ in range(8)]
    base[0][0] = Fraction(1)
    for i, j in ((0, 3), (0, 5), (0, 6), (1, 3), (1, 5), (2, 3), (2, 6), (3, 3), (4, 5), (4, 6), (5, 5), (6, 6)):
        base[i][j] = quarter
    A = [[[base[i ^ r][j ^ r] for j in range(8)] for i in range(8)] for r in range(8)]
    return LinearRep.build(8, [1] * 8, A, [1] + [0] * 7, name='lipmaa-wallen')


def vdc_discrepancy():
    """Discrepancy of the van der Corput sequence"""
    half = Fraction(1, 2)
    A0 = [[1, half, 0], [0, half, 0], [0, half, 1]]
    A1 = [[half, 0, 0], [half, 1, 0], [half, 0, 1]]
    return LinearRep.build(2, [0, 1, 1], [A0, A1], [1, 0, 0], name='vdc-discrepancy')


def coquet():
    """Radix-4 representation of (-1)^{s_2(3n)}; Q has eigenvalues 3, 3, 0"""
    A0 = [[1, 1, 1], [0, 0, 0], [0, 0, 0]]
    A1 = [[1, 0, 0], [0, 1, -1], [0, 0, 0]]
    A2 = [[0, 0, 0], [1, 1, 0], [0, 0, 1]]
    A3 = [[0, 0, 0], [0, 0, 0], [1, -1, 1]]
    return LinearRep.build(4, [1, 1, 1], [A0, A1, A2, A3], [1, 0, 0], name='coquet')


def identity_sum(radix=2):
    """u(n) = n"""
    A = [[[radix, 0], [r, 1]] for r in range(radix)]
    return LinearRep.build(radix, [0, 1], A, [1, 0], name=f'identity-{radix}')


def rescaled_identity(radix=2):
    """u(n) = n / B^(number of digits of n)"""
    A = [[[1, 0], [Fraction(r, radix), Fraction(1, radix)]] for r in range(radix)]
    return LinearRep.build(radix, [0, 1], A, [1, 0], name=f'rescaled-identity-{radix}')


def rosette(theta=2 * math.pi / 5):
    """A_0 = cos(theta) I and A_1 = sin(theta) times the quarter turn; Q is the rotation by theta"""
    if abs(math.remainder(theta, math.pi / 2)) < 1e-12:
        raise UnsupportedOperation("rosettes need theta outside the multiples of pi/2")
    c, s = math.cos(theta), math.sin(theta)
    A0 = [[complex(c), 0j], [0j, complex(c)]]
    A1 = [[0j, complex(-s)], [complex(s), 0j]]
    hints = [cmath.exp(1j * theta), cmath.exp(-1j * theta)]
    return LinearRep.build(
        2, [1, 0], [A0, A1], [1, 0], name=f'rosette-{theta:.6g}', eigen_hints=hints, domain='complex',
    )


BUILDERS = {
    'sum-of-digits': sum_of_digits,
    'thue-morse': thue_morse,
    'period-doubling': period_doubling,
    'rudin-shapiro': rudin_shapiro,
    'rudin-shapiro4': rudin_shapiro4,
    'multiples-of-three': multiples_of_three,
    'mergesort': mergesort,
    'billingsley': billingsley,
    'triangular-tiling': triangular_tiling,
    'powers-of-two': powers_of_two,
    'lipmaa-wallen': lipmaa_wallen,
    'vdc-discrepancy': vdc_discrepancy,
    'coquet': coquet,
    'identity': identity_sum,
    'rescaled-identity': rescaled_identity,
    'rosette': rosette,
}


# Oracles

def popcount(n):
    return bin(n).count('1')


def constant(n):
    return 1


def rudin_shapiro_term(n):
    """(-1) to the number of overlapping 11 blocks in binary"""
    return (-1) ** bin(n & (n >> 1)).count('1')


def thue_morse_term(n):
    return (-1) ** popcount(n)


def period_doubling_term(n):
    """Parity of the 2-adic valuation of n + 1"""
    m, valuation = n + 1, 0
    while m % 2 == 0:
        m //= 2
        valuation += 1
    return valuation % 2


GENERATORS = {
    'popcount': popcount,
    'constant': constant,
    'rudin-shapiro': rudin_shapiro_term,
    'thue-morse': thue_morse_term,
    'period-doubling': period_doubling_term,
}
