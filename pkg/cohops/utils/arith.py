"""
Exact mod-ℓ Arithmetic

Shared arithmetic for every other module:
- PrimeContext: the prime ℓ and the twist period d = [k(ζ):k]
- Flp: an element of F_ℓ with reduced arithmetic
- binom: binomial coefficients mod ℓ via Lucas digits
- nu: the sign constant ν_n attached to the power operations
- d_index / d_to_a / d_vanishes: D_k index bookkeeping
- may_sign: the (−1)^k factor relating the two D-conventions

Usage:
    from cohops.utils.arith import PrimeContext, binom

    ctx = PrimeContext(3)
    binom(10, 4, ctx)   # Flp(0, 3)

Educational Notes:
    - All functions are pure; contexts and values are immutable.
    - Primality is checked with sympy, digits come from sympy.ntheory.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from sympy import isprime
from sympy.ntheory import digits

from cohops.utils.exceptions import DomainError, ValidationError

logger = logging.getLogger(__name__)


class Parity(str, Enum):
    """Parity of a degree."""
    EVEN = 'even'
    ODD = 'odd'

    @classmethod
    def of(cls, n: int) -> 'Parity':
        return cls.EVEN if n % 2 == 0 else cls.ODD

    def flip(self) -> 'Parity':
        return Parity.ODD if self is Parity.EVEN else Parity.EVEN


class DKind(str, Enum):
    """Which D-index family an operation reads from."""
    P = 'P'
    Q = 'Q'


@dataclass(frozen=True)
class PrimeContext:
    """
    The prime ℓ and the twist period d.

    Args:
        ell: prime number ≥ 2
        d: positive divisor of ℓ−1 (d = 1 when ℓ = 2)

    Raises:
        ValidationError: if ℓ is not prime or d does not divide ℓ−1
    """
    ell: int
    d: int = 1

    def __post_init__(self):
        if not isinstance(self.ell, int) or not isprime(self.ell):
            raise ValidationError(f"ℓ must be a prime, got {self.ell!r}")
        if not isinstance(self.d, int) or self.d < 1 or (self.ell - 1) % self.d != 0:
            raise ValidationError(f"d must be a positive divisor of ℓ−1={self.ell - 1}, got {self.d!r}")

    @property
    def is_odd(self) -> bool:
        return self.ell != 2

    @property
    def power_degree(self) -> int:
        """Degree of P^1 (2(ℓ−1)); at ℓ=2 the degree of Sq^1."""
        return 2 * (self.ell - 1) if self.is_odd else 1

    def flp(self, value: int) -> 'Flp':
        return Flp(value, self.ell)

    def require_odd(self, what: str) -> None:
        if not self.is_odd:
            raise DomainError(f"{what} is defined only for odd ℓ")


@dataclass(frozen=True)
class Flp:
    """
    An element of F_ℓ. The stored value is always reduced into {0,…,ℓ−1}.

    Compares equal to Python ints congruent mod ℓ, so `binom(7, 3, ctx) == 1`
    reads naturally in tests.
    """
    value: int
    ell: int

    def __post_init__(self):
        object.__setattr__(self, 'value', self.value % self.ell)

    def _coerce(self, other: Union['Flp', int]) -> int:
        if isinstance(other, Flp):
            if other.ell != self.ell:
                raise ValidationError(f"cannot combine F_{self.ell} and F_{other.ell} elements")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else Flp(self.value + v, self.ell)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else Flp(self.value - v, self.ell)

    def __rsub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else Flp(v - self.value, self.ell)

    def __mul__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else Flp(self.value * v, self.ell)

    __rmul__ = __mul__

    def __neg__(self):
        return Flp(-self.value, self.ell)

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return Flp(pow(self.value, exponent, self.ell), self.ell)

    def inverse(self) -> 'Flp':
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.ell}")
        return Flp(pow(self.value, self.ell - 2, self.ell), self.ell)

    def __eq__(self, other):
        if isinstance(other, Flp):
            return self.ell == other.ell and self.value == other.value
        if isinstance(other, int):
            return (other - self.value) % self.ell == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.ell))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"Flp({self.value}, {self.ell})"

    def __str__(self):
        return str(self.value)


def _base_digits(n: int, ell: int) -> list:
    """Base-ℓ digits of n, least significant first."""
    return list(reversed(digits(n, ell)[1:]))


def binom(n: int, k: int, ctx: PrimeContext) -> Flp:
    """
    Binomial coefficient C(n, k) mod ℓ.

    Zero whenever k<0, n<0 or n<k; otherwise the product of digit-wise
    binomials of the base-ℓ expansions (Lucas).

    Examples:
        >>> binom(7, 3, PrimeContext(2))
        Flp(1, 2)
        >>> binom(10, 4, PrimeContext(3))
        Flp(0, 3)
    """
    if k < 0 or n < 0 or n < k:
        return ctx.flp(0)
    n_digits = _base_digits(n, ctx.ell)
    k_digits = _base_digits(k, ctx.ell)
    k_digits += [0] * (len(n_digits) - len(k_digits))
    result = 1
    for top, bottom in zip(n_digits, k_digits):
        if bottom > top:
            return ctx.flp(0)
        result = (result * math.comb(top, bottom)) % ctx.ell
    return ctx.flp(result)


def nu(n: int, ctx: PrimeContext) -> Flp:
    """
    The sign constant ν_n = (−1)^r · ((ℓ−1)/2)!^{−n} with r = (ℓ−1)(n²+n)/4.

    r is an integer for every integer n since ℓ−1 and n²+n are both even.
    Negative n is allowed.

    Raises:
        DomainError: at ℓ = 2
    """
    ctx.require_odd("ν_n")
    m = (ctx.ell - 1) // 2
    r = (ctx.ell - 1) * (n * n + n) // 4
    sign = -1 if r % 2 else 1
    m_fact = math.factorial(m) % ctx.ell
    return ctx.flp(sign * pow(m_fact, -n, ctx.ell))


def d_index(n: int, a: int, kind: DKind, ctx: PrimeContext) -> int:
    """
    D-index of P^a (kind P) or Q^a (kind Q) on a degree-n class:
    (n−2a)(ℓ−1), minus one for Q.
    """
    ctx.require_odd("D-index bookkeeping")
    k = (n - 2 * a) * (ctx.ell - 1)
    return k - 1 if DKind(kind) is DKind.Q else k


def d_to_a(n: int, k: int, kind: DKind, ctx: PrimeContext) -> Optional[int]:
    """
    Inverse of d_index: the a with d_index(n, a, kind) == k, or None when
    k has no corresponding operation.
    """
    ctx.require_odd("D-index bookkeeping")
    shifted = k + 1 if DKind(kind) is DKind.Q else k
    if shifted % (ctx.ell - 1) != 0:
        return None
    m = shifted // (ctx.ell - 1)
    if (n - m) % 2 != 0:
        return None
    a = (n - m) // 2
    return a if a >= 0 else None


def d_vanishes(n_parity: Parity, s: int, ctx: PrimeContext) -> bool:
    """
    True iff no m ≥ 0 of the given parity has s = m(ℓ−1) or s = m(ℓ−1)−1,
    i.e. D_s(u) vanishes on a class of that parity.
    """
    ctx.require_odd("D-index bookkeeping")
    wanted = Parity(n_parity)
    for candidate in (s, s + 1):
        if candidate % (ctx.ell - 1) != 0:
            continue
        m = candidate // (ctx.ell - 1)
        if m >= 0 and Parity.of(m) is wanted:
            return False
    return True


def may_sign(k: int, ctx: PrimeContext) -> Flp:
    """(−1)^k mod ℓ, relating D^M_k = (−1)^k D_k."""
    return ctx.flp(-1 if k % 2 else 1)


def signed(k: int) -> int:
    """(−1)^k as a Python int."""
    return -1 if k % 2 else 1
