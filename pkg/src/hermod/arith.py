"""Exact rationals, prime fields, Legendre symbols and Bernoulli numbers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, isqrt

# Coefficients are plain Fractions: always reduced, denominator positive,
# zero stored as 0/1.  p-integrality is only checked when reducing.
Rat = Fraction


class NotPIntegral(ArithmeticError):
    """Raised when a rational with denominator divisible by p is reduced mod p."""

    def __init__(self, value, p):
        super().__init__(f"{value} is not {p}-integral")
        self.value = value
        self.p = p


class ModulusMismatch(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def check_prime(p: int) -> int:
    """Validate that p is a prime >= 5 and return it."""
    if not isinstance(p, int) or p < 5 or not is_prime(p):
        raise ValueError(f"modulus must be a prime >= 5, got {p!r}")
    return p


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


@dataclass(frozen=True)
class FpElem:
    residue: int
    modulus: int

    def __post_init__(self):
        check_prime(self.modulus)
        if not 0 <= self.residue < self.modulus:
            raise ValueError(f"residue {self.residue} out of range mod {self.modulus}")

    @classmethod
    def of(cls, value: int, p: int) -> "FpElem":
        return cls(value % p, p)

    def _coerce(self, other) -> int:
        if isinstance(other, FpElem):
            if other.modulus != self.modulus:
                raise ModulusMismatch(f"cannot mix F_{self.modulus} and F_{other.modulus}")
            return other.residue
        if isinstance(other, int):
            return other % self.modulus
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElem((self.residue + o) % self.modulus, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElem((self.residue - o) % self.modulus, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElem((o - self.residue) % self.modulus, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElem(self.residue * o % self.modulus, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElem(-self.residue % self.modulus, self.modulus)

    def inverse(self) -> "FpElem":
        if self.residue == 0:
            raise ZeroDivisionError("zero has no inverse in F_p")
        return FpElem(pow(self.residue, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * FpElem(o, self.modulus).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FpElem(pow(self.residue, e, self.modulus), self.modulus)

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"{self.residue} (mod {self.modulus})"


def reduce_int(x, p: int) -> int:
    """Residue of a p-integral rational (or int) as a plain int in [0, p)."""
    if isinstance(x, int):
        return x % p
    x = as_rat(x)
    if x.denominator % p == 0:
        raise NotPIntegral(x, p)
    return x.numerator * pow(x.denominator, -1, p) % p


def reduce_mod_p(x, p: int) -> FpElem:
    check_prime(p)
    return FpElem(reduce_int(x, p), p)


def is_p_integral(x, p: int) -> bool:
    return as_rat(x).denominator % p != 0


def legendre(b: int, p: int) -> int:
    """Legendre symbol (b/p) via Euler's criterion."""
    check_prime(p)
    t = pow(b % p, (p - 1) // 2, p)
    return -1 if t == p - 1 else t


@lru_cache(maxsize=None)
def _bernoulli_rec(n: int) -> Fraction:
    if n == 0:
        return Fraction(1)
    return -sum(comb(n + 1, j) * _bernoulli_rec(j) for j in range(n)) / (n + 1)


def bernoulli(n: int) -> Fraction:
    """B_n from sum_{j<=n} C(n+1, j) B_j = 0 (so B_1 = -1/2)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _bernoulli_rec(n)


def bernoulli_akiyama_tanigawa(n: int) -> Fraction:
    """Independent algorithm; returns B_n with the B_1 = +1/2 convention."""
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]
