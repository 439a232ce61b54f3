"""Truncated q-expansions of elliptic modular forms on SL2(Z)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import as_rat, bernoulli, check_prime, reduce_int
from .linalg import solve_in_span
from .reports import FiltrationReport


class WeightMismatch(ValueError):
    pass


@dataclass(frozen=True)
class QSeries:
    """q-expansion exact for 0 <= n <= trunc; coefficients stored densely."""

    weight: int
    trunc: int
    coeffs: tuple
    is_quasi: bool = False
    name: str = ""

    def __post_init__(self):
        if len(self.coeffs) != self.trunc + 1:
            raise ValueError("coefficient vector length must be trunc + 1")

    @classmethod
    def from_dict(cls, weight, trunc, data, is_quasi=False, name=""):
        c = [Fraction(0)] * (trunc + 1)
        for n, v in data.items():
            if not 0 <= n <= trunc:
                raise ValueError(f"key {n} outside 0..{trunc}")
            c[n] = as_rat(v)
        return cls(weight, trunc, tuple(c), is_quasi, name)

    @classmethod
    def one(cls, trunc):
        return cls(0, trunc, (Fraction(1),) + (Fraction(0),) * trunc, False, "1")

    def coeff(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        if n > self.trunc:
            raise IndexError(f"coefficient {n} beyond truncation {self.trunc}")
        return self.coeffs[n]

    def items(self):
        return {n: c for n, c in enumerate(self.coeffs) if c}

    def truncate(self, N: int) -> "QSeries":
        N = min(N, self.trunc)
        return QSeries(self.weight, N, self.coeffs[:N + 1], self.is_quasi, self.name)

    def mod_array(self, p: int, N: int | None = None) -> np.ndarray:
        N = self.trunc if N is None else N
        if N > self.trunc:
            raise IndexError(f"need {N} coefficients, have {self.trunc}")
        return np.array([reduce_int(c, p) for c in self.coeffs[:N + 1]], dtype=np.int64)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(-1, other))

    def __neg__(self):
        return scale(-1, self)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return mul(self, other)
        if isinstance(other, (int, Fraction)):
            return scale(other, self)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self.weight, self.trunc, self.coeffs, self.is_quasi) == (
            other.weight, other.trunc, other.coeffs, other.is_quasi)

    def __hash__(self):
        return hash((self.weight, self.trunc, self.coeffs))


def _sigma(n: int, e: int) -> int:
    s = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            s += d ** e
            if d * d != n:
                s += (n // d) ** e
        d += 1
    return s


@lru_cache(maxsize=64)
def eisenstein(k: int, N0: int) -> QSeries:
    """E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n, exact to q^N0."""
    if k < 2 or k % 2:
        raise ValueError("Eisenstein weight must be even and >= 2")
    c = Fraction(-2 * k) / bernoulli(k)
    coeffs = (Fraction(1),) + tuple(c * _sigma(n, k - 1) for n in range(1, N0 + 1))
    return QSeries(k, N0, coeffs, k == 2, f"E{k}")


def delta(N0: int) -> QSeries:
    E4, E6 = eisenstein(4, N0), eisenstein(6, N0)
    d = scale(Fraction(1, 1728), add(mul(mul(E4, E4), E4), scale(-1, mul(E6, E6))))
    return QSeries(12, N0, d.coeffs, False, "Delta")


def mul(f: QSeries, g: QSeries) -> QSeries:
    N = min(f.trunc, g.trunc)
    a, b = f.coeffs, g.coeffs
    nz = [i for i in range(N + 1) if a[i]]
    out = [Fraction(0)] * (N + 1)
    for i in nz:
        ai = a[i]
        for j in range(N + 1 - i):
            if b[j]:
                out[i + j] += ai * b[j]
    return QSeries(f.weight + g.weight, N, tuple(out), f.is_quasi or g.is_quasi)


def add(f: QSeries, g: QSeries) -> QSeries:
    if f.weight != g.weight:
        raise WeightMismatch(f"cannot add weights {f.weight} and {g.weight}")
    N = min(f.trunc, g.trunc)
    return QSeries(f.weight, N, tuple(f.coeffs[i] + g.coeffs[i] for i in range(N + 1)),
                   f.is_quasi or g.is_quasi)


def scale(c, f: QSeries) -> QSeries:
    c = as_rat(c)
    return QSeries(f.weight, f.trunc, tuple(c * x for x in f.coeffs), f.is_quasi)


def monomial_basis(k: int) -> list[tuple[int, int]]:
    """All (a, b) with 4a + 6b = k, a descending."""
    if k < 0 or k % 2:
        return []
    return [(a, (k - 4 * a) // 6) for a in range(k // 4, -1, -1) if (k - 4 * a) % 6 == 0]


def sturm_bound(k: int) -> int:
    return k // 12 + 1


def mod_poly_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Truncated product of two coefficient vectors over F_p."""
    N = min(len(a), len(b))
    return np.convolve(a[:N], b[:N])[:N] % p if N else a[:0]


class _MonomialCache:
    """E4^a E6^b reduced mod p, cached per (p, length)."""

    def __init__(self, p: int, N: int):
        self.p, self.N = p, N
        self.e4 = eisenstein(4, N).mod_array(p)
        self.e6 = eisenstein(6, N).mod_array(p)
        self._pow4 = [np.eye(1, N + 1, 0, dtype=np.int64)[0]]
        self._pow6 = [np.eye(1, N + 1, 0, dtype=np.int64)[0]]
        self._mono: dict = {}

    def _power(self, table, base, e):
        while len(table) <= e:
            table.append(mod_poly_mul(table[-1], base, self.p))
        return table[e]

    def get(self, a: int, b: int) -> np.ndarray:
        key = (a, b)
        if key not in self._mono:
            self._mono[key] = mod_poly_mul(self._power(self._pow4, self.e4, a),
                                           self._power(self._pow6, self.e6, b), self.p)
        return self._mono[key]

    def space(self, k: int) -> list[tuple[str, np.ndarray]]:
        return [(f"E4^{a}*E6^{b}", self.get(a, b)) for a, b in monomial_basis(k)]



@lru_cache(maxsize=32)
def monomials_mod_p(p: int, N: int) -> _MonomialCache:
    return _MonomialCache(p, N)


def elliptic_filtration(f: QSeries, p: int) -> FiltrationReport:
    """Least weight in the class of weight(f) mod p-1 realizing f mod p."""
    check_prime(p)
    if f.is_quasi:
        raise ValueError("filtration is defined for modular forms, not quasi-modular series")
    k = f.weight
    bound = sturm_bound(k)
    if f.trunc < bound:
        raise ValueError(f"need coefficients to n = {bound}, have {f.trunc}")
    full = f.mod_array(p)
    if not full.any():
        return FiltrationReport(f.name or "f", p, None, (), (), f.trunc, True)
    target = full[:bound + 1]
    cache = monomials_mod_p(p, bound)
    tested = []
    for kk in range(k % (p - 1), k + 1, p - 1):
        tested.append(kk)
        space = cache.space(kk)
        if not space:
            continue
        A = np.column_stack([v for _, v in space])
        x = solve_in_span(A, target, p)
        if x is not None:
            wit = tuple((lab, int(c)) for (lab, _), c in zip(space, x) if c)
            return FiltrationReport(f.name or "f", p, kk, tuple(tested), wit, bound, True)
    raise ValueError(f"{f.name or 'series'} is not a modular form of weight {k} mod {p}")
