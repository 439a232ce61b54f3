"""Degree-2 Hermitian modular forms over Q(i) with character det^(k/2).

A form is held as its Fourier-Jacobi slices phi_0, phi_1, ..., each an
HJForm of index m exact for n <= t0 - m, so the stored coefficients are
exactly those A(n, r, m) with n + m <= t0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np
from scipy.signal import fftconvolve

from .arith import as_rat, reduce_int
from .hjf import UNITS, HJForm, InvariantViolation, heat, rotate


class IndexBeyondTruncation(IndexError):
    pass


def slice_parity(k: int) -> str:
    return "+" if k % 4 == 0 else "-"


@dataclass(frozen=True, eq=False)
class HMForm:
    weight: int
    t0: int
    slices: tuple
    tag: str = ""
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if len(self.slices) != self.t0 + 1:
            raise ValueError("need one Fourier-Jacobi slice per m = 0..t0")
        for m, s in enumerate(self.slices):
            if s.index != m or s.trunc != self.t0 - m:
                raise ValueError(f"slice {m} has index {s.index} and truncation {s.trunc}")

    @classmethod
    def from_flat(cls, weight: int, t0: int, data, tag="", name="") -> "HMForm":
        buckets = [dict() for _ in range(t0 + 1)]
        for (n, a1, a2, m), v in data.items():
            if n < 0 or m < 0 or n + m > t0:
                raise InvariantViolation("trace truncation", (n, a1, a2, m))
            if a1 * a1 + a2 * a2 > 4 * n * m:
                raise InvariantViolation("support T >= 0", (n, a1, a2, m))
            buckets[m][(n, a1, a2)] = v
        par = slice_parity(weight)
        slices = tuple(HJForm(weight, m, par, t0 - m, buckets[m]) for m in range(t0 + 1))
        return cls(weight, t0, slices, tag, name)

    @property
    def coeffs(self) -> dict:
        """Flat view (n, a1, a2, m) -> coefficient."""
        if "flat" not in self._cache:
            self._cache["flat"] = {(n, a1, a2, m): v
                                   for m, s in enumerate(self.slices)
                                   for (n, a1, a2), v in s.coeffs.items()}
        return self._cache["flat"]

    def coeff(self, n: int, r, m: int) -> Fraction:
        if n + m > self.t0:
            raise IndexBeyondTruncation(f"n + m = {n + m} beyond trace {self.t0}")
        return self.coeffs.get((n, r[0], r[1], m), Fraction(0))

    def truncate(self, t: int) -> "HMForm":
        t = min(t, self.t0)
        data = {k: v for k, v in self.coeffs.items() if k[0] + k[3] <= t}
        return HMForm.from_flat(self.weight, t, data, self.tag, self.name)

    def is_zero(self) -> bool:
        return not self.coeffs

    def mod_array(self, p: int) -> np.ndarray:
        """Dense residues indexed [n, m, a1 + t0, a2 + t0]."""
        key = ("mod", p)
        if key not in self._cache:
            t = self.t0
            arr = np.zeros((t + 1, t + 1, 2 * t + 1, 2 * t + 1), dtype=np.int64)
            for (n, a1, a2, m), v in self.coeffs.items():
                arr[n, m, a1 + t, a2 + t] = reduce_int(v, p)
            arr.setflags(write=False)
            self._cache[key] = arr
        return self._cache[key]

    def with_flat(self, data, **changes) -> "HMForm":
        d = dict(weight=self.weight, t0=self.t0, tag=self.tag, name="")
        d.update(changes)
        return HMForm.from_flat(d["weight"], d["t0"], data, d["tag"], d["name"])

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(-1, other))

    def __neg__(self):
        return scale(-1, self)

    def __mul__(self, other):
        if isinstance(other, HMForm):
            return mul(self, other)
        return scale(other, self)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return scale(1 / as_rat(c), self)

    def __eq__(self, other):
        if not isinstance(other, HMForm):
            return NotImplemented
        return (self.weight, self.t0, self.coeffs) == (other.weight, other.t0, other.coeffs)

    def __repr__(self):
        return (f"<{self.name or 'HMForm'} k={self.weight} t0={self.t0} "
                f"terms={len(self.coeffs)}{' ' + self.tag if self.tag else ''}>")


def det4(n, a1, a2, m) -> int:
    return 4 * n * m - a1 * a1 - a2 * a2


def add(F: HMForm, G: HMForm) -> HMForm:
    if F.weight != G.weight:
        raise ValueError(f"cannot add weights {F.weight} and {G.weight}")
    t = min(F.t0, G.t0)
    out = {k: v for k, v in F.coeffs.items() if k[0] + k[3] <= t}
    for k, v in G.coeffs.items():
        if k[0] + k[3] <= t:
            out[k] = out.get(k, 0) + v
    return F.with_flat(out, t0=t, tag=F.tag if F.tag == G.tag else "")


def scale(c, F: HMForm) -> HMForm:
    c = as_rat(c)
    return F.with_flat({k: c * v for k, v in F.coeffs.items()})


def fj_coefficient(F: HMForm, m: int) -> HJForm:
    """The m-th Fourier-Jacobi coefficient, exact for n <= t0 - m."""
    if not 0 <= m <= F.t0:
        raise IndexBeyondTruncation(f"index {m} beyond trace truncation {F.t0}")
    return F.slices[m]


def d_op(F: HMForm) -> HMForm:
    """Multiply A(T) by 4 det(T); slice-wise this is the heat operator."""
    slices = tuple(heat(s) for s in F.slices)
    return HMForm(F.weight + 2, F.t0, slices, "heat-image")


def u_p(F: HMForm, p: int) -> HMForm:
    return F.with_flat({k: v for k, v in F.coeffs.items() if det4(*k) % p == 0})


def _integerize(F: HMForm):
    L = 1
    for v in F.coeffs.values():
        L = L * v.denominator // gcd(L, v.denominator)
    by_trace: dict = {}
    for (n, a1, a2, m), v in F.coeffs.items():
        by_trace.setdefault(n + m, []).append((n, a1, a2, m, v.numerator * (L // v.denominator)))
    return L, by_trace


def mul(F: HMForm, G: HMForm) -> HMForm:
    """Exact product; the result is exact up to the smaller trace truncation."""
    t = min(F.t0, G.t0)
    L1, f = _integerize(F)
    L2, g = _integerize(G)
    g_upto = {}
    acc = []
    for s in range(t + 1):
        acc = acc + g.get(s, [])
        g_upto[s] = acc
    out: dict = {}
    for s1, items in f.items():
        if s1 > t:
            continue
        partners = g_upto[t - s1]
        for n1, b1, b2, m1, v1 in items:
            for n2, a1, a2, m2, v2 in partners:
                key = (n1 + n2, b1 + a1, b2 + a2, m1 + m2)
                out[key] = out.get(key, 0) + v1 * v2
    L = L1 * L2
    data = {k: Fraction(v, L) for k, v in out.items() if v}
    return HMForm.from_flat(F.weight + G.weight, t, data)


def rankin_cohen_1(F1: HMForm, F2: HMForm) -> HMForm:
    """First Rankin-Cohen bracket, weight k1 + k2 + 2."""
    k1, k2 = F1.weight, F2.weight
    a = (k1 - 1) * (k2 - 1)
    b = (k2 - 1) * (k1 + k2 - 1)
    c = (k1 - 1) * (k1 + k2 - 1)
    t1 = d_op(mul(F1, F2))
    t2 = mul(d_op(F1), F2)
    t3 = mul(F1, d_op(F2))
    t = min(t1.t0, t2.t0, t3.t0)
    out: dict = {}
    for coef, T in ((a, t1), (-b, t2), (-c, t3)):
        for key, v in T.coeffs.items():
            if key[0] + key[3] <= t:
                out[key] = out.get(key, 0) + coef * v
    return HMForm.from_flat(k1 + k2 + 2, t, out)


def symmetry_violations(F: HMForm, limit: int | None = None) -> list:
    """Keys breaking conjugation, transposition or unit invariance."""
    bad = []
    cf = F.coeffs
    for (n, a1, a2, m), v in cf.items():
        partners = [(n, a1, -a2, m), (m, a1, a2, n)]
        partners += [(n,) + rotate(a1, a2, eps) + (m,) for eps in UNITS[1:]]
        for key in partners:
            if cf.get(key, Fraction(0)) != v:
                bad.append(((n, a1, a2, m), key))
                break
        if limit and len(bad) >= limit:
            break
    return bad


def singular_support(F: HMForm) -> list:
    """Keys with det T = 0 carrying a nonzero coefficient."""
    return [k for k, v in F.coeffs.items() if v and det4(*k) == 0]


# ------------------------------------------------------------ mod-p arrays

def trace_mask(t0: int) -> np.ndarray:
    n = np.arange(t0 + 1)
    return (n[:, None] + n[None, :]) <= t0


def mod_mul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Product of dense mod-p arrays of equal trace truncation."""
    t0 = A.shape[0] - 1
    if not A.any() or not B.any():
        return np.zeros_like(A)
    if (p - 1) ** 2 * A.size >= 2 ** 45:
        raise ValueError("modulus too large for floating-point convolution")
    full = fftconvolve(A.astype(np.float64), B.astype(np.float64))
    # exact: every entry is an integer below len * p^2 << 2^52
    full = np.rint(full[:t0 + 1, :t0 + 1, t0:3 * t0 + 1, t0:3 * t0 + 1]).astype(np.int64) % p
    full[~trace_mask(t0)] = 0
    return full


def det_array(t0: int) -> np.ndarray:
    n = np.arange(t0 + 1)
    a = np.arange(-t0, t0 + 1)
    return (4 * n[:, None, None, None] * n[None, :, None, None]
            - a[None, None, :, None] ** 2 - a[None, None, None, :] ** 2)


def support_mask(t0: int) -> np.ndarray:
    return (det_array(t0) >= 0) & trace_mask(t0)[:, :, None, None]
