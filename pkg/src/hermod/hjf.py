"""Hermitian Jacobi forms over Q(i) as truncated Fourier expansions.

A form of index m has coefficients c(n, r) with r = (a1 + a2 i)/2 and is
supported on D(n, r) = 4nm - a1^2 - a2^2 >= 0.  Keys are stored as plain
(n, a1, a2) tuples; only nonzero coefficients are kept.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Mapping, NamedTuple

import numpy as np

from .arith import as_rat, reduce_int
from .qexp import QSeries

UNITS = ((1, 0), (0, 1), (-1, 0), (0, -1))  # 1, i, -1, -i as (re, im)


class InvariantViolation(ValueError):
    def __init__(self, rule: str, key, detail: str = ""):
        msg = f"{rule} violated at {key}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.rule = rule
        self.key = key


class HalfGauss(NamedTuple):
    """r = (a1 + a2 i)/2 in the inverse different of Z[i]."""

    a1: int
    a2: int

    @property
    def norm4(self) -> int:
        return self.a1 * self.a1 + self.a2 * self.a2

    def conj(self) -> "HalfGauss":
        return HalfGauss(self.a1, -self.a2)

    def times(self, rho) -> "HalfGauss":
        x, y = rho
        return HalfGauss(x * self.a1 - y * self.a2, x * self.a2 + y * self.a1)


def gauss_mul(u, v):
    return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def gauss_pow(u, e: int):
    if e < 0:
        # units only: u^-1 = conj(u)
        return gauss_pow((u[0], -u[1]), -e)
    out = (1, 0)
    for _ in range(e):
        out = gauss_mul(out, u)
    return out


def unit_factor(eps, k: int, parity: str):
    """sigma(eps) * eps^(-k) as a Gaussian integer."""
    f = gauss_pow(eps, -k)
    if parity == "-":
        f = gauss_mul(f, gauss_mul(eps, eps))
    return f


def flip_parity(parity: str) -> str:
    return "-" if parity == "+" else "+"


def symmetry_type(k: int, parity: str) -> int:
    """+1 if c(n, ir) = c(n, r) under the unit rule for (k, parity), else -1."""
    s = 1 if parity == "+" else -1
    return s if k % 4 == 0 else -s


def parity_for(sym: int, k: int) -> str:
    """Parity whose unit rule at even weight k has the given symmetry type."""
    return "+" if symmetry_type(k, "+") == sym else "-"


def rotate(a1: int, a2: int, eps):
    """Coordinates of eps * r for r = (a1 + a2 i)/2."""
    x, y = eps
    return x * a1 - y * a2, x * a2 + y * a1


def lattice_keys(index: int, trunc: int):
    """All (n, a1, a2) with 0 <= n <= trunc and a1^2 + a2^2 <= 4 n index."""
    out = []
    for n in range(trunc + 1):
        R = isqrt(4 * n * index)
        for a1 in range(-R, R + 1):
            lim = 4 * n * index - a1 * a1
            b = isqrt(lim)
            for a2 in range(-b, b + 1):
                out.append((n, a1, a2))
    return out


@dataclass(frozen=True, eq=False)
class HJForm:
    weight: int
    index: int
    parity: str
    trunc: int
    coeffs: Mapping
    tag: str = ""
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.parity not in "+-" or len(self.parity) != 1:
            raise ValueError(f"parity must be '+' or '-', got {self.parity!r}")
        if self.index < 0 or self.trunc < 0:
            raise ValueError("index and truncation must be non-negative")
        clean = {}
        m = self.index
        for key, v in self.coeffs.items():
            n, a1, a2 = key
            if not 0 <= n <= self.trunc:
                raise InvariantViolation("truncation", key, f"n outside 0..{self.trunc}")
            if a1 * a1 + a2 * a2 > 4 * m * n:
                raise InvariantViolation("support N(r) <= mn", key)
            v = as_rat(v)
            if v:
                clean[(int(n), int(a1), int(a2))] = v
        object.__setattr__(self, "coeffs", clean)

    # basic access

    def coeff(self, n: int, r) -> Fraction:
        a1, a2 = r
        if n > self.trunc:
            raise IndexError(f"n = {n} beyond truncation {self.trunc}")
        return self.coeffs.get((n, a1, a2), Fraction(0))

    def disc(self, n: int, a1: int, a2: int) -> int:
        return 4 * n * self.index - a1 * a1 - a2 * a2

    def radius(self) -> int:
        return isqrt(4 * self.index * self.trunc)

    def is_zero(self) -> bool:
        return not self.coeffs

    def same_type(self, **changes) -> dict:
        d = dict(weight=self.weight, index=self.index, parity=self.parity,
                 trunc=self.trunc, tag=self.tag, name="")
        d.update(changes)
        return d

    def with_coeffs(self, coeffs, **changes) -> "HJForm":
        return HJForm(coeffs=coeffs, **self.same_type(**changes))

    def truncate(self, N: int) -> "HJForm":
        N = min(N, self.trunc)
        return self.with_coeffs({k: v for k, v in self.coeffs.items() if k[0] <= N}, trunc=N)

    def mod_array(self, p: int) -> np.ndarray:
        """Dense residues indexed [n, a1 + R, a2 + R] with R = radius()."""
        key = ("mod", p)
        if key not in self._cache:
            R = self.radius()
            arr = np.zeros((self.trunc + 1, 2 * R + 1, 2 * R + 1), dtype=np.int64)
            for (n, a1, a2), v in self.coeffs.items():
                arr[n, a1 + R, a2 + R] = reduce_int(v, p)
            arr.setflags(write=False)
            self._cache[key] = arr
        return self._cache[key]

    def integer_array(self):
        """(denominator L, object array of numerators) for exact dense work."""
        if "int" not in self._cache:
            L = 1
            for v in self.coeffs.values():
                L = L * v.denominator // gcd(L, v.denominator)
            R = self.radius()
            arr = np.zeros((self.trunc + 1, 2 * R + 1, 2 * R + 1), dtype=object)
            arr[...] = 0
            for (n, a1, a2), v in self.coeffs.items():
                arr[n, a1 + R, a2 + R] = v.numerator * (L // v.denominator)
            self._cache["int"] = (L, arr)
        return self._cache["int"]

    # arithmetic

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(-1, other))

    def __neg__(self):
        return scale(-1, self)

    def __mul__(self, other):
        if isinstance(other, HJForm):
            return mul_hjf(self, other)
        if isinstance(other, QSeries):
            return mul_qseries(other, self)
        return scale(other, self)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return scale(1 / as_rat(c), self)

    def __eq__(self, other):
        if not isinstance(other, HJForm):
            return NotImplemented
        return (self.weight, self.index, self.parity, self.trunc, self.coeffs) == (
            other.weight, other.index, other.parity, other.trunc, other.coeffs)

    def __repr__(self):
        label = self.name or "HJForm"
        return (f"<{label} k={self.weight} m={self.index} {self.parity} "
                f"trunc={self.trunc} terms={len(self.coeffs)}{' ' + self.tag if self.tag else ''}>")


def _from_int_array(L, arr, R) -> dict:
    out = {}
    nz = np.argwhere(arr != 0)
    for n, i, j in nz:
        v = arr[n, i, j]
        out[(int(n), int(i) - R, int(j) - R)] = Fraction(v, L)
    return out


@dataclass(frozen=True)
class JacobiForm:
    """Classical Jacobi form of scalar index with coefficients c(n, a)."""

    weight: int
    index: int
    trunc: int
    coeffs: Mapping

    def __post_init__(self):
        clean = {}
        for (n, a), v in self.coeffs.items():
            if a * a > 4 * self.index * n:
                raise InvariantViolation("support a^2 <= 4Mn", (n, a))
            if v:
                clean[(n, a)] = as_rat(v)
        object.__setattr__(self, "coeffs", clean)


@dataclass(frozen=True)
class MatrixJacobiForm:
    """Jacobi form of matrix index diag(m, m) with coefficients c(n, s)."""

    weight: int
    index: int
    trunc: int
    coeffs: Mapping

    def __post_init__(self):
        m = self.index
        clean = {}
        for (n, s1, s2), v in self.coeffs.items():
            if 4 * m * m * n - m * (s1 * s1 + s2 * s2) < 0:
                raise InvariantViolation("support 4 det(B) n - B#[s] >= 0", (n, s1, s2))
            if v:
                clean[(n, s1, s2)] = as_rat(v)
        object.__setattr__(self, "coeffs", clean)


# ---------------------------------------------------------------- linear ops

def add(f: HJForm, g: HJForm) -> HJForm:
    if (f.weight, f.index, f.parity) != (g.weight, g.index, g.parity):
        raise ValueError(f"cannot add {f!r} and {g!r}")
    N = min(f.trunc, g.trunc)
    out = {k: v for k, v in f.coeffs.items() if k[0] <= N}
    for k, v in g.coeffs.items():
        if k[0] <= N:
            out[k] = out.get(k, 0) + v
    return f.with_coeffs(out, trunc=N, tag=f.tag if f.tag == g.tag else "")


def scale(c, f: HJForm) -> HJForm:
    c = as_rat(c)
    return f.with_coeffs({k: c * v for k, v in f.coeffs.items()}, tag=f.tag)


def zero(weight, index, parity, trunc) -> HJForm:
    return HJForm(weight, index, parity, trunc, {})


def heat(f: HJForm) -> HJForm:
    """L_m: multiply c(n, r) by D(n, r).

    The result satisfies the unit rule of weight k+2 and opposite parity, but
    in characteristic 0 it is not a modular object; it is tagged as such.
    """
    m = f.index
    out = {}
    for (n, a1, a2), v in f.coeffs.items():
        D = 4 * n * m - a1 * a1 - a2 * a2
        if D:
            out[(n, a1, a2)] = D * v
    return f.with_coeffs(out, weight=f.weight + 2, parity=flip_parity(f.parity), tag="heat-image")


def heat_completed(f: HJForm, E2: QSeries) -> HJForm:
    """L_m(f) - ((k-1)m/3) E2 f, a genuine form of weight k+2 and parity -delta."""
    if E2.trunc < f.trunc:
        raise ValueError("E2 must be known to the truncation of the form")
    c = Fraction((f.weight - 1) * f.index, 3)
    h = heat(f)
    prod = mul_qseries(E2, f)
    out = dict(h.coeffs)
    for k, v in prod.coeffs.items():
        out[k] = out.get(k, 0) - c * v
    res = f.with_coeffs(out, weight=f.weight + 2, parity=h.parity, tag="")
    bad = unit_rule_violations(res, limit=1)
    if bad:
        raise InvariantViolation("unit rule", bad[0], "completed heat image")
    return res


def u_p(f: HJForm, p: int) -> HJForm:
    """Keep exactly the coefficients with p | D(n, r)."""
    m = f.index
    return f.with_coeffs({k: v for k, v in f.coeffs.items()
                          if (4 * k[0] * m - k[1] * k[1] - k[2] * k[2]) % p == 0}, tag=f.tag)


# -------------------------------------------------------------------- products

def mul_qseries(g: QSeries, f: HJForm) -> HJForm:
    """Product of an elliptic q-series with a Hermitian Jacobi form."""
    N = min(g.trunc, f.trunc)
    L, arr = f.integer_array()
    M = 1
    for c in g.coeffs[:N + 1]:
        M = M * c.denominator // gcd(M, c.denominator)
    gi = [int(c * M) for c in g.coeffs[:N + 1]]
    out = np.zeros((N + 1,) + arr.shape[1:], dtype=object)
    out[...] = 0
    for j, c in enumerate(gi):
        if c:
            out[j:] += c * arr[:N + 1 - j]
    R = f.radius()
    coeffs = _from_int_array(L * M, out, R)
    # the unit rule ties parity to weight mod 4, so a factor of weight 2 mod 4 flips it
    parity = f.parity if g.weight % 4 == 0 else flip_parity(f.parity)
    return HJForm(f.weight + g.weight, f.index, parity, N, coeffs,
                  tag="quasi" if g.is_quasi else f.tag)


def mul_hjf(f: HJForm, g: HJForm) -> HJForm:
    """Product of two forms: weights and indices add, parities multiply."""
    N = min(f.trunc, g.trunc)
    by_n: dict = {}
    for (n, a1, a2), v in g.coeffs.items():
        if n <= N:
            by_n.setdefault(n, []).append((a1, a2, v))
    out: dict = {}
    for (n1, b1, b2), v1 in f.coeffs.items():
        for n2 in range(0, N - n1 + 1):
            for a1, a2, v2 in by_n.get(n2, ()):
                key = (n1 + n2, b1 + a1, b2 + a2)
                out[key] = out.get(key, 0) + v1 * v2
    parity = "+" if f.parity == g.parity else "-"
    return HJForm(f.weight + g.weight, f.index + g.index, parity, N, out)


# ----------------------------------------------------- restriction, reindexing

def restrict(f: HJForm, rho) -> JacobiForm:
    """phi[rho](tau, z) = phi(tau, rho z, conj(rho) z); a = 2 Re(rho r)."""
    x, y = rho
    if x == 0 and y == 0:
        raise ValueError("rho must be nonzero")
    out: dict = {}
    for (n, a1, a2), v in f.coeffs.items():
        key = (n, x * a1 - y * a2)
        out[key] = out.get(key, 0) + v
    return JacobiForm(f.weight, (x * x + y * y) * f.index, f.trunc, out)


def choose_rho(n0: int, m: int):
    """rho = 1 + 4b i making r -> 2 Re(rho r) injective on N(r) <= m n0."""
    if n0 < 0:
        raise ValueError("n0 must be non-negative")
    b = 1 + isqrt(4 * m * n0)
    return (1, 4 * b)


def slash_unit(f: HJForm, eps, weight=None, parity=None) -> HJForm:
    """c(n, r) -> sigma(eps) eps^(-k) c(n, eps^(-1) r)."""
    k = f.weight if weight is None else weight
    par = f.parity if parity is None else parity
    fx, fy = unit_factor(eps, k, par)
    if fy:
        raise ValueError("odd weight: the unit factor is not rational")
    out = {}
    for (n, a1, a2), v in f.coeffs.items():
        # the new coefficient at eps r is factor * c(r)
        b1, b2 = rotate(a1, a2, eps)
        out[(n, b1, b2)] = fx * v
    return f.with_coeffs(out, weight=k, parity=par)


def average(f: HJForm, k: int, m: int, parity: str) -> HJForm:
    """(1/4) sum over units of the slash action of weight k and parity delta."""
    if m != f.index:
        raise ValueError("index mismatch")
    base = f.with_coeffs(f.coeffs, weight=k, parity=parity, tag="")
    out: dict = {}
    for eps in UNITS:
        for key, v in slash_unit(base, eps).coeffs.items():
            out[key] = out.get(key, 0) + v
    return base.with_coeffs({key: v / 4 for key, v in out.items()})


def to_matrix_index(f: HJForm) -> MatrixJacobiForm:
    return MatrixJacobiForm(f.weight, f.index, f.trunc,
                            {(n, a1, -a2): v for (n, a1, a2), v in f.coeffs.items()})


def from_matrix_index(g: MatrixJacobiForm, parity: str = "+") -> HJForm:
    return HJForm(g.weight, g.index, parity, g.trunc,
                  {(n, s1, -s2): v for (n, s1, s2), v in g.coeffs.items()})


def index_raise(f: HJForm, rho) -> HJForm:
    """pi_rho: f(tau, rho z1, conj(rho) z2); r -> rho r, index times N(rho)."""
    x, y = rho
    N = x * x + y * y
    if N == 0:
        raise ValueError("rho must be nonzero")
    out = {(n,) + rotate(a1, a2, rho): v for (n, a1, a2), v in f.coeffs.items()}
    return f.with_coeffs(out, index=f.index * N)


# ------------------------------------------------------------------ validation

def unit_rule_violations(f: HJForm, limit: int | None = None) -> list:
    """Keys where c(n, eps r) != sigma(eps) eps^(-k) c(n, r)."""
    bad = []
    factors = [(eps, unit_factor(eps, f.weight, f.parity)) for eps in UNITS[1:]]
    seen = set()
    for key in list(f.coeffs):
        n, a1, a2 = key
        if key in seen:
            continue
        v = f.coeffs[key]
        for eps, (fx, fy) in factors:
            b1, b2 = rotate(a1, a2, eps)
            other = f.coeffs.get((n, b1, b2), Fraction(0))
            if fy or other != fx * v:
                bad.append(key)
                break
            seen.add((n, b1, b2))
        if limit and len(bad) >= limit:
            break
    return bad


@dataclass(frozen=True)
class ShiftClassReport:
    classes: int
    compared: int
    unchecked: int
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def check_shift_class(f: HJForm) -> ShiftClassReport:
    """Coefficients must depend only on D and r mod mO (within truncation)."""
    m = f.index
    if m == 0:
        return ShiftClassReport(0, 0, 0, ())
    mod = 2 * m
    first: dict = {}
    compared = 0
    violations = []
    for key in lattice_keys(m, f.trunc):
        n, a1, a2 = key
        cls = (4 * n * m - a1 * a1 - a2 * a2, a1 % mod, a2 % mod)
        v = f.coeffs.get(key, Fraction(0))
        if cls not in first:
            first[cls] = (key, v)
            continue
        compared += 1
        if first[cls][1] != v:
            violations.append((first[cls][0], key))
    # classes whose only in-range member could not be compared with anything
    members: dict = {}
    for key in lattice_keys(m, f.trunc):
        n, a1, a2 = key
        cls = (4 * n * m - a1 * a1 - a2 * a2, a1 % mod, a2 % mod)
        members[cls] = members.get(cls, 0) + 1
    unchecked = sum(1 for c in members.values() if c == 1)
    return ShiftClassReport(len(first), compared, unchecked, tuple(violations))


def sturm_rows(index: int, bound: int) -> list:
    """One key per (D, r mod mO) class among keys with n <= bound.

    For expansions obeying the shift-class rule, agreement on these keys
    implies agreement on every key with n <= bound.
    """
    mod = 2 * index
    seen = set()
    rows = []
    for key in lattice_keys(index, bound):
        n, a1, a2 = key
        cls = (4 * n * index - a1 * a1 - a2 * a2, a1 % mod, a2 % mod)
        if cls not in seen:
            seen.add(cls)
            rows.append(key)
    return rows
