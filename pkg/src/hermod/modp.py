"""Reduction mod p, filtrations, heat cycles and congruence checkers.

Index-1 Hermitian Jacobi forms are handled natively with the basis
E4^a E6^b * {phi4, phi6, phi8, phi10}; Hermitian modular forms use monomials
in H4, H6, chi8, F10, F12.  Every verdict records the prime, the coefficient
depth it was checked to and whether that depth is a proven Sturm bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .arith import check_prime, legendre
from .genio import Corpus, default_corpus, sturm_eta
from .hjf import UNITS, parity_for, rotate, sturm_rows, symmetry_type
from .hmf import HMForm, det_array, mod_mul, support_mask
from .linalg import rank_mod_p, rref, solve_in_span
from .qexp import monomial_basis, monomials_mod_p
from .reports import FiltrationReport, HeatCycleReport, ScanReport, Verdict


class InsufficientTruncation(ValueError):
    pass


class NoBasisForIndex(ValueError):
    pass


class MissingWitness(ValueError):
    pass


def p_valuation(x: Fraction, p: int) -> int:
    if not x:
        raise ValueError("valuation of zero")
    v, num, den = 0, x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def primitive_scale(coeffs, p: int) -> Fraction:
    """p^(-v) with v the least p-adic valuation among the coefficients."""
    vals = [p_valuation(c, p) for c in coeffs if c]
    if not vals:
        return Fraction(1)
    return Fraction(p) ** -min(vals)


# ------------------------------------------------------------ mod-p objects

_DISC: dict = {}


def _disc_array(index: int, trunc: int, R: int) -> np.ndarray:
    key = (index, trunc, R)
    if key not in _DISC:
        n = np.arange(trunc + 1)[:, None, None]
        a = np.arange(-R, R + 1)
        _DISC[key] = 4 * index * n - a[None, :, None] ** 2 - a[None, None, :] ** 2
    return _DISC[key]


@dataclass(frozen=True, eq=False)
class ModHJF:
    """Reduction of a Hermitian Jacobi form; arr is indexed [n, a1 + R, a2 + R]."""

    p: int
    weight: int
    index: int
    parity: str
    arr: np.ndarray
    name: str = ""
    genuine: bool = True

    @classmethod
    def of(cls, f, p: int) -> "ModHJF":
        if isinstance(f, ModHJF):
            if f.p != p:
                raise ValueError(f"form reduced mod {f.p}, not {p}")
            return f
        check_prime(p)
        if f.tag in ("heat-image", "quasi"):
            raise ValueError(f"{f.name or 'form'} is tagged {f.tag!r} and has no weight of its own")
        return cls(p, f.weight, f.index, f.parity, f.mod_array(p), f.name)

    @property
    def trunc(self) -> int:
        return self.arr.shape[0] - 1

    @property
    def radius(self) -> int:
        return (self.arr.shape[1] - 1) // 2

    @property
    def sym(self) -> int:
        return symmetry_type(self.weight, self.parity)

    def disc(self) -> np.ndarray:
        return _disc_array(self.index, self.trunc, self.radius)

    def is_zero(self) -> bool:
        return not self.arr.any()

    def value(self, n, a1, a2) -> int:
        R = self.radius
        if abs(a1) > R or abs(a2) > R:
            return 0
        return int(self.arr[n, a1 + R, a2 + R])

    def heat(self, times: int = 1) -> "ModHJF":
        """L_m applied `times` times; each step raises the weight by p + 1."""
        arr, k = self.arr, self.weight
        D = self.disc() % self.p
        for _ in range(times):
            arr = arr * D % self.p
            k += self.p + 1
        return ModHJF(self.p, k, self.index, parity_for(self.sym, k), arr, self.name)

    def scale(self, c: int) -> "ModHJF":
        return ModHJF(self.p, self.weight, self.index, self.parity, self.arr * c % self.p,
                      self.name, self.genuine)

    def congruent(self, other: "ModHJF") -> bool:
        return self.p == other.p and np.array_equal(self.arr, other.arr)


@dataclass(frozen=True, eq=False)
class ModHMF:
    """Reduction of a Hermitian modular form; arr is indexed [n, m, a1 + t0, a2 + t0]."""

    p: int
    weight: int
    t0: int
    arr: np.ndarray
    name: str = ""

    @classmethod
    def of(cls, F, p: int) -> "ModHMF":
        if isinstance(F, ModHMF):
            if F.p != p:
                raise ValueError(f"form reduced mod {F.p}, not {p}")
            return F
        check_prime(p)
        if F.tag == "heat-image":
            raise ValueError("heat images have no weight in characteristic 0")
        return cls(p, F.weight, F.t0, F.mod_array(p), F.name)

    def is_zero(self) -> bool:
        return not self.arr.any()

    def d_op(self, times: int = 1) -> "ModHMF":
        D = det_array(self.t0) % self.p
        arr, k = self.arr, self.weight
        for _ in range(times):
            arr = arr * D % self.p
            k += self.p + 1
        return ModHMF(self.p, k, self.t0, arr, self.name)

    def congruent(self, other: "ModHMF") -> bool:
        return self.p == other.p and np.array_equal(self.arr, other.arr)


# ---------------------------------------------------------- index-1 basis

GENERATOR_LABELS = ("phi4", "phi6", "phi8", "phi10")


def _precision(p: int, limit: float) -> int:
    """Largest P = p^e with P^2 * limit below 2^62 (at least p)."""
    P = p
    while (P * p) ** 2 * limit < 2 ** 62:
        P *= p
    return P


def saturate(labels, V: np.ndarray, p: int, P: int):
    """Reduce a lattice basis mod p after saturating it at p.

    V holds the basis vectors as columns modulo P = p^e.  Whenever the
    reductions are dependent, the dependent combination is divisible by p and
    replaces one of its members after division by p.  A combination that
    stays dependent down to the last available power of p is treated as an
    exact relation and its column dropped.  Returns (labels, columns mod p).
    """
    if P < p * p:
        raise ValueError("saturation needs a working precision of at least p^2")
    labels = list(labels)
    V = np.array(V, dtype=np.int64) % P
    while V.shape[1]:
        R, pivots = rref(V % p, p)
        free = [j for j in range(V.shape[1]) if j not in pivots]
        if not free:
            break
        j = free[0]
        x = np.zeros(V.shape[1], dtype=np.int64)
        x[j] = 1
        for i, c in enumerate(pivots):
            x[c] = -R[i, j] % p
        new = V @ x % P
        if P == p or not new.any():
            # divisible by every available power of p: an exact relation
            V = np.delete(V, j, axis=1)
            del labels[j]
            continue
        if (new % p).any():
            raise ArithmeticError("dependent combination is not divisible by p")
        terms = " + ".join(f"{int(c)}*{labels[i]}" for i, c in enumerate(x) if c)
        labels[j] = f"({terms})/{p}"
        V[:, j] = new // p
        P //= p
        V %= P
    return labels, V % p


class Index1Basis:
    """E4^a E6^b times the index-1 generators, evaluated on class representatives.

    Each generator is first rescaled by a power of p to be p-primitive.  Rows
    are one key per (D, r mod O) class with n <= depth.  Products are formed
    modulo a power of p so that each weight space can be saturated: a
    p-integral form whose reduction is missed by the products is recovered
    from their mod-p dependencies.
    """

    def __init__(self, generators, p: int, depth: int):
        self.p, self.depth = p, depth
        self.P = _precision(p, depth + 1)
        self.rows = sturm_rows(1, depth)
        self._cols: dict = {}
        self._spaces: dict = {}
        self.gens = []
        for g in generators:
            if g.index != 1:
                raise ValueError("index-1 generators expected")
            if g.trunc < depth:
                raise InsufficientTruncation(f"{g.name} known to n = {g.trunc}, need {depth}")
            c = primitive_scale(g.coeffs.values(), p)
            arr = g.mod_array(self.P) if c == 1 else (c * g).mod_array(self.P)
            R = (arr.shape[1] - 1) // 2
            hist = np.zeros((len(self.rows), depth + 1), dtype=np.int64)
            for i, (n, a1, a2) in enumerate(self.rows):
                hist[i, :n + 1] = arr[n::-1, a1 + R, a2 + R]
            self.gens.append((g.name, g.weight, symmetry_type(g.weight, g.parity), hist))
        self.monomials = monomials_mod_p(self.P, depth)

    def target(self, f: ModHJF) -> np.ndarray:
        if f.trunc < self.depth:
            raise InsufficientTruncation(f"form known to n = {f.trunc}, need {self.depth}")
        return np.array([f.value(*key) for key in self.rows], dtype=np.int64)

    def products(self, k: int, sym: int) -> list:
        """The unsaturated products of weight k, modulo P."""
        out = []
        for name, kg, s, hist in self.gens:
            if s != sym or kg > k:
                continue
            for a, b in monomial_basis(k - kg):
                label = f"E4^{a}*E6^{b}*{name}"
                if label not in self._cols:
                    self._cols[label] = hist @ self.monomials.get(a, b) % self.P
                out.append((label, self._cols[label]))
        return out

    def space(self, k: int, sym: int) -> list:
        key = (k, sym)
        if key not in self._spaces:
            prods = self.products(k, sym)
            if not prods:
                self._spaces[key] = []
            else:
                labels, V = saturate([lab for lab, _ in prods],
                                     np.column_stack([v for _, v in prods]), self.p, self.P)
                self._spaces[key] = list(zip(labels, V.T))
        return self._spaces[key]

    def rank_defect(self, k: int, sym: int) -> int:
        """How far the plain products fall short of independence mod p."""
        sp = self.products(k, sym)
        if not sp:
            return 0
        return len(sp) - rank_mod_p(np.column_stack([v for _, v in sp]) % self.p, self.p)


def index1_basis(p: int, depth: int, corpus: Corpus | None = None) -> Index1Basis:
    corpus = corpus or default_corpus()
    key = ("index1-basis", p, depth)
    if key not in corpus._cache:
        gens = [corpus.hjf(name) for name in GENERATOR_LABELS]
        corpus._cache[key] = Index1Basis(gens, p, depth)
    return corpus._cache[key]


def _candidates(k: int, p: int) -> range:
    return range(k % (p - 1), k + 1, p - 1)


def hjf_filtration(phi, p: int, basis=None, corpus=None, strict: bool = True,
                   depth: int | None = None) -> FiltrationReport:
    """Least weight k' = k mod (p-1) whose space contains phi mod p.

    The comparison runs over all coefficients with n <= eta(k, m), which is a
    Sturm bound for the difference.  With strict=False a shorter expansion is
    accepted and the report is marked as not rigorous.
    """
    check_prime(p)
    f = ModHJF.of(phi, p)
    subject = f.name or "phi"
    need = sturm_eta(max(f.weight, 1), f.index)
    if depth is None:
        depth = min(need, f.trunc)
        if f.trunc < need and strict:
            raise InsufficientTruncation(
                f"{subject}: weight {f.weight} needs n <= {need}, expansion stops at {f.trunc}")
    if f.is_zero():
        return FiltrationReport(subject, p, None, (), (), f.trunc, f.trunc >= need)
    if basis is None:
        if f.index != 1:
            raise NoBasisForIndex(f"no built-in basis for index {f.index}; supply one")
        basis = index1_basis(p, depth, corpus)
    t = basis.target(f)
    if not t.any():
        # zero on every class representative up to the depth
        return FiltrationReport(subject, p, None, (), (), basis.depth, basis.depth >= need)
    tested = []
    for kk in _candidates(f.weight, p):
        tested.append(kk)
        space = basis.space(kk, f.sym)
        if not space:
            continue
        x = solve_in_span(np.column_stack([v for _, v in space]), t, p)
        if x is not None:
            wit = tuple((lab, int(c)) for (lab, _), c in zip(space, x) if c)
            return FiltrationReport(subject, p, kk, tuple(tested), wit, basis.depth,
                                    basis.depth >= need)
    raise ValueError(f"{subject} mod {p} is not in the weight-{f.weight} space; "
                     "the input is not a modular object of the stated weight")


# --------------------------------------------------------------- heat cycles

def _cycle_checks(omegas, p: int, m: int) -> dict:
    """Structural checks on Omega(L^j), j = 0..p, with omegas[p] = omegas[1]."""
    checks = {}
    cyc = omegas[1:p]
    jump_ok, cong_ok = True, True
    for j in range(p):
        a, b = omegas[j], omegas[j + 1]
        if a is None or b is None:
            continue
        if b > a + p + 1 or (b == a + p + 1) != ((a - 1) * m % p != 0):
            jump_ok = False
        if (a + p + 1 - b) % (p - 1):
            cong_ok = False
    checks["jump law"] = jump_ok
    checks["jump congruent to p+1 mod p-1"] = cong_ok
    checks["no filtration = 2 mod p"] = all(w % p != 2 for w in cyc)
    checks["no +2 step"] = all(omegas[j + 1] != omegas[j] + 2 for j in range(1, p))
    highs = [j for j in range(1, p) if cyc[j - 1] % p == 1]
    lows = sorted({j + 1 if j + 1 <= p - 1 else 1 for j in highs})
    checks["one or two low points"] = len(lows) in (1, 2)
    checks["single low point iff some filtration = 3 mod p"] = (
        (len(lows) == 1) == any(w % p == 3 for w in cyc))
    return checks, tuple(highs), tuple(lows)


def heat_cycle(phi, p: int, basis=None, corpus=None) -> HeatCycleReport:
    check_prime(p)
    f = ModHJF.of(phi, p)
    subject = f.name or "phi"
    if f.index % p == 0:
        raise ValueError(f"p = {p} divides the index {f.index}")
    if f.is_zero():
        raise ValueError(f"{subject} vanishes mod {p}")
    steps = [f]
    for _ in range(p):
        steps.append(steps[-1].heat())
    periodic = steps[p].congruent(steps[1])
    rigorous = True

    def filt(g):
        nonlocal rigorous
        rep = hjf_filtration(g, p, basis=basis, corpus=corpus, strict=False)
        rigorous = rigorous and rep.rigorous
        return rep.value

    start = filt(f)
    if steps[1].is_zero():
        return HeatCycleReport(subject, p, start, (None,) * (p - 1), (), (), True,
                               {"periodic": periodic}, f.trunc, rigorous)
    omegas = [start] + [filt(steps[j]) for j in range(1, p)]
    omegas.append(omegas[1])
    checks, highs, lows = _cycle_checks(omegas, p, f.index)
    checks["periodic"] = periodic
    checks["weight congruence"] = all(
        w is not None and (w - steps[j].weight) % (p - 1) == 0 for j, w in enumerate(omegas[:p]))
    return HeatCycleReport(subject, p, start, tuple(omegas[1:p]), highs, lows, False,
                           checks, f.trunc, rigorous)


def heat_cycle_diagnostics(report: HeatCycleReport, ramanujan_found) -> dict:
    """Consequences of a Ramanujan-type congruence for the heat cycle.

    Returns check name -> True/False, or a string notice when a check does
    not apply.
    """
    out: dict = {}
    if report.heat_zero:
        out["applies"] = "heat image vanishes mod p"
        return out
    if not ramanujan_found:
        out["applies"] = "no Ramanujan-type congruence found"
        return out
    p = report.p
    out["two low points"] = len(report.low_points) == 2
    omega = report.start
    A, B = divmod(omega, p)
    if 1 < B <= p - 1:
        out["lower bound (p+3)/2 <= B"] = 2 * B >= p + 3
        out["upper bound B <= A+(p+3)/2"] = 2 * B <= 2 * A + p + 3
    else:
        out["bound"] = f"skipped: filtration {omega} = {A}*{p} + {B} has B <= 1"
    return out


# ------------------------------------------------------------ U(p) and scans

def _support_mask_hjf(f: ModHJF) -> np.ndarray:
    return f.disc() >= 0


def up_test_hjf(phi, p: int, theorem_check: bool = True, corpus=None) -> Verdict:
    """Does phi|U(p) vanish mod p, i.e. c(n, r) = 0 mod p whenever p | D?"""
    check_prime(p)
    f = ModHJF.of(phi, p)
    subject = f.name or "phi"
    D = f.disc()
    mask = _support_mask_hjf(f) & (D % p == 0)
    holds = not f.arr[mask].any()
    cycled = f.heat(p - 1).congruent(f)
    details = {"heat power p-1 returns form": cycled, "agree": cycled == holds}
    rigorous = False
    k, m = f.weight, f.index
    if theorem_check and p > k >= 4 and m % p and not f.is_zero() and m == 1:
        rep = hjf_filtration(f.heat(p + 2 - k), p, corpus=corpus, strict=False)
        expect = p + 5 - k if holds else 2 * p + 4 - k
        details["filtration of L^(p+2-k)"] = rep.value
        details["expected filtration"] = expect
        details["filtration check"] = rep.value == expect
        rigorous = rep.rigorous and rep.value == expect
    return Verdict(subject, f"U({p}) congruence", holds, p, f.trunc,
                   "direct", rigorous, details)


def _ram_rigorous_depth(k: int, m: int, p: int) -> int:
    return sturm_eta(k + (p + 1) ** 2 // 2, m)


def ramanujan_scan_hjf(phi, p: int, bs=None) -> ScanReport:
    """Ramanujan-type congruences at b for every b in 1..p-1 (or the given bs)."""
    check_prime(p)
    f = ModHJF.of(phi, p)
    subject = f.name or "phi"
    D = f.disc()
    supp = _support_mask_hjf(f)
    Dm = D % p
    bs = range(1, p) if bs is None else bs
    direct = {b: not f.arr[supp & (Dm == b)].any() for b in bs}
    L1 = f.heat()
    Lh = f.heat((p + 1) // 2)
    crit = {b: Lh.congruent(L1.scale(-legendre(b, p) % p)) for b in bs}
    k, m = f.weight, f.index
    applies = (not L1.is_zero()) and p > k and p != 2 * k - 3 and m % p != 0
    found = [b for b, v in direct.items() if v]
    guard = {"applies": applies, "expect_empty": applies,
             "consistent": (not found) if applies else True}
    need = _ram_rigorous_depth(k, m, p)
    return ScanReport(subject, p, direct, "direct+heat-criterion", f.trunc,
                      f.trunc >= need, guard, crit)


def ramanujan_test_hjf(phi, p: int, b: int) -> Verdict:
    if not 1 <= b <= p - 1:
        raise ValueError(f"b must lie in 1..{p - 1}")
    rep = ramanujan_scan_hjf(phi, p, [b])
    return Verdict(rep.subject, f"Ramanujan-type congruence at b = {b}", rep.verdicts[b], p,
                   rep.truncation, rep.method, rep.rigorous,
                   {"criterion": rep.criterion[b], "agree": rep.agrees, "guard": rep.guard})


# ------------------------------------------------------------------- HMF

HMF_GENERATORS = (("H4", "h4", 4), ("H6", "h6", 6), ("chi8", "chi8", 8),
                  ("F10", "f10", 10), ("F12", "f12", 12))


def _weight_exponents(k: int, weights) -> list:
    """All exponent tuples e with sum e_i w_i = k, in lexicographic order."""
    if not weights:
        return [()] if k == 0 else []
    w, rest = weights[0], weights[1:]
    out = []
    for e in range(k // w, -1, -1):
        for tail in _weight_exponents(k - e * w, rest):
            out.append((e,) + tail)
    return out


def hmf_rows(t0: int) -> np.ndarray:
    """Flat indices of one representative per symmetry orbit of (n, r, m)."""
    keys = []
    for n, m in product(range(t0 + 1), repeat=2):
        if n + m > t0:
            continue
        for a1 in range(-t0, t0 + 1):
            for a2 in range(-t0, t0 + 1):
                if a1 * a1 + a2 * a2 > 4 * n * m:
                    continue
                orbit = []
                for nn, mm in ((n, m), (m, n)):
                    for b1, b2 in ((a1, a2), (a1, -a2)):
                        orbit += [(nn,) + rotate(b1, b2, e) + (mm,) for e in UNITS]
                if (n, a1, a2, m) == min(orbit):
                    keys.append((n, m, a1 + t0, a2 + t0))
    shape = (t0 + 1, t0 + 1, 2 * t0 + 1, 2 * t0 + 1)
    return np.ravel_multi_index(tuple(np.array(keys).T), shape)


class HMFBasis:
    """Monomials in H4, H6, chi8, F10, F12 at trace truncation t0, saturated at p.

    Monomials are multiplied modulo P = p^e, with e as large as the
    floating-point convolution allows, and each weight space is saturated as
    for the index-1 basis.  Rows are one key per symmetry orbit.
    """

    def __init__(self, p: int, t0: int, corpus: Corpus | None = None):
        corpus = corpus or default_corpus()
        self.p, self.t0 = p, t0
        size = (t0 + 1) ** 2 * (2 * t0 + 1) ** 2
        P = p
        while (P * p) ** 2 * size < 2 ** 45:
            P *= p
        self.P = P
        self.rows = hmf_rows(t0)
        self.gens = []
        for label, name, k in HMF_GENERATORS:
            F = corpus.hmf(name, t0)
            c = primitive_scale(F.coeffs.values(), p)
            arr = (F if c == 1 else c * F).mod_array(P)
            self.gens.append((label, k, arr))
        self.weights = tuple(k for _, k, _ in self.gens)
        one = np.zeros_like(self.gens[0][2])
        one[0, 0, t0, t0] = 1
        self._mono = {(0,) * len(self.gens): one}
        self._spaces: dict = {}

    def monomial(self, e) -> np.ndarray:
        e = tuple(e)
        if e not in self._mono:
            i = max(j for j, x in enumerate(e) if x)
            prev = e[:i] + (e[i] - 1,) + e[i + 1:]
            self._mono[e] = mod_mul(self.monomial(prev), self.gens[i][2], self.P)
        return self._mono[e]

    def label(self, e) -> str:
        parts = [f"{lab}^{x}" if x > 1 else lab
                 for (lab, _, _), x in zip(self.gens, e) if x]
        return "*".join(parts) or "1"

    def target(self, F: ModHMF) -> np.ndarray:
        if F.t0 != self.t0:
            raise ValueError(f"form at trace {F.t0}, basis at {self.t0}")
        return F.arr.ravel()[self.rows]

    def space(self, k: int) -> list:
        if k not in self._spaces:
            exps = _weight_exponents(k, self.weights)
            if not exps:
                self._spaces[k] = []
            else:
                V = np.column_stack([self.monomial(e).ravel()[self.rows] for e in exps])
                labels, W = saturate([self.label(e) for e in exps], V, self.p, self.P)
                self._spaces[k] = list(zip(labels, W.T))
        return self._spaces[k]


def hmf_basis(p: int, t0: int, corpus: Corpus | None = None) -> HMFBasis:
    corpus = corpus or default_corpus()
    key = ("hmf-basis", p, t0)
    if key not in corpus._cache:
        corpus._cache[key] = HMFBasis(p, t0, corpus)
    return corpus._cache[key]


def hmf_filtration(F, p: int, t0: int | None = None, corpus=None) -> FiltrationReport:
    """Least k' = k mod (p-1) with F mod p a polynomial in the generators, at trace t0."""
    check_prime(p)
    if isinstance(F, HMForm) and t0 is not None:
        if F.t0 < t0:
            raise InsufficientTruncation(f"form known to trace {F.t0}, need {t0}")
        F = F.truncate(t0)
    G = ModHMF.of(F, p)
    subject = G.name or "F"
    if G.is_zero():
        return FiltrationReport(subject, p, None, (), (), G.t0, False)
    basis = hmf_basis(p, G.t0, corpus)
    t = basis.target(G)
    tested = []
    for kk in _candidates(G.weight, p):
        tested.append(kk)
        space = basis.space(kk)
        if not space:
            continue
        x = solve_in_span(np.column_stack([v for _, v in space]), t, p)
        if x is not None:
            wit = tuple((lab, int(c)) for (lab, _), c in zip(space, x) if c)
            return FiltrationReport(subject, p, kk, tuple(tested), wit, G.t0, False)
    raise ValueError(f"{subject} mod {p} is not a polynomial in the generators "
                     f"of weight {G.weight} at trace {G.t0}")


def _hmf_masks(G: ModHMF):
    D = det_array(G.t0)
    return support_mask(G.t0), D % G.p


def has_prime_to_p_witness(G: ModHMF) -> bool:
    """Some nonzero coefficient A(n, r, m) mod p with p not dividing nm."""
    n = np.arange(G.t0 + 1)
    nm = (n[:, None] * n[None, :]) % G.p != 0
    return bool(G.arr[nm].any())


def up_test_hmf(F, p: int, theorem_check: bool = False, compare_filtrations: bool = False,
                corpus=None) -> Verdict:
    """Does F|U(p) vanish mod p?  Optionally confirm through filtrations."""
    check_prime(p)
    G = ModHMF.of(F, p)
    subject = G.name or "F"
    supp, Dm = _hmf_masks(G)
    holds = not G.arr[supp & (Dm == 0)].any()
    cycled = G.d_op(p - 1).congruent(G)
    details = {"D^(p-1) returns form": cycled, "agree": cycled == holds}
    k = G.weight
    if theorem_check:
        if not (p > k and has_prime_to_p_witness(G)):
            raise MissingWitness(
                f"filtration test needs p > k and a nonzero A(n, r, m) with p not dividing nm "
                f"(p = {p}, k = {k})")
        rep = hmf_filtration(G.d_op(p + 2 - k), p, corpus=corpus)
        expect = p + 5 - k if holds else 2 * p + 4 - k
        details["filtration of D^(p+2-k)"] = rep.value
        details["expected filtration"] = expect
        details["filtration check"] = rep.value == expect
    if compare_filtrations:
        a = hmf_filtration(G, p, corpus=corpus).value
        b = hmf_filtration(G.d_op(p - 1), p, corpus=corpus).value
        details["filtration of F"] = a
        details["filtration of D^(p-1)"] = b
        details["filtrations equal"] = a == b
    return Verdict(subject, f"U({p}) congruence", holds, p, G.t0,
                   "direct, verified at truncation", False, details)


def ramanujan_scan_hmf(F, p: int, bs=None) -> ScanReport:
    check_prime(p)
    G = ModHMF.of(F, p)
    subject = G.name or "F"
    supp, Dm = _hmf_masks(G)
    bs = range(1, p) if bs is None else bs
    direct = {b: not G.arr[supp & (Dm == b)].any() for b in bs}
    D1 = G.d_op()
    Dh = G.d_op((p + 1) // 2)
    crit = {}
    for b in bs:
        c = -legendre(b, p) % p
        crit[b] = np.array_equal(Dh.arr, D1.arr * c % p)
    k = G.weight
    applies = p > k and p != 2 * k - 3 and has_prime_to_p_witness(G)
    found = [b for b, v in direct.items() if v]
    guard = {"applies": applies, "expect_empty": applies,
             "consistent": (not found) if applies else True,
             "D(F) vanishes": D1.is_zero()}
    return ScanReport(subject, p, direct, "direct+heat-criterion, verified at truncation",
                      G.t0, False, guard, crit)


def ramanujan_test_hmf(F, p: int, b: int) -> Verdict:
    if not 1 <= b <= p - 1:
        raise ValueError(f"b must lie in 1..{p - 1}")
    rep = ramanujan_scan_hmf(F, p, [b])
    return Verdict(rep.subject, f"Ramanujan-type congruence at b = {b}", rep.verdicts[b], p,
                   rep.truncation, rep.method, False,
                   {"criterion": rep.criterion[b], "agree": rep.agrees, "guard": rep.guard})


__all__ = [
    "HMFBasis", "Index1Basis", "InsufficientTruncation", "MissingWitness", "ModHJF", "ModHMF",
    "NoBasisForIndex", "heat_cycle", "heat_cycle_diagnostics", "hjf_filtration",
    "hmf_basis", "hmf_filtration", "index1_basis", "primitive_scale", "ramanujan_scan_hjf",
    "ramanujan_scan_hmf", "ramanujan_test_hjf", "ramanujan_test_hmf", "up_test_hjf",
    "up_test_hmf",
]
