"""Expansion files, the shipped generator corpus, derived cusp forms and the Sturm bound.

File format (UTF-8, one record per line, optionally gzip-compressed):

    # comment
    !kind hjf            header lines start with '!'
    !weight 8
    !index 1
    !parity +
    !trunc 120
    1 1 1 -4 61          coefficient: n a1 a2 num den

qexp files carry ``!kind !weight !trunc !quasi`` and records ``n num den``;
hmf files carry ``!kind !weight !trunc_trace`` and records ``n a1 a2 m num den``.
Absent in-range keys are zero.
"""

from __future__ import annotations

import gzip
import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from pathlib import Path

from . import hmf as hmf_mod
from .arith import reduce_int
from .hjf import HJForm, InvariantViolation, check_shift_class, unit_rule_violations
from .hmf import HMForm, singular_support, symmetry_violations
from .qexp import QSeries, eisenstein

HEADERS = {
    "qexp": ("kind", "weight", "trunc", "quasi"),
    "hjf": ("kind", "weight", "index", "parity", "trunc"),
    "hmf": ("kind", "weight", "trunc_trace"),
}
KEY_WIDTH = {"qexp": 1, "hjf": 3, "hmf": 4}

GENERATOR_FILES = {
    "e2": "e2.qexp.gz", "e4": "e4.qexp.gz", "e6": "e6.qexp.gz",
    "phi4": "phi4.hjf.gz", "phi6": "phi6.hjf.gz", "phi8": "phi8.hjf.gz", "phi10": "phi10.hjf.gz",
    "h4": "h4.hmf.gz", "h6": "h6.hmf.gz", "h8": "h8.hmf.gz", "h10": "h10.hmf.gz", "h12": "h12.hmf.gz",
}

CHI8_COEFF = Fraction(-61, 230400)
F10_COEFF = Fraction(-277, 2419200)
F12_COEFFS = (Fraction(-34910011, 2002662144000), Fraction(-34801, 1009152000),
              Fraction(414251, 9082368000), Fraction(50521, 8010648576))


class ParseError(ValueError):
    def __init__(self, where, msg):
        super().__init__(f"{where}: {msg}")
        self.where = where


class CuspPropertyViolation(ValueError):
    pass


class MissingAsset(FileNotFoundError):
    pass


# ------------------------------------------------------------------ parsing

def _open_text(path: Path):
    if str(path).endswith(".gz"):
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, encoding="utf-8")


def parse_text(lines, where="<text>", max_trace: int | None = None):
    """Parse expansion-file lines into (header dict, coefficient dict)."""
    header: dict = {}
    coeffs: dict = {}
    kind = None
    width = None
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        loc = f"{where}:{lineno}"
        if line.startswith("!"):
            parts = line[1:].split()
            if len(parts) != 2:
                raise ParseError(loc, f"malformed header {line!r}")
            name, value = parts
            if name in header:
                raise ParseError(loc, f"duplicate header {name}")
            header[name] = value
            if name == "kind":
                if value not in HEADERS:
                    raise ParseError(loc, f"unknown kind {value!r}")
                kind, width = value, KEY_WIDTH[value]
            continue
        if kind is None:
            raise ParseError(loc, "coefficient before !kind header")
        parts = line.split()
        if len(parts) != width + 2:
            raise ParseError(loc, f"expected {width + 2} integers, got {len(parts)}")
        try:
            ints = [int(x) for x in parts]
        except ValueError:
            raise ParseError(loc, "non-integer field") from None
        key = tuple(ints[:width])
        num, den = ints[width], ints[width + 1]
        if den <= 0:
            raise ParseError(loc, "denominator must be positive")
        if gcd(num, den) != 1:
            raise ParseError(loc, "fraction not in lowest terms")
        if max_trace is not None and kind == "hmf" and key[0] + key[3] > max_trace:
            continue
        if key in coeffs:
            raise ParseError(loc, f"duplicate key {key}")
        coeffs[key] = Fraction(num, den)
    if kind is None:
        raise ParseError(where, "missing !kind header")
    missing = [h for h in HEADERS[kind] if h not in header]
    if missing:
        raise ParseError(where, f"missing headers {missing}")
    extra = [h for h in header if h not in HEADERS[kind]]
    if extra:
        raise ParseError(where, f"unexpected headers {extra}")
    return header, coeffs


def _int_header(header, name, where):
    try:
        return int(header[name])
    except ValueError:
        raise ParseError(where, f"header {name} must be an integer") from None


def build(header, coeffs, where="<text>", validate=True, max_trace=None):
    kind = header["kind"]
    weight = _int_header(header, "weight", where)
    try:
        if kind == "qexp":
            trunc = _int_header(header, "trunc", where)
            quasi = header["quasi"].lower() in ("1", "true", "yes")
            return QSeries.from_dict(weight, trunc, {k[0]: v for k, v in coeffs.items()}, quasi)
        if kind == "hjf":
            parity = header["parity"]
            if parity not in ("+", "-"):
                raise ParseError(where, f"bad parity {parity!r}")
            f = HJForm(weight, _int_header(header, "index", where), parity,
                       _int_header(header, "trunc", where), coeffs)
            if validate:
                validate_hjf(f)
            return f
        t0 = _int_header(header, "trunc_trace", where)
        if max_trace is not None:
            t0 = min(t0, max_trace)
        F = HMForm.from_flat(weight, t0, coeffs)
        if validate:
            validate_hmf(F)
        return F
    except InvariantViolation as exc:
        raise InvariantViolation(exc.rule, exc.key, f"in {where}") from None


def validate_hjf(f: HJForm):
    bad = unit_rule_violations(f, limit=1)
    if bad:
        raise InvariantViolation("unit rule", bad[0])
    rep = check_shift_class(f)
    if not rep.ok:
        raise InvariantViolation("shift class", rep.violations[0])


def validate_hmf(F: HMForm):
    bad = symmetry_violations(F, limit=1)
    if bad:
        raise InvariantViolation("symmetry", bad[0][0], f"differs from {bad[0][1]}")


def load(path, validate=True, max_trace=None):
    path = Path(path)
    if not path.exists():
        raise MissingAsset(str(path))
    with _open_text(path) as fh:
        header, coeffs = parse_text(fh, str(path), max_trace)
    return build(header, coeffs, str(path), validate, max_trace)


def loads(text: str, validate=True):
    header, coeffs = parse_text(text.splitlines())
    return build(header, coeffs, "<text>", validate)


def dumps(obj) -> str:
    if isinstance(obj, QSeries):
        head = [("kind", "qexp"), ("weight", obj.weight), ("trunc", obj.trunc),
                ("quasi", int(obj.is_quasi))]
        rows = {(n,): v for n, v in enumerate(obj.coeffs)}
    elif isinstance(obj, HJForm):
        head = [("kind", "hjf"), ("weight", obj.weight), ("index", obj.index),
                ("parity", obj.parity), ("trunc", obj.trunc)]
        rows = obj.coeffs
    elif isinstance(obj, HMForm):
        head = [("kind", "hmf"), ("weight", obj.weight), ("trunc_trace", obj.t0)]
        rows = obj.coeffs
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    lines = [f"!{k} {v}" for k, v in head]
    for key in sorted(rows):
        v = rows[key]
        if v:
            lines.append(" ".join(map(str, key)) + f" {v.numerator} {v.denominator}")
    return "\n".join(lines) + "\n"


def save(obj, path):
    path = Path(path)
    data = dumps(obj).encode("utf-8")
    if str(path).endswith(".gz"):
        with gzip.GzipFile(path, "wb", mtime=0) as fh:
            fh.write(data)
    else:
        path.write_bytes(data)


# ----------------------------------------------------------- derived forms

def _lin(weight, t0, terms):
    out: dict = {}
    for c, F in terms:
        for k, v in F.coeffs.items():
            if k[0] + k[3] <= t0:
                out[k] = out.get(k, 0) + c * v
    return HMForm.from_flat(weight, t0, out)


def _assert_cusp(F: HMForm, label: str) -> HMForm:
    bad = singular_support(F)
    if bad:
        raise CuspPropertyViolation(f"{label} has nonzero coefficient at singular T = {bad[0]}")
    return F


def derive_chi8(H8: HMForm, H4: HMForm) -> HMForm:
    t = min(H8.t0, H4.t0)
    F = _lin(8, t, [(CHI8_COEFF, H8), (-CHI8_COEFF, hmf_mod.mul(H4, H4))])
    return _assert_cusp(HMForm(F.weight, F.t0, F.slices, name="chi8"), "chi8")


def derive_F10(H10: HMForm, H4: HMForm, H6: HMForm) -> HMForm:
    t = min(H10.t0, H4.t0, H6.t0)
    F = _lin(10, t, [(F10_COEFF, H10), (-F10_COEFF, hmf_mod.mul(H4, H6))])
    return _assert_cusp(HMForm(F.weight, F.t0, F.slices, name="f10"), "F10")


def derive_F12(H12: HMForm, H4: HMForm, H8: HMForm, H6: HMForm) -> HMForm:
    t = min(H12.t0, H4.t0, H8.t0, H6.t0)
    H4sq = hmf_mod.mul(H4, H4)
    a, b, c, d = F12_COEFFS
    F = _lin(12, t, [(a, H12), (b, hmf_mod.mul(H4sq, H4)), (c, hmf_mod.mul(H4, H8)),
                     (d, hmf_mod.mul(H6, H6))])
    return _assert_cusp(HMForm(F.weight, F.t0, F.slices, name="f12"), "F12")


# ------------------------------------------------------------- Sturm bound

def _prime_divisors(n: int) -> list:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def sturm_eta(k: int, m: int) -> int:
    """floor(4 m^2 (k-1)/3 * prod_{p | 4m} (1 - 1/p^2) + m/2)."""
    if k < 1 or m < 1:
        raise ValueError("need k >= 1 and m >= 1")
    v = Fraction(4 * m * m * (k - 1), 3)
    for p in _prime_divisors(4 * m):
        v *= 1 - Fraction(1, p * p)
    v += Fraction(m, 2)
    return v.numerator // v.denominator


# ------------------------------------------------------------------ corpus

def default_data_dir() -> Path:
    env = os.environ.get("HERMOD_DATA")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "data"


@dataclass
class Corpus:
    """Lazy, cached access to the shipped generator expansions."""

    data_dir: Path = field(default_factory=default_data_dir)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.data_dir = Path(self.data_dir)

    def path(self, name: str) -> Path:
        return self.data_dir / GENERATOR_FILES[name]

    def _load(self, name, max_trace=None):
        key = (name, max_trace)
        if key not in self._cache:
            obj = load(self.path(name), max_trace=max_trace)
            object.__setattr__(obj, "name", name)
            self._cache[key] = obj
        return self._cache[key]

    def qseries(self, name: str) -> QSeries:
        return self._load(name)

    def hjf(self, name: str) -> HJForm:
        return self._load(name)

    def hmf(self, name: str, t0: int) -> HMForm:
        key = ("hmf", name, t0)
        if key in self._cache:
            return self._cache[key]
        if name in GENERATOR_FILES:
            F = self._load(name, max_trace=t0)
            if F.t0 < t0:
                raise ValueError(f"{name} is only stored to trace {F.t0}, requested {t0}")
        elif name == "chi8":
            F = derive_chi8(self.hmf("h8", t0), self.hmf("h4", t0))
        elif name == "f10":
            F = derive_F10(self.hmf("h10", t0), self.hmf("h4", t0), self.hmf("h6", t0))
        elif name == "f12":
            F = derive_F12(self.hmf("h12", t0), self.hmf("h4", t0), self.hmf("h8", t0),
                           self.hmf("h6", t0))
        else:
            raise KeyError(f"unknown Hermitian modular form {name!r}")
        self._cache[key] = F
        return F

    def max_trace(self, name="h4") -> int:
        with _open_text(self.path(name)) as fh:
            for line in fh:
                if line.startswith("!trunc_trace"):
                    return int(line.split()[1])
        raise ParseError(str(self.path(name)), "no trace header")


_DEFAULT: dict = {}


def default_corpus() -> Corpus:
    """One shared corpus per resolved data directory."""
    d = default_data_dir().resolve()
    if d not in _DEFAULT:
        _DEFAULT[d] = Corpus(d)
    return _DEFAULT[d]


# ------------------------------------------------------------ verification

@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    truncation: int | None
    detail: str = ""

    def to_dict(self):
        return {"check": self.name, "passed": self.passed,
                "truncation": self.truncation, "detail": self.detail}


def verify_corpus(data_dir=None, t0: int = 10) -> list:
    """Load and validate every shipped file and run the cross-checks."""
    corpus = Corpus(default_data_dir() if data_dir is None else data_dir)
    checks = []
    loaded = {}
    for name, fname in GENERATOR_FILES.items():
        try:
            obj = corpus._load(name)
            loaded[name] = obj
            trunc = obj.t0 if isinstance(obj, HMForm) else obj.trunc
            checks.append(Check(f"load {fname}", True, trunc, "all invariants hold"))
        except MissingAsset:
            checks.append(Check(f"load {fname}", False, None, f"missing asset {fname}"))
        except (ParseError, InvariantViolation, ValueError) as exc:
            checks.append(Check(f"load {fname}", False, None, str(exc)))

    for name in ("phi4", "phi6", "phi8", "phi10"):
        f = loaded.get(name)
        if f is not None:
            ok = f.trunc >= 120
            checks.append(Check(f"{name} depth n <= 120", ok, f.trunc))

    for p, name in ((5, "e4"), (7, "e6")):
        f = loaded.get(name)
        if f is not None:
            ok = all(reduce_int(c, p) == 0 for c in f.coeffs[1:])
            checks.append(Check(f"E{p - 1} = 1 mod {p}", ok, f.trunc))
    for p in (11, 13):
        E = eisenstein(p - 1, 120)
        ok = all(reduce_int(c, p) == 0 for c in E.coeffs[1:])
        checks.append(Check(f"E{p - 1} = 1 mod {p}", ok, E.trunc))

    if "h4" in loaded:
        H4 = loaded["h4"]
        ok = all(reduce_int(v, 5) == 0 for k, v in H4.coeffs.items() if k != (0, 0, 0, 0))
        checks.append(Check("H4 = 1 mod 5", ok, H4.t0))

    if all(n in loaded for n in ("h4", "h8")):
        try:
            chi8 = corpus.hmf("chi8", t0)
            checks.append(Check("chi8 cusp property", True, t0))
            for key, want in (((1, 1, 1, 1), 1), ((1, -1, 0, 1), -486)):
                got = chi8.coeffs.get(key, Fraction(0))
                checks.append(Check(f"chi8 A{key} = {want}", got == want, t0, f"found {got}"))
        except CuspPropertyViolation as exc:
            checks.append(Check("chi8 cusp property", False, t0, str(exc)))
    for name, needs in (("f10", ("h4", "h6", "h10")), ("f12", ("h4", "h6", "h8", "h12"))):
        if all(n in loaded for n in needs):
            try:
                corpus.hmf(name, t0)
                checks.append(Check(f"{name} cusp property", True, t0))
            except CuspPropertyViolation as exc:
                checks.append(Check(f"{name} cusp property", False, t0, str(exc)))
    return checks


__all__ = [
    "Corpus", "Check", "CuspPropertyViolation", "MissingAsset", "ParseError",
    "derive_chi8", "derive_F10", "derive_F12", "dumps", "load", "loads", "save",
    "sturm_eta", "verify_corpus", "default_data_dir", "default_corpus",
]
