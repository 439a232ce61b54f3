"""The published example tables as executable checks.

Each entry computes a value and compares it with the tabulated one.  The
result records both, so a mismatch shows what the engine actually found.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import modp
from .expressions import evaluate
from .genio import Corpus, default_corpus
from .hjf import index_raise


@dataclass(frozen=True)
class ExampleResult:
    group: str
    name: str
    expected: object
    found: object
    p: int | None
    truncation: int | None
    method: str

    @property
    def passed(self) -> bool:
        return self.expected == self.found

    def to_dict(self):
        return {"group": self.group, "check": self.name, "expected": _plain(self.expected),
                "found": _plain(self.found), "passed": self.passed, "p": self.p,
                "truncation": self.truncation, "method": self.method}


def _plain(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


@dataclass(frozen=True)
class Example:
    group: str
    name: str
    expected: object
    run: Callable  # corpus, t0 -> (found, p, truncation, method)
    slow: bool = False


def _hjf_up(form, p):
    def run(corpus, t0):
        v = modp.up_test_hjf(evaluate(form, corpus, t0), p, corpus=corpus)
        return v.holds, p, v.truncation, v.method
    return run


def _hjf_scan(form, p):
    def run(corpus, t0):
        s = modp.ramanujan_scan_hjf(evaluate(form, corpus, t0), p)
        method = s.method + ("" if s.agrees else " (methods disagree)")
        return s.found, p, s.truncation, method
    return run


def _hmf_scan(form, p):
    def run(corpus, t0):
        s = modp.ramanujan_scan_hmf(evaluate(form, corpus, t0), p)
        method = s.method + ("" if s.agrees else " (methods disagree)")
        return s.found, p, s.truncation, method
    return run


def _hmf_up(form, p):
    def run(corpus, t0):
        v = modp.up_test_hmf(evaluate(form, corpus, t0), p)
        return v.holds, p, v.truncation, v.method
    return run


def _hmf_filt(form, p, steps):
    def run(corpus, t0):
        G = modp.ModHMF.of(evaluate(form, corpus, t0), p).d_op(steps)
        r = modp.hmf_filtration(G, p, corpus=corpus)
        return r.value, p, r.truncation, "filtration, verified at truncation"
    return run


def _pi_up(p):
    def run(corpus, t0):
        f = index_raise(corpus.hjf("phi10"), (1, 1))
        v = modp.up_test_hjf(f, p, corpus=corpus)
        return v.holds, p, v.truncation, v.method
    return run


def _phi10_cycle(p):
    def run(corpus, t0):
        f = modp.ModHJF.of(corpus.hjf("phi10"), p)
        return f.heat(p - 1).congruent(f), p, f.trunc, "heat power"
    return run


def _d_vanishes(form, p):
    def run(corpus, t0):
        G = modp.ModHMF.of(evaluate(form, corpus, t0), p)
        return G.d_op().is_zero(), p, G.t0, "direct, verified at truncation"
    return run


def _chi8_coeff(key):
    def run(corpus, t0):
        chi8 = corpus.hmf("chi8", t0)
        return chi8.coeffs.get(key, Fraction(0)), None, t0, "exact"
    return run


def _chi8_cycle_filtrations(p):
    def run(corpus, t0):
        v = modp.up_test_hmf(corpus.hmf("chi8", t0), p, compare_filtrations=True, corpus=corpus)
        d = v.details
        return (d["filtration of D^(p-1)"], d["filtration of F"]), p, v.truncation, \
            "filtration, verified at truncation"
    return run


EXAMPLES = (
    Example("jacobi U(p)", "phi10 | U(5) = 0 mod 5", True, _hjf_up("phi10", 5)),
    Example("jacobi U(p)", "phi10 | U(7) = 0 mod 7", False, _hjf_up("phi10", 7)),
    Example("jacobi U(p)", "phi10 | U(11) = 0 mod 11", False, _hjf_up("phi10", 11)),
    Example("jacobi U(p)", "pi_(1+i)(phi10) | U(5) = 0 mod 5", True, _pi_up(5)),
    Example("jacobi U(p)", "L^6(phi10) = phi10 mod 7", False, _phi10_cycle(7)),
    Example("jacobi Ramanujan", "phi8 mod 7", [1, 2, 4], _hjf_scan("phi8", 7)),
    Example("jacobi Ramanujan", "phi8 mod 13", [1, 3, 4, 9, 10, 12], _hjf_scan("phi8", 13)),
    Example("jacobi Ramanujan", "(e6*phi4 - e4*phi6)/24 mod 7", [1, 2, 4],
            _hjf_scan("(e6*phi4 - e4*phi6)/24", 7)),
    Example("chi8", "A(1, (1+i)/2, 1)", Fraction(1), _chi8_coeff((1, 1, 1, 1))),
    Example("chi8", "A(1, -1/2, 1)", Fraction(-486), _chi8_coeff((1, -1, 0, 1))),
    Example("chi8", "D^4(chi8) = chi8 mod 5", True, _hmf_up("chi8", 5)),
    Example("chi8", "filtration of D(chi8) mod 7", 10, _hmf_filt("chi8", 7, 1)),
    Example("chi8", "filtration of D^5(chi8) mod 11", 18, _hmf_filt("chi8", 11, 5)),
    Example("chi8", "chi8 | U(7) = 0 mod 7", False, _hmf_up("chi8", 7)),
    Example("chi8", "filtrations of D^6(chi8) and chi8 mod 7", (50, 8),
            _chi8_cycle_filtrations(7), slow=True),
    Example("chi8", "chi8 | U(11) = 0 mod 11", False, _hmf_up("chi8", 11)),
    Example("hermitian Ramanujan", "D(chi8 - 6*h4^2) = 0 mod 7", True,
            _d_vanishes("chi8 - 6*h4^2", 7)),
    Example("hermitian Ramanujan", "chi8 - 6*h4^2 mod 7", [1, 2, 3, 4, 5, 6],
            _hmf_scan("chi8 - 6*h4^2", 7)),
    Example("hermitian Ramanujan", "f10 mod 5", [1, 4], _hmf_scan("f10", 5)),
    Example("hermitian Ramanujan", "h4*f10 mod 5", [1, 4], _hmf_scan("h4*f10", 5)),
    Example("hermitian Ramanujan", "h4^2*h6 + h6*chi8 mod 5", [1, 4],
            _hmf_scan("h4^2*h6 + h6*chi8", 5)),
)


def run_examples(corpus: Corpus | None = None, t0: int = 10, include_slow: bool = True):
    corpus = corpus or default_corpus()
    out = []
    for ex in EXAMPLES:
        if ex.slow and not include_slow:
            continue
        found, p, trunc, method = ex.run(corpus, t0)
        out.append(ExampleResult(ex.group, ex.name, ex.expected, found, p, trunc, method))
    return out
