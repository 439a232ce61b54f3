"""Command-line interface: ``hermod <group> <command> [options]``.

Exit status is 0 when every reported check passes, 1 on any mismatch or
failed consistency check, 2 on usage or data errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import modp
from .arith import NotPIntegral, check_prime
from .examples import run_examples
from .expressions import ExpressionError, evaluate
from .genio import (Corpus, CuspPropertyViolation, MissingAsset, ParseError, default_data_dir,
                    sturm_eta, verify_corpus)
from .hjf import HJForm, InvariantViolation
from .hmf import HMForm


class DataError(Exception):
    pass


DATA_ERRORS = (MissingAsset, ParseError, InvariantViolation, CuspPropertyViolation,
               ExpressionError, NotPIntegral, modp.InsufficientTruncation,
               modp.NoBasisForIndex, modp.MissingWitness, DataError)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _prime(text: str) -> int:
    try:
        return check_prime(int(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _bset(text: str) -> list:
    text = text.strip()
    if text in ("", "none", "{}"):
        return []
    try:
        return sorted(int(x) for x in text.strip("{}").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--data", metavar="DIR", help="data directory (default: $HERMOD_DATA "
                        "or the bundled data)")
    common.add_argument("--format", choices=("text", "json"), default="text")

    form = argparse.ArgumentParser(add_help=False)
    form.add_argument("--form", required=True,
                      help="built-in name or expression, e.g. 'chi8 - 6*h4^2'")
    form.add_argument("--p", type=_prime, required=True, help="prime p >= 5")

    hmf_t0 = argparse.ArgumentParser(add_help=False)
    hmf_t0.add_argument("--t0", type=int, default=10, help="trace truncation (default 10)")

    hjf_trunc = argparse.ArgumentParser(add_help=False)
    hjf_trunc.add_argument("--trunc", type=int, default=None,
                           help="truncate the expansion to n <= TRUNC")

    ram = argparse.ArgumentParser(add_help=False)
    g = ram.add_mutually_exclusive_group(required=True)
    g.add_argument("--b", type=int, help="test a single residue b")
    g.add_argument("--scan", action="store_true", help="test every b in 1..p-1")
    ram.add_argument("--expect", type=_bset, default=None,
                     help="expected set of b for --scan, e.g. 1,2,4")

    up = argparse.ArgumentParser(add_help=False)
    up.add_argument("--expect", choices=("holds", "fails"), default=None)

    parser = argparse.ArgumentParser(prog="hermod", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    gen = groups.add_parser("gen", help="generator data").add_subparsers(dest="cmd", required=True)
    gv = gen.add_parser("verify", parents=[common, hmf_t0], help="validate the data corpus")
    gv.set_defaults(func=cmd_gen_verify)

    hj = groups.add_parser("hjf", help="Hermitian Jacobi forms").add_subparsers(
        dest="cmd", required=True)
    hj.add_parser("up", parents=[common, form, hjf_trunc, up],
                  help="U(p) congruence").set_defaults(func=cmd_hjf_up)
    hj.add_parser("heat-cycle", parents=[common, form, hjf_trunc],
                  help="filtrations along the heat cycle").set_defaults(func=cmd_hjf_cycle)
    hj.add_parser("ramanujan", parents=[common, form, hjf_trunc, ram],
                  help="Ramanujan-type congruences").set_defaults(func=cmd_hjf_ramanujan)
    hj.add_parser("filt", parents=[common, form, hjf_trunc],
                  help="mod-p filtration").set_defaults(func=cmd_hjf_filt)

    hm = groups.add_parser("hmf", help="Hermitian modular forms of degree 2").add_subparsers(
        dest="cmd", required=True)
    hu = hm.add_parser("up", parents=[common, form, hmf_t0, up], help="U(p) congruence")
    hu.add_argument("--theorem-check", action="store_true",
                    help="confirm through the filtration of D^(p+2-k)")
    hu.set_defaults(func=cmd_hmf_up)
    hm.add_parser("ramanujan", parents=[common, form, hmf_t0, ram],
                  help="Ramanujan-type congruences").set_defaults(func=cmd_hmf_ramanujan)
    hf = hm.add_parser("filt", parents=[common, form, hmf_t0], help="mod-p filtration")
    hf.add_argument("--d", type=int, default=0, metavar="J",
                    help="apply the D operator J times mod p first")
    hf.set_defaults(func=cmd_hmf_filt)

    pa = groups.add_parser("paper", help="published example tables").add_subparsers(
        dest="cmd", required=True)
    pe = pa.add_parser("examples", parents=[common, hmf_t0], help="run and compare all tables")
    pe.add_argument("--quick", action="store_true", help="skip the slowest check")
    pe.set_defaults(func=cmd_paper_examples)
    return parser


# ------------------------------------------------------------------ helpers

def _corpus(args) -> Corpus:
    return Corpus(args.data) if args.data else Corpus(default_data_dir())


def _form(args, kind):
    t0 = getattr(args, "t0", 10)
    obj = evaluate(args.form, _corpus(args), t0)
    if not isinstance(obj, kind):
        want = "Hermitian Jacobi form" if kind is HJForm else "Hermitian modular form"
        raise DataError(f"{args.form!r} is not a {want}")
    trunc = getattr(args, "trunc", None)
    if trunc is not None and kind is HJForm:
        name = obj.name
        obj = obj.truncate(trunc)
        object.__setattr__(obj, "name", name)
    return obj


def _warn(msg):
    print(f"warning: {msg}", file=sys.stderr)


def _emit(args, command, ok, results, lines):
    if args.format == "json":
        sys.stdout.write(canonical_json({"command": command, "ok": ok, "results": results}))
    else:
        for line in lines:
            print(line)
        print("OK" if ok else "MISMATCH")
    return 0 if ok else 1


def _fmt_set(xs):
    return "{" + ", ".join(map(str, xs)) + "}"


def _verdict_line(v):
    tag = "rigorous" if v.rigorous else f"verified at truncation {v.truncation}"
    return (f"{v.subject}: {v.question} mod {v.p}: {'holds' if v.holds else 'fails'} "
            f"[p={v.p}, truncation={v.truncation}, method={v.method}, {tag}]")


# ----------------------------------------------------------------- commands

def cmd_gen_verify(args):
    data = args.data or default_data_dir()
    checks = verify_corpus(data, t0=args.t0)
    ok = all(c.passed for c in checks)
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}"
             + (f"  (truncation {c.truncation})" if c.truncation is not None else "")
             + (f"  {c.detail}" if c.detail and not c.passed else "") for c in checks]
    return _emit(args, "gen verify", ok, [c.to_dict() for c in checks], lines)


def _up_ok(v, expect):
    ok = v.details.get("agree", True) and v.details.get("filtration check", True)
    if expect is not None:
        ok = ok and v.holds == (expect == "holds")
    return ok


def cmd_hjf_up(args):
    v = modp.up_test_hjf(_form(args, HJForm), args.p, corpus=_corpus(args))
    lines = [_verdict_line(v)] + [f"  {k}: {val}" for k, val in v.details.items()]
    return _emit(args, "hjf up", _up_ok(v, args.expect), [v.to_dict()], lines)


def cmd_hjf_cycle(args):
    r = modp.heat_cycle(_form(args, HJForm), args.p, corpus=_corpus(args))
    if not r.rigorous:
        _warn(f"expansion shorter than the Sturm bound for the later steps; "
              f"verified at truncation {r.truncation}")
    lines = [f"{r.subject} mod {r.p}: filtration {r.start}",
             f"  heat cycle filtrations: {list(r.filtrations)}",
             f"  high points: {list(r.high_points)}  low points: {list(r.low_points)}"]
    lines += [f"  {'PASS' if v else 'FAIL'}  {k}" for k, v in r.checks.items()]
    return _emit(args, "hjf heat-cycle", r.ok, [r.to_dict()], lines)


def _scan_output(args, s, command):
    ok = s.agrees and s.guard.get("consistent", True)
    if args.b is not None:
        found = s.verdicts[args.b]
        lines = [f"{s.subject} mod {s.p}, b = {args.b}: "
                 f"{'congruence' if found else 'no congruence'} "
                 f"[p={s.p}, truncation={s.truncation}, method={s.method}, "
                 f"{'rigorous' if s.rigorous else 'verified at truncation ' + str(s.truncation)}]"]
    else:
        lines = [f"{s.subject} mod {s.p}: congruences at b in {_fmt_set(s.found)} "
                 f"[p={s.p}, truncation={s.truncation}, method={s.method}, "
                 f"{'rigorous' if s.rigorous else 'verified at truncation ' + str(s.truncation)}]"]
        if args.expect is not None:
            ok = ok and s.found == args.expect
            lines.append(f"  expected {_fmt_set(args.expect)}")
    lines.append(f"  direct and heat criterion agree: {s.agrees}")
    if s.guard.get("applies"):
        lines.append(f"  non-existence guard applies; consistent: {s.guard['consistent']}")
    return _emit(args, command, ok, [s.to_dict()], lines)


def cmd_hjf_ramanujan(args):
    f = _form(args, HJForm)
    if args.b is not None and not 1 <= args.b <= args.p - 1:
        raise DataError(f"b must lie in 1..{args.p - 1}")
    need = sturm_eta(f.weight + (args.p + 1) ** 2 // 2, f.index)
    if f.trunc < need:
        _warn(f"rigorous verdict needs n <= {need}; data reach n = {f.trunc}")
    s = modp.ramanujan_scan_hjf(f, args.p, None if args.b is None else [args.b])
    return _scan_output(args, s, "hjf ramanujan")


def cmd_hjf_filt(args):
    f = _form(args, HJForm)
    try:
        r = modp.hjf_filtration(f, args.p, corpus=_corpus(args))
    except modp.InsufficientTruncation as exc:
        _warn(f"{exc}; computing at the available depth")
        r = modp.hjf_filtration(f, args.p, corpus=_corpus(args), strict=False)
    return _filt_output(args, r, "hjf filt")


def _filt_output(args, r, command):
    val = "zero mod p" if r.value is None else r.value
    tag = "rigorous" if r.rigorous else f"verified at truncation {r.truncation}"
    lines = [f"{r.subject} mod {r.p}: filtration {val} [p={r.p}, truncation={r.truncation}, "
             f"{tag}]",
             f"  candidates tested: {list(r.candidates)}"]
    if r.witness:
        lines.append("  witness: " + " + ".join(f"{c}*{lab}" for lab, c in r.witness))
    return _emit(args, command, True, [r.to_dict()], lines)


def cmd_hmf_up(args):
    v = modp.up_test_hmf(_form(args, HMForm), args.p, theorem_check=args.theorem_check,
                         corpus=_corpus(args))
    lines = [_verdict_line(v)] + [f"  {k}: {val}" for k, val in v.details.items()]
    return _emit(args, "hmf up", _up_ok(v, args.expect), [v.to_dict()], lines)


def cmd_hmf_ramanujan(args):
    F = _form(args, HMForm)
    if args.b is not None and not 1 <= args.b <= args.p - 1:
        raise DataError(f"b must lie in 1..{args.p - 1}")
    s = modp.ramanujan_scan_hmf(F, args.p, None if args.b is None else [args.b])
    return _scan_output(args, s, "hmf ramanujan")


def cmd_hmf_filt(args):
    F = modp.ModHMF.of(_form(args, HMForm), args.p)
    if args.d:
        F = F.d_op(args.d)
    r = modp.hmf_filtration(F, args.p, corpus=_corpus(args))
    return _filt_output(args, r, "hmf filt")


def cmd_paper_examples(args):
    results = run_examples(_corpus(args), args.t0, include_slow=not args.quick)
    ok = all(r.passed for r in results)

    def show(x):
        if isinstance(x, tuple):
            return "(" + ", ".join(map(str, x)) + ")"
        if isinstance(x, list):
            return _fmt_set(x) if all(isinstance(v, int) for v in x) else str(x)
        return str(x)

    lines = []
    group = None
    for r in results:
        if r.group != group:
            group = r.group
            lines.append(f"[{group}]")
        where = f"p={r.p}, " if r.p else ""
        lines.append(f"  {'PASS' if r.passed else 'FAIL'}  {r.name}: expected {show(r.expected)}, "
                     f"found {show(r.found)}  [{where}truncation={r.truncation}, "
                     f"method={r.method}]")
    return _emit(args, "paper examples", ok, [r.to_dict() for r in results], lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "data", None):
        if not os.path.isdir(args.data):
            print(f"error: data directory {args.data} does not exist", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
