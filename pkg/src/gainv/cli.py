"""Command-line driver.

Exit codes: 0 all checks pass, 1 a verification failed, 2 usage or input
error, 3 an internal construction step failed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor

from . import families as fam
from .lfihd import AxiomError, HigherDerivation, check_axioms, check_homogeneous
from .polyring import GF, QQ, PolyError, Polynomial, is_prime
from .sequence import SequenceError, extend_sequence, initial_table, verify_sequence
from .specialinv import ConstructionError, all_special_invariants, special_invariant, verify_serialized

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _m(text: str) -> int:
    try:
        m = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if m < 2:
        raise argparse.ArgumentTypeError("m must be >= 2")
    return m


def _nonneg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("N must be >= 0")
    return n


def _primes(text: str) -> list[int]:
    return [_prime(t) for t in text.split(",") if t.strip()]


def _family(text: str) -> str:
    key = text.lower()
    if key not in fam.FAMILIES:
        raise argparse.ArgumentTypeError(f"family must be one of {', '.join(fam.FAMILIES)}")
    return key


_RANGE_RE = re.compile(r"([pm])=(\d+)(?:\.\.(\d+))?")


def parse_grid(specs: list[str]) -> tuple[list[int], list[int]]:
    """``["p=2..13", "m=2..5"]`` -> (primes in range, m values)."""
    got = {}
    for s in specs:
        mt = _RANGE_RE.fullmatch(s.strip())
        if not mt:
            raise UsageError(f"bad grid spec {s!r}; expected p=A..B or m=A..B")
        lo = int(mt.group(2))
        hi = int(mt.group(3) or lo)
        got[mt.group(1)] = range(lo, hi + 1)
    ps = [p for p in got.get("p", ()) if is_prime(p)]
    ms = [m for m in got.get("m", ()) if m >= 2]
    if not ps or not ms:
        raise UsageError("grid needs at least one prime p and one m >= 2")
    return ps, ms


def _emit(args, text: str):
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


# ---------------------------------------------------------------------------
# subcommands


def cmd_examples_show(args) -> int:
    fld = GF(args.p) if args.p else QQ
    B = fam.build_example(args.family, args.m, fld)
    D = B.derivation
    if args.format == "json":
        out = {
            "family": B.family,
            "m": B.m,
            "field": fld.to_json(),
            "gradings": {g: dict(zip(B.ring.variables, w)) for g, w in B.ring.gradings},
            "derivation": D.to_json(),
        }
        _emit(args, _dump(out))
        return EXIT_OK
    lines = [f"{B.family.upper()}-{B.m} over {fld!r}: ring k[{', '.join(B.ring.variables)}]"]
    for v in B.ring.variables:
        lines.append(f"  theta({v}) = {D.images[v]}")
    for g, w in B.ring.gradings:
        lines.append(f"  {g}: " + ", ".join(f"{v}={k}" for v, k in zip(B.ring.variables, w)))
    _emit(args, "\n".join(lines))
    return EXIT_OK


def _invariant_text(inv) -> str:
    lines = [
        f"{inv.family.upper()}-{inv.m} over GF({inv.p})",
        f"  b  = {inv.b}",
        f"  b' = {inv.b_prime}",
        f"  F  = {inv.F}",
    ]
    for name, ok in inv.transcript:
        lines.append(f"  [{'pass' if ok else 'FAIL'}] {name}")
    return "\n".join(lines)


def _grid_cell(cell):
    p, m = cell
    try:
        invs = all_special_invariants(p, m)
        return p, m, {k: (v.passed, len(v.F), v.b_prime.is_zero()) for k, v in invs.items()}, None
    except (ConstructionError, SequenceError, AssertionError) as exc:
        return p, m, None, str(exc)


def cmd_invariant(args) -> int:
    if args.grid:
        return _invariant_grid(args)
    if args.family is None or args.p is None or args.m is None:
        raise UsageError("invariant needs --family, -p and -m (or --grid)")
    inv = special_invariant(args.family, args.p, args.m)
    if args.format == "json":
        _emit(args, _dump(inv.to_json()))
    else:
        _emit(args, _invariant_text(inv))
    return EXIT_OK if inv.passed else EXIT_FAIL


def _invariant_grid(args) -> int:
    ps, ms = parse_grid(args.grid)
    wanted = [args.family] if args.family else list(fam.FAMILIES)
    cells = [(p, m) for p in ps for m in ms]
    if args.jobs == 1:
        results = [_grid_cell(c) for c in cells]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_grid_cell, cells))
    rows, status = [], EXIT_OK
    for p, m, res, err in results:
        if err is not None:
            rows.append({"p": p, "m": m, "error": err})
            status = EXIT_INTERNAL
            continue
        for f in wanted:
            ok, nterms, bp_zero = res[f]
            rows.append({"p": p, "m": m, "family": f, "passed": ok, "terms": nterms,
                         "b_prime_zero": bp_zero})
            if not ok and status == EXIT_OK:
                status = EXIT_FAIL
    if args.format == "json":
        _emit(args, _dump({"cells": rows}))
    else:
        lines = [f"{'p':>3} {'m':>3} {'family':<6} {'result':<6} {'terms':>6}  b'"]
        for r in rows:
            if "error" in r:
                lines.append(f"{r['p']:>3} {r['m']:>3} {'-':<6} ERROR  {r['error']}")
            else:
                lines.append(f"{r['p']:>3} {r['m']:>3} {r['family']:<6} "
                             f"{'pass' if r['passed'] else 'FAIL':<6} {r['terms']:>6}  "
                             f"{'0' if r['b_prime_zero'] else 'nonzero'}")
        _emit(args, "\n".join(lines))
    return status


def cmd_verify(args) -> int:
    try:
        if args.input == "-":
            obj = json.load(sys.stdin)
        else:
            with open(args.input, encoding="utf-8") as fh:
                obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    if not isinstance(obj, dict):
        raise UsageError("input must be a JSON object")
    try:
        if "family" in obj and "F" in obj:
            ok, checks = verify_serialized(obj)
        elif "derivation" in obj and "polynomial" in obj:
            D = HigherDerivation.from_json(obj["derivation"])
            f = Polynomial.from_json(obj["polynomial"], D.base)
            checks = [("polynomial invariant", D.is_invariant(f))]
            if "grading" in obj:
                g = obj["grading"]
                ring = D.base.with_grading(g["name"], g["weights"])
                D2 = HigherDerivation(ring, D.field, D.images, D.U)
                checks.append(("derivation homogeneous",
                               check_homogeneous(D2, g["name"], int(g.get("U", 0)))))
                checks.append(("polynomial homogeneous", f.embed(ring).is_homogeneous(g["name"])))
            ok = all(c for _, c in checks)
        else:
            raise UsageError("input is neither a special invariant nor a derivation/polynomial pair")
    except (PolyError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed input: {exc}") from None
    lines = [f"[{'pass' if c else 'FAIL'}] {name}" for name, c in checks]
    _emit(args, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sequence(args) -> int:
    table = extend_sequence(initial_table(), args.n)
    report = verify_sequence(table, args.primes)
    if args.format == "json":
        out = table.to_json()
        out["report"] = report.to_json()
        _emit(args, _dump(out))
    else:
        lines = []
        for en in table.entries:
            lines.append(f"h_{en.n} = {en.h}")
            lines.append(f"c_{en.n} = {en.c}")
        fails = report.failures()
        lines.append(f"{len(report.items) - len(fails)}/{len(report.items)} checks pass")
        lines += [f"FAIL {it.name} {it.detail}" for it in fails]
        _emit(args, "\n".join(lines))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_axioms(args) -> int:
    fld = GF(args.p) if args.p else QQ
    B = fam.build_example(args.family, args.m, fld)
    D = B.derivation
    verdicts = [("axioms (theta^(0) = id, coaction)", check_axioms(D).passed),
                (f"{B.grading}-homogeneous, U weight 0", check_homogeneous(D, B.grading, 0))]
    if B.family == "df5":
        verdicts.append(("w4-homogeneous, U weight 1", check_homogeneous(D, "w4", 1)))
    if args.format == "json":
        _emit(args, _dump({"family": B.family, "m": B.m,
                           "checks": {k: v for k, v in verdicts}}))
    else:
        _emit(args, "\n".join(f"[{'pass' if ok else 'FAIL'}] {name}" for name, ok in verdicts))
    return EXIT_OK if all(ok for _, ok in verdicts) else EXIT_FAIL


def cmd_kernel(args) -> int:
    fld = GF(args.p) if args.p else QQ
    gs = fam.known_generators(args.family, args.m, fld)
    D = fam.build_example(args.family, args.m, fld).sub_derivation
    invariant = {name: D.is_invariant(g) for name, g, _ in gs.generators}
    comparison = fam.compare_with_reference(args.family, fld) if args.m == 2 else {}
    readings = fam.f6_f2_readings(fld) if (args.family == "f6" and args.m == 2) else {}
    ok = all(invariant.values()) and all(c[2] for c in comparison.values())
    if args.format == "json":
        out = {
            "family": gs.family,
            "m": gs.m,
            "generators": [dict(entry, invariant=invariant[entry["name"]])
                           for entry in gs.to_json()],
            "reference_match": {k: v[2] for k, v in comparison.items()},
            "f2_readings": readings,
        }
        _emit(args, _dump(out))
    else:
        lines = []
        for name, g, prov in gs.generators:
            lines.append(f"[{'pass' if invariant[name] else 'FAIL'}] {name} = {g}   ({prov})")
        for name, (got, ref, same) in comparison.items():
            lines.append(f"[{'pass' if same else 'FAIL'}] {name} matches reference form")
        for name, inv in readings.items():
            lines.append(f"  reading {name}: {'invariant' if inv else 'NOT invariant'}")
        _emit(args, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gainv", description=(
        "Construct and verify invariants of G_a-actions (DF5, F6, R7 families) "
        "in positive characteristic."))
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, family_required=True):
        p.add_argument("--family", type=_family, required=family_required)
        p.add_argument("-m", type=_m, required=family_required)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("-o", "--output")

    ex = sub.add_parser("examples", help="show the example families")
    exsub = ex.add_subparsers(dest="action", required=True)
    show = exsub.add_parser("show", help="print generator images and gradings")
    common(show)
    show.add_argument("-p", type=_prime, help="work over GF(p) instead of Q")
    show.set_defaults(func=cmd_examples_show)

    inv = sub.add_parser("invariant", help="construct the special invariant v^p + v b' - b")
    common(inv, family_required=False)
    inv.add_argument("-p", type=_prime)
    inv.add_argument("--grid", nargs="+", metavar="SPEC",
                     help="run a grid, e.g. --grid p=2..13 m=2..5")
    inv.add_argument("-j", "--jobs", type=int, default=None,
                     help="worker processes for --grid (default: CPU count)")
    inv.set_defaults(func=cmd_invariant)

    ver = sub.add_parser("verify", help="re-check emitted JSON")
    ver.add_argument("input", help="JSON file, or - for stdin")
    ver.add_argument("-o", "--output")
    ver.set_defaults(func=cmd_verify)

    seq = sub.add_parser("sequence", help="build and verify the h_n / c_n table")
    seq.add_argument("-n", type=_nonneg, required=True)
    seq.add_argument("--primes", type=_primes, default=[])
    seq.add_argument("--format", choices=("text", "json"), default="text")
    seq.add_argument("-o", "--output")
    seq.set_defaults(func=cmd_sequence)

    ax = sub.add_parser("axioms", help="check the derivation axioms and homogeneity")
    common(ax)
    ax.add_argument("-p", type=_prime)
    ax.set_defaults(func=cmd_axioms)

    ker = sub.add_parser("kernel", help="list and check generators of the v-free invariants")
    common(ker)
    ker.add_argument("-p", type=_prime)
    ker.set_defaults(func=cmd_kernel)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConstructionError, SequenceError, AxiomError, AssertionError) as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except PolyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
