"""Command line front end.

Exit codes: 0 on success, 1 when two computations that must agree do not,
2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .ainf import AinfModuleX, check_relations
from .f2 import F2Matrix
from .homalg import ComplexError
from .khovanov import InconsistencyError, PDError, detect_split, homology_with_module, mirror_table
from .khovanov.pd import parse_diagram
from .randgen import random_laurent_complex
from .twist import verify_koszul, verify_twist_theorem
from .unroll import spectral_page_ranks, unroll_module, unrolled_homology_dim


class InputError(ValueError):
    pass


def format_table(table: dict) -> str:
    """Rows are q descending, columns h ascending; empty cells are dots."""
    if not table:
        return "(zero)"
    hs = sorted({h for h, _ in table})
    qs = sorted({q for _, q in table}, reverse=True)
    width = max(3, max(len(str(h)) for h in hs) + 1)
    lines = ["q\\h".rjust(5) + "".join(str(h).rjust(width) for h in hs)]
    for q in qs:
        cells = "".join((str(table[(h, q)]) if (h, q) in table else ".").rjust(width)
                        for h in hs)
        lines.append(str(q).rjust(5) + cells)
    return "\n".join(lines)


def _table_json(table: dict) -> list[dict]:
    return [{"h": h, "q": q, "dim": d} for (h, q), d in sorted(table.items())]


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"input: cannot read {path} ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"input: invalid JSON ({exc.msg})") from None


def _emit(args, payload: dict, text: str):
    if args.format == "json":
        print(json.dumps(payload, indent=1))
    else:
        print(text)


def cmd_compute(args) -> int:
    d = parse_diagram(_read_json(args.input))
    rng = np.random.default_rng(args.seed)
    kh = homology_with_module(d.pd, d.p, d.q, rng=rng)
    red, unred = kh.reduced_table, kh.unreduced_table
    if args.mirror:
        red, unred = mirror_table(red), mirror_table(unred)
    H = kh.transferred
    ops = [j for j in range(len(H.ops)) if not H.op(j).is_zero()] if H.is_finite else None
    payload = {
        "seed": args.seed,
        "reduced_homology": _table_json(red),
        "unreduced_homology": _table_json(unred),
        "x_rank_on_reduced": kh.x_on_H.rank(),
        "x_rank_on_unreduced": kh.x_on_unreduced.rank(),
        "w_rank_on_unreduced": kh.w_on_unreduced.rank(),
        "transferred_nonzero_ops": ops if ops is not None else "infinitely many",
        "unrolled_homology_dim": unrolled_homology_dim(H),
    }
    text = "\n".join([
        f"seed {args.seed}",
        "reduced homology:", format_table(red),
        "unreduced homology:", format_table(unred),
        f"X rank on reduced homology: {payload['x_rank_on_reduced']} of {kh.reduced.dim}",
        f"X rank on unreduced homology: {payload['x_rank_on_unreduced']} of {kh.unreduced.dim}",
        f"W rank on unreduced homology: {payload['w_rank_on_unreduced']}",
        f"nonzero transferred operations: {payload['transferred_nonzero_ops']}",
        f"unrolled homology dimension: {payload['unrolled_homology_dim']}",
    ])
    _emit(args, payload, text)
    return 0


def cmd_detect(args) -> int:
    d = parse_diagram(_read_json(args.input))
    v = detect_split(d.pd, d.p, d.q)
    payload = v.to_json(mirror=args.mirror)
    table = mirror_table(v.reduced_table) if args.mirror else v.reduced_table
    text = "\n".join([
        f"verdict: {v.verdict}",
        f"reduced homology free over F2[X]/(X^2): {v.free_reduced}",
        f"unrolled complex acyclic: {v.unrolled_acyclic}",
        f"unreduced homology free over F2[W,X]/(W^2,X^2): {v.free_unreduced_WX}",
        f"X rank on reduced homology: {v.x_rank_on_homology}",
        format_table(table),
    ])
    _emit(args, payload, text)
    return 0


def _matrix(data, n: int | None, name: str) -> F2Matrix:
    try:
        arr = np.asarray(data, dtype=np.int64)
    except (TypeError, ValueError):
        raise InputError(f"{name}: expected a matrix of 0/1 entries") from None
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or (n is not None and arr.shape[0] != n):
        raise InputError(f"{name}: expected a square matrix of size {n or 'n'}")
    if np.any((arr != 0) & (arr != 1)):
        raise InputError(f"{name}: entries must be 0 or 1")
    return F2Matrix.from_dense(arr)


def parse_module(data) -> AinfModuleX:
    """``{"ops": [m0, m1, ...]}`` or ``{"d": ..., "x": ...}``; optional ``"grading"``."""
    if not isinstance(data, dict):
        raise InputError("input: expected a JSON object")
    if "ops" in data:
        raw = data["ops"]
        if not isinstance(raw, list) or not raw:
            raise InputError("ops: expected a nonempty list of matrices")
    elif "d" in data and "x" in data:
        raw = [data["d"], data["x"]]
    else:
        raise InputError("ops: missing (give ops, or d and x)")
    first = _matrix(raw[0], None, "ops[0]")
    ops = [first] + [_matrix(m, first.nrows, f"ops[{k + 1}]") for k, m in enumerate(raw[1:])]
    grading = data.get("grading")
    if grading is not None:
        try:
            grading = [tuple(int(a) for a in g) for g in grading]
        except (TypeError, ValueError):
            raise InputError("grading: expected a list of [h, q] pairs") from None
    try:
        M = AinfModuleX(first.nrows, ops, grading=grading)
    except ValueError as exc:
        raise InputError(f"grading: {exc}") from None
    bad = check_relations(M)
    if bad:
        raise InputError(f"ops: A-infinity relation {bad[0].index} fails")
    return M


def cmd_unroll(args) -> int:
    M = parse_module(_read_json(args.input))
    U = unroll_module(M)
    dim = unrolled_homology_dim(M)
    pages = spectral_page_ranks(M)
    payload = {
        "dim": M.dim,
        "unrolled_differential": [[U.matrix[i, j].to_string("Y") for j in range(M.dim)]
                                  for i in range(M.dim)],
        "unrolled_homology_dim": dim,
        "page_differential_ranks": {str(r): k for r, k in pages.nonzero().items()},
    }
    text = "\n".join([
        "unrolled differential:", U.to_string(),
        f"unrolled homology dimension: {dim}",
        "page differential ranks: " + (", ".join(f"d_{r}: {k}" for r, k in
                                               pages.nonzero().items()) or "none"),
    ])
    _emit(args, payload, text)
    return 0


def cmd_twist(args) -> int:
    if args.random < 0 or args.max_rank < 1:
        raise InputError("random: need --random >= 0 and --max-rank >= 1")
    rng = np.random.default_rng(args.seed)
    bad = []
    for k in range(args.random):
        C = random_laurent_complex(rng, args.max_rank)
        for label, rep in (("twist", verify_twist_theorem(C, rng)), ("koszul", verify_koszul(C))):
            if not rep.ok:
                bad.append({"index": k, "check": label, "failures": rep.failures})
    payload = {"seed": args.seed, "complexes": args.random, "max_rank": args.max_rank,
               "counterexamples": len(bad), "details": bad}
    lines = [f"seed {args.seed}: {args.random} random complexes of rank <= {args.max_rank}",
             f"{len(bad)} counterexamples"]
    lines += [f"  #{b['index']} ({b['check']}): {'; '.join(b['failures'])}" for b in bad]
    _emit(args, payload, "\n".join(lines))
    return 1 if bad else 0


def cmd_selftest(args) -> int:
    from .selftest import run_selftest
    results = run_selftest(args.seed)
    payload = {"seed": args.seed,
               "checks": [{"name": n, "ok": m is None, "message": m} for n, m in results]}
    lines = [f"seed {args.seed}"]
    lines += [f"{'PASS' if m is None else 'FAIL'}  {n}" + (f": {m}" if m else "")
              for n, m in results]
    _emit(args, payload, "\n".join(lines))
    return 0 if all(m is None for _, m in results) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="khodetect",
                                 description="Khovanov homology module structure and split detection over F2.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="text")
    common.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn, help_ in (("compute", cmd_compute, "bigraded homology and module ranks"),
                            ("detect-split", cmd_detect, "split detection verdict")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("input", help="diagram JSON file, or - for stdin")
        p.add_argument("--mirror", action="store_true", help="report (h, q) as (-h, -q)")
        p.set_defaults(func=fn)
    p = sub.add_parser("unroll", parents=[common], help="unroll a module given as JSON matrices")
    p.add_argument("input")
    p.set_defaults(func=cmd_unroll)
    p = sub.add_parser("twist-verify", parents=[common],
                       help="check the twisted-complex theorems on random complexes")
    p.add_argument("--random", type=int, default=50)
    p.add_argument("--max-rank", type=int, default=6)
    p.set_defaults(func=cmd_twist)
    p = sub.add_parser("selftest", parents=[common], help="run the built-in property suite")
    p.set_defaults(func=cmd_selftest)
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, PDError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InconsistencyError, ComplexError) as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
