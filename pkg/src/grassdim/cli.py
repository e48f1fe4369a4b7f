"""grassdim command line.

Exit codes: 0 success, 2 usage error or invalid input, 3 degenerate
sampling, 4 guard rail exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from fractions import Fraction
from math import comb

import numpy as np

from . import finite_codes, formulas
from .combinat import InvalidParams as CombinatInvalid
from .exterior import (
    ExteriorError,
    PlueckerVector,
    UnexpectedKernelDim,
    embed_fiber,
    fiber_coordinates,
    proportionality,
    recover_overlap,
)
from .fields import FieldError, FieldSpec, default_oracle_fields, prime_field, rationals
from .terracini import (
    DegenerateAfterRetries,
    SecantParams,
    TerraciniError,
    TooLarge as SymbolicTooLarge,
    benchmark,
    dimension,
)

EXIT_OK, EXIT_USAGE, EXIT_DEGENERATE, EXIT_GUARD = 0, 2, 3, 4

CSV_COLUMNS = ["n", "k", "s", "r", "cone", "proj", "virtual", "expected", "fiber", "defect",
               "fiber_match"]

DEFAULT_ROW_CAP = 300


class UsageError(Exception):
    pass


class GuardRail(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers


def _fields(args) -> list[FieldSpec] | FieldSpec:
    if args.rationals:
        return rationals(args.seed)
    if args.prime:
        return [prime_field(p, args.seed) for p in args.prime]
    return default_oracle_fields(args.seed)


def _int_range(text: str) -> list[int]:
    """``"6"``, ``"6:8"`` (inclusive) or ``"6,8,9"``."""
    try:
        if ":" in text:
            a, b = text.split(":")
            out = list(range(int(a), int(b) + 1))
        else:
            out = [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return out


def workers() -> int:
    env = os.environ.get("GRASSDIM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"GRASSDIM_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _text(d: dict, indent: str = "") -> str:
    lines = []
    for key, val in d.items():
        if isinstance(val, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_text(val, indent + "  ").rstrip("\n"))
        else:
            lines.append(f"{indent}{key}: {val}")
    return "\n".join(lines) + "\n"


def _csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _emit(args, text: str):
    if args.output:
        with open(args.output, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def report_row(rep) -> dict:
    p = rep.params
    return {"n": p.n, "k": p.k, "s": p.s, "r": p.r, "cone": rep.cone_dim, "proj": rep.proj_dim,
            "virtual": rep.virtual_dim, "expected": rep.expected_dim, "fiber": rep.fiber_dim,
            "defect": rep.defect, "fiber_match": rep.matches_fiber}


def _render(args, payload: dict, rows: list[dict] | None = None, columns=None) -> str:
    if args.format == "json":
        return dumps(payload)
    if args.format == "csv":
        return _csv(rows if rows is not None else [payload], columns or list(payload))
    return _text(payload)


# ---------------------------------------------------------------------------
# commands


def cmd_dim(args) -> int:
    params = SecantParams(args.n, args.k, args.s, args.r)
    if args.trials < 2:
        raise UsageError("dim needs --trials >= 2")
    rep = dimension(params, _fields(args), trials=args.trials, seed=args.seed)
    _emit(args, _render(args, rep.to_dict(), [report_row(rep)], CSV_COLUMNS))
    return EXIT_OK


def cmd_predict(args) -> int:
    pred = formulas.predict(args.n, args.k, args.s, args.r)
    _emit(args, _render(args, asdict(pred)))
    return EXIT_OK


def _scan_cell(cell, field_args):
    n, k, s, r = cell
    rational, primes, seed, trials = field_args
    if rational:
        fields = rationals(seed)
    elif primes:
        fields = [prime_field(p, seed) for p in primes]
    else:
        fields = default_oracle_fields(seed)
    try:
        return cell, dimension(SecantParams(n, k, s, r), fields, trials=trials, seed=seed), None
    except DegenerateAfterRetries as exc:
        return cell, None, str(exc)


def cmd_defect_scan(args) -> int:
    cells = sorted({(n, k, s, r) for n in args.n for k in args.k for s in args.s for r in args.r
                    if 0 <= r <= k <= n and s >= 1})
    if not cells:
        raise UsageError("the grid has no valid (n, k, s, r) tuple")
    too_big = [c for c in cells if comb(c[0], c[1]) > args.max_rows]
    if too_big:
        raise GuardRail(f"C(n,k) exceeds --max-rows {args.max_rows} at {too_big[0]}")
    field_args = (args.rationals, args.prime, args.seed, args.trials)
    nw = min(workers(), len(cells))
    if nw > 1:
        with ProcessPoolExecutor(max_workers=nw) as pool:
            results = list(pool.map(_scan_cell, cells, [field_args] * len(cells)))
    else:
        results = [_scan_cell(c, field_args) for c in cells]

    rows, failed = [], []
    for cell, rep, err in sorted(results, key=lambda t: t[0]):
        if rep is None:
            failed.append((cell, err))
            print(f"grassdim: {cell}: {err}", file=sys.stderr)
        else:
            rows.append(report_row(rep))
    if args.format == "json":
        text = dumps({"rows": rows, "failed": [{"cell": list(c), "error": e} for c, e in failed]})
    elif args.format == "text":
        text = "".join(
            f"{r['n']} {r['k']} {r['s']} {r['r']}: proj {r['proj']} expected {r['expected']} "
            f"fiber {r['fiber']} defect {r['defect']}{'' if r['fiber_match'] else '  MISMATCH'}\n"
            for r in rows)
    else:
        text = _csv(rows, CSV_COLUMNS)
    _emit(args, text)
    return EXIT_DEGENERATE if failed else EXIT_OK


def read_point_file(path, field: FieldSpec) -> PlueckerVector:
    """Line 1 ``n k``, line 2 numerators, optional line 3 denominators."""
    with open(path) as f:
        lines = [ln.split() for ln in f if ln.strip() and not ln.lstrip().startswith("#")]
    try:
        n, k = (int(x) for x in lines[0])
        nums = [int(x) for x in lines[1]]
        dens = [int(x) for x in lines[2]] if len(lines) > 2 else [1] * len(nums)
    except (ValueError, IndexError):
        raise UsageError(f"{path}: expected 'n k', numerators and optional denominators") from None
    if len(nums) != comb(n, k) or len(dens) != len(nums):
        raise UsageError(f"{path}: need {comb(n, k)} numerators (and as many denominators)")
    if 0 in dens:
        raise UsageError(f"{path}: zero denominator")
    return PlueckerVector.from_list(n, k, [Fraction(a, b) for a, b in zip(nums, dens)], field)


def write_point_file(path, w: PlueckerVector):
    vals = [Fraction(x) for x in w.tolist()]
    with open(path, "w") as f:
        f.write(f"{w.n} {w.k}\n")
        f.write(" ".join(str(v.numerator) for v in vals) + "\n")
        if any(v.denominator != 1 for v in vals):
            f.write(" ".join(str(v.denominator) for v in vals) + "\n")


def _plain(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else str(x)


def cmd_recover(args) -> int:
    field = prime_field(args.prime[0], args.seed) if args.prime else rationals(args.seed)
    w = read_point_file(args.point_file, field)
    try:
        E = recover_overlap(w, args.r)
    except UnexpectedKernelDim as exc:
        print(f"grassdim: {exc} (observed kernel dim {exc.observed})", file=sys.stderr)
        return EXIT_USAGE
    t = fiber_coordinates(w, E)
    back = embed_fiber(E, t)
    scalar = proportionality(back, w)
    payload = {
        "field": str(field),
        "n": w.n, "k": w.k, "r": args.r,
        "E": [[_plain(x) for x in row] for row in E.tolist()],
        "t": {"n": t.n, "k": t.k, "coords": [_plain(x) for x in t.tolist()]},
        "roundtrip_proportional": scalar is not None,
        "roundtrip_scalar": None if scalar is None else _plain(scalar),
    }
    _emit(args, _render(args, payload))
    return EXIT_OK if scalar is not None else EXIT_DEGENERATE


def cmd_orbit_count(args) -> int:
    if args.classify:
        table = finite_codes.classify_all(keep_members=bool(args.orbit_dir))
        if args.orbit_dir:
            os.makedirs(args.orbit_dir, exist_ok=True)
            for o in table.orbits:
                finite_codes.write_orbit_binary(o.members, os.path.join(args.orbit_dir, f"{o.label}.bin"))
        payload = {"orbits": table.to_rows(), "total": table.total, "complete": table.is_complete}
        if args.format == "csv":
            text = _csv(table.to_rows(), ["label", "size", "seed", "seed_form"])
        elif args.format == "text":
            text = "".join(f"{o['label']:>10}  {o['size']:>7}  {o['seed_form']}\n"
                           for o in table.to_rows()) + f"{'total':>10}  {table.total:>7}\n"
        else:
            text = dumps(payload)
        _emit(args, text)
        return EXIT_OK
    seed = finite_codes.parse_seed_form(args.seed_form)
    rng = np.random.default_rng(args.seed)
    orbit = finite_codes.orbit_closure(seed, method=args.method, rng=rng)
    if args.orbit_file:
        finite_codes.write_orbit_binary(orbit, args.orbit_file)
    size = len(orbit)
    payload = {"seed_form": finite_codes.format_seed_form(seed), "seed": seed, "size": size,
               "label": finite_codes.ORBIT_LABELS.get(size), "method": args.method}
    _emit(args, _render(args, payload))
    return EXIT_OK


def cmd_code_gen(args) -> int:
    M = finite_codes.generator_matrix(args.n, args.k, args.q)
    if args.format == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(M.tolist())
        text = buf.getvalue()
    else:
        payload = {"n": args.n, "k": args.k, "q": args.q, "rows": M.rows, "cols": M.cols,
                   "points": finite_codes.count_points(args.n, args.k, args.q)}
        if args.format == "json":
            payload["matrix"] = M.tolist()
        text = _render(args, payload)
    _emit(args, text)
    return EXIT_OK


def cmd_bench(args) -> int:
    params = SecantParams(args.n, args.k, args.s, args.r)
    field = _fields(args)
    field = field[0] if isinstance(field, list) else field
    rec = benchmark(params, field, seed=args.seed)
    _emit(args, _render(args, rec.to_dict()))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default=None)
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=2, help="random points per field")
    fld = common.add_mutually_exclusive_group()
    fld.add_argument("--prime", type=int, action="append",
                     help="work over Z/p (repeatable); default two random 31-bit primes")
    fld.add_argument("--rationals", action="store_true", help="exact arithmetic over Q")

    p = argparse.ArgumentParser(prog="grassdim", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def tuple_cmd(name, fn, help_):
        c = sub.add_parser(name, parents=[common], help=help_)
        for a in "nks":
            c.add_argument(a, type=int)
        c.add_argument("r", type=int, nargs="?", default=0)
        c.set_defaults(fn=fn)
        return c

    tuple_cmd("dim", cmd_dim, "oracle dimension with predictions")
    tuple_cmd("predict", cmd_predict, "closed-form predictions only")
    tuple_cmd("bench", cmd_bench, "time cofactor vs symbolic Jacobian")

    c = sub.add_parser("defect-scan", parents=[common], help="oracle vs predictions over a grid")
    for a, default in [("n", "4:8"), ("k", "2:4"), ("s", "2:3"), ("r", "0:2")]:
        c.add_argument(f"--{a}", type=_int_range, default=_int_range(default),
                       help=f"values of {a}: 'a:b' inclusive or 'a,b,c' (default {default})")
    c.add_argument("--max-rows", type=int, default=DEFAULT_ROW_CAP, help="cap on C(n,k)")
    c.set_defaults(fn=cmd_defect_scan, default_format="csv")

    c = sub.add_parser("recover", parents=[common], help="overlap E and fiber form t of a point")
    c.add_argument("point_file")
    c.add_argument("r", type=int)
    c.set_defaults(fn=cmd_recover)

    c = sub.add_parser("orbit-count", parents=[common], help="SL6(F2) orbits on trivectors")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--seed-form", help="e.g. '012+034'")
    g.add_argument("--classify", action="store_true", help="partition all nonzero trivectors")
    c.add_argument("--method", choices=["bfs", "random"], default="bfs")
    c.add_argument("--orbit-file", help="binary export of the orbit (uint32 LE, sorted)")
    c.add_argument("--orbit-dir", help="with --classify, one binary file per orbit")
    c.set_defaults(fn=cmd_orbit_count)

    c = sub.add_parser("code-gen", parents=[common], help="Grassmann code generator matrix")
    c.add_argument("n", type=int)
    c.add_argument("k", type=int)
    c.add_argument("q", type=int)
    c.set_defaults(fn=cmd_code_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format is None:
        args.format = getattr(args, "default_format", "text")
    try:
        return args.fn(args)
    except DegenerateAfterRetries as exc:
        print(f"grassdim: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (GuardRail, SymbolicTooLarge, finite_codes.TooLarge) as exc:
        print(f"grassdim: guard rail: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (UsageError, CombinatInvalid, TerraciniError, formulas.FormulaError, FieldError,
            ExteriorError, OSError) as exc:
        print(f"grassdim: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
