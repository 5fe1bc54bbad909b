"""Command line front end.

Results go to stdout as JSON (``perm mc`` can also emit CSV); progress lines go
to stderr.  Exit status: 0 success, 1 a verification failed, 2 bad parameters
or input, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import sys
from itertools import combinations
from pathlib import Path
from typing import Optional

from ordered_ramsey import __version__
from ordered_ramsey.core import (
    BLUE,
    RED,
    FormatError,
    OrderedColoring,
    OrderedGraph,
    OrderedMatching,
    complete_graph,
    contains_ordered,
    find_blue_triangle,
)
from ordered_ramsey.embed import (
    ContractViolation,
    SizeError,
    embed_nested,
    embed_pmatching,
    outcome_from_json,
    validate_outcome,
)
from ordered_ramsey.paren import ParenError, bound_pmatching, certificate_issues, nested_matching, parse_paren, render_paren
from ordered_ramsey.perm import (
    count_compatible_orderings,
    format_perm,
    mc_shift_intersection,
    ordered_intersection,
    parse_perm,
)
from ordered_ramsey.search import TIMEOUT, nested_sweep, exact_ramsey, two_clique_coloring

EXIT_OK, EXIT_FAILED, EXIT_PARAM, EXIT_BUDGET = 0, 1, 2, 3
THREADS_ENV = "ORDERED_RAMSEY_THREADS"


class UsageError(Exception):
    pass


def parse_count(text: str) -> int:
    """Node counts such as ``10M``, ``250k``, ``1e8``."""
    t = text.strip().lower().replace("_", "")
    scale = 1
    if t and t[-1] in "kmg":
        scale = {"k": 10 ** 3, "m": 10 ** 6, "g": 10 ** 9}[t[-1]]
        t = t[:-1]
    try:
        value = float(t) * scale
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad count {text!r}") from None
    if value < 0 or value != int(value):
        raise argparse.ArgumentTypeError(f"bad count {text!r}")
    return int(value)


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _heartbeat(n: int, nodes: int) -> None:
    print(f"[search] n={n} nodes={nodes}", file=sys.stderr, flush=True)


# -- target options --------------------------------------------------------------

def _add_targets(p: argparse.ArgumentParser, required: bool = True) -> None:
    red = p.add_mutually_exclusive_group(required=required)
    red.add_argument("--red-nested", type=int, metavar="K", help="red target NM_K")
    red.add_argument("--red-paren", metavar="SEQ", help="red target given as a parenthesis string")
    red.add_argument("--red-file", metavar="PATH", help="red target graph file")
    blue = p.add_mutually_exclusive_group()
    blue.add_argument("--blue-clique", type=int, metavar="M", help="blue target K_M (default 3)")
    blue.add_argument("--blue-file", metavar="PATH", help="blue target graph file")


def _targets(args) -> tuple[Optional[OrderedGraph], OrderedGraph]:
    red = None
    if args.red_nested is not None:
        if args.red_nested < 1:
            raise UsageError(f"--red-nested must be positive, got {args.red_nested}")
        red = nested_matching(args.red_nested)
    elif args.red_paren is not None:
        red = parse_paren(args.red_paren)
    elif args.red_file is not None:
        red = OrderedGraph.from_text(_read(args.red_file))
    if args.blue_file is not None:
        blue = OrderedGraph.from_text(_read(args.blue_file))
    else:
        m = 3 if args.blue_clique is None else args.blue_clique
        if m < 1:
            raise UsageError(f"--blue-clique must be positive, got {m}")
        blue = complete_graph(m)
    return red, blue


def _load_records(path: Optional[str]) -> list[dict]:
    if not path or not Path(path).exists():
        return []
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line:
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError:
                raise UsageError(f"malformed record line in {path}: {line[:40]!r}") from None
    return out


# -- commands ----------------------------------------------------------------------

def cmd_ramsey_exact(args):
    red, blue = _targets(args)
    res = exact_ramsey(red, blue, n_start=args.n_start, n_max=args.n_max, budget=args.budget,
                       threads=args.threads, resume=_load_records(args.resume), progress=_heartbeat)
    if args.resume:
        known = {(r["red_target"], r["blue_target"], r["n"]) for r in _load_records(args.resume)}
        with open(args.resume, "a") as fh:
            for rec in res.records:
                if (rec["red_target"], rec["blue_target"], rec["n"]) not in known and rec["outcome"] != TIMEOUT:
                    fh.write(json.dumps(rec, sort_keys=True) + "\n")
    out = res.to_json()
    out["searched"] = res.records
    return out, (EXIT_OK if res.exact else EXIT_BUDGET)


def cmd_ramsey_sweep(args):
    rows = nested_sweep(args.kmax, budget=args.budget, threads=args.threads, progress=_heartbeat)
    return {"rows": [r.to_json() for r in rows]}, EXIT_OK


def cmd_paren_parse(args):
    m = parse_paren(args.seq)
    return {"n": m.n, "edges": [list(e) for e in m.edges]}, EXIT_OK


def cmd_paren_render(args):
    if args.edges is not None:
        try:
            pairs = [tuple(int(x) for x in item.split()) for item in args.edges.split(",") if item.strip()]
            n = args.n if args.n is not None else 2 * len(pairs)
            m = OrderedMatching(n, tuple((min(p), max(p)) for p in pairs))
        except ValueError as exc:
            raise UsageError(f"bad --edges: {exc}") from None
    elif args.file is not None:
        g = OrderedGraph.from_text(_read(args.file))
        try:
            m = OrderedMatching(g.n, g.edges)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        raise UsageError("give a matching file or --edges")
    return {"sequence": render_paren(m)}, EXIT_OK


def cmd_paren_bound(args):
    cert = bound_pmatching(parse_paren(args.seq), args.eps, args.ratio)
    issues = certificate_issues(cert, check_growth=args.ratio is None)
    return {"bound": cert.bound, "valid": not issues, "issues": issues, "certificate": cert.to_json()}, EXIT_OK


def cmd_embed_run(args):
    c = OrderedColoring.from_text(_read(args.coloring))
    if args.nested is not None:
        pattern = nested_matching(args.nested)
        outcome = embed_nested(c, args.nested)
        budget = 6 * args.nested
    else:
        pattern = parse_paren(args.paren)
        budget = bound_pmatching(pattern, args.eps, args.ratio).bound
        outcome = embed_pmatching(c, pattern, args.eps, args.ratio)
    ok = validate_outcome(c, outcome, pattern)
    return {"pattern": render_paren(pattern), "budget": budget, "n": c.n,
            "outcome": outcome.to_json(), "valid": ok}, (EXIT_OK if ok else EXIT_FAILED)


def cmd_perm_int(args):
    a, b = parse_perm(args.a), parse_perm(args.b)
    return {"a": format_perm(a), "b": format_perm(b), "int": ordered_intersection(a, b)}, EXIT_OK


def cmd_perm_mc(args):
    rep = mc_shift_intersection(args.n, args.h, args.trials, args.seed, args.alpha or [], threads=args.threads)
    if args.csv_out:
        Path(args.csv_out).write_text(rep.to_csv())
    if args.format == "csv":
        return rep.to_csv(), EXIT_OK
    return rep.to_json(), EXIT_OK


def cmd_perm_counts(args):
    rows = []
    worst = 0.0
    for h in range(1, args.hmax + 1):
        for k in range(0, args.kmax + 1):
            for u in combinations(range(1, args.n + 1), k):
                cc = count_compatible_orderings(u, h, limit=max(8, args.kmax))
                rows.append({"U": list(u), "h": h, "k": cc.k, "t": cc.t, "count": cc.count, "bound": cc.bound})
                worst = max(worst, cc.count / cc.bound)
    violations = sum(1 for r in rows if r["count"] > r["bound"])
    return {"cases": len(rows), "violations": violations, "max_ratio": worst,
            "rows": rows if args.rows else []}, (EXIT_OK if not violations else EXIT_FAILED)


def cmd_construct_two_clique(args):
    if args.k < 1:
        raise UsageError(f"--k must be positive, got {args.k}")
    c = two_clique_coloring(args.k)
    if args.out:
        Path(args.out).write_text(c.to_text())
    return {"k": args.k, "n": c.n, "hex": c.to_hex()}, EXIT_OK


def cmd_verify_coloring(args):
    c = OrderedColoring.from_text(_read(args.file))
    red, blue = _targets(args)
    out: dict = {"n": c.n}
    ok = True
    if red is not None:
        w_red = contains_ordered(c, RED, red)
        w_blue = contains_ordered(c, BLUE, blue)
        out["red_copy"] = None if w_red is None else list(w_red.map)
        out["blue_copy"] = None if w_blue is None else list(w_blue.map)
        out["avoids"] = w_red is None and w_blue is None
        ok = ok and out["avoids"]
    else:
        tri = find_blue_triangle(c)
        out["blue_triangle"] = None if tri is None else list(tri)
    if args.outcome:
        try:
            data = json.loads(_read(args.outcome))
            outcome = outcome_from_json(data.get("outcome", data))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise UsageError(f"malformed outcome file: {exc}") from None
        pattern = parse_paren(data["pattern"]) if isinstance(data, dict) and "pattern" in data else None
        out["outcome_valid"] = validate_outcome(c, outcome, pattern)
        ok = ok and out["outcome_valid"]
    return out, (EXIT_OK if ok else EXIT_FAILED)


# -- parser ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--record", metavar="PATH", help="append a run record (JSON line) to PATH")
    common.add_argument("--threads", type=int, default=_default_threads(),
                        help=f"worker processes (default ${THREADS_ENV} or 1)")

    parser = argparse.ArgumentParser(prog="ordered-ramsey", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    top = parser.add_subparsers(dest="group", required=True)

    ramsey = top.add_parser("ramsey").add_subparsers(dest="cmd", required=True)
    p = ramsey.add_parser("exact", parents=[common], help="exact r_<(red target, blue target)")
    _add_targets(p)
    p.add_argument("--n-start", type=int, default=1)
    p.add_argument("--n-max", type=int, default=16)
    p.add_argument("--budget", type=parse_count, default=None, help="node budget, e.g. 10M")
    p.add_argument("--resume", metavar="PATH", help="JSON-lines record file to reuse and extend")
    p.set_defaults(func=cmd_ramsey_exact)
    p = ramsey.add_parser("sweep", parents=[common], help="r_<(NM_k, K3) for k = 1..kmax")
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--budget", type=parse_count, default=None)
    p.set_defaults(func=cmd_ramsey_sweep)

    paren = top.add_parser("paren").add_subparsers(dest="cmd", required=True)
    p = paren.add_parser("parse", parents=[common])
    p.add_argument("seq")
    p.set_defaults(func=cmd_paren_parse)
    p = paren.add_parser("render", parents=[common])
    p.add_argument("file", nargs="?", help="matching in graph text format ('-' for stdin)")
    p.add_argument("--edges", help='comma separated pairs, e.g. "1 6,2 3,4 5,7 8"')
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_paren_render)
    p = paren.add_parser("bound", parents=[common])
    p.add_argument("seq")
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--ratio", type=float, default=None, help="override the heavy-edge ratio")
    p.set_defaults(func=cmd_paren_bound)

    embed = top.add_parser("embed").add_subparsers(dest="cmd", required=True)
    p = embed.add_parser("run", parents=[common])
    p.add_argument("--coloring", required=True, metavar="PATH")
    what = p.add_mutually_exclusive_group(required=True)
    what.add_argument("--paren", metavar="SEQ")
    what.add_argument("--nested", type=int, metavar="K")
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--ratio", type=float, default=None)
    p.set_defaults(func=cmd_embed_run)

    perm = top.add_parser("perm").add_subparsers(dest="cmd", required=True)
    p = perm.add_parser("int", parents=[common])
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_perm_int)
    p = perm.add_parser("mc", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=int, default=1)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=float, action="append")
    p.add_argument("--csv-out", metavar="PATH")
    p.set_defaults(func=cmd_perm_mc)
    p = perm.add_parser("lemma5", parents=[common], help="exhaustive compatible-ordering count check")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--kmax", type=int, default=5)
    p.add_argument("--hmax", type=int, default=3)
    p.add_argument("--rows", action="store_true", help="include every case in the output")
    p.set_defaults(func=cmd_perm_counts)

    construct = top.add_parser("construct").add_subparsers(dest="cmd", required=True)
    p = construct.add_parser("two-clique", parents=[common])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", metavar="PATH", help="also write the coloring text file")
    p.set_defaults(func=cmd_construct_two_clique)

    verify = top.add_parser("verify").add_subparsers(dest="cmd", required=True)
    p = verify.add_parser("coloring", parents=[common])
    p.add_argument("file")
    _add_targets(p, required=False)
    p.add_argument("--outcome", metavar="PATH", help="embed outcome JSON to re-validate")
    p.set_defaults(func=cmd_verify_coloring)
    return parser


def _params(args) -> dict:
    skip = {"func", "record", "group", "cmd"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_PARAM
    if args.format == "csv" and args.func is not cmd_perm_mc:
        print("error: --format csv is only available for 'perm mc'", file=sys.stderr)
        return EXIT_PARAM
    try:
        payload, code = args.func(args)
    except (UsageError, FormatError, ParenError, SizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except ContractViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    if args.record:
        rec = {"command": f"{args.group} {args.cmd}", "params": _params(args),
               "seed": getattr(args, "seed", 0), "outputs": payload, "exit": code,
               "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(), "version": __version__}
        with open(args.record, "a") as fh:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
