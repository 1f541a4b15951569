"""Command-line interface: verify, construct, feasible, search, spectrum."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .codefile import emit_code, parse_code_file, recipe_expected_block
from .constructions import (
    club_code,
    default_gabidulin,
    extend_to_intersecting,
    named_code,
    system_code,
)
from .errors import InvalidParameters, RankIntersectError
from .fields import make_extension_field
from .geometry import point_weight_spectrum, q_system_of
from .properties import (
    DEFAULT_PROPERTIES,
    PAIR_SCAN_CAP,
    PROPERTY_NAMES,
    evaluate_properties,
    feasibility,
)
from .search import DEFAULT_CHUNK_SIZE, DEFAULT_STRIDE, SearchConfig, run_search

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_ERROR = 2


def _write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump_json(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _parse_range(text: str) -> tuple[int, int]:
    if ".." not in text:
        raise InvalidParameters(f"range must look like START..END, got {text!r}")
    a, b = text.split("..", 1)
    return int(a), int(b)


# --- verify ------------------------------------------------------------------


def cmd_verify(args) -> int:
    code, expected = parse_code_file(args.codefile)
    if args.properties:
        names = tuple(args.properties.split(","))
    else:
        names = list(DEFAULT_PROPERTIES)
        for entry in expected or []:
            if entry["property"] in PROPERTY_NAMES and entry["property"] not in names:
                names.append(entry["property"])
        names = tuple(names)
    report = evaluate_properties(code, names=names, cap=args.cap)
    results = report.merged_results()
    mismatches = []
    for entry in expected or []:
        prop = entry["property"]
        if prop not in results:
            continue
        if results[prop] != entry["expected"]:
            mismatches.append({
                "property": prop,
                "expected": entry["expected"],
                "actual": results[prop],
                "tag": entry.get("tag"),
            })
    payload = report.as_dict()
    payload["expected_properties"] = expected
    payload["mismatches"] = mismatches
    if args.format == "json":
        _write_output(_dump_json(payload), args.out)
    elif args.format == "csv":
        lines = ["code_id,property,result"]
        for prop in sorted(results):
            lines.append(f"{report.code_id},{prop},{json.dumps(results[prop])}")
        _write_output("\n".join(lines) + "\n", args.out)
    else:
        lines = [f"code: {report.code_id}  parameters: {report.parameters}"]
        lines += [f"  {prop}: {results[prop]}" for prop in sorted(results)]
        if mismatches:
            lines.append("mismatches:")
            lines += [f"  {m['property']}: expected {m['expected']}, got {m['actual']}" for m in mismatches]
        _write_output("\n".join(lines) + "\n", args.out)
    return EXIT_MISMATCH if mismatches else EXIT_OK


# --- construct ---------------------------------------------------------------


def cmd_construct(args) -> int:
    expected = None
    if args.recipe == "gabidulin":
        field = make_extension_field(args.q, args.m)
        n = args.n if args.n is not None else args.m
        code = default_gabidulin(field, n, args.k)
        code.name = f"gab_{n}_{args.k}_f{field.order}"
    elif args.recipe == "simplex":
        code, recipe = named_code(f"simplex_{args.k}_{args.m}", q=args.q)
        expected = recipe_expected_block(recipe)
    elif args.recipe == "club":
        field = make_extension_field(args.q, args.h)
        code = club_code(field)
        code.name = f"club_{args.h}_2_f{field.order}"
    elif args.recipe == "extend":
        field = make_extension_field(args.q, args.m)
        base = q_system_of(default_gabidulin(field, args.m, args.k))
        extended = extend_to_intersecting(base, args.r)
        code = system_code(extended)
        code.name = f"extended_{extended.n}_{args.k}_f{field.order}"
    elif args.recipe == "example":
        code, recipe = named_code(args.name, q=args.q)
        expected = recipe_expected_block(recipe)
    else:  # pragma: no cover - argparse restricts choices
        raise InvalidParameters(f"unknown recipe {args.recipe!r}")
    _write_output(emit_code(code, expected), args.out)
    return EXIT_OK


# --- feasible ----------------------------------------------------------------


def cmd_feasible(args) -> int:
    n_values = [None]
    if args.n is not None:
        if ".." in args.n:
            lo, hi = _parse_range(args.n)
            n_values = list(range(lo, hi + 1))
        else:
            n_values = [int(args.n)]
    rows = [feasibility(args.q, args.m, args.k, n=n, d=args.d).as_dict() for n in n_values]
    if args.format == "json":
        _write_output(_dump_json({"verdicts": rows}), args.out)
    elif args.format == "csv":
        lines = ["q,m,k,n,d,verdict,tag"]
        for r in rows:
            lines.append(
                f"{r['q']},{r['m']},{r['k']},{r['n'] if r['n'] is not None else ''},"
                f"{r['d'] if r['d'] is not None else ''},{r['verdict']},{r['tag']}"
            )
        _write_output("\n".join(lines) + "\n", args.out)
    else:
        lines = [
            f"[{r['n']},{r['k']}]_{{{r['q']}^{r['m']}}}: {r['verdict']} ({r['tag']})"
            for r in rows
        ]
        _write_output("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# --- search ------------------------------------------------------------------


def cmd_search(args) -> int:
    forms = (1, 2, 3) if args.form == "all" else (int(args.form),)
    ranges = None
    if args.range:
        lo, hi = _parse_range(args.range)
        ranges = {f: (lo, hi) for f in forms}
    config = SearchConfig(
        q=args.q,
        n=args.n,
        forms=forms,
        ranges=ranges,
        threads=args.threads,
        chunk_size=args.chunk_size,
        stride=args.stride,
        checkpoint_path=args.checkpoint,
        report_path=args.report,
    )
    report = run_search(config)
    summary = {
        "totals": report.totals,
        "survivors": report.survivors,
        "report_path": args.report,
    }
    _write_output(_dump_json(summary), None)
    return EXIT_OK


# --- spectrum ----------------------------------------------------------------


def cmd_spectrum(args) -> int:
    code, _ = parse_code_file(args.codefile)
    payload = {
        "code": {"id": code.name or "code", "q": code.field.q, "m": code.field.m,
                 "n": code.n, "k": code.k},
        "modulus": list(code.field.modulus),
        "weight_spectrum": {str(r): c for r, c in code.weight_spectrum(cap=args.cap).items()},
    }
    if code.is_nondegenerate():
        spectrum = point_weight_spectrum(q_system_of(code), cap=args.cap)
        payload["point_weight_spectrum"] = {str(w): c for w, c in spectrum.items()}
    else:
        payload["point_weight_spectrum"] = None
        payload["note"] = "degenerate code: no associated q-system"
    if args.format == "json":
        _write_output(_dump_json(payload), args.out)
    else:
        lines = [f"code: {payload['code']}"]
        lines.append("rank weight spectrum: " + json.dumps(payload["weight_spectrum"]))
        lines.append("point weight spectrum: " + json.dumps(payload["point_weight_spectrum"]))
        _write_output("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankintersect",
        description="Construct, verify and search rank-metric intersecting codes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="Run property checks on a code file.")
    p.add_argument("codefile")
    p.add_argument("--properties", help="comma-separated property names "
                   f"(default: {','.join(DEFAULT_PROPERTIES)}, plus any expected ones)")
    p.add_argument("--cap", type=int, default=PAIR_SCAN_CAP,
                   help="enumeration cap for pairwise scans")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", help="Emit a code file for a named construction.")
    recipes = p.add_subparsers(dest="recipe", required=True)
    g = recipes.add_parser("gabidulin")
    g.add_argument("--q", type=int, default=2)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--n", type=int, help="length (default m)")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--out")
    s = recipes.add_parser("simplex")
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--out")
    c = recipes.add_parser("club")
    c.add_argument("--q", type=int, default=2)
    c.add_argument("--h", type=int, required=True, help="extension degree (= length)")
    c.add_argument("--out")
    e = recipes.add_parser("extend")
    e.add_argument("--q", type=int, default=2)
    e.add_argument("--m", type=int, required=True)
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--r", type=int, required=True, help="number of appended columns")
    e.add_argument("--out")
    x = recipes.add_parser("example")
    x.add_argument("--name", required=True)
    x.add_argument("--q", type=int, default=2)
    x.add_argument("--out")

    p = sub.add_parser("feasible", help="Feasibility verdicts over a parameter grid.")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", help="a length N or a range A..B")
    p.add_argument("--d", type=int)
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("search", help="Exhaustive candidate search with checkpointing.")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--n", type=int, default=6, choices=(6, 7))
    p.add_argument("--form", choices=("1", "2", "3", "all"), default="all")
    p.add_argument("--range", help="candidate index range START..END (per form)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--chunk-size", type=int, default=DEFAULT_CHUNK_SIZE)
    p.add_argument("--stride", type=int, default=DEFAULT_STRIDE,
                   help="generic-oracle cross-check stride (0 disables)")
    p.add_argument("--checkpoint", help="append-only checkpoint file")
    p.add_argument("--report", help="write the JSON report here")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("spectrum", help="Rank and point weight spectra of a code file.")
    p.add_argument("codefile")
    p.add_argument("--cap", type=int, default=PAIR_SCAN_CAP)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectrum)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "construct":
        handler = cmd_construct
    else:
        handler = args.func
    try:
        return handler(args)
    except RankIntersectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
