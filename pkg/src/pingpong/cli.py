"""Command line interface.

    pingpong list                      show the catalog
    pingpong verify --all              certify every case
    pingpong verify --case c01         one case, text or json
    pingpong explore 7 4               try a raw (d, k) pair
    pingpong sample --case c01         sampled words + nontriviality check

Exit codes: 0 all requested checks agree with expectations, 1 a
verification mismatch or sampling violation, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import __version__
from .catalog import (
    CaseFormatError,
    NoStructureError,
    builtin_catalog,
    case_by_id,
    explore_case,
    load_case_file,
    render_case_line,
    render_expected,
)
from .certify import verify_case
from .report import report_json, report_text, run_case, run_catalog, RunReport
from .words import (
    WordEvaluator,
    conjugate_spec,
    oracle_nontriviality,
    sample_reduced_words,
    search_relations,
    spec_for_splitting,
)
from .catalog import build_generators


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pingpong",
        description="exact ping-pong certification for the catalog of "
        "symplectic hypergeometric cases",
    )
    parser.add_argument("--version", action="version", version=f"pingpong {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--catalog", metavar="FILE", help="case file instead of the builtin catalog")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")

    sub.add_parser("list", parents=[common], help="list catalog cases")

    verify = sub.add_parser("verify", parents=[common], help="run certificates")
    group = verify.add_mutually_exclusive_group(required=True)
    group.add_argument("--case", metavar="ID")
    group.add_argument("--all", action="store_true")
    verify.add_argument("--p-max", type=int, default=12)
    verify.add_argument("--count", type=int, default=1000, help="sampled words per passing case")
    verify.add_argument("--max-syllables", type=int, default=20)
    verify.add_argument("--seed", type=int, default=1)

    explore = sub.add_parser("explore", parents=[common], help="verify a raw (d, k) pair")
    explore.add_argument("d", type=int)
    explore.add_argument("k", type=int)
    explore.add_argument("--p-max", type=int, default=12)
    explore.add_argument("--count", type=int, default=1000)
    explore.add_argument("--max-syllables", type=int, default=20)
    explore.add_argument("--seed", type=int, default=1)
    explore.add_argument("--search-relations", action="store_true")
    explore.add_argument("--max-len", type=int, default=12, help="letter bound for relation search")

    sample = sub.add_parser("sample", parents=[common], help="sample reduced words")
    sample.add_argument("--case", metavar="ID", required=True)
    sample.add_argument("--count", type=int, default=1000)
    sample.add_argument("--max-syllables", type=int, default=20)
    sample.add_argument("--seed", type=int, default=1)
    sample.add_argument(
        "--conjugates",
        action="store_true",
        help="sample words in the conjugates R^i T R^-i instead",
    )
    return parser


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _load_cases(args):
    if args.catalog:
        return load_case_file(args.catalog), args.catalog
    return builtin_catalog(), "builtin"


def _cmd_list(args) -> int:
    cases, _name = _load_cases(args)
    if args.format == "json":
        import json

        payload = [
            {
                "id": c.id,
                "dim": c.dim,
                "params": [str(p) for p in c.params] if c.params else None,
                "d": c.d,
                "k": c.k,
                "expected": render_expected(c),
            }
            for c in cases
        ]
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    else:
        _emit("\n".join(render_case_line(c) for c in cases) + "\n", args.out)
    return 0


def _render_report(report: RunReport, args) -> int:
    if args.format == "json":
        _emit(report_json(report), args.out)
    else:
        _emit(report_text(report), args.out)
    return 0 if report.all_match else 1


def _cmd_verify(args) -> int:
    cases, name = _load_cases(args)
    kwargs = dict(
        p_max=args.p_max,
        sample_count=args.count,
        max_syllables=args.max_syllables,
        seed=args.seed,
    )
    if args.all:
        report = run_catalog(cases, catalog_name=name, **kwargs)
    else:
        try:
            case = case_by_id(args.case, cases)
        except KeyError as err:
            print(err, file=sys.stderr)
            return 2
        report = RunReport(name, (run_case(case, **kwargs),))
    return _render_report(report, args)


def _cmd_explore(args) -> int:
    case = explore_case(args.d, args.k)
    record = run_case(
        case,
        p_max=args.p_max,
        sample_count=args.count,
        max_syllables=args.max_syllables,
        seed=args.seed,
    )
    report = RunReport("explore", (record,))
    lines = []
    if args.format == "json":
        _emit(report_json(report), args.out)
    else:
        if record.error is not None:
            lines.append(f"{case.id}: {record.error}\n")
        else:
            lines.append(report_text(report))
        if args.search_relations:
            hits = search_relations(build_generators(case), max_len=args.max_len)
            if hits:
                lines.append(
                    "relations found: "
                    + ", ".join(f"{word} = {value}" for word, value in hits)
                    + "\n"
                )
            else:
                lines.append(f"no relations up to letter length {args.max_len}\n")
        _emit("".join(lines), args.out)
    # any structured outcome, including "no quasi-unipotent power", is a finding
    return 0


def _cmd_sample(args) -> int:
    cases, _name = _load_cases(args)
    try:
        case = case_by_id(args.case, cases)
    except KeyError as err:
        print(err, file=sys.stderr)
        return 2
    gens = build_generators(case)
    verdict = verify_case(case)
    if verdict.kind != "pass":
        print(
            f"case {case.id} is not certified ({verdict.kind}); "
            "sampled words need a certified splitting",
            file=sys.stderr,
        )
        return 2
    if args.conjugates:
        if verdict.splitting.kind != "free-times-finite":
            print("conjugate sampling needs a Z*Z/m splitting", file=sys.stderr)
            return 2
        spec = conjugate_spec(verdict.splitting.m)
    else:
        spec = spec_for_splitting(verdict.splitting)
    words = sample_reduced_words(spec, args.count, args.max_syllables, args.seed)
    violations = oracle_nontriviality(words, gens, WordEvaluator(gens))
    lines = [str(w) for w in words[:20]]
    lines.append(f"... {len(words)} words sampled ({spec.kind}), {len(violations)} trivial")
    if violations:
        lines.extend(f"VIOLATION: {v}" for v in violations[:10])
    _emit("\n".join(lines) + "\n", args.out)
    return 1 if violations else 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "list":
            return _cmd_list(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "explore":
            return _cmd_explore(args)
        if args.command == "sample":
            return _cmd_sample(args)
    except (CaseFormatError, FileNotFoundError) as err:
        print(err, file=sys.stderr)
        return 2
    except NoStructureError as err:
        print(err, file=sys.stderr)
        return 2
    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
