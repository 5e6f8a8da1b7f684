"""Command-line front end.

Subcommands: check, gen, count, problem, render, corpus-verify.  Exit
codes are part of the contract: 0 success, 1 verification failure or a
non-unique problem, 2 parse or static error, 3 infeasible or budget
exhausted.  Stdout is human-oriented and byte-deterministic for identical
invocations; file outputs use the JSON schemas in docs/formats.md.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import boardio
from .corpus import ENTRIES, load_rule, oracle_validate
from .dsl import RuleParseError, parse_rule, serialize_rule, static_check
from .dsl.ast import RequirementError
from .errors import (
    BudgetExceededError,
    MaskError,
    NotUniqueError,
    PzlError,
    UnmaskableFamilyError,
)
from .grid import GridDims
from .problems import check_rule_feasible, mask, verify_unique
from .render import render
from .solver import SearchConfig, enumerate_completed, generate_completed
from .solver.model import default_node_budget

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3


def _parse_size(text: str) -> GridDims:
    try:
        m, n = text.lower().split("x")
        return GridDims(int(m), int(n)).validate()
    except (ValueError, AttributeError):
        raise argparse.ArgumentTypeError(f"size must look like MxN, got {text!r}")


def _add_common(p: argparse.ArgumentParser, size_required: bool = True) -> None:
    p.add_argument("--size", type=_parse_size, required=size_required, help="grid size MxN")
    p.add_argument("--seed", type=int, default=0, help="64-bit seed (default 0)")
    p.add_argument("--limit", type=int, default=1, help="maximum results")
    p.add_argument(
        "--engine",
        choices=("exhaustive", "constructive"),
        default="constructive",
        help="search engine",
    )
    p.add_argument("--out", type=Path, default=None, help="output file or directory")
    p.add_argument(
        "--node-budget",
        type=int,
        default=None,
        help="search node budget (default: PZL_NODE_BUDGET or built-in)",
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pzl", description="grid pencil-puzzle rule engine")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse a rule file and print diagnostics")
    p.add_argument("rule", type=Path)

    p = sub.add_parser("gen", help="generate completed boards")
    p.add_argument("rule", type=Path)
    _add_common(p)

    p = sub.add_parser("count", help="count completed boards exactly")
    p.add_argument("rule", type=Path)
    _add_common(p)

    p = sub.add_parser("problem", help="mask a completed board into a unique problem")
    p.add_argument("rule", type=Path)
    _add_common(p)

    p = sub.add_parser("render", help="render a board or problem file as ASCII")
    p.add_argument("board", type=Path)
    p.add_argument("--rule", type=Path, default=None, help="rule file (corpus rule by name otherwise)")

    p = sub.add_parser("corpus-verify", help="generate corpus boards and check them against the classic oracle")
    p.add_argument("puzzle", nargs="?", default=None, help="corpus entry name")
    p.add_argument("--puzzle", dest="puzzle_flag", default=None, help="corpus entry name (flag form)")
    p.add_argument("--count", dest="count_alias", type=int, default=None, help="boards to generate (alias of --limit)")
    _add_common(p, size_required=False)
    return ap


def _budget(args) -> int:
    if args.node_budget is not None:
        return args.node_budget
    return default_node_budget()


def _load_rule_file(path: Path):
    try:
        text = path.read_text()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)
    try:
        return parse_rule(text)
    except RuleParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def cmd_check(args) -> int:
    rule = _load_rule_file(args.rule)
    diags = static_check(rule)
    print(f"{rule.name}: {len(rule.structures)} structure(s), {len(rule.constraints)} constraint(s)")
    for d in diags:
        print(f"  {d}")
    if any(d.severity == "error" for d in diags):
        return EXIT_PARSE
    print("ok" if not diags else f"ok with {len(diags)} warning(s)")
    return EXIT_OK


def _write_boards(rule, boards, out: Path | None) -> None:
    docs = [boardio.dump_doc(boardio.completed_to_doc(rule, cb)) for cb in boards]
    if out is None:
        for doc in docs:
            sys.stdout.write(doc)
        return
    if len(docs) == 1 and (out.suffix == ".json" or not out.exists() and "." in out.name):
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(docs[0])
        print(f"wrote {out}")
        return
    out.mkdir(parents=True, exist_ok=True)
    for i, doc in enumerate(docs):
        path = out / f"board-{i:04d}.json"
        path.write_text(doc)
        print(f"wrote {path}")


def cmd_gen(args) -> int:
    rule = _load_rule_file(args.rule)
    config = SearchConfig(
        dims=args.size,
        engine=args.engine,
        seed=args.seed,
        limit=args.limit,
        node_budget=_budget(args),
    )
    try:
        if args.engine == "exhaustive":
            boards = list(enumerate_completed(rule, config))
            exhausted = False
        else:
            result = generate_completed(rule, config)
            boards = result.boards
            exhausted = result.budget_exhausted
    except RequirementError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    if not boards:
        print("no completed boards found", file=sys.stderr)
        return EXIT_INFEASIBLE
    _write_boards(rule, boards, args.out)
    print(f"generated {len(boards)} board(s)" + (" [budget exhausted]" if exhausted else ""))
    return EXIT_OK


def cmd_count(args) -> int:
    rule = _load_rule_file(args.rule)
    from .solver import count_consistent

    try:
        n = count_consistent(rule, args.size, node_budget=_budget(args))
    except RequirementError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    print(n)
    return EXIT_OK


def cmd_problem(args) -> int:
    rule = _load_rule_file(args.rule)
    config = SearchConfig(
        dims=args.size,
        engine=args.engine,
        seed=args.seed,
        limit=1,
        node_budget=_budget(args),
    )
    try:
        if args.engine == "exhaustive":
            boards = list(enumerate_completed(rule, config))
        else:
            boards = generate_completed(rule, config).boards
        if not boards:
            print("no completed boards found", file=sys.stderr)
            return EXIT_INFEASIBLE
        problem = mask(rule, boards[0], seed=args.seed, node_budget=_budget(args))
    except RequirementError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (NotUniqueError, UnmaskableFamilyError, MaskError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    doc = boardio.dump_doc(
        boardio.problem_to_doc(rule, problem.board, problem.presented, problem.certificate)
    )
    if args.out is None:
        sys.stdout.write(doc)
    else:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(doc)
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_render(args) -> int:
    import json

    try:
        doc = json.loads(args.board.read_text())
    except (OSError, ValueError) as exc:
        print(f"error: cannot read board file: {exc}", file=sys.stderr)
        return EXIT_PARSE
    rule_name = doc.get("rule", "")
    if args.rule is not None:
        rule = _load_rule_file(args.rule)
    elif rule_name in ENTRIES:
        rule = load_rule(rule_name)
    else:
        print(f"error: rule {rule_name!r} is not in the corpus; pass --rule", file=sys.stderr)
        return EXIT_PARSE
    try:
        if "assignment" in doc:
            cb = boardio.completed_from_doc(doc, rule)
            sys.stdout.write(render(cb.board, cb.assignment))
        else:
            board, presented, _ = boardio.problem_from_doc(doc, rule)
            sys.stdout.write(render(board, presented))
    except (ValueError, PzlError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    return EXIT_OK


def cmd_corpus_verify(args) -> int:
    name = args.puzzle_flag or args.puzzle
    if not name:
        print("error: name a corpus entry (e.g. `pzl corpus-verify sudoku`)", file=sys.stderr)
        return EXIT_PARSE
    entry = ENTRIES.get(name)
    if entry is None:
        print(f"error: unknown corpus entry {name!r}; known: {', '.join(sorted(ENTRIES))}", file=sys.stderr)
        return EXIT_PARSE
    rule = load_rule(entry.name)
    dims = args.size if args.size is not None else entry.desk_dims
    limit = args.count_alias if args.count_alias is not None else args.limit
    config = SearchConfig(
        dims=dims,
        engine="constructive",
        seed=args.seed,
        limit=limit,
        node_budget=_budget(args),
    )
    result = generate_completed(rule, config)
    if not result.boards:
        print(f"{entry.name}: no boards generated", file=sys.stderr)
        return EXIT_INFEASIBLE
    passes = 0
    for i, cb in enumerate(result.boards):
        ok = oracle_validate(entry.name, cb.board, cb.assignment)
        passes += ok
        print(f"board {i}: {'pass' if ok else 'FAIL'}")
    print(f"{entry.name} at {dims.m}x{dims.n}: {passes}/{len(result.boards)} oracle passes")
    if passes != len(result.boards):
        return EXIT_VERIFY
    if len(result.boards) < limit:
        print(f"note: requested {limit}, generated {len(result.boards)}")
        return EXIT_INFEASIBLE
    return EXIT_OK


_COMMANDS = {
    "check": cmd_check,
    "gen": cmd_gen,
    "count": cmd_count,
    "problem": cmd_problem,
    "render": cmd_render,
    "corpus-verify": cmd_corpus_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = _COMMANDS[args.command](args)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_PARSE
    except PzlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_INFEASIBLE
    return code


if __name__ == "__main__":
    sys.exit(main())
