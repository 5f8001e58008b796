"""
`psys` command line: validate, run, decide, compare and gen subcommands.

Exit codes: 0 Accept, 1 Reject, 2 invalid system or recognizer (or a compare
disagreement), 3 bound or budget exceeded, 4 usage error.
"""

import argparse
import json
import sys
from typing import List, Optional

from loguru import logger
from pydantic import ValidationError

from psys_oracle.commands import (
    CompareInput,
    DecideInput,
    ExitStatus,
    GenInput,
    RunInput,
    ValidateInput,
    compare_command,
    decide_command,
    gen_command,
    run_command,
    validate_command,
)
from psys_oracle.config import FIXTURES_FOLDER, LOG_LEVEL, get_budget
from psys_oracle.decider import GenParams
from psys_oracle.exceptions import ConfigurationError
from psys_oracle.tables import SearchSettings


def configure_logging(verbose: bool = False) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else LOG_LEVEL)


def _settings(args: argparse.Namespace) -> SearchSettings:
    return SearchSettings(
        label_caps=not args.no_label_caps,
        eager_overdraw=not args.no_eager_overdraw,
        cumulative_sendin_prune=args.cumulative_sendin_prune,
        memoize_queries=not args.no_query_cache,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psys",
        description="Decide shallow recognizer P systems with active membranes",
    )
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    validate = sub.add_parser("validate", help="Parse and validate a .psys file")
    validate.add_argument("path")
    validate.add_argument(
        "--check", action="store_true", help="Enumerate computations and report recognizer violations"
    )
    validate.add_argument("--bound", type=int, help="Override the step bound for --check")
    validate.add_argument("--budget", type=int, help="Configuration budget for --check")

    run = sub.add_parser("run", help="Follow one seeded computation")
    run.add_argument("path")
    run.add_argument("--seed", type=int, default=1)
    run.add_argument("--input", help='Input multiset, e.g. "a*3 b"')
    run.add_argument("--trace", help="Write the step trace as JSONL")
    run.add_argument("--budget", type=int)

    decide = sub.add_parser("decide", help="Decide acceptance of one system")
    decide.add_argument("path")
    decide.add_argument("--mode", choices=["reference", "table"], default="reference")
    decide.add_argument("--input", help='Input multiset, e.g. "a*3 b"')
    decide.add_argument("--trace", help="Write the accepting step trace as JSONL (reference mode)")
    decide.add_argument("--witness", help="Write the accepting witness as JSON (table mode)")
    decide.add_argument("--replay", help="Replay a witness file instead of searching")
    decide.add_argument("--tables", help="Write the witness's table dump as JSON (table mode)")
    decide.add_argument("--budget", type=int, help="Node budget (default PSYS_BUDGET or 10^7)")

    compare = sub.add_parser("compare", help="Cross-check both deciders")
    compare.add_argument("paths", nargs="*", help=f"Files or directories (default {FIXTURES_FOLDER})")
    compare.add_argument("--budget", type=int)
    compare.add_argument("--jobs", type=int, default=1)
    compare.add_argument("--json", dest="json_path", help="Write the reports as JSON")

    gen = sub.add_parser("gen", help="Generate random systems")
    gen.add_argument("out_dir")
    gen.add_argument("--seed", type=int, default=1)
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--max-inner", type=int, default=2)
    gen.add_argument("--max-objects", type=int, default=4)
    gen.add_argument("--max-rules", type=int, default=8)
    gen.add_argument("--bound", type=int, default=4)

    for table_user in (decide, compare):
        table_user.add_argument("--no-label-caps", action="store_true")
        table_user.add_argument("--no-eager-overdraw", action="store_true")
        table_user.add_argument("--no-query-cache", action="store_true")
        table_user.add_argument("--cumulative-sendin-prune", action="store_true")
    return parser


def _print_decide(output) -> None:
    if not output.success:
        print(f"error: {output.error_message}")
        return
    print(f"verdict: {output.verdict}")
    if output.mode == "reference":
        print(
            f"trace: {output.trace_length} step(s); {output.computations} computation(s), "
            f"{output.configurations} configuration(s)"
        )
    else:
        print(
            f"witness: {output.witness_length or 0} choice(s); {output.nodes} node(s), "
            f"{output.queries} queries, {output.cache_hits} cached, peak stack {output.peak_stack}"
        )
        if output.mode == "replay" and output.tables is not None:
            print(json.dumps(output.tables, indent=2))


def _dispatch(args: argparse.Namespace) -> ExitStatus:
    if args.command == "validate":
        output = validate_command(
            ValidateInput(path=args.path, check_recognizer=args.check, bound=args.bound, budget=args.budget)
        )
        if output.summary:
            print(output.summary)
        if output.computations is not None:
            print(f"{output.computations} computation(s)")
        for violation in output.violations:
            print(f"violation: {violation}")
        if output.error_message:
            print(f"error: {output.error_message}")
        return output.exit_status

    if args.command == "run":
        output = run_command(
            RunInput(path=args.path, seed=args.seed, input=args.input, trace=args.trace, budget=args.budget)
        )
        for line in output.configurations:
            print(line)
        print(f"outcome: {output.outcome}" if output.outcome else f"error: {output.error_message}")
        return output.exit_status

    if args.command == "decide":
        output = decide_command(
            DecideInput(
                path=args.path,
                mode=args.mode,
                input=args.input,
                trace=args.trace,
                witness=args.witness,
                replay=args.replay,
                tables=args.tables,
                budget=args.budget,
                settings=_settings(args),
            )
        )
        _print_decide(output)
        return output.exit_status

    if args.command == "compare":
        output = compare_command(
            CompareInput(
                paths=args.paths or [FIXTURES_FOLDER],
                budget=args.budget,
                jobs=args.jobs,
                json_path=args.json_path,
                settings=_settings(args),
            )
        )
        for report in output.reports:
            print(report.line())
        if output.error_message:
            print(f"error: {output.error_message}")
        print(output.tally())
        return output.exit_status

    output = gen_command(
        GenInput(
            out_dir=args.out_dir,
            seed=args.seed,
            count=args.count,
            params=GenParams(
                max_inner=args.max_inner,
                max_objects=args.max_objects,
                max_rules=args.max_rules,
                bound=args.bound,
            ),
        )
    )
    for path in output.files:
        print(path)
    if output.error_message:
        print(f"error: {output.error_message}")
    return output.exit_status


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(ExitStatus.USAGE) if e.code else 0
    configure_logging(args.verbose)
    try:
        get_budget()
        return int(_dispatch(args))
    except ValidationError as e:
        logger.error(f"Invalid arguments: {e}")
        print(f"error: {e.errors()[0]['msg']}")
        return int(ExitStatus.USAGE)
    except ConfigurationError as e:
        logger.error(str(e))
        print(f"error: {e}")
        return int(ExitStatus.USAGE)


if __name__ == "__main__":
    sys.exit(main())
