"""Command line interface.

Exit codes: 0 success, 2 invalid input (spec file, axioms, payoff law,
bad arguments), 3 enumeration budget exceeded, 4 internal cross-check
failure (two solution routes disagreed; a bug, not a user error).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import report as reporting
from .errors import (
    BudgetExceededError,
    InvariantViolationError,
    ValidationError,
)
from .game import DEFAULT_BUDGET
from .specfile import parse_rational, parse_spec, validate_spec


def _add_common(sub, budget=True):
    sub.add_argument("spec", help="game description (JSON)")
    sub.add_argument(
        "--format", choices=("json", "text"), default="json",
        help="output format (default json)",
    )
    sub.add_argument("--out", help="write the report here instead of stdout")
    sub.add_argument(
        "--seed", type=int, default=None,
        help="recorded in the report; solvers are deterministic",
    )
    sub.add_argument(
        "--deterministic", action="store_true",
        help="suppress timestamps so identical runs emit identical bytes",
    )
    if budget:
        sub.add_argument(
            "--budget", type=int, default=DEFAULT_BUDGET,
            help=f"max profiles to enumerate (default {DEFAULT_BUDGET})",
        )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qlnash",
        description="Nash and efficient-Nash solvers for min-aggregated "
        "games on finite meet-semilattices",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "check-axioms",
        help="validate strategy spaces and the payoff meet-min law",
    )
    _add_common(p, budget=False)
    p.set_defaults(handler=_cmd_check_axioms)

    p = sub.add_parser("nash", help="enumerate Nash profiles")
    _add_common(p)
    p.add_argument(
        "--method", choices=("brute", "decoupled", "characterize"),
        default="brute",
    )
    p.set_defaults(handler=_cmd_nash)

    p = sub.add_parser("efficient-nash", help="enumerate efficient Nash profiles")
    _add_common(p)
    p.add_argument(
        "--method", choices=("brute", "fixed-point", "iterate"), default="brute",
    )
    p.add_argument(
        "--start",
        help="start profile for --method iterate: comma-separated labels, "
        'or a JSON list like \'["0", "1/2"]\' (default: bottom)',
    )
    p.add_argument("--max-steps", type=int, default=10_000)
    p.set_defaults(handler=_cmd_efficient_nash)

    p = sub.add_parser("report", help="full solution report with cross-checks")
    _add_common(p)
    p.set_defaults(handler=_cmd_report)

    p = sub.add_parser(
        "refine", help="re-solve a piecewise-linear box game on finer grids"
    )
    _add_common(p)
    p.add_argument(
        "--steps", required=True,
        help="comma-separated grid steps, e.g. 1/4,1/8,1/16",
    )
    p.set_defaults(handler=_cmd_refine)
    return ap


def _emit(doc, args) -> None:
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.format == "json":
        text = reporting.dump_json(doc)
    else:
        text = reporting.render_text(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_check_axioms(args) -> int:
    outcome = validate_spec(args.spec)
    doc = reporting.build_check_axioms(outcome, deterministic=args.deterministic)
    _emit(doc, args)
    return 0 if outcome.ok else 2


def _cmd_nash(args) -> int:
    loaded = parse_spec(args.spec)
    doc = reporting.build_nash(
        loaded,
        method=args.method,
        budget=args.budget,
        deterministic=args.deterministic,
    )
    _emit(doc, args)
    return 0


def _parse_start(loaded, raw):
    if raw is None:
        return None
    text = raw.strip()
    if text.startswith("["):
        try:
            labels = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"--start: invalid JSON list: {exc}") from exc
        if not isinstance(labels, list) or not all(
            isinstance(s, str) for s in labels
        ):
            raise ValidationError("--start: expected a JSON list of labels")
    else:
        labels = [s.strip() for s in text.split(",")]
    return loaded.parse_profile(labels)


def _cmd_efficient_nash(args) -> int:
    loaded = parse_spec(args.spec)
    start = _parse_start(loaded, args.start)
    if start is not None and args.method != "iterate":
        raise ValidationError("--start only applies to --method iterate")
    doc = reporting.build_efficient_nash(
        loaded,
        method=args.method,
        budget=args.budget,
        start=start,
        max_steps=args.max_steps,
        deterministic=args.deterministic,
    )
    _emit(doc, args)
    return 0


def _cmd_report(args) -> int:
    loaded = parse_spec(args.spec)
    doc = reporting.build_report(
        loaded, budget=args.budget, deterministic=args.deterministic
    )
    _emit(doc, args)
    return 0


def _cmd_refine(args) -> int:
    loaded = parse_spec(args.spec)
    steps = [
        parse_rational(s.strip(), "--steps") for s in args.steps.split(",") if s.strip()
    ]
    if not steps:
        raise ValidationError("--steps: at least one step required")
    doc = reporting.build_refine(
        loaded, steps, budget=args.budget, deterministic=args.deterministic
    )
    _emit(doc, args)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except InvariantViolationError as exc:
        print(f"internal cross-check failed: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
