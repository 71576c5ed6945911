"""Report documents for the CLI.

Every command produces a plain dict (JSON-serializable, rationals as
strings) that the CLI dumps as JSON or renders as text. Solver output is
never taken on faith: alternative-route results are recomputed and
compared here, and a disagreement raises InvariantViolationError rather
than emitting a report that quietly picked one side.
"""

from __future__ import annotations

import itertools
import json
from datetime import datetime, timezone
from fractions import Fraction

from .errors import BudgetExceededError, InvariantViolationError, ValidationError
from .game import (
    DEFAULT_BUDGET,
    characterize_nash,
    decoupled_nash,
    decoupled_projections,
    efficiency_report,
    efficient_for_player,
    efficient_nash_enumerate,
    is_nash,
    iterate_efficient_responses,
    maximal_nash,
    nash_enumerate,
    normalize_nash,
    own_strategy_irrelevance,
    section,
)
from .semilattice import replace_coordinate

SCHEMA_VERSION = 1

MAX_REPORTED_VIOLATIONS = 20


def _qstr(v) -> str:
    return str(Fraction(v))


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _envelope(command: str, deterministic: bool) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "command": command}
    if not deterministic:
        doc["generated_at"] = datetime.now(timezone.utc).isoformat(
            timespec="seconds"
        )
    return doc


def _player_block(loaded) -> list:
    out = []
    for p in loaded.players:
        entry = {"name": p.name, "size": len(p.space)}
        if p.grid is not None:
            entry["grid"] = {
                "lower": _qstr(p.grid.lower),
                "upper": _qstr(p.grid.upper),
                "step": _qstr(p.grid.step),
            }
        out.append(entry)
    return out


def _game_block(loaded) -> dict:
    g = loaded.game
    return {
        "players": _player_block(loaded),
        "payoff_model": loaded.payoff_model,
        "constrained": not g.unconstrained,
        "warnings": list(loaded.warnings),
    }


def _check_budget(size: int, budget: int) -> None:
    if size > budget:
        raise BudgetExceededError(
            f"enumeration would visit {size} profiles, budget is {budget}"
        )


def _constraint_box(game):
    return [sorted(c) for c in game.constraints]


def _box_size(box) -> int:
    size = 1
    for cell in box:
        size *= len(cell)
    return size


# -- check-axioms ---------------------------------------------------------------


def build_check_axioms(outcome, deterministic: bool = False) -> dict:
    doc = _envelope("check-axioms", deterministic)
    doc["ok"] = outcome.ok
    doc["errors"] = list(outcome.errors)
    doc["ql_failures"] = list(outcome.ql_failures)
    doc["warnings"] = list(outcome.warnings)
    players = []
    for name, report, labels in outcome.axiom_reports:
        violations = [
            {"law": v.law, "elements": [labels[e] for e in v.elements]}
            for v in report.violations[:MAX_REPORTED_VIOLATIONS]
        ]
        players.append(
            {
                "name": name,
                "size": report.size,
                "ok": report.ok,
                "bottom": labels[report.bottom] if report.bottom is not None else None,
                "violation_count": len(report.violations),
                "violations_truncated": report.truncated
                or len(report.violations) > MAX_REPORTED_VIOLATIONS,
                "violations": violations,
            }
        )
    doc["players"] = players
    return doc


# -- nash -----------------------------------------------------------------------


def _validate_deviation(game, x, i, z) -> None:
    y = replace_coordinate(x, i, z)
    if not (game.payoff(i, y) > game.payoff(i, x)):
        raise InvariantViolationError(
            f"claimed deviation for player {i} at {x} does not improve the payoff"
        )


def _characterized_profiles(game, budget):
    box = _constraint_box(game)
    _check_budget(_box_size(box), budget)
    found = []
    for x in itertools.product(*box):
        cert = characterize_nash(game, x)
        direct = is_nash(game, x)
        if cert.is_nash != direct.is_nash:
            raise InvariantViolationError(
                f"characterization disagrees with the direct scan at {x}"
            )
        if cert.is_nash:
            found.append((x, cert))
        else:
            for i, st in enumerate(cert.players):
                if not st.is_best_response:
                    _validate_deviation(game, x, i, st.deviation_witness)
    return found


def build_nash(
    loaded,
    method: str = "brute",
    budget: int = DEFAULT_BUDGET,
    deterministic: bool = False,
) -> dict:
    game = loaded.game
    doc = _envelope("nash", deterministic)
    doc["game"] = _game_block(loaded)
    doc["method"] = method
    doc["budget"] = budget
    checks = []
    if method == "brute":
        profiles = nash_enumerate(game, budget=budget)
    elif method == "decoupled":
        profiles = decoupled_nash(game, budget=budget)
        projections = decoupled_projections(game)
        doc["projections"] = [
            [loaded.players[i].space.label(e) for e in sorted(proj)]
            for i, proj in enumerate(projections)
        ]
        doc["subset_only"] = True
        checks.append({"name": "decoupled_profiles_recertified", "ok": True})
        if game.constraints_comprehensive:
            doc["maximal_nash"] = loaded.profile_labels(maximal_nash(game))
    elif method == "characterize":
        found = _characterized_profiles(game, budget)
        profiles = [x for x, _ in found]
        doc["statuses"] = [
            {
                "profile": loaded.profile_labels(x),
                "players": [
                    {
                        "own_argmax": st.own_argmax,
                        "own_covers_opponents": st.own_covers_opponents,
                    }
                    for st in cert.players
                ],
            }
            for x, cert in found
        ]
        checks.append({"name": "characterization_agrees_with_direct_scan", "ok": True})
    else:
        raise ValidationError(
            f"unknown nash method {method!r}; use 'brute', 'decoupled' or 'characterize'"
        )
    doc["nash_profiles"] = [loaded.profile_labels(x) for x in profiles]
    doc["count"] = len(profiles)
    doc["payoffs"] = [
        [_qstr(game.payoff(i, x)) for i in range(game.n_players)] for x in profiles
    ]
    doc["checks"] = checks
    return doc


# -- efficient-nash -------------------------------------------------------------


def _inefficiency_witness(game, x, i):
    """Some y in S_i at least as good as x_i for the section but not above x_i."""
    sec = section(game, i, x)
    base = sec(x[i])
    for y in sorted(game.constraints[i]):
        if sec(y) >= base and not game.spaces[i].leq(x[i], y):
            return y
    return None


def _efficiency_entries(loaded, profiles):
    game = loaded.game
    entries = []
    for x in profiles:
        players = []
        for i in range(game.n_players):
            rep = efficiency_report(game, x, i)
            direct = efficient_for_player(game, x, i)
            if rep.efficient != direct:
                raise InvariantViolationError(
                    f"efficiency case analysis disagrees with the "
                    f"direct scan at {x} for player {i}"
                )
            entry = {
                "case": rep.case,
                "efficient": rep.efficient,
                "in_efficient_set": rep.in_efficient_set,
                "own_value": _qstr(rep.own_value),
                "opponents_value": None
                if rep.opponents_value is None
                else _qstr(rep.opponents_value),
                "blocking_witness": None
                if rep.blocking_witness is None
                else loaded.players[i].space.label(rep.blocking_witness),
            }
            if rep.case == "opponents_binding" and rep.efficient:
                entry["note"] = (
                    "opponents' level binds; efficiency was confirmed by "
                    "scanning for a strategy that undercuts the own value "
                    "while still clearing that level"
                )
            players.append(entry)
        entries.append({"profile": loaded.profile_labels(x), "players": players})
    return entries


def build_efficient_nash(
    loaded,
    method: str = "brute",
    budget: int = DEFAULT_BUDGET,
    start=None,
    max_steps: int = 10_000,
    deterministic: bool = False,
) -> dict:
    game = loaded.game
    doc = _envelope("efficient-nash", deterministic)
    doc["game"] = _game_block(loaded)
    doc["method"] = method
    doc["budget"] = budget
    checks = []
    if method == "iterate":
        x0 = game.profile_space.bottom if start is None else game.check_profile(start)
        result = iterate_efficient_responses(game, x0, max_steps=max_steps)
        doc["start"] = loaded.profile_labels(x0)
        doc["trace"] = [loaded.profile_labels(x) for x in result.trace]
        doc["reason"] = result.reason
        doc["fixed_point"] = (
            None
            if result.fixed_point is None
            else loaded.profile_labels(result.fixed_point)
        )
        doc["efficient_nash_profiles"] = (
            [] if result.fixed_point is None else [doc["fixed_point"]]
        )
        if result.fixed_point is not None:
            checks.append({"name": "fixed_point_recertified", "ok": True})
        doc["checks"] = checks
        return doc
    if method == "brute":
        profiles = efficient_nash_enumerate(game, method="brute", budget=budget)
    elif method == "fixed-point":
        profiles = efficient_nash_enumerate(game, method="fixed_point", budget=budget)
        brute = efficient_nash_enumerate(game, method="brute", budget=budget)
        if profiles != brute:
            raise InvariantViolationError(
                "fixed-point route disagrees with the brute-force scan: "
                f"{profiles} vs {brute}"
            )
        checks.append({"name": "fixed_point_agrees_with_brute", "ok": True})
    else:
        raise ValidationError(
            f"unknown efficient-nash method {method!r}; "
            "use 'brute', 'fixed-point' or 'iterate'"
        )
    doc["efficient_nash_profiles"] = [loaded.profile_labels(x) for x in profiles]
    doc["count"] = len(profiles)
    if loaded.payoff_model == "global":
        doc["efficiency"] = _efficiency_entries(loaded, profiles)
        checks.append({"name": "case_analysis_agrees_with_direct_scan", "ok": True})
    doc["checks"] = checks
    return doc


# -- report ---------------------------------------------------------------------


def _emptiness_evidence(loaded, nash_profiles):
    """For each Nash profile, which player fails efficiency and why."""
    game = loaded.game
    evidence = []
    for x in nash_profiles:
        for i in range(game.n_players):
            if efficient_for_player(game, x, i):
                continue
            entry = {
                "profile": loaded.profile_labels(x),
                "player": loaded.players[i].name,
            }
            w = _inefficiency_witness(game, x, i)
            if w is not None:
                entry["witness"] = loaded.players[i].space.label(w)
            evidence.append(entry)
            break
    return evidence


def build_report(
    loaded, budget: int = DEFAULT_BUDGET, deterministic: bool = False
) -> dict:
    game = loaded.game
    doc = _envelope("report", deterministic)
    doc["game"] = _game_block(loaded)
    doc["budget"] = budget
    checks = []

    nash_profiles = nash_enumerate(game, budget=budget)
    doc["nash"] = {
        "count": len(nash_profiles),
        "profiles": [loaded.profile_labels(x) for x in nash_profiles],
        "payoffs": [
            [_qstr(game.payoff(i, x)) for i in range(game.n_players)]
            for x in nash_profiles
        ],
    }

    efficient = efficient_nash_enumerate(game, method="brute", budget=budget)
    doc["efficient_nash"] = {
        "count": len(efficient),
        "profiles": [loaded.profile_labels(x) for x in efficient],
    }
    if not efficient:
        doc["efficient_nash"]["emptiness_evidence"] = _emptiness_evidence(
            loaded, nash_profiles
        )

    if loaded.payoff_model == "global" and game.unconstrained:
        fixed = efficient_nash_enumerate(game, method="fixed_point", budget=budget)
        if fixed != efficient:
            raise InvariantViolationError(
                "fixed-point route disagrees with the brute-force scan: "
                f"{fixed} vs {efficient}"
            )
        checks.append({"name": "fixed_point_agrees_with_brute", "ok": True})

    if loaded.payoff_model == "global":
        doc["projections"] = [
            [loaded.players[i].space.label(e) for e in sorted(proj)]
            for i, proj in enumerate(decoupled_projections(game))
        ]
        decoupled = decoupled_nash(game, budget=budget)
        missing = [x for x in decoupled if x not in nash_profiles]
        if missing:
            raise InvariantViolationError(
                f"decoupled profiles {missing} are not in the Nash set"
            )
        doc["decoupled_count"] = len(decoupled)
        checks.append({"name": "decoupled_subset_of_nash", "ok": True})

        if nash_profiles:
            doc["nash_efficiency"] = _efficiency_entries(loaded, nash_profiles)
            checks.append(
                {"name": "case_analysis_agrees_with_direct_scan", "ok": True}
            )
            doc["own_strategy_irrelevance"] = [
                {
                    "profile": loaded.profile_labels(x),
                    "players": sorted(
                        loaded.players[i].name
                        for i in own_strategy_irrelevance(game, x)
                    ),
                }
                for x in nash_profiles
            ]

        if game.constraints_comprehensive:
            found = _characterized_profiles(game, budget)
            if [x for x, _ in found] != nash_profiles:
                raise InvariantViolationError(
                    "characterization disagrees with brute-force enumeration"
                )
            checks.append(
                {"name": "characterization_agrees_with_brute", "ok": True}
            )
            doc["maximal_nash"] = (
                loaded.profile_labels(maximal_nash(game)) if nash_profiles else None
            )
            normalized = []
            for x in nash_profiles:
                y = normalize_nash(game, x)
                normalized.append(
                    {
                        "profile": loaded.profile_labels(x),
                        "normalized": loaded.profile_labels(y),
                    }
                )
            doc["normalized_nash"] = normalized
            checks.append({"name": "normalized_profiles_recertified", "ok": True})

    doc["checks"] = checks
    return doc


# -- refine -----------------------------------------------------------------------


def build_refine(
    loaded, steps, budget: int = DEFAULT_BUDGET, deterministic: bool = False
) -> dict:
    from .specfile import refine_spec

    doc = _envelope("refine", deterministic)
    doc["game"] = _game_block(loaded)
    doc["budget"] = budget
    entries = []
    for step in steps:
        refined = refine_spec(loaded, step)
        game = refined.game
        nash = nash_enumerate(game, budget=budget)
        efficient = efficient_nash_enumerate(game, method="brute", budget=budget)
        fixed = efficient_nash_enumerate(game, method="fixed_point", budget=budget)
        if fixed != efficient:
            raise InvariantViolationError(
                f"fixed-point route disagrees with the brute-force scan "
                f"at step {step}"
            )
        entries.append(
            {
                "step": _qstr(step),
                "sizes": [len(s) for s in game.spaces],
                "nash_count": len(nash),
                "efficient_nash": [refined.profile_labels(x) for x in efficient],
                "warnings": list(refined.warnings),
            }
        )
    doc["steps"] = entries
    doc["checks"] = [{"name": "fixed_point_agrees_with_brute", "ok": True}]
    return doc


# -- text rendering ---------------------------------------------------------------


def _fmt_profile(labels) -> str:
    return "(" + ", ".join(labels) + ")"


def render_text(doc) -> str:
    lines = []
    cmd = doc.get("command", "?")
    lines.append(f"command: {cmd}")
    if "generated_at" in doc:
        lines.append(f"generated at: {doc['generated_at']}")
    game = doc.get("game")
    if game:
        names = ", ".join(
            f"{p['name']}({p['size']})" for p in game["players"]
        )
        lines.append(f"players: {names}")
        lines.append(f"payoff model: {game['payoff_model']}")
        for w in game.get("warnings", []):
            lines.append(f"warning: {w}")

    if cmd == "check-axioms":
        lines.append(f"ok: {doc['ok']}")
        for p in doc.get("players", []):
            status = "ok" if p["ok"] else f"{p['violation_count']} violations"
            bottom = f", bottom {p['bottom']}" if p["bottom"] is not None else ""
            lines.append(f"  {p['name']}: {p['size']} elements, {status}{bottom}")
            for v in p["violations"]:
                lines.append(f"    {v['law']}: {', '.join(v['elements'])}")
        for e in doc.get("errors", []):
            lines.append(f"error: {e}")
        for q in doc.get("ql_failures", []):
            lines.append(f"payoff failure: {q}")
        for w in doc.get("warnings", []):
            lines.append(f"warning: {w}")

    if "method" in doc:
        lines.append(f"method: {doc['method']}")
    if "projections" in doc:
        for entry, p in zip(doc["projections"], game["players"]):
            lines.append(f"projection[{p['name']}]: {{{', '.join(entry)}}}")
    if "nash_profiles" in doc:
        lines.append(f"nash profiles: {doc['count']}")
        for labels, pay in zip(doc["nash_profiles"], doc.get("payoffs", [])):
            lines.append(
                f"  {_fmt_profile(labels)} payoffs ({', '.join(pay)})"
            )
    if "nash" in doc:
        lines.append(f"nash profiles: {doc['nash']['count']}")
        for labels, pay in zip(doc["nash"]["profiles"], doc["nash"]["payoffs"]):
            lines.append(f"  {_fmt_profile(labels)} payoffs ({', '.join(pay)})")
    if "efficient_nash" in doc:
        lines.append(f"efficient nash profiles: {doc['efficient_nash']['count']}")
        for labels in doc["efficient_nash"]["profiles"]:
            lines.append(f"  {_fmt_profile(labels)}")
        for ev in doc["efficient_nash"].get("emptiness_evidence", []):
            w = f" (witness {ev['witness']})" if "witness" in ev else ""
            lines.append(
                f"  {_fmt_profile(ev['profile'])}: {ev['player']} inefficient{w}"
            )
    if "efficient_nash_profiles" in doc:
        lines.append(
            f"efficient nash profiles: {doc.get('count', len(doc['efficient_nash_profiles']))}"
        )
        for labels in doc["efficient_nash_profiles"]:
            lines.append(f"  {_fmt_profile(labels)}")
    if "trace" in doc:
        lines.append(f"start: {_fmt_profile(doc['start'])}")
        lines.append("trace: " + " -> ".join(_fmt_profile(t) for t in doc["trace"]))
        lines.append(f"stopped: {doc['reason']}")
    if "maximal_nash" in doc and doc["maximal_nash"] is not None:
        lines.append(f"maximal nash: {_fmt_profile(doc['maximal_nash'])}")
    if "normalized_nash" in doc:
        for entry in doc["normalized_nash"]:
            lines.append(
                f"normalized {_fmt_profile(entry['profile'])} -> "
                f"{_fmt_profile(entry['normalized'])}"
            )
    if "own_strategy_irrelevance" in doc:
        for entry in doc["own_strategy_irrelevance"]:
            who = ", ".join(entry["players"]) if entry["players"] else "none"
            lines.append(
                f"own strategy irrelevant at {_fmt_profile(entry['profile'])}: {who}"
            )
    if "steps" in doc:
        for entry in doc["steps"]:
            profs = ", ".join(_fmt_profile(p) for p in entry["efficient_nash"])
            lines.append(
                f"step {entry['step']}: sizes {entry['sizes']}, "
                f"nash {entry['nash_count']}, efficient nash [{profs}]"
            )
            for w in entry.get("warnings", []):
                lines.append(f"  warning: {w}")
    for chk in doc.get("checks", []):
        lines.append(f"check {chk['name']}: {'ok' if chk['ok'] else 'FAILED'}")
    return "\n".join(lines) + "\n"
