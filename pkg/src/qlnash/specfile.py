"""JSON game descriptions and their exact resolution.

A spec file declares players (explicit meet table or rational grid),
optional per-player constraint sets, and payoffs in the global
(component matrix, entries piecewise-linear or tabulated) or individual
(full nested tables) model. All numeric values are rational strings
("p/q" or "n"); JSON numbers and floats are rejected so nothing is ever
rounded. Piecewise-linear components are evaluated exactly at grid
points; breakpoints that fall inside the box but off the grid are
reported as warnings, never rejected.
"""

from __future__ import annotations

import itertools
import json
import re
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotQuasiLeontiefError, ValidationError
from .game import GameSpec, GlobalQLPayoffs, IndividualQLPayoffs
from .leontief import TabulatedFunction
from .semilattice import AxiomReport, FiniteInfSemilattice, check_meet_table

SPEC_SCHEMA_VERSION = 1

RATIONAL_RE = re.compile(r"^-?[0-9]+(/[1-9][0-9]*)?$")


def parse_rational(value, where: str) -> Fraction:
    if not isinstance(value, str) or not RATIONAL_RE.match(value):
        raise ValidationError(
            f"{where}: expected a rational string like '3' or '1/4', got {value!r}"
        )
    return Fraction(value)


def rational_str(value: Fraction) -> str:
    return str(Fraction(value))


def _require(doc, key, where, kind=None):
    if not isinstance(doc, dict) or key not in doc:
        raise ValidationError(f"{where}: missing required key {key!r}")
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise ValidationError(f"{where}.{key}: expected {kind.__name__}")
    return value


@dataclass(frozen=True)
class PiecewiseLinear:
    """Weakly increasing piecewise-linear function on a rational interval."""

    breakpoints: tuple

    def __post_init__(self):
        bps = self.breakpoints
        if not bps:
            raise ValidationError("piecewise-linear component needs breakpoints")
        xs = [x for x, _ in bps]
        ys = [y for _, y in bps]
        if any(b <= a for b, a in zip(xs[1:], xs)):
            raise ValidationError("breakpoint abscissae must be strictly increasing")
        if any(b < a for b, a in zip(ys[1:], ys)):
            raise ValidationError(
                "breakpoint values must be weakly increasing (isotone)"
            )

    @property
    def domain(self):
        return self.breakpoints[0][0], self.breakpoints[-1][0]

    def __call__(self, x: Fraction) -> Fraction:
        lo, hi = self.domain
        if not lo <= x <= hi:
            raise ValidationError(f"{x} outside piecewise-linear domain [{lo}, {hi}]")
        xs = [bx for bx, _ in self.breakpoints]
        k = bisect_right(xs, x) - 1
        bx, by = self.breakpoints[k]
        if x == bx or k == len(self.breakpoints) - 1:
            return by
        nx, ny = self.breakpoints[k + 1]
        return by + (ny - by) * (x - bx) / (nx - bx)


def parse_pwl(doc, where: str) -> PiecewiseLinear:
    raw = _require(doc, "breakpoints", where, list)
    bps = []
    for k, pair in enumerate(raw):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValidationError(f"{where}.breakpoints[{k}]: expected [x, value]")
        bps.append(
            (
                parse_rational(pair[0], f"{where}.breakpoints[{k}][0]"),
                parse_rational(pair[1], f"{where}.breakpoints[{k}][1]"),
            )
        )
    return PiecewiseLinear(tuple(bps))


def discretize(pwl: PiecewiseLinear, points) -> tuple:
    """Exact values of the component at each grid point, plus flagged
    breakpoints that lie inside the box but off the grid."""
    points = list(points)
    lo, hi = pwl.domain
    if points[0] < lo or points[-1] > hi:
        raise ValidationError(
            f"grid [{points[0]}, {points[-1]}] outside piecewise-linear domain [{lo}, {hi}]"
        )
    values = [pwl(x) for x in points]
    grid = set(points)
    flagged = tuple(
        bx for bx, _ in pwl.breakpoints if points[0] < bx < points[-1] and bx not in grid
    )
    return values, flagged


@dataclass(frozen=True)
class GridSpec:
    lower: Fraction
    upper: Fraction
    step: Fraction
    points: tuple

    @classmethod
    def build(cls, lower, upper, step, where="grid") -> "GridSpec":
        if step <= 0:
            raise ValidationError(f"{where}: step must be positive")
        if upper < lower:
            raise ValidationError(f"{where}: upper bound below lower bound")
        span = (upper - lower) / step
        if span.denominator != 1:
            raise ValidationError(
                f"{where}: step {step} does not divide the span {upper - lower}"
            )
        points = tuple(lower + k * step for k in range(span.numerator + 1))
        return cls(lower, upper, step, points)

    def space(self) -> FiniteInfSemilattice:
        return FiniteInfSemilattice.chain([rational_str(p) for p in self.points])


@dataclass(frozen=True)
class PlayerSpec:
    name: str
    space: FiniteInfSemilattice
    grid: GridSpec | None


@dataclass(frozen=True)
class ValidationOutcome:
    """Non-raising validation result; check-axioms reports from this."""

    ok: bool
    errors: tuple
    axiom_reports: tuple  # (player name, AxiomReport, element labels) triples
    ql_failures: tuple
    warnings: tuple
    loaded: "LoadedGame | None"


class LoadedGame:
    """A parsed and resolved spec: game plus presentation metadata."""

    def __init__(self, game, players, payoff_model, pwl_components, warnings, source):
        self.game = game
        self.players = tuple(players)
        self.payoff_model = payoff_model
        self.pwl_components = pwl_components
        self.warnings = tuple(warnings)
        self.source = source

    @property
    def names(self):
        return tuple(p.name for p in self.players)

    def profile_labels(self, profile) -> list:
        return [p.space.label(e) for p, e in zip(self.players, profile)]

    def parse_profile(self, labels) -> tuple:
        if len(labels) != len(self.players):
            raise ValidationError(
                f"profile needs {len(self.players)} coordinates, got {len(labels)}"
            )
        return tuple(p.space.index_of(lab) for p, lab in zip(self.players, labels))

    def resolved_dict(self) -> dict:
        """Re-parseable spec with grids expanded and payoffs tabulated."""
        players = []
        for p in self.players:
            labels = list(p.space.labels)
            table = [
                [p.space.label(p.space.meet(a, b)) for b in p.space.elements]
                for a in p.space.elements
            ]
            players.append(
                {
                    "name": p.name,
                    "strategy_space": {
                        "explicit": {"elements": labels, "meet_table": table}
                    },
                }
            )
        g = self.game
        constraints = [
            sorted(self.players[i].space.label(e) for e in g.constraints[i])
            if len(g.constraints[i]) != len(g.spaces[i])
            else None
            for i in range(g.n_players)
        ]
        if self.payoff_model == "global":
            comps = [
                [
                    {
                        "table": {
                            "values": [
                                rational_str(comp(z)) for z in comp.space.elements
                            ]
                        }
                    }
                    for comp in row
                ]
                for row in g.payoffs.components
            ]
            payoffs = {"global": {"components": comps}}
        else:
            tables = []
            for i in range(g.n_players):
                tables.append(_nest_table(g, i))
            payoffs = {"individual": {"tables": tables}}
        return {
            "schema_version": SPEC_SCHEMA_VERSION,
            "players": players,
            "constraints": constraints,
            "payoffs": payoffs,
        }


def _nest_table(game, i):
    sizes = [len(s) for s in game.spaces]

    def build(prefix):
        k = len(prefix)
        if k == len(sizes):
            return rational_str(game.payoff(i, tuple(prefix)))
        return [build(prefix + [z]) for z in range(sizes[k])]

    return build([])


def _parse_player(entry, where):
    name = _require(entry, "name", where, str)
    if not name:
        raise ValidationError(f"{where}.name: must be nonempty")
    ss = _require(entry, "strategy_space", where, dict)
    kinds = [k for k in ("explicit", "grid") if k in ss]
    if len(kinds) != 1:
        raise ValidationError(
            f"{where}.strategy_space: exactly one of 'explicit' or 'grid' required"
        )
    if kinds[0] == "grid":
        g = ss["grid"]
        lower = parse_rational(_require(g, "lower", f"{where}.grid"), f"{where}.grid.lower")
        upper = parse_rational(_require(g, "upper", f"{where}.grid"), f"{where}.grid.upper")
        step = parse_rational(_require(g, "step", f"{where}.grid"), f"{where}.grid.step")
        grid = GridSpec.build(lower, upper, step, where=f"{where}.grid")
        return name, grid, None, None
    ex = ss["explicit"]
    elements = _require(ex, "elements", f"{where}.explicit", list)
    if not elements or not all(isinstance(e, str) and e for e in elements):
        raise ValidationError(f"{where}.explicit.elements: nonempty strings required")
    if len(set(elements)) != len(elements):
        raise ValidationError(f"{where}.explicit.elements: duplicates not allowed")
    raw_table = _require(ex, "meet_table", f"{where}.explicit", list)
    index = {e: k for k, e in enumerate(elements)}
    n = len(elements)
    if len(raw_table) != n or any(
        not isinstance(row, list) or len(row) != n for row in raw_table
    ):
        raise ValidationError(f"{where}.explicit.meet_table: must be {n}x{n}")
    table = []
    for r, row in enumerate(raw_table):
        line = []
        for c, cell in enumerate(row):
            if cell not in index:
                raise ValidationError(
                    f"{where}.explicit.meet_table[{r}][{c}]: unknown element {cell!r}"
                )
            line.append(index[cell])
        table.append(line)
    return name, None, table, elements


def validate_spec_dict(doc, where: str = "spec") -> ValidationOutcome:
    """Validate a spec document without raising; collects all findings."""
    errors: list = []
    warnings: list = []
    axiom_entries: list = []
    ql_failures: list = []

    def fail(*msgs):
        errors.extend(msgs)
        return ValidationOutcome(
            False, tuple(errors), tuple(axiom_entries), tuple(ql_failures),
            tuple(warnings), None,
        )

    if not isinstance(doc, dict):
        return fail(f"{where}: expected a JSON object")
    version = doc.get("schema_version")
    if version != SPEC_SCHEMA_VERSION:
        return fail(
            f"{where}.schema_version: expected {SPEC_SCHEMA_VERSION}, got {version!r}"
        )
    try:
        raw_players = _require(doc, "players", where, list)
        if not raw_players:
            raise ValidationError(f"{where}.players: at least one player required")
    except ValidationError as exc:
        return fail(str(exc))

    players: list = []
    for k, entry in enumerate(raw_players):
        pw = f"{where}.players[{k}]"
        try:
            name, grid, table, elements = _parse_player(entry, pw)
            if grid is not None:
                space = grid.space()
                players.append(PlayerSpec(name, space, grid))
                axiom_entries.append((name, space.axiom_report, space.labels))
            else:
                report = check_meet_table(table)
                axiom_entries.append((name, report, tuple(elements)))
                if not report.ok:
                    errors.append(f"{pw}.explicit.meet_table: {report.summary()}")
                    players.append(None)
                else:
                    players.append(
                        PlayerSpec(name, FiniteInfSemilattice(table, labels=elements), None)
                    )
        except ValidationError as exc:
            errors.append(str(exc))
            players.append(None)
    if any(p is None for p in players):
        return ValidationOutcome(
            False, tuple(errors), tuple(axiom_entries), tuple(ql_failures),
            tuple(warnings), None,
        )
    names = [p.name for p in players]
    if len(set(names)) != len(names):
        return fail(f"{where}.players: names must be unique")

    n = len(players)
    constraints = None
    if doc.get("constraints") is not None:
        raw = doc["constraints"]
        if not isinstance(raw, list) or len(raw) != n:
            return fail(f"{where}.constraints: expected a list of {n} entries")
        constraints = []
        for i, entry in enumerate(raw):
            if entry is None:
                constraints.append(None)
                continue
            cw = f"{where}.constraints[{i}]"
            if not isinstance(entry, list) or not entry:
                return fail(f"{cw}: expected a nonempty list of element labels")
            if len(set(entry)) != len(entry):
                return fail(f"{cw}: duplicate labels")
            try:
                constraints.append([players[i].space.index_of(lab) for lab in entry])
            except ValidationError as exc:
                return fail(f"{cw}: {exc}")

    try:
        payoffs, model, pwl_components, pw_warnings = _parse_payoffs(
            doc, players, where
        )
        warnings.extend(pw_warnings)
    except ValidationError as exc:
        return fail(str(exc))

    try:
        game = GameSpec([p.space for p in players], payoffs, constraints)
    except NotQuasiLeontiefError as exc:
        ql_failures.append(str(exc))
        return fail(f"{where}.payoffs: {exc}")
    except ValidationError as exc:
        return fail(f"{where}: {exc}")

    loaded = LoadedGame(game, players, model, pwl_components, warnings, doc)
    return ValidationOutcome(
        True, tuple(errors), tuple(axiom_entries), tuple(ql_failures),
        tuple(warnings), loaded,
    )


def _parse_payoffs(doc, players, where):
    raw = _require(doc, "payoffs", where, dict)
    kinds = [k for k in ("global", "individual") if k in raw]
    if len(kinds) != 1:
        raise ValidationError(
            f"{where}.payoffs: exactly one of 'global' or 'individual' required"
        )
    n = len(players)
    warnings: list = []
    if kinds[0] == "global":
        comps_raw = _require(raw["global"], "components", f"{where}.payoffs.global", list)
        if len(comps_raw) != n or any(
            not isinstance(row, list) or len(row) != n for row in comps_raw
        ):
            raise ValidationError(
                f"{where}.payoffs.global.components: must be an {n}x{n} matrix"
            )
        components = []
        pwls = []
        for i, row in enumerate(comps_raw):
            crow = []
            prow = []
            for j, cell in enumerate(row):
                cw = f"{where}.payoffs.global.components[{i}][{j}]"
                tf, pwl, flagged = _parse_component(cell, players[j], cw)
                crow.append(tf)
                prow.append(pwl)
                for bx in flagged:
                    warnings.append(
                        f"{cw}: breakpoint {rational_str(bx)} is not a grid point"
                    )
            components.append(tuple(crow))
            pwls.append(tuple(prow))
        return GlobalQLPayoffs(tuple(components)), "global", tuple(pwls), warnings
    tables_raw = _require(raw["individual"], "tables", f"{where}.payoffs.individual", list)
    if len(tables_raw) != n:
        raise ValidationError(
            f"{where}.payoffs.individual.tables: expected {n} tables"
        )
    sizes = [len(p.space) for p in players]
    tables = []
    for i, node in enumerate(tables_raw):
        tw = f"{where}.payoffs.individual.tables[{i}]"
        flat = {}
        _walk_table(node, sizes, (), flat, tw)
        tables.append(flat)
    return IndividualQLPayoffs(tuple(tables)), "individual", None, warnings


def _walk_table(node, sizes, prefix, out, where):
    k = len(prefix)
    if k == len(sizes):
        out[prefix] = parse_rational(node, where)
        return
    if not isinstance(node, list) or len(node) != sizes[k]:
        raise ValidationError(
            f"{where}: expected a list of length {sizes[k]} at depth {k}"
        )
    for z, child in enumerate(node):
        _walk_table(child, sizes, prefix + (z,), out, f"{where}[{z}]")


def _parse_component(cell, player, where):
    if not isinstance(cell, dict):
        raise ValidationError(f"{where}: expected an object")
    kinds = [k for k in ("pwl", "table") if k in cell]
    if len(kinds) != 1:
        raise ValidationError(f"{where}: exactly one of 'pwl' or 'table' required")
    if kinds[0] == "pwl":
        if player.grid is None:
            raise ValidationError(
                f"{where}: piecewise-linear components need a grid strategy space"
            )
        pwl = parse_pwl(cell["pwl"], where)
        values, flagged = discretize(pwl, player.grid.points)
        return TabulatedFunction(player.space, values), pwl, flagged
    values = _require(cell["table"], "values", f"{where}.table", list)
    if len(values) != len(player.space):
        raise ValidationError(
            f"{where}.table.values: expected {len(player.space)} values"
        )
    parsed = [
        parse_rational(v, f"{where}.table.values[{k}]") for k, v in enumerate(values)
    ]
    return TabulatedFunction(player.space, parsed), None, ()


def parse_spec_dict(doc, where: str = "spec") -> LoadedGame:
    outcome = validate_spec_dict(doc, where)
    if not outcome.ok:
        raise ValidationError("; ".join(outcome.errors))
    return outcome.loaded


def parse_spec(path) -> LoadedGame:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON: {exc}") from exc
    return parse_spec_dict(doc, where=str(path))


def validate_spec(path) -> ValidationOutcome:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            return ValidationOutcome(
                False, (f"{path}: invalid JSON: {exc}",), (), (), (), None
            )
    return validate_spec_dict(doc, where=str(path))


def write_spec(loaded: LoadedGame, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(loaded.resolved_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def refine_spec(loaded: LoadedGame, step: Fraction) -> LoadedGame:
    """The same box game rebuilt on a finer grid.

    Requires every player on a grid, fully piecewise-linear global
    payoffs, and no constraint sets (labels would not survive regridding).
    """
    if loaded.payoff_model != "global" or loaded.pwl_components is None:
        raise ValidationError("refine needs global piecewise-linear payoffs")
    if not loaded.game.unconstrained:
        raise ValidationError("refine is only defined for unconstrained games")
    for p in loaded.players:
        if p.grid is None:
            raise ValidationError(f"refine needs grid strategy spaces ({p.name})")
    for row in loaded.pwl_components:
        for pwl in row:
            if pwl is None:
                raise ValidationError("refine needs every component piecewise-linear")
    players = []
    for p in loaded.players:
        grid = GridSpec.build(p.grid.lower, p.grid.upper, step, where=f"{p.name}.grid")
        players.append(PlayerSpec(p.name, grid.space(), grid))
    warnings: list = []
    components = []
    for i, row in enumerate(loaded.pwl_components):
        crow = []
        for j, pwl in enumerate(row):
            values, flagged = discretize(pwl, players[j].grid.points)
            crow.append(TabulatedFunction(players[j].space, values))
            for bx in flagged:
                warnings.append(
                    f"components[{i}][{j}]: breakpoint {rational_str(bx)} "
                    f"is not a grid point at step {step}"
                )
        components.append(tuple(crow))
    game = GameSpec([p.space for p in players], GlobalQLPayoffs(tuple(components)))
    return LoadedGame(
        game, players, "global", loaded.pwl_components, warnings, loaded.source
    )
