"""Games with quasi-Leontief payoffs on finite meet-semilattices.

Two payoff models. In the *global* model each player i carries one
component per player, u[i][j] on player j's space, and the payoff is the
minimum of the components across coordinates. In the *individual* model
each player carries a full table on the profile space whose own-variable
sections must all be quasi-Leontief; this is validated at load.

Nash deviations always range over the constraint sets S_i. Enumerators
walk profiles in lexicographic element-index order and are guarded by a
profile budget. Constructions that are mathematically guaranteed to
produce Nash points (decoupled, maximal, normalization, fixed points of
the efficient-best-response map) re-certify their output and raise
InvariantViolationError when the guarantee fails, which means a bug.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BudgetExceededError,
    InvariantViolationError,
    NotQuasiLeontiefError,
    UnknownElementError,
    ValidationError,
)
from .leontief import TabulatedFunction
from .semilattice import (
    FiniteInfSemilattice,
    ProductSemilattice,
    is_comprehensive,
    maximal_elements,
    replace_coordinate,
)

DEFAULT_BUDGET = 10**6

Profile = tuple


@dataclass(frozen=True)
class GlobalQLPayoffs:
    """Payoff u_i = min_j components[i][j](x_j); every component must be QL."""

    components: tuple


@dataclass(frozen=True)
class IndividualQLPayoffs:
    """One full table per player on the profile space.

    Each table is a mapping from profile tuples to rationals (or a
    TabulatedFunction on the game's profile space). Own-variable sections
    must be quasi-Leontief; GameSpec checks all of them on construction.
    """

    tables: tuple


def _as_tuple_of_tuples(rows):
    return tuple(tuple(row) for row in rows)


class GameSpec:
    """Immutable game: spaces, nonempty constraint sets, validated payoffs."""

    def __init__(self, spaces, payoffs, constraints=None):
        self.spaces = tuple(spaces)
        self.n_players = len(self.spaces)
        if self.n_players < 1:
            raise ValidationError("a game needs at least one player")
        for k, s in enumerate(self.spaces):
            if not isinstance(s, FiniteInfSemilattice):
                raise ValidationError(f"space {k} is not a FiniteInfSemilattice")
        self.profile_space = ProductSemilattice(self.spaces)
        self._resolve_constraints(constraints)
        if isinstance(payoffs, GlobalQLPayoffs):
            self._init_global(payoffs)
        elif isinstance(payoffs, IndividualQLPayoffs):
            self._init_individual(payoffs)
        else:
            raise ValidationError("payoffs must be GlobalQLPayoffs or IndividualQLPayoffs")
        self._section_cache: dict = {}
        self._cell_cache: dict = {}
        self._own_max_cache: dict = {}
        self._comprehensive: bool | None = None

    # -- construction helpers ------------------------------------------------

    def _resolve_constraints(self, constraints):
        n = self.n_players
        if constraints is None:
            constraints = [None] * n
        else:
            constraints = list(constraints)
            if len(constraints) != n:
                raise ValidationError(
                    f"expected {n} constraint entries, got {len(constraints)}"
                )
        sets = []
        for i, c in enumerate(constraints):
            if c is None:
                members = frozenset(self.spaces[i].elements)
            else:
                members = frozenset(self.spaces[i].check_element(x) for x in c)
                if not members:
                    raise ValidationError(f"constraint set for player {i} is empty")
            sets.append(members)
        self.constraints = tuple(sets)
        self._constraint_lists = tuple(tuple(sorted(s)) for s in sets)

    def _init_global(self, payoffs):
        comps = _as_tuple_of_tuples(payoffs.components)
        n = self.n_players
        if len(comps) != n or any(len(row) != n for row in comps):
            raise ValidationError(f"global payoffs need an {n} x {n} component matrix")
        for i, row in enumerate(comps):
            for j, comp in enumerate(row):
                if not isinstance(comp, TabulatedFunction):
                    raise ValidationError(f"component ({i},{j}) is not a TabulatedFunction")
                if comp.space is not self.spaces[j]:
                    raise ValidationError(
                        f"component ({i},{j}) must be defined on player {j}'s space"
                    )
                cert = comp.ql_certificate()
                if not cert.is_ql:
                    raise NotQuasiLeontiefError(
                        f"component ({i},{j}) is not quasi-Leontief: "
                        f"pair {cert.failed_pair!r} breaks the meet-min law",
                        certificate=cert,
                    )
        self.payoffs = GlobalQLPayoffs(comps)
        self.is_global = True
        # dense per-element value rows for the hot enumeration loops
        self._cvals = tuple(
            tuple([comp(z) for z in self.spaces[j].elements] for j, comp in enumerate(row))
            for row in comps
        )
        self._tables = None

    def _init_individual(self, payoffs):
        tables = tuple(payoffs.tables)
        n = self.n_players
        if len(tables) != n:
            raise ValidationError(f"expected {n} payoff tables, got {len(tables)}")
        resolved = []
        full = list(self.profile_space.elements)
        for i, tab in enumerate(tables):
            if isinstance(tab, TabulatedFunction):
                if not isinstance(tab.space, ProductSemilattice) or tab.space.factors != self.spaces:
                    raise ValidationError(
                        f"table {i} is not defined on the game's profile space"
                    )
                values = {e: tab(e) for e in full}
            else:
                tf = TabulatedFunction(self.profile_space, dict(tab))
                values = dict(tf.items())
            resolved.append(values)
        self.payoffs = IndividualQLPayoffs(tuple(resolved))
        self.is_global = False
        self._tables = tuple(resolved)
        self._cvals = None
        # every own-variable section must be quasi-Leontief
        for i in range(n):
            others = [self.spaces[j].elements for j in range(n) if j != i]
            for rest in itertools.product(*others):
                sec = self._individual_section(i, rest)
                cert = sec.ql_certificate()
                if not cert.is_ql:
                    raise NotQuasiLeontiefError(
                        f"player {i}'s section at opponents {rest!r} is not "
                        f"quasi-Leontief: pair {cert.failed_pair!r} breaks the meet-min law",
                        certificate=cert,
                    )

    def _individual_section(self, i, others) -> TabulatedFunction:
        """Section of player i's table with the other coordinates frozen.

        ``others`` is the profile with coordinate i removed.
        """
        table = self._tables[i]
        vals = {}
        for z in self.spaces[i].elements:
            prof = others[:i] + (z,) + others[i:]
            vals[z] = table[prof]
        return TabulatedFunction(self.spaces[i], vals)

    # -- basic queries ---------------------------------------------------------

    def check_profile(self, x) -> Profile:
        if not isinstance(x, tuple) or len(x) != self.n_players:
            raise ValidationError(
                f"profile must be a tuple of {self.n_players} elements, got {x!r}"
            )
        return tuple(s.check_element(e) for s, e in zip(self.spaces, x))

    def profile_in_constraints(self, x) -> bool:
        return all(e in s for s, e in zip(self.constraints, x))

    @property
    def unconstrained(self) -> bool:
        return all(len(c) == len(s) for c, s in zip(self.constraints, self.spaces))

    @property
    def constraints_comprehensive(self) -> bool:
        if self._comprehensive is None:
            self._comprehensive = all(
                is_comprehensive(s, c) for s, c in zip(self.spaces, self.constraints)
            )
        return self._comprehensive

    def payoff(self, i, x) -> Fraction:
        if self.is_global:
            cv = self._cvals[i]
            return min(cv[j][x[j]] for j in range(self.n_players))
        return self._tables[i][x]

    def _own_max(self, i) -> Fraction:
        out = self._own_max_cache.get(i)
        if out is None:
            row = self._cvals[i][i]
            out = max(row[z] for z in self._constraint_lists[i])
            self._own_max_cache[i] = out
        return out

    def _require_global(self, what: str):
        if not self.is_global:
            raise ValidationError(f"{what} is only defined for the global payoff model")

    def _require_comprehensive(self, what: str):
        for i, (s, c) in enumerate(zip(self.spaces, self.constraints)):
            if not is_comprehensive(s, c):
                raise ValidationError(
                    f"{what} requires comprehensive constraint sets; "
                    f"player {i}'s is not downward closed"
                )

    def _require_unconstrained(self, what: str):
        if not self.unconstrained:
            raise ValidationError(
                f"{what} is only defined when every constraint set is the whole space"
            )


# -- certificates ---------------------------------------------------------------


@dataclass(frozen=True)
class PlayerNashStatus:
    """Per-player best-response verdict.

    ``own_argmax`` / ``own_covers_opponents`` are only filled in by
    characterize_nash: the first says the own component is maximal over
    S_i, the second that it reaches the opponents' level. Either one makes
    the player a best responder.
    """

    is_best_response: bool
    deviation_witness: object | None
    own_argmax: bool | None = None
    own_covers_opponents: bool | None = None


@dataclass(frozen=True)
class NashCertificate:
    profile: Profile
    players: tuple

    @property
    def is_nash(self) -> bool:
        return all(p.is_best_response for p in self.players)


@dataclass(frozen=True)
class PlayerEfficiency:
    """Per-player efficiency verdict at a Nash point (global model).

    case "own_binding": the opponents' level is at or above the own
    component, so the payoff is pinned by the own component and efficiency
    reduces to membership in its efficient set. case "opponents_binding":
    the own component strictly exceeds the opponents' level; efficiency
    additionally requires that no strategy undercuts the own value while
    still clearing that level (a ``blocking_witness`` is such a strategy).
    """

    case: str
    in_efficient_set: bool
    blocking_witness: object | None
    efficient: bool
    own_value: Fraction
    opponents_value: Fraction | None


@dataclass(frozen=True)
class EfficientResponses:
    """Product of per-player efficient best-response sets at a profile."""

    coordinate_sets: tuple
    least: Profile
    greatest: Profile

    def __contains__(self, profile) -> bool:
        if not isinstance(profile, tuple) or len(profile) != len(self.coordinate_sets):
            return False
        return all(x in cell for x, cell in zip(profile, self.coordinate_sets))

    def __len__(self) -> int:
        out = 1
        for cell in self.coordinate_sets:
            out *= len(cell)
        return out

    @property
    def profiles(self) -> list:
        return list(itertools.product(*self.coordinate_sets))


@dataclass(frozen=True)
class IterationResult:
    """Trace of the least-selection iteration of efficient best responses.

    ``reason`` is "fixed_point", "cycle", or "step_limit"; the trace ends
    with a repeated profile exactly when a fixed point was found.
    """

    trace: tuple
    fixed_point: Profile | None
    reason: str


# -- sections and levels -----------------------------------------------------


def section(G: GameSpec, i: int, x) -> TabulatedFunction:
    """Player i's payoff as a function of their own strategy, others frozen.

    Always quasi-Leontief for a validated game. Cached per (i, others).
    """
    _check_player(G, i)
    x = G.check_profile(x)
    others = x[:i] + x[i + 1 :]
    key = (i, others)
    sec = G._section_cache.get(key)
    if sec is not None:
        return sec
    if G.is_global:
        if G.n_players == 1:
            values = list(G._cvals[i][i])
        else:
            cap = opponents_value(G, i, x)
            values = [min(cap, v) for v in G._cvals[i][i]]
        sec = TabulatedFunction(G.spaces[i], values)
    else:
        sec = G._individual_section(i, others)
    G._section_cache[key] = sec
    return sec


def opponents_value(G: GameSpec, i: int, x) -> Fraction:
    """Minimum of player i's cross components at the others' coordinates."""
    G._require_global("opponents_value")
    _check_player(G, i)
    if G.n_players < 2:
        raise ValidationError("opponents_value needs at least two players")
    x = G.check_profile(x)
    cv = G._cvals[i]
    return min(cv[j][x[j]] for j in range(G.n_players) if j != i)


def _check_player(G: GameSpec, i: int) -> None:
    if not isinstance(i, int) or not 0 <= i < G.n_players:
        raise ValidationError(f"player index {i!r} out of range for {G.n_players} players")


# -- Nash membership -----------------------------------------------------------


def _player_best_response(G: GameSpec, i: int, x) -> object | None:
    """Deviation witness for player i at x, or None when none exists.

    Scans S_i in element-index order, so the witness is deterministic.
    """
    if G.is_global:
        cv = G._cvals[i]
        own = cv[i]
        if G.n_players == 1:
            current = own[x[0]]
            for z in G._constraint_lists[0]:
                if own[z] > current:
                    return z
            return None
        cap = min(cv[j][x[j]] for j in range(G.n_players) if j != i)
        current = min(cap, own[x[i]])
        for z in G._constraint_lists[i]:
            if min(cap, own[z]) > current:
                return z
        return None
    table = G._tables[i]
    current = table[x]
    for z in G._constraint_lists[i]:
        if table[replace_coordinate(x, i, z)] > current:
            return z
    return None


def _is_nash_quick(G: GameSpec, x) -> bool:
    return all(_player_best_response(G, i, x) is None for i in range(G.n_players))


def is_nash(G: GameSpec, x) -> NashCertificate:
    """Best-response certificate for a profile inside the constraint sets."""
    x = G.check_profile(x)
    if not G.profile_in_constraints(x):
        raise ValidationError("profile lies outside the constraint sets")
    players = []
    for i in range(G.n_players):
        w = _player_best_response(G, i, x)
        players.append(PlayerNashStatus(w is None, w))
    return NashCertificate(x, tuple(players))


def _check_budget(size: int, budget: int) -> None:
    if size > budget:
        raise BudgetExceededError(
            f"enumeration would visit {size} profiles, budget is {budget}"
        )


def nash_enumerate(G: GameSpec, budget: int = DEFAULT_BUDGET) -> list:
    """All Nash profiles, lexicographic by element index."""
    size = 1
    for lst in G._constraint_lists:
        size *= len(lst)
    _check_budget(size, budget)
    return [
        x for x in itertools.product(*G._constraint_lists) if _is_nash_quick(G, x)
    ]


# -- constructions ----------------------------------------------------------------


def _component_level(G: GameSpec, i: int) -> Fraction:
    """Best payoff player i can reach on the whole constraint box."""
    cv = G._cvals[i]
    return min(
        max(cv[j][z] for z in G._constraint_lists[j]) for j in range(G.n_players)
    )


def decoupled_projections(G: GameSpec) -> tuple:
    """Per-player projections of argmax(u_i; prod S_j) onto own coordinates."""
    G._require_global("decoupled_projections")
    out = []
    for i in range(G.n_players):
        level = _component_level(G, i)
        own = G._cvals[i][i]
        out.append(tuple(z for z in G._constraint_lists[i] if own[z] >= level))
    return tuple(out)


def decoupled_nash(G: GameSpec, budget: int = DEFAULT_BUDGET) -> list:
    """Product of the per-player argmax projections; every profile is Nash.

    This solves n independent maximization problems instead of a coupled
    search. The result is in general a strict subset of the full Nash set.
    """
    projections = decoupled_projections(G)
    size = 1
    for p in projections:
        size *= len(p)
    _check_budget(size, budget)
    out = []
    for x in itertools.product(*projections):
        if not _is_nash_quick(G, x):
            raise InvariantViolationError(
                f"decoupled construction produced a non-Nash profile {x!r}"
            )
        out.append(x)
    return out


def maximal_nash(G: GameSpec) -> Profile:
    """A Nash point that is maximal in the constraint box.

    Per player, takes the least-index element of the argmax projection and
    extends it upward to the least-index maximal element of S_i above it.
    Requires comprehensive constraint sets.
    """
    G._require_global("maximal_nash")
    G._require_comprehensive("maximal_nash")
    projections = decoupled_projections(G)
    coords = []
    for i in range(G.n_players):
        if not projections[i]:
            raise InvariantViolationError("empty argmax projection on a finite space")
        w = projections[i][0]
        space = G.spaces[i]
        above = sorted(
            m for m in maximal_elements(space, G.constraints[i]) if space.leq(w, m)
        )
        if not above:
            raise InvariantViolationError(
                "no maximal element above an element of a finite subset"
            )
        coords.append(above[0])
    x = tuple(coords)
    if not _is_nash_quick(G, x):
        raise InvariantViolationError("maximal construction produced a non-Nash profile")
    return x


def characterize_nash(G: GameSpec, x) -> NashCertificate:
    """Nash verdict through the two per-player conditions.

    Player i is a best responder iff the own component is maximal over S_i
    (``own_argmax``) or reaches the opponents' level
    (``own_covers_opponents``). Requires comprehensive constraint sets.
    When both fail, the deviation witness is the least-index own-component
    maximizer, which strictly improves the payoff.
    """
    G._require_global("characterize_nash")
    G._require_comprehensive("characterize_nash")
    x = G.check_profile(x)
    if not G.profile_in_constraints(x):
        raise ValidationError("profile lies outside the constraint sets")
    players = []
    for i in range(G.n_players):
        own = G._cvals[i][i][x[i]]
        n1 = own == G._own_max(i)
        if G.n_players == 1:
            n2 = False
        else:
            n2 = own >= opponents_value(G, i, x)
        if n1 or n2:
            players.append(PlayerNashStatus(True, None, n1, n2))
        else:
            best = G._own_max(i)
            witness = next(
                z for z in G._constraint_lists[i] if G._cvals[i][i][z] == best
            )
            players.append(PlayerNashStatus(False, witness, n1, n2))
    return NashCertificate(x, tuple(players))


def normalize_nash(G: GameSpec, x) -> Profile:
    """Project each coordinate of a Nash point onto its own efficient set.

    The image is again Nash, with weakly lower payoffs for everyone.
    Requires comprehensive constraint sets; errors when x is not Nash.
    """
    G._require_global("normalize_nash")
    G._require_comprehensive("normalize_nash")
    cert = is_nash(G, x)
    if not cert.is_nash:
        raise ValidationError("normalize_nash requires a Nash point")
    x = cert.profile
    comps = G.payoffs.components
    y = tuple(comps[i][i].project_efficient(x[i]) for i in range(G.n_players))
    if not G.profile_in_constraints(y) or not _is_nash_quick(G, y):
        raise InvariantViolationError("normalization left the Nash set")
    for i in range(G.n_players):
        if G.payoff(i, y) > G.payoff(i, x):
            raise InvariantViolationError("normalization raised a payoff")
    return y


def own_strategy_irrelevance(G: GameSpec, x) -> frozenset:
    """Players whose own component strictly exceeds the opponents' level.

    Locally, such a player's payoff does not respond to own-strategy
    changes near the top; their coordinate is pinned by the others.
    """
    G._require_global("own_strategy_irrelevance")
    x = G.check_profile(x)
    if G.n_players == 1:
        return frozenset()
    return frozenset(
        i
        for i in range(G.n_players)
        if G._cvals[i][i][x[i]] > opponents_value(G, i, x)
    )


# -- efficiency ----------------------------------------------------------------


def efficient_for_player(G: GameSpec, x, i: int) -> bool:
    """Direct scan: no y in S_i matches the section value without sitting above.

    This is the definitional route; it works for both payoff models and is
    deliberately independent of the case analysis in efficiency_report.
    """
    _check_player(G, i)
    x = G.check_profile(x)
    sec = section(G, i, x)
    space = G.spaces[i]
    mine = sec(x[i])
    return all(
        space.leq(x[i], y) for y in G._constraint_lists[i] if sec(y) >= mine
    )


def efficiency_report(G: GameSpec, x, i: int) -> PlayerEfficiency:
    """Case analysis of player i's efficiency at a Nash point (global model)."""
    G._require_global("efficiency_report")
    _check_player(G, i)
    cert = is_nash(G, x)
    if not cert.is_nash:
        raise ValidationError("efficiency_report requires a Nash point")
    x = cert.profile
    own_row = G._cvals[i][i]
    own = own_row[x[i]]
    opp = opponents_value(G, i, x) if G.n_players > 1 else None
    space = G.spaces[i]
    in_eff = all(
        space.leq(x[i], y) for y in G._constraint_lists[i] if own_row[y] >= own
    )
    if opp is None or opp >= own:
        return PlayerEfficiency("own_binding", in_eff, None, in_eff, own, opp)
    witness = next(
        (z for z in G._constraint_lists[i] if own > own_row[z] >= opp), None
    )
    efficient = in_eff and witness is None
    return PlayerEfficiency("opponents_binding", in_eff, witness, efficient, own, opp)


def is_efficient_nash(G: GameSpec, x) -> bool:
    """Nash and per-player efficient, via the definitional route."""
    x = G.check_profile(x)
    if not G.profile_in_constraints(x):
        return False
    if not _is_nash_quick(G, x):
        return False
    return all(efficient_for_player(G, x, i) for i in range(G.n_players))


# -- efficient best responses ---------------------------------------------------


def _efficient_cell(G: GameSpec, i: int, x) -> tuple:
    """Efficient maximizers of player i's section, cached per (i, others)."""
    others = x[:i] + x[i + 1 :]
    key = (i, others)
    cell = G._cell_cache.get(key)
    if cell is not None:
        return cell
    sec = section(G, i, x)
    eff = sec.efficient_set()
    top = sec.max_over()
    cell = tuple(sorted(e for e in eff if sec(e) == top))
    if not cell:
        raise InvariantViolationError("efficient best-response set is empty")
    G._cell_cache[key] = cell
    return cell


def _chain_extremes(space, cell):
    least = next((a for a in cell if all(space.leq(a, b) for b in cell)), None)
    greatest = next((a for a in cell if all(space.leq(b, a) for b in cell)), None)
    if least is None or greatest is None:
        raise InvariantViolationError("efficient best-response set is not a chain")
    return least, greatest


def efficient_best_responses(G: GameSpec, x) -> EfficientResponses:
    """Product over players of efficient maximizers of their sections at x.

    Fixed points of this map (profiles contained in their own image) are
    exactly the efficient Nash points. Only defined when every constraint
    set is the whole space. Each coordinate set is a nonempty chain.
    """
    G._require_unconstrained("efficient_best_responses")
    x = G.check_profile(x)
    cells = tuple(_efficient_cell(G, i, x) for i in range(G.n_players))
    least = []
    greatest = []
    for space, cell in zip(G.spaces, cells):
        lo, hi = _chain_extremes(space, cell)
        least.append(lo)
        greatest.append(hi)
    return EfficientResponses(cells, tuple(least), tuple(greatest))


def efficient_nash_enumerate(
    G: GameSpec, method: str = "brute", budget: int = DEFAULT_BUDGET
) -> list:
    """All efficient Nash profiles, lexicographic by element index.

    method "brute" filters the constraint box through the definitional
    checks; method "fixed_point" collects profiles contained in their own
    efficient best-response set (unconstrained games only). The two agree.
    """
    if method == "brute":
        size = 1
        for lst in G._constraint_lists:
            size *= len(lst)
        _check_budget(size, budget)
        out = []
        for x in itertools.product(*G._constraint_lists):
            if _is_nash_quick(G, x) and all(
                efficient_for_player(G, x, i) for i in range(G.n_players)
            ):
                out.append(x)
        return out
    if method == "fixed_point":
        G._require_unconstrained("efficient_nash_enumerate(method='fixed_point')")
        size = 1
        for s in G.spaces:
            size *= len(s)
        _check_budget(size, budget)
        out = []
        for x in itertools.product(*(s.elements for s in G.spaces)):
            if all(x[i] in _efficient_cell(G, i, x) for i in range(G.n_players)):
                out.append(x)
        return out
    raise ValidationError(f"unknown method {method!r}; use 'brute' or 'fixed_point'")


def iterate_efficient_responses(
    G: GameSpec, x0, max_steps: int = 10_000
) -> IterationResult:
    """Iterate x -> least(efficient_best_responses(x)) from a start profile.

    Stops at a fixed point (re-certified as an efficient Nash point), on a
    repeated profile (a cycle: the selection is deterministic, so revisiting
    proves nonconvergence), or at the step limit. Never raises for
    nonconvergence.
    """
    G._require_unconstrained("iterate_efficient_responses")
    x = G.check_profile(x0)
    trace = [x]
    seen = {x}
    for _ in range(max_steps):
        nxt = efficient_best_responses(G, x).least
        trace.append(nxt)
        if nxt == x:
            if not is_efficient_nash(G, nxt):
                raise InvariantViolationError(
                    "fixed point failed efficient-Nash certification"
                )
            return IterationResult(tuple(trace), nxt, "fixed_point")
        if nxt in seen:
            return IterationResult(tuple(trace), None, "cycle")
        seen.add(nxt)
        x = nxt
    return IterationResult(tuple(trace), None, "step_limit")
