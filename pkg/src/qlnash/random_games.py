"""Seeded generators for spaces, quasi-Leontief functions, and games.

Everything takes a random.Random instance (or a seed) and is fully
deterministic given it. Non-chain spaces come from intersection-closed
families of subsets of a small universe, which always form
meet-semilattices under set intersection. QL functions are sampled
exactly, not by rejection: a QL function is the same thing as a chain of
nested principal upper level sets, so a random chain from the bottom plus
strictly increasing rational values covers the whole class.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .game import GameSpec, GlobalQLPayoffs, IndividualQLPayoffs
from .leontief import TabulatedFunction
from .semilattice import FiniteInfSemilattice


def _rng(seed_or_rng) -> random.Random:
    if isinstance(seed_or_rng, random.Random):
        return seed_or_rng
    return random.Random(seed_or_rng)


def random_chain(rng, max_size: int = 6) -> FiniteInfSemilattice:
    rng = _rng(rng)
    return FiniteInfSemilattice.chain(rng.randint(1, max_size))


def random_semilattice(rng, max_size: int = 6, universe: int = 4) -> FiniteInfSemilattice:
    """Intersection-closed family over a small universe; meet is intersection."""
    rng = _rng(rng)
    while True:
        seeds = [
            frozenset(k for k in range(universe) if rng.random() < 0.5)
            for _ in range(rng.randint(1, 4))
        ]
        family = set(seeds)
        grew = True
        while grew:
            grew = False
            for a in list(family):
                for b in list(family):
                    m = a & b
                    if m not in family:
                        family.add(m)
                        grew = True
        if len(family) <= max_size:
            break
    members = sorted(family, key=lambda s: (len(s), sorted(s)))
    index = {s: k for k, s in enumerate(members)}
    table = [[index[a & b] for b in members] for a in members]
    labels = ["{" + ",".join(str(x) for x in sorted(s)) + "}" for s in members]
    return FiniteInfSemilattice(table, labels=labels)


def random_space(rng, max_size: int = 6) -> FiniteInfSemilattice:
    rng = _rng(rng)
    if rng.random() < 0.5:
        return random_chain(rng, max_size)
    return random_semilattice(rng, max_size)


def random_ql_function(space: FiniteInfSemilattice, rng, max_levels: int = 4) -> TabulatedFunction:
    """Random QL function: nested principal upper level sets with rising values.

    Builds a chain bottom = c_0 < c_1 < ... < c_k and strictly increasing
    values v_0 < ... < v_k; the function maps x to v at the top chain point
    below x. Every QL function on the space has this shape.
    """
    rng = _rng(rng)
    chain = [space.bottom]
    while len(chain) <= max_levels:
        current = chain[-1]
        uppers = [y for y in space.elements if y != current and space.leq(current, y)]
        if not uppers or rng.random() < 0.35:
            break
        chain.append(rng.choice(sorted(uppers)))
    value = Fraction(rng.randint(0, 4), rng.choice((1, 2, 4)))
    values = [value]
    for _ in chain[1:]:
        value += Fraction(rng.randint(1, 6), rng.choice((1, 2, 4)))
        values.append(value)
    table = {}
    for x in space.elements:
        level = max(k for k, c in enumerate(chain) if space.leq(c, x))
        table[x] = values[level]
    return TabulatedFunction(space, table)


def random_comprehensive_subset(space: FiniteInfSemilattice, rng) -> frozenset:
    """Nonempty downward-closed subset: the down-closure of a random seed set."""
    rng = _rng(rng)
    seeds = [e for e in space.elements if rng.random() < 0.5]
    if not seeds:
        seeds = [space.bottom]
    out = set()
    for s in seeds:
        for y in space.elements:
            if space.leq(y, s):
                out.add(y)
    return frozenset(out)


def random_global_game(
    rng,
    max_players: int = 3,
    max_space: int = 6,
    unconstrained: bool = False,
) -> GameSpec:
    """Random game in the global (min-aggregated) model.

    Player count is 1..max_players with two- and three-player games
    dominating; constraint sets are comprehensive (or full when asked).
    """
    rng = _rng(rng)
    n = rng.choices(range(1, max_players + 1), weights=[1, 5, 4][:max_players])[0]
    spaces = [random_space(rng, max_space) for _ in range(n)]
    components = [
        [random_ql_function(spaces[j], rng) for j in range(n)] for i in range(n)
    ]
    if unconstrained:
        constraints = None
    else:
        constraints = [
            None if rng.random() < 0.4 else random_comprehensive_subset(s, rng)
            for s in spaces
        ]
    return GameSpec(spaces, GlobalQLPayoffs(tuple(map(tuple, components))), constraints)


def random_individual_game(
    rng,
    n_players: int = 2,
    max_space: int = 5,
    chains_only: bool = False,
) -> GameSpec:
    """Random unconstrained game in the individual model.

    Each player's table is assembled section by section from random QL
    functions of the own variable, so validation always passes.
    """
    rng = _rng(rng)
    if chains_only:
        spaces = [random_chain(rng, max_space) for _ in range(n_players)]
    else:
        spaces = [random_space(rng, max_space) for _ in range(n_players)]
    tables = []
    for i in range(n_players):
        table = {}
        others = [list(spaces[j].elements) for j in range(n_players) if j != i]
        for rest in itertools.product(*others):
            sec = random_ql_function(spaces[i], rng)
            for z in spaces[i].elements:
                profile = rest[:i] + (z,) + rest[i:]
                table[profile] = sec(z)
        tables.append(table)
    return GameSpec(spaces, IndividualQLPayoffs(tuple(tables)))
