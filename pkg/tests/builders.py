"""Shared constructors for the tests."""

from fractions import Fraction as F

import qlnash as q

# bottom plus two incomparable atoms
V3_TABLE = [[0, 0, 0], [0, 1, 0], [0, 0, 2]]


def vee_space():
    return q.FiniteInfSemilattice(V3_TABLE, labels=["bot", "l", "r"])


def chain_table(n):
    return [[min(a, b) for b in range(n)] for a in range(n)]


def grid_points(step, upper=F(2)):
    n = F(upper) / F(step)
    assert n.denominator == 1
    return [F(step) * k for k in range(n.numerator + 1)]


def chain_space(pts):
    return q.FiniteInfSemilattice.chain([str(p) for p in pts])


def capped(x):
    return min(2 * x, F(2))


def half(x):
    return x / 2


def capped_pair_game(step=F(1, 4)):
    """Symmetric two-player box game on [0, 2].

    Own components min(2x, 2), cross components x/2. Small enough to
    brute-force, rich enough to exercise every solver route.
    """
    pts = grid_points(step)
    s1, s2 = chain_space(pts), chain_space(pts)
    u11 = q.TabulatedFunction(s1, [capped(p) for p in pts])
    u12 = q.TabulatedFunction(s2, [half(p) for p in pts])
    u21 = q.TabulatedFunction(s1, [half(p) for p in pts])
    u22 = q.TabulatedFunction(s2, [capped(p) for p in pts])
    game = q.GameSpec([s1, s2], q.GlobalQLPayoffs(((u11, u12), (u21, u22))))
    return game, pts


def game_cvals(game):
    """Raw per-component value lists, for feeding the oracle route."""
    return [
        [[comp(z) for z in comp.space.elements] for comp in row]
        for row in game.payoffs.components
    ]


def game_tables(game):
    """Raw meet tables per player space."""
    return [
        [[s.meet(a, b) for b in s.elements] for a in s.elements]
        for s in game.spaces
    ]


def constraint_lists(game):
    return [sorted(c) for c in game.constraints]


def individual_cvals(game):
    """Raw profile -> value dicts per player."""
    profiles = list(game.profile_space.elements)
    return [{x: game.payoff(i, x) for x in profiles} for i in range(game.n_players)]
