"""A two-player game solved end to end.

Both players pick effort levels on the grid 0, 1/4, ..., 2. Each payoff
is the minimum of an own component min(2x, 2) and a cross component
x/2 of the other player's choice, so nobody gains from running far
ahead of the partner. The script walks the full solver surface on this
game: Nash enumeration, the decoupled shortcut, the two-condition
characterization, efficiency diagnostics, and normalization.

Run with: python3 demos/worked_game.py
"""

from fractions import Fraction as F

import qlnash as q


def build():
    pts = [F(k, 4) for k in range(9)]
    space = lambda: q.FiniteInfSemilattice.chain([str(p) for p in pts])
    s1, s2 = space(), space()
    own = lambda s: q.TabulatedFunction(s, [min(2 * p, F(2)) for p in pts])
    cross = lambda s: q.TabulatedFunction(s, [p / 2 for p in pts])
    game = q.GameSpec(
        [s1, s2], q.GlobalQLPayoffs(((own(s1), cross(s2)), (cross(s1), own(s2))))
    )
    return game, pts


def main():
    game, pts = build()
    lab = lambda x: "(" + ", ".join(str(pts[e]) for e in x) + ")"

    nash = q.nash_enumerate(game)
    print(f"Nash profiles: {len(nash)} of {9 * 9}")

    cert = q.is_nash(game, (4, 0))  # the profile (1, 0)
    dev = cert.players[1].deviation_witness
    print(f"(1, 0) is Nash: {cert.is_nash}; player 2 should move to {pts[dev]}")

    # the decoupled route solves each player's component in isolation
    proj = q.decoupled_projections(game)
    print("per-player argmax projections:", [[str(pts[e]) for e in p] for p in proj])
    print(f"decoupled product: {len(q.decoupled_nash(game))} profiles, all Nash")

    # two conditions explain every verdict: own component maximal, or
    # own component at least the opponents' level
    c = q.characterize_nash(game, (4, 4))
    for i, st in enumerate(c.players):
        print(
            f"  player {i + 1} at (1, 1): own_argmax={st.own_argmax}, "
            f"own_covers_opponents={st.own_covers_opponents}"
        )

    print("maximal Nash point:", lab(q.maximal_nash(game)))
    print("normalize (2, 2) ->", lab(q.normalize_nash(game, (8, 8))))

    # at (1, 1) both players over-shoot: value 2 against a granted 1/2
    for i in range(2):
        r = q.efficiency_report(game, (4, 4), i)
        w = None if r.blocking_witness is None else pts[r.blocking_witness]
        print(
            f"  player {i + 1}: case={r.case}, own={r.own_value}, "
            f"opponents={r.opponents_value}, efficient={r.efficient}, "
            f"cheaper equivalent={w}"
        )
    print("players whose own move is locally irrelevant at (1, 1):", sorted(
        i + 1 for i in q.own_strategy_irrelevance(game, (4, 4))
    ))

    eff = q.efficient_nash_enumerate(game)
    print("efficient Nash profiles:", [lab(x) for x in eff])


if __name__ == "__main__":
    main()
