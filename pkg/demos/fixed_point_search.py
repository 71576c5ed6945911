"""Finding efficient Nash points as fixed points, and how that can fail.

The per-player map sending a profile to the efficient maximizers of each
section has the efficient Nash points as its fixed points. With
min-aggregated payoffs the least-selection iteration from the bottom is
monotone and must terminate on one. With free-form individual payoffs
nothing forces convergence: this script shows a clean success, a
two-player game whose iteration cycles forever, and a game with no Nash
point at all.

Run with: python3 demos/fixed_point_search.py
"""

from fractions import Fraction as F

import qlnash as q
from worked_game import build


def show_trace(game, start, pts=None):
    res = q.iterate_efficient_responses(game, start)
    fmt = (lambda x: tuple(str(pts[e]) for e in x)) if pts else (lambda x: x)
    print("  trace:", " -> ".join(map(str, map(fmt, res.trace))))
    print("  reason:", res.reason, "| fixed point:", None if res.fixed_point is None else fmt(res.fixed_point))


def main():
    print("Min-aggregated game: iteration always lands on an efficient Nash point")
    game, pts = build()
    show_trace(game, (8, 8), pts)  # from the top corner (2, 2)
    show_trace(game, (0, 0), pts)  # from the bottom

    print()
    print("Individual payoffs: least selections can chase each other")
    c = q.FiniteInfSemilattice.chain(2)
    t0 = {(0, 0): F(0), (1, 0): F(1), (0, 1): F(1), (1, 1): F(1)}
    t1 = {(0, 0): F(1), (0, 1): F(1), (1, 0): F(0), (1, 1): F(1)}
    cycling = q.GameSpec([c, c], q.IndividualQLPayoffs((t0, t1)))
    show_trace(cycling, (0, 0))
    nash = q.nash_enumerate(cycling)
    print("  Nash profiles:", nash)
    print("  efficient Nash profiles:", q.efficient_nash_enumerate(cycling))

    print()
    print("Individual payoffs: Nash points need not exist at all")
    vee = lambda: q.FiniteInfSemilattice(
        [[0, 0, 0], [0, 1, 0], [0, 0, 2]], labels=["bot", "l", "r"]
    )
    t0, t1 = {}, {}
    for a in range(3):
        for b in range(3):
            t0[(a, b)] = F(1 if a == (2 if b == 2 else 1) else 0)
            t1[(a, b)] = F(1 if b == (1 if a == 2 else 2) else 0)
    chase = q.GameSpec([vee(), vee()], q.IndividualQLPayoffs((t0, t1)))
    print("  Nash profiles:", q.nash_enumerate(chase))
    x = (1, 2)
    cert = q.is_nash(chase, x)
    mover = next(i for i, s in enumerate(cert.players) if not s.is_best_response)
    print(f"  e.g. at {x} player {mover + 1} deviates to {cert.players[mover].deviation_witness}")


if __name__ == "__main__":
    main()
