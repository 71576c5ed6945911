"""Quasi-Leontief utilities on a single space.

A function is quasi-Leontief when its value at a meet is the minimum of
the values, equivalently when every nonempty upper level set is a
principal up-set. That single property buys a threshold adjunction, an
efficiency projection, and a chain-shaped efficient set; this script
walks through each.

Run with: python3 demos/leontief_functions.py
"""

from fractions import Fraction as F

from qlnash import FiniteInfSemilattice, TabulatedFunction


def main():
    pts = [F(k, 4) for k in range(9)]  # the grid 0, 1/4, ..., 2
    space = FiniteInfSemilattice.chain([str(p) for p in pts])
    u = TabulatedFunction(space, [min(2 * p, F(2)) for p in pts])

    cert = u.ql_certificate()
    print("quasi-Leontief:", cert.is_ql)

    # threshold queries: the least strategy reaching a target value
    for t in (F(1, 2), F(3, 2), F(2), F(5, 2)):
        m = u.least_attaining(t)
        print(f"least strategy with value >= {t}:", None if m is None else pts[m])

    # the projection strips wasted effort without losing value
    x = space.index_of("7/4")
    px = u.project_efficient(x)
    print(f"project_efficient(7/4) = {pts[px]}  (value {u(px)} = {u(x)})")

    eff = sorted(u.efficient_set())
    print("efficient strategies:", [str(pts[e]) for e in eff])

    # a counterexample: a dip in the middle breaks the level-set structure
    w = TabulatedFunction(FiniteInfSemilattice.chain(3), [F(1), F(0), F(1)])
    bad = w.ql_certificate()
    print("dip function quasi-Leontief:", bad.is_ql, "| failed pair:", bad.failed_pair)


if __name__ == "__main__":
    main()
