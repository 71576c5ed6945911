"""Tour of the order-theoretic layer: spaces, axiom checks, products.

Run with: python3 demos/semilattice_tour.py
"""

from qlnash import (
    FiniteInfSemilattice,
    check_meet_table,
    is_comprehensive,
    is_inf_convex,
    maximal_elements,
    product,
)


def show(title):
    print()
    print(title)
    print("-" * len(title))


def main():
    show("A chain")
    chain = FiniteInfSemilattice.chain(["low", "mid", "high"])
    print("elements:", [chain.label(e) for e in chain.elements])
    print("meet(mid, high) =", chain.label(chain.meet(1, 2)))
    print("bottom:", chain.label(chain.bottom))

    show("A vee: two incomparable options above a fallback")
    vee = FiniteInfSemilattice(
        [[0, 0, 0], [0, 1, 0], [0, 0, 2]], labels=["none", "cpu", "gpu"]
    )
    print("cpu <= gpu?", vee.leq(1, 2))
    print("meet(cpu, gpu) =", vee.label(vee.meet(1, 2)))

    show("Axiom checking on a broken table")
    bad = [[0, 0], [1, 1]]  # meet(1,0) disagrees with meet(0,1)
    report = check_meet_table(bad)
    print("ok:", report.ok)
    for v in report.violations[:3]:
        print("  violated:", v.law, "at", v.elements)

    show("Products stay lazy")
    box = product([chain, vee])
    print("size:", len(box), "(never materialized as a table)")
    x, y = (2, 1), (1, 2)
    print(f"meet({x}, {y}) =", box.meet(x, y))
    print("labels:", box.label(box.meet(x, y)))

    show("Subset structure")
    down = frozenset({(0, 0), (0, 1), (0, 2), (1, 0)})
    print("comprehensive:", is_comprehensive(box, down))
    print("inf-convex:", is_inf_convex(box, down).inf_convex)
    print("maximal elements:", maximal_elements(box, down))


if __name__ == "__main__":
    main()
