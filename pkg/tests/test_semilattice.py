import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import qlnash as q
from qlnash.errors import UnknownElementError, ValidationError

import oracles
from builders import V3_TABLE, chain_table, vee_space


class TestCheckMeetTable:
    def test_chain_is_valid(self):
        report = q.check_meet_table(chain_table(5))
        assert report.ok
        assert report.bottom == 0
        assert report.violations == ()
        assert not report.truncated

    def test_vee_is_valid(self):
        report = q.check_meet_table(V3_TABLE)
        assert report.ok
        assert report.bottom == 0

    def test_idempotence_violation(self):
        t = chain_table(3)
        t[1][1] = 0
        report = q.check_meet_table(t)
        assert not report.ok
        assert ("idempotence", (1,)) in {(v.law, v.elements) for v in report.violations}

    def test_commutativity_violation(self):
        t = chain_table(3)
        t[0][2] = 2  # t[2][0] still 0
        report = q.check_meet_table(t)
        laws = {v.law for v in report.violations}
        assert "commutativity" in laws

    def test_associativity_violation(self):
        # diamond with meet(1,2) redirected to the top: commutative and
        # idempotent, but (1^2)^2 = 2 while 1^(2^2) = 3
        t = [
            [0, 0, 0, 0],
            [0, 1, 3, 1],
            [0, 3, 2, 2],
            [0, 1, 2, 3],
        ]
        report = q.check_meet_table(t)
        assert not report.ok
        assert "associativity" in {v.law for v in report.violations}

    def test_structural_errors(self):
        with pytest.raises(ValidationError):
            q.check_meet_table([[0, 0], [0]])
        with pytest.raises(ValidationError):
            q.check_meet_table([[0, 5], [0, 1]])
        with pytest.raises(ValidationError):
            q.check_meet_table([])

    def test_summary_mentions_law(self):
        t = chain_table(3)
        t[1][1] = 0
        report = q.check_meet_table(t)
        assert "idempotence" in report.summary()

    @given(st.integers(0, 3000))
    @settings(max_examples=80, deadline=None)
    def test_agrees_with_brute_force(self, seed):
        """The vectorized checker and the triple-loop oracle must agree
        on validity and on the exact violation sets, law by law."""
        rng = random.Random(seed)
        n = rng.randint(1, 6)
        t = chain_table(n)
        for _ in range(rng.randint(0, 4)):
            t[rng.randrange(n)][rng.randrange(n)] = rng.randrange(n)
        report = q.check_meet_table([row[:] for row in t])
        brute = oracles.axiom_violations(t)
        assert report.ok == oracles.is_valid_meet_table(t)
        got = {}
        for v in report.violations:
            got.setdefault(v.law, set()).add(v.elements)
        for law, rows in brute.items():
            assert got.get(law, set()) == set(map(tuple, rows)), law
        if report.ok:
            assert report.bottom == oracles.bottom(t)


class TestFiniteInfSemilattice:
    def test_chain_basics(self):
        s = q.FiniteInfSemilattice.chain(4)
        assert len(s) == 4
        assert s.bottom == 0
        assert s.meet(1, 3) == 1
        assert s.leq(2, 3)
        assert not s.leq(3, 2)
        assert s.label(2) == "e2"

    def test_chain_from_labels(self):
        s = q.FiniteInfSemilattice.chain(["a", "b", "c"])
        assert s.index_of("b") == 1
        assert s.label(0) == "a"

    def test_vee_order(self):
        s = vee_space()
        l, r = s.index_of("l"), s.index_of("r")
        assert s.meet(l, r) == s.bottom
        assert not s.leq(l, r)
        assert s.leq(s.bottom, r)

    def test_contains_rejects_bool(self):
        s = q.FiniteInfSemilattice.chain(3)
        assert 1 in s
        assert True not in s
        assert 3 not in s
        assert "1" not in s

    def test_unknown_label(self):
        s = vee_space()
        with pytest.raises(UnknownElementError):
            s.index_of("zap")
        with pytest.raises(UnknownElementError):
            s.label(17)

    def test_invalid_table_raises(self):
        t = chain_table(3)
        t[1][1] = 0
        with pytest.raises(ValidationError):
            q.FiniteInfSemilattice(t)

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ValidationError):
            q.FiniteInfSemilattice.chain(["a", "a"])

    def test_interval(self):
        s = q.FiniteInfSemilattice.chain(5)
        assert s.interval(1, 3) == frozenset({1, 2, 3})
        with pytest.raises(ValidationError):
            s.interval(3, 1)

    def test_interval_on_vee(self):
        s = vee_space()
        l = s.index_of("l")
        assert s.interval(s.bottom, l) == frozenset({s.bottom, l})

    def test_bracket(self):
        s = vee_space()
        l, r = s.index_of("l"), s.index_of("r")
        assert s.bracket(l, r) == frozenset({s.bottom, l, r})

    def test_upset(self):
        s = q.FiniteInfSemilattice.chain(4)
        assert s.upset(2) == frozenset({2, 3})
        v = vee_space()
        assert v.upset(v.bottom) == frozenset({0, 1, 2})

    def test_meet_all(self):
        s = q.FiniteInfSemilattice.chain(4)
        assert s.meet_all([3, 1, 2]) == 1
        with pytest.raises(ValidationError):
            s.meet_all([])


class TestProductSemilattice:
    def test_componentwise(self):
        c = q.FiniteInfSemilattice.chain(3)
        v = vee_space()
        p = q.product([c, v])
        assert len(p) == 9
        assert p.bottom == (0, 0)
        assert p.meet((2, 1), (1, 2)) == (1, 0)
        assert p.leq((1, 0), (2, 1))
        assert not p.leq((1, 1), (2, 2))

    def test_contains(self):
        p = q.product([q.FiniteInfSemilattice.chain(2)] * 2)
        assert (1, 1) in p
        assert (1,) not in p
        assert (1, 2) not in p
        assert [1, 1] not in p

    def test_iteration_matches_product_order(self):
        c2 = q.FiniteInfSemilattice.chain(2)
        c3 = q.FiniteInfSemilattice.chain(3)
        p = q.product([c2, c3])
        assert list(p.elements) == list(itertools.product(range(2), range(3)))
        # re-iterable
        assert list(p.elements) == list(p.elements)

    def test_interval_is_box(self):
        c = q.FiniteInfSemilattice.chain(4)
        p = q.product([c, c])
        box = p.interval((1, 0), (3, 2))
        assert box == frozenset(itertools.product({1, 2, 3}, {0, 1, 2}))

    def test_label(self):
        p = q.product([vee_space(), q.FiniteInfSemilattice.chain(2)])
        assert p.label((1, 0)) == "(l, e0)"

    def test_explicit_matches(self):
        v = vee_space()
        c = q.FiniteInfSemilattice.chain(2)
        p = q.product([v, c])
        flat, elems = p.explicit()
        assert flat.axiom_report.ok
        for a, ea in enumerate(elems):
            for b, eb in enumerate(elems):
                assert elems[flat.meet(a, b)] == p.meet(ea, eb)

    def test_explicit_size_cap(self):
        c = q.FiniteInfSemilattice.chain(10)
        p = q.product([c, c, c])
        with pytest.raises(ValidationError):
            p.explicit(max_size=100)

    def test_nested_factors_rejected(self):
        c = q.FiniteInfSemilattice.chain(2)
        p = q.product([c, c])
        with pytest.raises(ValidationError):
            q.product([c, p])


class TestSubsetPredicates:
    def test_downset_is_inf_convex(self):
        s = q.FiniteInfSemilattice.chain(4)
        rep = q.is_inf_convex(s, {0, 1})
        assert rep.inf_convex and rep.sub_semilattice and rep.order_convex

    def test_two_atoms_not_inf_convex(self):
        # {(1,0), (0,1)} in the square: order-convex (no comparable pair),
        # but the bracket pulls in the missing meet (0,0).
        c = q.FiniteInfSemilattice.chain(2)
        p = q.product([c, c])
        rep = q.is_inf_convex(p, {(1, 0), (0, 1)})
        assert rep.order_convex
        assert not rep.sub_semilattice
        assert not rep.inf_convex

    def test_diagonal_not_order_convex(self):
        c = q.FiniteInfSemilattice.chain(2)
        p = q.product([c, c])
        rep = q.is_inf_convex(p, {(0, 0), (1, 1)})
        assert rep.sub_semilattice
        assert not rep.order_convex
        assert not rep.inf_convex

    def test_comprehensive(self):
        s = q.FiniteInfSemilattice.chain(4)
        assert q.is_comprehensive(s, {0, 1, 2})
        assert not q.is_comprehensive(s, {2, 3})
        v = vee_space()
        assert q.is_comprehensive(v, {0, 1})
        assert not q.is_comprehensive(v, {1})

    def test_maximal_elements(self):
        v = vee_space()
        assert q.maximal_elements(v, {0, 1, 2}) == frozenset({1, 2})
        s = q.FiniteInfSemilattice.chain(5)
        assert q.maximal_elements(s, {1, 3}) == frozenset({3})
        with pytest.raises(ValidationError):
            q.maximal_elements(s, set())

    @given(st.integers(0, 2000))
    @settings(max_examples=60, deadline=None)
    def test_inf_convex_consistency_on_random_subsets(self, seed):
        """inf-convexity must equal sub-semilattice plus order-convexity;
        the implementation computes the three independently and would
        raise if they ever disagreed."""
        from qlnash.random_games import random_space

        rng = random.Random(seed)
        s = random_space(rng, max_size=6)
        members = {e for e in s.elements if rng.random() < 0.5}
        if not members:
            members = {s.bottom}
        rep = q.is_inf_convex(s, members)
        assert rep.inf_convex == (rep.sub_semilattice and rep.order_convex)

    def test_maximal_agrees_with_brute(self):
        rng = random.Random(7)
        from qlnash.random_games import random_space

        for _ in range(50):
            s = random_space(rng, max_size=6)
            members = sorted(e for e in s.elements if rng.random() < 0.6)
            if not members:
                continue
            table = [[s.meet(a, b) for b in s.elements] for a in s.elements]
            assert sorted(q.maximal_elements(s, members)) == oracles.maximal_of(
                table, members
            )


def test_replace_coordinate():
    assert q.replace_coordinate((1, 2, 3), 1, 9) == (1, 9, 3)
    assert q.replace_coordinate((1,), 0, 0) == (0,)


def test_numpy_int_elements_accepted():
    s = q.FiniteInfSemilattice.chain(3)
    a = np.int64(1)
    assert s.meet(a, 2) == 1
    assert s.leq(a, np.int64(2))
