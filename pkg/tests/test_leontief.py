import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import qlnash as q
from qlnash.errors import (
    InvariantViolationError,
    NotQuasiLeontiefError,
    ValidationError,
)
from qlnash.random_games import random_ql_function, random_space

import oracles
from builders import chain_space, grid_points, vee_space


class TestToRational:
    @pytest.mark.parametrize(
        "raw,expected",
        [(3, F(3)), ("1/4", F(1, 4)), ("-2/3", F(-2, 3)), (F(5, 2), F(5, 2)), ("7", F(7))],
    )
    def test_accepts(self, raw, expected):
        assert q.to_rational(raw) == expected

    @pytest.mark.parametrize("raw", [0.5, True, False, None, "abc", "1/0", [1]])
    def test_rejects(self, raw):
        with pytest.raises(ValidationError):
            q.to_rational(raw)


class TestTabulatedFunction:
    def test_from_sequence_and_dict(self):
        s = chain_space(grid_points(F(1, 2), upper=F(1)))
        u1 = q.TabulatedFunction(s, [F(0), F(1), F(2)])
        u2 = q.TabulatedFunction(s, {0: 0, 1: 1, 2: 2})
        assert [u1(e) for e in s.elements] == [u2(e) for e in s.elements]

    def test_totality_enforced(self):
        s = q.FiniteInfSemilattice.chain(3)
        with pytest.raises(ValidationError):
            q.TabulatedFunction(s, [F(0), F(1)])
        with pytest.raises(ValidationError):
            q.TabulatedFunction(s, {0: 0, 1: 1})
        with pytest.raises(ValidationError):
            q.TabulatedFunction(s, {0: 0, 1: 1, 2: 2, 5: 3})

    def test_rejects_floats(self):
        s = q.FiniteInfSemilattice.chain(2)
        with pytest.raises(ValidationError):
            q.TabulatedFunction(s, [0.0, 1.0])

    def test_unknown_element_call(self):
        s = q.FiniteInfSemilattice.chain(2)
        u = q.TabulatedFunction(s, [F(0), F(1)])
        with pytest.raises(ValidationError):
            u(7)

    def test_extremes(self):
        s = q.FiniteInfSemilattice.chain(3)
        u = q.TabulatedFunction(s, [F(1), F(0), F(2)])
        assert u.max_value == F(2)
        assert u.min_value == F(0)


class TestQuasiLeontief:
    def test_chain_function_is_ql(self):
        # any function on a chain is QL iff it is isotone; this one is
        s = q.FiniteInfSemilattice.chain(4)
        u = q.TabulatedFunction(s, [F(0), F(1), F(1), F(3)])
        assert u.is_quasi_leontief
        cert = u.ql_certificate()
        assert cert.is_ql and cert.failed_pair is None

    def test_decreasing_chain_function_is_not_ql(self):
        # u(0)=1 > u(1)=0: level set at 1 is {0}, fine as a set, but the
        # meet-min law fails at the pair (0, 1)
        s = q.FiniteInfSemilattice.chain(2)
        u = q.TabulatedFunction(s, [F(1), F(0)])
        cert = u.ql_certificate()
        assert not cert.is_ql
        assert cert.failed_pair == (0, 1)

    def test_vee_equal_atoms_not_ql(self):
        v = vee_space()
        u = q.TabulatedFunction(v, [F(0), F(1), F(1)])
        cert = u.ql_certificate()
        assert not cert.is_ql
        # the level set at 1 is {l, r}; its meet is bottom with value 0
        assert cert.failed_level == F(1)
        assert cert.level_meet == v.bottom

    def test_require_raises_with_witness(self):
        v = vee_space()
        u = q.TabulatedFunction(v, [F(0), F(1), F(1)])
        with pytest.raises(NotQuasiLeontiefError) as exc:
            u.require_quasi_leontief()
        assert exc.value.certificate is not None
        assert not exc.value.certificate.is_ql

    def test_ql_implies_isotone(self):
        rng = random.Random(11)
        for _ in range(100):
            s = random_space(rng, max_size=6)
            u = random_ql_function(s, rng)
            assert u.is_quasi_leontief
            for a in s.elements:
                for b in s.elements:
                    if s.leq(a, b):
                        assert u(a) <= u(b)

    @given(st.integers(0, 4000))
    @settings(max_examples=100, deadline=None)
    def test_certificate_agrees_with_brute_force(self, seed):
        """QL verdicts must match the pair-scan oracle on arbitrary
        (not only sampled-QL) functions."""
        rng = random.Random(seed)
        s = random_space(rng, max_size=6)
        table = [[s.meet(a, b) for b in s.elements] for a in s.elements]
        values = [F(rng.randint(0, 3)) for _ in s.elements]
        u = q.TabulatedFunction(s, values)
        bad = oracles.meet_min_violations(table, values)
        cert = u.ql_certificate()
        assert cert.is_ql == (not bad)
        if bad:
            assert tuple(cert.failed_pair) in {(a, b) for a, b in bad} | {
                (b, a) for a, b in bad
            }


class TestLeastAttaining:
    def test_worked_grid(self):
        pts = grid_points(F(1, 4))
        s = chain_space(pts)
        u = q.TabulatedFunction(s, [min(2 * p, F(2)) for p in pts])
        # least x with min(2x,2) >= 3/2 is 3/4
        assert pts[u.least_attaining(F(3, 2))] == F(3, 4)
        assert pts[u.least_attaining(F(0))] == F(0)
        assert pts[u.least_attaining(F(-1))] == F(0)
        assert u.least_attaining(F(5, 2)) is None

    def test_adjunction(self):
        """u(z) >= t iff z >= least_attaining(t), for every attainable t."""
        rng = random.Random(23)
        for _ in range(80):
            s = random_space(rng, max_size=6)
            u = random_ql_function(s, rng)
            levels = sorted({u(e) for e in s.elements})
            probe = levels + [lv + F(1, 7) for lv in levels]
            for t in probe:
                m = u.least_attaining(t)
                if m is None:
                    assert all(u(z) < t for z in s.elements)
                    continue
                for z in s.elements:
                    assert (u(z) >= t) == s.leq(m, z)

    def test_agrees_with_brute_force(self):
        rng = random.Random(5)
        for _ in range(60):
            s = random_space(rng, max_size=6)
            u = random_ql_function(s, rng)
            table = [[s.meet(a, b) for b in s.elements] for a in s.elements]
            values = [u(e) for e in s.elements]
            for t in sorted(set(values)):
                assert u.least_attaining(t) == oracles.least_attaining(
                    table, values, t
                )


class TestProjectEfficient:
    def test_grid_example(self):
        pts = grid_points(F(1, 4))
        s = chain_space(pts)
        u = q.TabulatedFunction(s, [min(2 * p, F(2)) for p in pts])
        # 2 is first attained at x=1, so everything above projects to 1
        assert pts[u.project_efficient(s.index_of("2"))] == F(1)
        assert pts[u.project_efficient(s.index_of("1/2"))] == F(1, 2)

    def test_retraction_laws(self):
        """project_efficient is a value-preserving, decreasing idempotent."""
        rng = random.Random(37)
        for _ in range(80):
            s = random_space(rng, max_size=6)
            u = random_ql_function(s, rng)
            for x in s.elements:
                p = u.project_efficient(x)
                assert s.leq(p, x)
                assert u(p) == u(x)
                assert u.project_efficient(p) == p

    def test_fixed_points_are_efficient_set(self):
        rng = random.Random(41)
        for _ in range(60):
            s = random_space(rng, max_size=6)
            u = random_ql_function(s, rng)
            fixed = {x for x in s.elements if u.project_efficient(x) == x}
            assert fixed == set(u.efficient_set())


class TestEfficientSet:
    def test_requires_ql(self):
        s = q.FiniteInfSemilattice.chain(2)
        u = q.TabulatedFunction(s, [F(1), F(0)])
        with pytest.raises(NotQuasiLeontiefError):
            u.efficient_set()

    def test_is_chain_and_value_injective(self):
        rng = random.Random(43)
        for _ in range(80):
            s = random_space(rng, max_size=6)
            u = random_ql_function(s, rng)
            eff = sorted(u.efficient_set())
            for i, a in enumerate(eff):
                for b in eff[i + 1 :]:
                    assert s.leq(a, b) or s.leq(b, a)
            vals = [u(e) for e in eff]
            assert len(set(vals)) == len(vals)

    def test_agrees_with_brute_force_on_subsets(self):
        rng = random.Random(47)
        for _ in range(60):
            s = random_space(rng, max_size=6)
            u = random_ql_function(s, rng)
            table = [[s.meet(a, b) for b in s.elements] for a in s.elements]
            values = [u(e) for e in s.elements]
            members = sorted(e for e in s.elements if rng.random() < 0.6)
            assert sorted(u.efficient_set(members)) == oracles.efficient_set(
                table, values, members
            )
        # empty subset allowed, unlike argmax
        assert u.efficient_set([]) == frozenset()

    def test_argmax_helpers(self):
        s = q.FiniteInfSemilattice.chain(3)
        u = q.TabulatedFunction(s, [F(0), F(2), F(2)])
        assert u.argmax_set() == frozenset({1, 2})
        assert u.max_over([0, 1]) == F(2)
        with pytest.raises(ValidationError):
            u.argmax_set([])


class TestInfQuasiconcave:
    def test_ql_functions_are_inf_quasiconcave(self):
        rng = random.Random(53)
        for _ in range(40):
            s = random_space(rng, max_size=5)
            u = random_ql_function(s, rng)
            assert u.is_inf_quasiconcave()

    def test_counterexample(self):
        # value dips below both endpoints inside the bracket
        s = q.FiniteInfSemilattice.chain(3)
        u = q.TabulatedFunction(s, [F(1), F(0), F(1)])
        assert not u.is_inf_quasiconcave()


class TestMinAggregate:
    def test_pointwise_min(self):
        c = q.FiniteInfSemilattice.chain(3)
        u = q.TabulatedFunction(c, [F(0), F(1), F(2)])
        w = q.TabulatedFunction(c, [F(2), F(1), F(0)])
        agg = q.min_aggregate([u, w])
        assert agg((2, 0)) == F(2)
        assert agg((0, 2)) == F(0)
        assert agg((1, 1)) == F(1)
        with pytest.raises(ValidationError):
            agg((1,))

    def test_tabulate_checks_factors(self):
        c = q.FiniteInfSemilattice.chain(2)
        other = q.FiniteInfSemilattice.chain(2)
        u = q.TabulatedFunction(c, [F(0), F(1)])
        agg = q.min_aggregate([u, u])
        prod = q.product([c, c])
        tab = agg.tabulate(prod)
        assert tab((1, 1)) == F(1)
        with pytest.raises(ValidationError):
            agg.tabulate(q.product([c, other]))
