from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from substochastic import (
    BudgetExceededError,
    Gain,
    GAIN_ZERO,
    WeightedDigraph,
    cycle_length_extremes,
    disjoint_cycle_packing,
    enumerate_cycles,
    is_cycle_transversal,
    min_cycle_transversal,
    sup_cycle_gain,
    truncate,
)
from substochastic.constructions import (
    a_power,
    build_example1,
    build_example2,
    f_geometric,
)

from conftest import (
    brute_cycles,
    brute_is_acyclic,
    brute_min_fvs,
    k3,
    loop,
    seeded_digraph,
    triangle,
    two_cycle,
)


class TestEnumeration:
    def test_triangle_single_cycle(self):
        cycles = list(enumerate_cycles(triangle()))
        assert len(cycles) == 1
        assert cycles[0].vertices == (0, 1, 2)
        assert cycles[0].length == 3

    def test_example1_truncation_three(self):
        fam = build_example1(f=f_geometric())
        got = {c.vertices for c in enumerate_cycles(truncate(fam, 3))}
        assert got == {(0,), (0, 1), (0, 1, 2)}

    def test_k3_has_five_cycles(self):
        # by hand: three 2-cycles and two triangles
        cycles = list(enumerate_cycles(k3()))
        assert sorted(c.length for c in cycles) == [2, 2, 2, 3, 3]
        assert {c.vertices for c in cycles} == brute_cycles(k3())

    def test_canonical_rotation_starts_at_min(self):
        d = WeightedDigraph(4, {(2, 3): F(1, 2), (3, 1): F(1, 2), (1, 2): F(1, 2)})
        (c,) = list(enumerate_cycles(d))
        assert c.vertices == (1, 2, 3)

    def test_weights_multiply_along_the_cycle(self):
        (c,) = list(enumerate_cycles(triangle(F(1, 2), F(1, 3), F(1, 5))))
        assert c.weight == F(1, 30)

    @given(st.integers(0, 600), st.one_of(st.none(), st.integers(1, 5)))
    @settings(max_examples=120, deadline=None)
    def test_matches_brute_force(self, seed, max_len):
        d = seeded_digraph(seed, order_max=6)
        got = {c.vertices for c in enumerate_cycles(d, max_length=max_len)}
        assert got == brute_cycles(d, max_len)

    def test_max_count_sets_truncated_flag(self):
        stream = enumerate_cycles(k3(), max_count=2)
        assert len(list(stream)) == 2
        assert stream.truncated

    def test_exhaustive_stream_not_truncated(self):
        stream = enumerate_cycles(k3(), max_count=100)
        list(stream)
        assert not stream.truncated


class TestGains:
    def test_loop_gain_with_improper_allowed(self):
        g = sup_cycle_gain(loop(F(7, 10)), max_length=1, proper_only=False)
        assert g == Gain(F(7, 10), 1)
        assert g.value == pytest.approx(0.7)

    def test_single_cycle_digraph_excluded_by_default(self):
        assert sup_cycle_gain(loop(), max_length=1) == GAIN_ZERO
        assert sup_cycle_gain(triangle()) == GAIN_ZERO

    def test_quarter_two_cycle_gain_is_one_quarter(self):
        # (1/4 * 1/4) ** (1/2) == 1/4, exactly via cross-powering
        g = sup_cycle_gain(two_cycle(F(1, 4), F(1, 4)), proper_only=False)
        assert g == Gain(F(1, 16), 2) == Gain(F(1, 4), 1)

    def test_example1_supremum_reaches_f_n_gain(self):
        fam = build_example1(f=f_geometric())
        n = 8
        d = truncate(fam, n)
        g = sup_cycle_gain(d, max_length=n, proper_only=False)
        target = Gain(f_geometric()(n), n)  # the length-n return cycle
        assert not g < target

    def test_budget_error_carries_partial_lower_bound(self):
        with pytest.raises(BudgetExceededError) as info:
            sup_cycle_gain(k3(), max_count=2, proper_only=False)
        assert isinstance(info.value.partial, Gain)
        assert info.value.partial.weight > 0

    def test_gain_ordering_mixed_lengths(self):
        assert Gain(F(1, 2), 1) < Gain(F(9, 10), 1)
        assert Gain(F(1, 4), 2) < Gain(F(7, 10), 1)  # 0.5 < 0.7
        assert Gain(F(49, 100), 2) == Gain(F(7, 10), 1)
        assert GAIN_ZERO < Gain(F(1, 100), 3)

    def test_gain_value_survives_huge_fractions(self):
        g = Gain(F(1, 2) ** 3000, 3000)
        assert g.value == pytest.approx(0.5)


class TestTransversal:
    def test_triangle_needs_one(self):
        res = min_cycle_transversal(triangle())
        assert res.size == 1 and res.optimality == "exact"

    def test_example1_always_hub_only(self):
        fam = build_example1(f=f_geometric())
        for n in (2, 5, 9, 14):
            res = min_cycle_transversal(truncate(fam, n))
            assert res.vertices == frozenset({0})

    def test_k3_needs_two(self):
        assert brute_min_fvs(k3()) == 2  # oracle
        assert min_cycle_transversal(k3()).size == 2

    def test_acyclic_needs_none(self):
        d = WeightedDigraph(3, {(0, 1): F(1, 2), (1, 2): F(1, 2)})
        res = min_cycle_transversal(d)
        assert res.size == 0

    @given(st.integers(0, 500))
    @settings(max_examples=60, deadline=None)
    def test_matches_exhaustive_subset_search(self, seed):
        d = seeded_digraph(seed, order_max=7)
        res = min_cycle_transversal(d)
        assert res.optimality == "exact"
        assert res.size == brute_min_fvs(d)
        assert brute_is_acyclic(d, res.vertices)

    def test_budget_exhaustion_returns_upper_bound(self):
        d = seeded_digraph(17, order_max=7)
        res = min_cycle_transversal(d, budget=0)
        assert res.optimality == "upper-bound"
        assert brute_is_acyclic(d, res.vertices)
        assert res.size >= brute_min_fvs(d)

    def test_is_cycle_transversal_checker(self):
        assert is_cycle_transversal(k3(), {0, 1})
        assert not is_cycle_transversal(k3(), {0})


class TestPacking:
    def test_two_disjoint_loops(self):
        d = WeightedDigraph(2, {(0, 0): F(1, 2), (1, 1): F(1, 2)})
        assert len(disjoint_cycle_packing(d)) == 2

    def test_example1_all_cycles_share_hub(self):
        fam = build_example1(f=f_geometric())
        assert len(disjoint_cycle_packing(truncate(fam, 9))) == 1

    def test_k3_pairwise_intersecting(self):
        assert len(disjoint_cycle_packing(k3())) == 1

    @given(st.integers(0, 400))
    @settings(max_examples=60, deadline=None)
    def test_packing_bounds_transversal(self, seed):
        d = seeded_digraph(seed, order_max=7)
        packing = disjoint_cycle_packing(d)
        seen = set()
        for c in packing:
            assert not (seen & c.vertex_set)
            seen |= c.vertex_set
        assert len(packing) <= min_cycle_transversal(d).size


class TestLengthExtremes:
    def test_example2_all_cycles_length_two(self):
        fam = build_example2(a_power(-0.75))
        for n in (2, 5, 9):
            ext = cycle_length_extremes(truncate(fam, n))
            assert (ext.l_min, ext.l_max) == (2, 2)

    def test_triangle(self):
        ext = cycle_length_extremes(triangle())
        assert (ext.l_min, ext.l_max) == (3, 3)

    def test_example1_truncation_four(self):
        fam = build_example1(f=f_geometric())
        ext = cycle_length_extremes(truncate(fam, 4))
        assert (ext.l_min, ext.l_max) == (1, 4)

    def test_acyclic_has_none(self):
        d = WeightedDigraph(2, {(0, 1): F(1, 2)})
        ext = cycle_length_extremes(d)
        assert ext.l_min is None and ext.l_max is None

    @given(st.integers(0, 300))
    @settings(max_examples=50, deadline=None)
    def test_matches_brute_force(self, seed):
        d = seeded_digraph(seed, order_max=6)
        lengths = sorted(len(c) for c in brute_cycles(d))
        ext = cycle_length_extremes(d)
        assert ext.l_max_exact
        if lengths:
            assert (ext.l_min, ext.l_max) == (lengths[0], lengths[-1])
        else:
            assert ext.l_min is None


class TestCycleUnion:
    def test_aggregates_and_rejects_overlap(self):
        from substochastic import CycleUnion, Cycle

        u = CycleUnion((Cycle((0,), F(1, 2)), Cycle((1, 2), F(1, 4))))
        assert u.count == 2
        assert u.total_length == 3
        assert u.weight == F(1, 8)
        with pytest.raises(ValueError):
            CycleUnion((Cycle((0, 1), F(1, 2)), Cycle((1, 2), F(1, 2))))


class TestGainBridging:
    @given(st.integers(0, 300))
    @settings(max_examples=60, deadline=None)
    def test_one_minus_weight_factorization(self, seed):
        # (1 - S) == (1 - gain) * sum_{i<len} gain^i, and <= len * (1 - gain)
        d = seeded_digraph(seed, order_max=6)
        for c in enumerate_cycles(d):
            lam = c.gain.value
            s = float(c.weight)
            series = sum(lam**i for i in range(c.length))
            assert (1 - s) == pytest.approx((1 - lam) * series, abs=1e-12)
            assert 1 - s <= c.length * (1 - lam) + 1e-12
