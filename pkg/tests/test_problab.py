"""Threshold formulas, the bound chain, Monte Carlo, and rational bounds."""

import math
from fractions import Fraction

import pytest

import patternforge.probability as probability
from patternforge.errors import (
    BudgetExceededError,
    OrderingError,
    PreconditionError,
    RangeError,
    StructureError,
)
from patternforge.probability import (
    ChainReport,
    EllReport,
    EstimateReport,
    avoid_probability,
    ell_from_k,
    probability_chain,
    ratio_lower_bound,
    side_threshold,
)


class TestSideThreshold:
    def test_anchor_values(self):
        assert side_threshold(2, 2) == 34
        assert side_threshold(2, 3) == 178
        assert side_threshold(3, 2) == 119
        assert side_threshold(3, 3) == 950

    def test_is_smallest_satisfying_k(self):
        for ell in (2, 3, 4):
            for d in (2, 3):
                k = side_threshold(ell, d)
                bound = (d + 1) * (2 * ell) ** d * math.log(ell)
                assert k >= bound
                assert k - 1 < bound

    def test_rejects_degenerate_arguments(self):
        with pytest.raises(RangeError):
            side_threshold(1, 2)
        with pytest.raises(RangeError):
            side_threshold(2, 1)


class TestEllFromK:
    def test_large_k_anchor(self):
        rep = ell_from_k(10**6, 2)
        assert rep.ell == 61
        assert not rep.degenerate
        assert rep.threshold_ok
        assert rep.threshold == side_threshold(61, 2)

    def test_small_k_degenerates(self):
        rep = ell_from_k(10, 2)
        assert rep.ell == 1
        assert rep.degenerate
        assert rep.threshold is None and rep.threshold_ok is None

    def test_ell_minus_one_is_multiple_of_twenty(self):
        for d in (2, 3):
            for k in (3, 10, 10**3, 10**5, 10**6, 10**8):
                rep = ell_from_k(k, d)
                assert (rep.ell - 1) % 20 == 0

    def test_threshold_holds_whenever_nondegenerate(self):
        for d in (2, 3):
            for exp in range(1, 10):
                rep = ell_from_k(10**exp, d)
                if rep.ell >= 2:
                    assert rep.threshold_ok, (10**exp, d)

    def test_rejects_bad_arguments(self):
        with pytest.raises(RangeError):
            ell_from_k(2, 2)
        with pytest.raises(RangeError):
            ell_from_k(100, 1)

    def test_json_shape(self):
        data = ell_from_k(10**6, 2).to_json()
        assert data["ell"] == 61 and data["threshold_ok"] is True


class TestProbabilityChain:
    def test_threshold_point_values(self):
        rep = probability_chain(34, 2, 2)
        base, halved, exponential, final = rep.values
        assert rep.strict
        assert final == pytest.approx(0.125)
        assert base < halved < exponential < final
        assert base == pytest.approx((1 - (1 / 2 - 1 / 34)) ** 16)

    def test_strict_at_all_small_thresholds(self):
        for ell in (2, 3):
            for d in (2, 3):
                k = side_threshold(ell, d)
                assert probability_chain(k, ell, d).strict

    def test_degenerates_at_twice_ell(self):
        # first two expressions coincide exactly at k = 2*ell
        with pytest.raises(OrderingError) as exc:
            probability_chain(4, 2, 2)
        assert exc.value.values[0] == exc.value.values[1]
        rep = probability_chain(4, 2, 2, require_strict=False)
        assert not rep.strict

    def test_final_bound_rational_identity(self):
        for ell in (2, 3, 5):
            for d in (2, 3):
                rep = probability_chain(
                    side_threshold(ell, d), ell, d, require_strict=False
                )
                assert rep.final_bound_exact == Fraction(1, ell ** (d + 1))
                # ell^d blocks, each below the final bound: exactly 1/ell
                assert ell**d * rep.final_bound_exact == Fraction(1, ell)

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            probability_chain(3, 2, 2)  # k < 2*ell
        with pytest.raises(PreconditionError):
            probability_chain(10, 1, 2)
        with pytest.raises(PreconditionError):
            probability_chain(10, 2, 1)


class TestAvoidProbability:
    def test_pigeonhole_anchor_is_exactly_one(self):
        rep = avoid_probability(2, 2, 2, trials=100, seed=7)
        assert rep.estimate == 1.0
        assert rep.avoid_count == 100

    def test_single_cell_target_never_avoided(self):
        rep = avoid_probability(5, 1, 2, trials=100, seed=7)
        assert rep.estimate == 0.0

    def test_deterministic_for_fixed_seed(self):
        a = avoid_probability(8, 2, 2, trials=200, seed=99)
        b = avoid_probability(8, 2, 2, trials=200, seed=99)
        assert a == b

    def test_thread_count_does_not_change_report(self):
        reports = [
            avoid_probability(8, 2, 2, trials=120, seed=5, threads=t)
            for t in (1, 2, 4)
        ]
        assert reports[0] == reports[1] == reports[2]

    def test_avoidance_rarer_for_larger_side(self):
        # statistical sanity with generous slack, not a sharp bound
        lo = avoid_probability(4, 2, 2, trials=500, seed=13)
        hi = avoid_probability(32, 2, 2, trials=500, seed=13)
        sigma = math.sqrt(0.25 / 500)
        assert hi.estimate <= lo.estimate + 3 * sigma

    def test_confidence_radius_formula(self):
        rep = avoid_probability(6, 2, 2, trials=400, seed=3)
        p = rep.estimate
        want = probability._Z99 * math.sqrt(p * (1 - p) / 400)
        assert rep.conf99 == pytest.approx(want)

    def test_undecided_trials_are_counted_and_excluded(self, monkeypatch):
        calls = {"n": 0}
        real = probability.has_interval_minor

        def flaky(A, B, node_budget=None):
            calls["n"] += 1
            if calls["n"] % 3 == 0:
                raise BudgetExceededError("forced")
            return real(A, B, node_budget)

        monkeypatch.setattr(probability, "has_interval_minor", flaky)
        rep = avoid_probability(2, 2, 2, trials=9, seed=0)
        assert rep.undecided == 3
        assert rep.avoid_count == 6
        assert rep.estimate == pytest.approx(6 / 9)

    def test_validation(self):
        with pytest.raises(PreconditionError):
            avoid_probability(3, 2, 2, trials=0, seed=1)
        with pytest.raises(RangeError):
            avoid_probability(0, 2, 2, trials=1, seed=1)
        with pytest.raises(RangeError):
            avoid_probability(3, 2, 1, trials=1, seed=1)
        with pytest.raises(PreconditionError):
            avoid_probability(3, 2, 2, trials=1, seed=1, threads=0)

    def test_report_invariants_enforced(self):
        with pytest.raises(StructureError):
            EstimateReport(
                k=3, ell=2, d=2, trials=5, avoid_count=9, undecided=0,
                estimate=1.8, conf99=0.0, seed=0,
            )


class TestRatioLowerBound:
    def test_worked_examples(self):
        assert ratio_lower_bound(3, 2, 2) == Fraction(3, 4)
        assert ratio_lower_bound(1, 1, 3) == Fraction(1, 8)
        assert ratio_lower_bound(0, 7, 2) == 0

    def test_exactness(self):
        got = ratio_lower_bound(5, 3, 3)
        assert isinstance(got, Fraction)
        assert got == Fraction(5, 2**2 * 2 * 9)

    def test_consistency_with_measured_growth(self):
        # the ratio at n=3 clears the bound computed from n=2
        from patternforge.extremal import max_ones_avoiding
        from patternforge.tensor import TensorMatrix

        ident = TensorMatrix((2, 2), [(1, 1), (2, 2)])
        v2 = max_ones_avoiding(2, ident).value
        v3 = max_ones_avoiding(3, ident).value
        assert Fraction(v3, 3) >= ratio_lower_bound(v2, 2, 2)

    def test_rejects_bad_arguments(self):
        with pytest.raises(RangeError):
            ratio_lower_bound(1, 0, 2)
        with pytest.raises(RangeError):
            ratio_lower_bound(-1, 2, 2)
        with pytest.raises(RangeError):
            ratio_lower_bound(1, 2, 0)
