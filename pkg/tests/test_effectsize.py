import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paircompare import (
    DegenerateDataError,
    EuConfig,
    PairedScores,
    aggregate_to_eus,
    cohens_d,
    estimate,
    eu_series_from_diffs,
    hedges_g,
    hodges_lehmann,
    wilcoxon_r,
)
from oracles import brute_hodges_lehmann, wilcoxon_z_by_hand

diff_samples = st.lists(st.floats(-20, 20), min_size=2, max_size=10)


class TestCohensD:
    def test_fixed_point(self, series_from):
        assert cohens_d(series_from([1.0, 2.0, 3.0])).value == 2.0

    def test_zero_variance_rejected(self, paired_series_from):
        with pytest.raises(DegenerateDataError):
            cohens_d(paired_series_from([1.0, 2.0], [1.0, 2.0]))
        with pytest.raises(DegenerateDataError):
            cohens_d(paired_series_from([1.0, 2.0], [0.5, 1.5]))

    @given(st.floats(0.01, 100))
    @settings(max_examples=40, deadline=None)
    def test_scale_invariance(self, c):
        w = np.array([0.5, -1.0, 2.0, 3.5])
        base = cohens_d(eu_series_from_diffs(w)).value
        scaled = cohens_d(eu_series_from_diffs(c * w)).value
        assert scaled == pytest.approx(base, rel=1e-10)

    def test_sign_flip(self, series_from):
        w = [0.5, -1.0, 2.0]
        assert cohens_d(series_from([-x for x in w])).value == pytest.approx(
            -cohens_d(series_from(w)).value, rel=1e-12
        )


class TestHedgesG:
    def test_zero_at_n3(self, series_from):
        # the correction factor 1 - 3/(4n-9) vanishes exactly at n = 3
        assert hedges_g(series_from([1.0, 2.0, 3.0])).value == 0.0
        assert hedges_g(series_from([5.0, -2.0, 0.3])).value == 0.0

    def test_n4_fixed_point(self, series_from):
        g = hedges_g(series_from([1.0, 2.0, 3.0, 4.0])).value
        assert g == pytest.approx(1.1065666703449761, rel=1e-12)

    def test_n2_rejected(self, series_from):
        with pytest.raises(DegenerateDataError):
            hedges_g(series_from([1.0, 2.0]))

    def test_ratio_to_d_is_correction(self):
        rng = np.random.default_rng(0)
        for n in (3, 4, 5, 10, 50, 1000):
            w = rng.normal(0.5, 1.0, n)
            series = eu_series_from_diffs(w)
            d = cohens_d(series).value
            g = hedges_g(series).value
            assert g == pytest.approx(d * (1 - 3 / (4 * n - 9)), rel=1e-15, abs=1e-15)

    def test_large_n_limit(self):
        rng = np.random.default_rng(1)
        series = eu_series_from_diffs(rng.normal(1.0, 1.0, 1000))
        ratio = hedges_g(series).value / cohens_d(series).value
        assert abs(ratio - 1.0) < 0.001


class TestWilcoxonR:
    def test_fixed_point(self, series_from):
        r = wilcoxon_r(series_from([1.0, 2.0, 3.0]))
        assert r.value == pytest.approx(0.9258200997725515, abs=1e-12)
        assert r.n == 3

    def test_reflection_antisymmetry(self, series_from):
        assert wilcoxon_r(series_from([-1.0, -2.0, -3.0])).value == pytest.approx(
            -0.9258200997725515, abs=1e-12
        )

    def test_tie_correction(self, series_from):
        # |d| = [1,1,1]: one tie group of 3 removes (27-3)/48 = 0.5 from the
        # variance; W = 4, Z = 1/sqrt(3), r = 1/3.
        r = wilcoxon_r(series_from([1.0, 1.0, -1.0]))
        assert r.value == pytest.approx(1.0 / 3.0, rel=1e-12)

    def test_zero_dropping_n(self, series_from):
        r = wilcoxon_r(series_from([0.0, 1.0, 2.0, -3.0]))
        assert r.n == 3

    def test_all_zero_rejected(self, paired_series_from):
        with pytest.raises(DegenerateDataError):
            wilcoxon_r(paired_series_from([1.0, 2.0], [1.0, 2.0]))

    @given(diff_samples)
    @settings(max_examples=60, deadline=None)
    def test_z_matches_hand_formula(self, w):
        if all(v == 0 for v in w):
            return
        nz = [v for v in w if v != 0.0]
        if len(nz) < 2:
            return
        r = wilcoxon_r(eu_series_from_diffs(np.array(w)))
        expected = wilcoxon_z_by_hand(w) / math.sqrt(len(nz))
        assert r.value == pytest.approx(expected, rel=1e-10, abs=1e-12)

    def test_extreme_when_signs_agree(self):
        rng = np.random.default_rng(2)
        magnitudes = rng.uniform(0.5, 3.0, 12)
        all_pos = wilcoxon_r(eu_series_from_diffs(magnitudes)).value
        signs = rng.choice([-1.0, 1.0], 12)
        mixed = wilcoxon_r(eu_series_from_diffs(magnitudes * signs)).value
        assert abs(mixed) <= abs(all_pos) + 1e-12


class TestHodgesLehmann:
    def test_fixed_point(self, series_from):
        assert hodges_lehmann(series_from([1.0, 2.0, 3.0])).value == 2.0

    def test_constant_sample(self, series_from):
        assert hodges_lehmann(series_from([4.0] * 6)).value == 4.0

    def test_translation_equivariance(self, series_from):
        w = [1.0, -2.0, 0.5, 3.0]
        base = hodges_lehmann(series_from(w)).value
        shifted = hodges_lehmann(series_from([x + 10.0 for x in w])).value
        assert shifted == pytest.approx(base + 10.0, rel=1e-12)

    @given(diff_samples, st.floats(0.1, 10), st.floats(-10, 10))
    @settings(max_examples=50, deadline=None)
    def test_affine_equivariance(self, w, a, b):
        base = hodges_lehmann(eu_series_from_diffs(np.array(w))).value
        transformed = hodges_lehmann(eu_series_from_diffs(a * np.array(w) + b)).value
        assert transformed == pytest.approx(a * base + b, rel=1e-9, abs=1e-9)

    @given(st.lists(st.floats(-50, 50), min_size=2, max_size=8), st.booleans())
    @settings(max_examples=80, deadline=None)
    def test_matches_brute_force(self, w, include_self):
        series = eu_series_from_diffs(np.array(w))
        mine = hodges_lehmann(series, include_self_pairs=include_self).value
        assert mine == brute_hodges_lehmann(w, include_self=include_self)

    @pytest.mark.parametrize("n", [3, 10, 51, 120, 257])
    @pytest.mark.parametrize("include_self", [False, True])
    def test_selection_equals_enumeration(self, n, include_self):
        rng = np.random.default_rng(n)
        w = rng.normal(0.3, 2.0, n)
        series = eu_series_from_diffs(w)
        enumerated = hodges_lehmann(series, include_self_pairs=include_self).value
        selected = hodges_lehmann(
            series, include_self_pairs=include_self, enumeration_limit=2
        ).value
        assert selected == enumerated  # bit-identical, both are real pair averages

    def test_self_pairs_variant_differs_for_skewed_sample(self, series_from):
        w = [0.0, 0.0, 10.0]
        excl = hodges_lehmann(series_from(w)).value
        incl = hodges_lehmann(series_from(w), include_self_pairs=True).value
        assert excl == 5.0  # averages {0, 5, 5}
        assert incl == 2.5  # adds {0, 0, 10} -> middle of {0,0,0,5,5,10}


class TestEstimateDispatch:
    def test_order_preserved(self, series_from):
        series = series_from([1.0, 2.0, 3.0, 4.0])
        out = estimate(series, ["hodges_lehmann", "cohens_d"])
        assert [e.index for e in out] == ["hodges_lehmann", "cohens_d"]
        assert out[0].standardized is False
        assert out[1].standardized is True

    def test_unknown_index(self, series_from):
        with pytest.raises(DegenerateDataError, match="unknown effect size index"):
            estimate(series_from([1.0, 2.0]), ["glass_delta"])


class TestEuSizeSensitivity:
    def test_mean_aggregation_raises_cohens_d(self):
        # Per-instance noise averages out within an EU: the mean difference
        # is preserved while sd shrinks roughly by sqrt(m).
        reps = 100
        wins = 0
        ratio_sum = 0.0
        for rep in range(reps):
            rng = np.random.default_rng(1000 + rep)
            n_rows = 400
            a = rng.normal(0.52, 0.3, n_rows)
            b = rng.normal(0.50, 0.3, n_rows)
            scores = PairedScores(a=a, b=b)
            d1 = cohens_d(aggregate_to_eus(scores, EuConfig(eu_size=1))).value
            d10 = cohens_d(aggregate_to_eus(scores, EuConfig(eu_size=10))).value
            wins += abs(d10) > abs(d1)
            ratio_sum += abs(d10) / max(abs(d1), 1e-12)
        assert wins / reps > 0.8
        assert ratio_sum / reps > 2.0  # roughly sqrt(10) ~ 3.16 on average
