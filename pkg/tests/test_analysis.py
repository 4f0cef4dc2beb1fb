import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as sps

from paircompare import (
    DataError,
    DegenerateDataError,
    analyze,
    classify_skew,
    histogram,
    recommend,
    shapiro_wilk,
    summarize,
)
from paircompare.analysis import (
    DEFAULT_POLICY,
    ROUGHLY_SYMMETRIC,
    VERDICT_NORMAL,
    VERDICT_NOT_NORMAL,
    VERDICT_SKIPPED,
    auto_bin_count,
    skipped_normality,
)


class TestSummarize:
    def test_symmetric_sample(self):
        s = summarize([1.0, 2.0, 3.0])
        assert s.mean == 2.0
        assert s.median == 2.0
        assert s.std_dev == 1.0
        assert s.skewness == 0.0
        assert not s.degenerate

    def test_right_skewed_sample(self):
        # G1 of [0,0,0,12] is exactly 2 (deviations -3,-3,-3,9; s=6).
        s = summarize([0.0, 0.0, 0.0, 12.0])
        assert s.mean == 3.0
        assert s.median == 0.0
        assert s.skewness == pytest.approx(2.0, abs=1e-12)

    def test_singleton_degenerate(self):
        s = summarize([5.0])
        assert s.mean == 5.0
        assert s.median == 5.0
        assert s.std_dev == 0.0
        assert s.skewness == 0.0
        assert s.degenerate

    def test_constant_sample_degenerate(self):
        s = summarize([2.0, 2.0, 2.0, 2.0])
        assert s.std_dev == 0.0
        assert s.degenerate

    def test_empty_rejected(self):
        with pytest.raises(DataError):
            summarize([])

    @given(st.integers(0, 1000))
    @settings(max_examples=40, deadline=None)
    def test_g1_matches_reference(self, seed):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=int(rng.integers(3, 40))) * rng.uniform(0.1, 5)
        if np.std(x) == 0:
            return
        expected = sps.skew(x, bias=False)
        assert summarize(x).skewness == pytest.approx(expected, rel=1e-10, abs=1e-12)

    @given(st.lists(st.floats(-100, 100), min_size=3, max_size=20), st.floats(-50, 50))
    @settings(max_examples=60, deadline=None)
    def test_exactly_symmetric_sample_has_zero_skew(self, xs, center):
        mirrored = np.array(xs + [2 * center - x for x in xs])
        s = summarize(mirrored)
        if s.degenerate:
            return
        assert abs(s.skewness) < 1e-12 * max(1.0, abs(s.mean) ** 3 / max(s.std_dev, 1e-9) ** 3 + 10)


class TestHistogram:
    def test_even_split(self):
        h = histogram([0.0, 1.0, 2.0, 3.0], bins=2)
        np.testing.assert_allclose(h.bin_edges, [0.0, 1.5, 3.0])
        assert h.counts.tolist() == [2, 2]

    def test_degenerate_single_bin(self):
        h = histogram([4.0, 4.0, 4.0])
        np.testing.assert_allclose(h.bin_edges, [3.5, 4.5])
        assert h.counts.tolist() == [3]

    def test_auto_bins_sqrt_rule(self):
        rng = np.random.default_rng(0)
        h = histogram(rng.normal(size=100), bins="auto")
        assert len(h.counts) == 10

    def test_auto_bin_clamping(self):
        assert auto_bin_count(4) == 5
        assert auto_bin_count(100) == 10
        assert auto_bin_count(10_000) == 50

    def test_counts_sum_to_sample_size(self):
        rng = np.random.default_rng(3)
        x = rng.uniform(size=57)
        h = histogram(x, bins=7)
        assert h.counts.sum() == 57

    def test_csv_export(self):
        h = histogram([0.0, 1.0], bins=1)
        text = h.to_csv()
        assert text.splitlines()[0] == "bin_start,bin_end,count"
        assert "0.0,1.0,2" in text


class TestClassifySkew:
    @pytest.mark.parametrize(
        "gamma,expected_class,expected_stat",
        [
            (0.3, "roughly_symmetric", "mean"),
            (-0.3, "roughly_symmetric", "mean"),
            (-0.8, "slightly_skewed", "median"),
            (0.5, "slightly_skewed", "median"),
            (0.9999, "slightly_skewed", "median"),
            (1.0, "highly_skewed", "median"),
            (-2.5, "highly_skewed", "median"),
            (0.0, "roughly_symmetric", "mean"),
        ],
    )
    def test_rule_of_thumb(self, gamma, expected_class, expected_stat):
        stats = summarize([1.0, 2.0, 3.0])
        stats = type(stats)(**{**stats.__dict__, "skewness": gamma})
        sk = classify_skew(stats)
        assert sk.skew_class == expected_class
        assert sk.recommended_statistic == expected_stat

    def test_degenerate_falls_back_symmetric(self):
        sk = classify_skew(summarize([7.0, 7.0]))
        assert sk.skew_class == "roughly_symmetric"
        assert sk.degenerate

    @given(st.floats(0.1, 10), st.floats(-100, 100), st.integers(0, 100))
    @settings(max_examples=40, deadline=None)
    def test_affine_invariance(self, a, b, seed):
        rng = np.random.default_rng(seed)
        x = rng.exponential(size=25)
        before = classify_skew(summarize(x))
        after = classify_skew(summarize(a * x + b))
        assert before.skew_class == after.skew_class
        assert abs(before.gamma - after.gamma) < 1e-8


class TestShapiroWilk:
    def test_small_fixture_matches_reference(self):
        result = shapiro_wilk([1.0, 2.0, 2.0, 3.0], alpha1=0.05)
        ref_w, ref_p = sps.shapiro([1.0, 2.0, 2.0, 3.0])
        assert result.w_statistic == pytest.approx(ref_w, abs=1e-3)
        assert result.p_value == pytest.approx(ref_p, abs=5e-3)
        assert result.verdict == VERDICT_NORMAL

    @pytest.mark.parametrize("n", [3, 4, 5, 6, 11, 12, 25, 100, 500, 5000])
    def test_matches_reference_across_sizes(self, n):
        rng = np.random.default_rng(n)
        x = rng.normal(size=n)
        result = shapiro_wilk(x)
        ref_w, ref_p = sps.shapiro(x)
        assert result.w_statistic == pytest.approx(ref_w, abs=1e-3)
        assert result.p_value == pytest.approx(ref_p, abs=5e-3)

    def test_rejects_exponential_data(self):
        rng = np.random.default_rng(42)
        result = shapiro_wilk(rng.exponential(size=50), alpha1=0.05)
        assert result.verdict == VERDICT_NOT_NORMAL

    def test_out_of_range_n(self):
        with pytest.raises(DegenerateDataError):
            shapiro_wilk([1.0, 2.0])
        with pytest.raises(DegenerateDataError):
            shapiro_wilk(np.arange(5001, dtype=float))

    def test_zero_variance(self):
        with pytest.raises(DegenerateDataError):
            shapiro_wilk([1.0, 1.0, 1.0, 1.0])

    def test_bad_alpha(self):
        with pytest.raises(DataError):
            shapiro_wilk([1.0, 2.0, 3.0], alpha1=1.5)


class TestRecommend:
    def _skew(self, gamma):
        return classify_skew(
            type(summarize([1.0, 2.0, 3.0]))(
                count=30, mean=0, median=0, std_dev=1, min=-1, max=1,
                skewness=gamma, degenerate=False,
            )
        )

    def _normality(self, verdict, performed=True):
        if verdict == VERDICT_SKIPPED:
            return skipped_normality(0.05, "test")
        p = 0.5 if verdict == VERDICT_NORMAL else 0.001
        from paircompare.analysis import NormalityResult

        return NormalityResult(True, 0.97, p, 0.05, verdict)

    def test_symmetric_normal_headed_by_t(self):
        tests = recommend(self._skew(0.1), self._normality(VERDICT_NORMAL))
        assert tests[0] == "t_test"
        assert tests == DEFAULT_POLICY[(ROUGHLY_SYMMETRIC, VERDICT_NORMAL)]

    def test_symmetric_not_normal_excludes_t(self):
        tests = recommend(self._skew(0.1), self._normality(VERDICT_NOT_NORMAL))
        assert "t_test" not in tests
        assert len(tests) > 0

    def test_skewed_gets_median_tests(self):
        tests = recommend(self._skew(1.5), self._normality(VERDICT_SKIPPED))
        assert tests == DEFAULT_POLICY["skewed"]
        assert "t_test" not in tests

    def test_symmetric_skipped_is_conservative(self):
        tests = recommend(self._skew(0.1), self._normality(VERDICT_SKIPPED))
        assert "t_test" not in tests

    def test_inconsistent_inputs_rejected(self):
        with pytest.raises(DataError, match="inconsistent"):
            recommend(self._skew(1.5), self._normality(VERDICT_NORMAL))


class TestAnalyze:
    def test_normal_data_recommends_t(self, paired_series_from):
        rng = np.random.default_rng(1)
        u = rng.normal(0.6, 0.05, 200)
        series = paired_series_from(u, u - rng.normal(0.01, 0.05, 200))
        report = analyze(series, alpha1=0.05)
        assert report.normality.performed
        assert report.recommended_tests[0] == "t_test"
        assert report.skew.recommended_statistic == "mean"
        assert len(report.histograms) == 3
        assert [h.label for h in report.histograms] == ["u", "v", "u-v"]

    def test_skewed_data_skips_normality(self, series_from):
        rng = np.random.default_rng(2)
        report = analyze(series_from(rng.exponential(1.0, 150) ** 2))
        assert report.skew.skew_class != ROUGHLY_SYMMETRIC
        assert report.normality.verdict == VERDICT_SKIPPED
        assert not report.normality.performed
        assert report.skew.recommended_statistic == "median"
        assert "t_test" not in report.recommended_tests

    def test_t_iff_symmetric_and_normal(self, series_from):
        rng = np.random.default_rng(3)
        for sample in (rng.normal(size=80), rng.exponential(size=80), rng.uniform(size=80)):
            report = analyze(series_from(sample))
            has_t = "t_test" in report.recommended_tests
            expected = (
                report.skew.skew_class == ROUGHLY_SYMMETRIC
                and report.normality.verdict == VERDICT_NORMAL
            )
            assert has_t == expected
            assert len(report.recommended_tests) >= 1

    def test_large_symmetric_sample_skips_sw(self, series_from):
        rng = np.random.default_rng(4)
        report = analyze(series_from(rng.normal(size=6000)))
        assert report.normality.verdict == VERDICT_SKIPPED
        assert "5000" in report.normality.skip_reason
        assert "t_test" not in report.recommended_tests

    def test_constant_diffs(self, paired_series_from):
        series = paired_series_from([1.0, 2.0, 3.0], [0.5, 1.5, 2.5])
        report = analyze(series)
        assert report.stats_diff.degenerate
        assert report.normality.verdict == VERDICT_SKIPPED

    def test_serialization_round_trip(self, series_from):
        rng = np.random.default_rng(5)
        report = analyze(series_from(rng.normal(size=50)))
        from paircompare.analysis import AnalysisReport

        rebuilt = AnalysisReport.from_dict(report.to_dict())
        assert rebuilt.to_dict() == report.to_dict()
