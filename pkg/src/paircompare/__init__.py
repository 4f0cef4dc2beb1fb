"""Compare two systems from paired evaluation scores.

The pipeline: ingest paired scores, aggregate them into evaluation units,
analyze the differences (summary statistics, skewness, normality) to get a
test recommendation, run a paired significance test, estimate effect size,
and run power analysis — then bundle everything into one reproducible
report. A CLI (``paircompare``) and an HTTP service expose the same steps.
"""

__version__ = "0.1.0"

from .analysis import (
    AnalysisReport,
    HistogramData,
    NormalityResult,
    SkewClass,
    SummaryStats,
    TEST_IDS,
    analyze,
    classify_skew,
    histogram,
    recommend,
    shapiro_wilk,
    summarize,
)
from .effectsize import (
    EFFECT_SIZE_INDICES,
    EffectSizeEstimate,
    cohens_d,
    estimate,
    hedges_g,
    hodges_lehmann,
    wilcoxon_r,
)
from .errors import CeilingExceededError, DataError, DegenerateDataError, PairCompareError
from .hypotests import (
    GridResult,
    TestConfig,
    TestResult,
    bonferroni_adjust,
    bootstrap_test,
    pairwise_grid,
    permutation_test,
    run_test,
    sign_test,
    t_test,
    wilcoxon_signed_rank,
)
from .ingest import (
    EuConfig,
    EuProvenance,
    EuSeries,
    PairedScores,
    aggregate_to_eus,
    eu_series_from_arrays,
    eu_series_from_diffs,
    parse_scores,
)
from .power import (
    BetaPairSpec,
    NormalPairSpec,
    PowerCurve,
    PowerPoint,
    ProspectiveSpec,
    SweepTable,
    closed_form_sample_size,
    prospective_sample_size,
    pvalue_sweep,
    retrospective_power_bootstrap,
    retrospective_power_mc,
    t_test_power,
)
from .report import (
    REPORT_SCHEMA,
    ComparisonReport,
    ProspectiveRecord,
    ReportProvenance,
    assemble,
    render_markdown,
)

__all__ = [
    "__version__",
    "AnalysisReport",
    "BetaPairSpec",
    "CeilingExceededError",
    "ComparisonReport",
    "DataError",
    "DegenerateDataError",
    "EFFECT_SIZE_INDICES",
    "EffectSizeEstimate",
    "EuConfig",
    "EuProvenance",
    "EuSeries",
    "GridResult",
    "HistogramData",
    "NormalPairSpec",
    "NormalityResult",
    "PairCompareError",
    "PairedScores",
    "PowerCurve",
    "PowerPoint",
    "ProspectiveRecord",
    "ProspectiveSpec",
    "REPORT_SCHEMA",
    "ReportProvenance",
    "SkewClass",
    "SummaryStats",
    "SweepTable",
    "TEST_IDS",
    "TestConfig",
    "TestResult",
    "aggregate_to_eus",
    "analyze",
    "assemble",
    "bonferroni_adjust",
    "bootstrap_test",
    "classify_skew",
    "closed_form_sample_size",
    "cohens_d",
    "estimate",
    "eu_series_from_arrays",
    "eu_series_from_diffs",
    "hedges_g",
    "histogram",
    "hodges_lehmann",
    "pairwise_grid",
    "parse_scores",
    "permutation_test",
    "prospective_sample_size",
    "pvalue_sweep",
    "recommend",
    "render_markdown",
    "retrospective_power_bootstrap",
    "retrospective_power_mc",
    "run_test",
    "shapiro_wilk",
    "sign_test",
    "summarize",
    "t_test",
    "t_test_power",
    "wilcoxon_r",
    "wilcoxon_signed_rank",
]
