"""Comparison report assembly and rendering.

A ComparisonReport bundles everything a write-up should state about one
comparison: which test was run at which significance level, the sample size,
effect size estimates, and statistical power, plus the ingestion provenance
(EU configuration and seeds) needed to rerun the analysis. Reports
serialize to a canonical JSON form (sorted keys, explicit nulls) so that a
deserialize/serialize round trip is byte-identical; the Markdown rendering
is a pure view over the same data.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .analysis import AnalysisReport
from .effectsize import EffectSizeEstimate
from .errors import DataError
from .hypotests import TestResult
from .ingest import EuProvenance
from .power import PowerCurve, ProspectiveSpec

SCHEMA_VERSION = "1"

REQUIRED_ITEMS = ("test name", "significance level", "effect size", "sample size", "power")


@dataclass(frozen=True)
class ProspectiveRecord:
    """Prospective power analysis outcome: both sample-size estimates."""

    spec: ProspectiveSpec
    closed_form_n: int
    refined_n: int

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "closed_form_n": int(self.closed_form_n),
            "refined_n": int(self.refined_n),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ProspectiveRecord":
        return cls(
            spec=ProspectiveSpec.from_dict(d["spec"]),
            closed_form_n=int(d["closed_form_n"]),
            refined_n=int(d["refined_n"]),
        )


@dataclass(frozen=True)
class ReportProvenance:
    """Ingestion settings and seeds echoed into the report."""

    ingest: EuProvenance
    master_seed: int | None = None
    derived_seeds: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "ingest": self.ingest.to_dict(),
            "master_seed": None if self.master_seed is None else int(self.master_seed),
            "derived_seeds": {k: int(v) for k, v in sorted(self.derived_seeds.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ReportProvenance":
        return cls(
            ingest=EuProvenance.from_dict(d["ingest"]),
            master_seed=None if d["master_seed"] is None else int(d["master_seed"]),
            derived_seeds={k: int(v) for k, v in d["derived_seeds"].items()},
        )


@dataclass(frozen=True)
class ComparisonReport:
    provenance: ReportProvenance
    analysis: AnalysisReport
    test: TestResult | None
    effect_sizes: tuple[EffectSizeEstimate, ...] = ()
    power: PowerCurve | None = None
    prospective: ProspectiveRecord | None = None
    warnings: tuple[str, ...] = ()
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "provenance": self.provenance.to_dict(),
            "analysis": self.analysis.to_dict(),
            "test": None if self.test is None else self.test.to_dict(),
            "effect_sizes": [e.to_dict() for e in self.effect_sizes],
            "power": None if self.power is None else self.power.to_dict(),
            "prospective": None if self.prospective is None else self.prospective.to_dict(),
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        """Canonical JSON: sorted keys, two-space indent, trailing newline."""
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "ComparisonReport":
        return cls(
            provenance=ReportProvenance.from_dict(d["provenance"]),
            analysis=AnalysisReport.from_dict(d["analysis"]),
            test=None if d["test"] is None else TestResult.from_dict(d["test"]),
            effect_sizes=tuple(EffectSizeEstimate.from_dict(e) for e in d["effect_sizes"]),
            power=None if d["power"] is None else PowerCurve.from_dict(d["power"]),
            prospective=(
                None if d["prospective"] is None else ProspectiveRecord.from_dict(d["prospective"])
            ),
            warnings=tuple(d["warnings"]),
            schema_version=d["schema_version"],
        )

    @classmethod
    def from_json(cls, text: str) -> "ComparisonReport":
        return cls.from_dict(json.loads(text))


def assemble(
    provenance: ReportProvenance,
    analysis: AnalysisReport,
    test: TestResult | None,
    effect_sizes=(),
    power: PowerCurve | None = None,
    prospective: ProspectiveRecord | None = None,
    warnings=(),
    alpha2: float | None = None,
) -> ComparisonReport:
    """Build a report, checking internal consistency.

    ``alpha2``, when given, must match the test configuration. Missing
    optional sections are recorded as explicit nulls with a completeness
    warning, so a reader can tell "absent" from "forgotten".
    """
    notes = list(warnings)
    if test is not None and alpha2 is not None and test.config.alpha2 != alpha2:
        raise DataError(
            f"alpha mismatch: report header says {alpha2}, test config says {test.config.alpha2}"
        )
    if test is None:
        notes.append("incomplete report: no significance test was run")
    if not effect_sizes:
        notes.append("incomplete report: no effect size estimated")
    if power is None:
        notes.append("incomplete report: power analysis not performed")
    return ComparisonReport(
        provenance=provenance,
        analysis=analysis,
        test=test,
        effect_sizes=tuple(effect_sizes),
        power=power,
        prospective=prospective,
        warnings=tuple(notes),
    )


def _format_ci(ci) -> str:
    if ci is None:
        return "n/a"
    return f"[{ci[0]:.6g}, {ci[1]:.6g}]"


def render_markdown(report: ComparisonReport, files: dict | None = None) -> str:
    """Human-readable summary; pure view of the report JSON.

    ``files`` may map labels (e.g. "histogram u-v") to sidecar file paths to
    reference from the text.
    """
    lines: list[str] = []
    p = report.provenance
    lines.append("# Paired comparison report")
    lines.append("")
    lines.append(f"Source: `{p.ingest.source_name}` "
                 f"(EU size {p.ingest.eu_size}, aggregator {p.ingest.aggregator}, "
                 f"{p.ingest.n_rows} rows, {p.ingest.dropped_rows} dropped)")
    lines.append("")
    lines.append("## Reproducibility summary")
    lines.append("")
    lines.append("| item | value |")
    lines.append("| --- | --- |")
    if report.test is not None:
        t = report.test
        lines.append(f"| significance test | {t.config.test_id} ({t.config.direction}) |")
        lines.append(f"| significance level | {t.config.alpha2} |")
        lines.append(f"| p-value | {t.p_value:.6g} |")
        lines.append(f"| sample size | {t.n} |")
    else:
        lines.append("| significance test | not performed |")
        lines.append(f"| sample size | {report.analysis.stats_diff.count} |")
    if report.effect_sizes:
        parts = ", ".join(f"{e.index} = {e.value:.6g}" for e in report.effect_sizes)
        lines.append(f"| effect size | {parts} |")
    else:
        lines.append("| effect size | not estimated |")
    if report.power is not None:
        last = report.power.points[-1]
        lines.append(
            f"| power | {last.power:.4g} at n={last.sample_size} "
            f"({report.power.method}, {report.power.trials} trials) |"
        )
    else:
        lines.append("| power | power analysis: not performed |")
    lines.append("")
    if report.test is not None:
        t = report.test
        decision = "H0 rejected (p < α)" if t.reject_h0 else "H0 not rejected (p ≥ α)"
        lines.append(
            f"Decision: **{decision}** — {t.statistic_name} = {t.statistic_value:.6g}, "
            f"p = {t.p_value:.6g}, CI {_format_ci(t.confidence_interval)}"
        )
        lines.append("")
    lines.append("## Data analysis")
    lines.append("")
    sd = report.analysis.stats_diff
    lines.append(
        f"Differences u−v: n = {sd.count}, mean = {sd.mean:.6g}, median = {sd.median:.6g}, "
        f"sd = {sd.std_dev:.6g}, skewness = {sd.skewness:.6g}"
    )
    skew = report.analysis.skew
    lines.append(
        f"Skewness class: {skew.skew_class} (γ = {skew.gamma:.4g}) → "
        f"use the {skew.recommended_statistic}"
    )
    norm = report.analysis.normality
    if norm.performed:
        lines.append(
            f"Normality (Shapiro-Wilk): W = {norm.w_statistic:.6g}, p = {norm.p_value:.6g} "
            f"at α₁ = {norm.alpha1} → {norm.verdict}"
        )
    else:
        lines.append(f"Normality test skipped: {norm.skip_reason}")
    lines.append(f"Recommended tests: {', '.join(report.analysis.recommended_tests)}")
    lines.append("")
    if report.prospective is not None:
        pr = report.prospective
        lines.append(
            f"Prospective sample size: closed form {pr.closed_form_n}, "
            f"refined {pr.refined_n} (target power {pr.spec.target_power})"
        )
        lines.append("")
    if report.warnings:
        lines.append("## Warnings")
        lines.append("")
        for w in report.warnings:
            lines.append(f"- {w}")
        lines.append("")
    if files:
        lines.append("## Attached data files")
        lines.append("")
        for label, path in sorted(files.items()):
            lines.append(f"- {label}: `{path}`")
        lines.append("")
    return "\n".join(lines)


# JSON schema for the canonical report document (draft 2020-12 subset).
_SUMMARY_STATS_SCHEMA = {
    "type": "object",
    "required": ["count", "mean", "median", "std_dev", "min", "max", "skewness", "degenerate"],
    "properties": {
        "count": {"type": "integer", "minimum": 1},
        "mean": {"type": "number"},
        "median": {"type": "number"},
        "std_dev": {"type": "number", "minimum": 0},
        "min": {"type": "number"},
        "max": {"type": "number"},
        "skewness": {"type": "number"},
        "degenerate": {"type": "boolean"},
    },
}

_HISTOGRAM_SCHEMA = {
    "type": "object",
    "required": ["bin_edges", "counts", "label"],
    "properties": {
        "bin_edges": {"type": "array", "items": {"type": "number"}, "minItems": 2},
        "counts": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "label": {"type": "string"},
    },
}

_TEST_RESULT_SCHEMA = {
    "type": ["object", "null"],
    "required": [
        "config",
        "statistic_name",
        "statistic_value",
        "p_value",
        "reject_h0",
        "n",
        "n_effective",
        "confidence_interval",
        "method",
    ],
    "properties": {
        "config": {
            "type": "object",
            "required": ["test_id", "direction", "delta", "alpha2", "trials", "seed"],
        },
        "statistic_name": {"type": "string"},
        "statistic_value": {"type": "number"},
        "p_value": {"type": "number", "minimum": 0, "maximum": 1},
        "reject_h0": {"type": "boolean"},
        "n": {"type": "integer", "minimum": 2},
        "n_effective": {"type": "integer", "minimum": 1},
        "confidence_interval": {
            "type": ["array", "null"],
            "items": {"type": "number"},
            "minItems": 2,
            "maxItems": 2,
        },
        "method": {"type": "string"},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "paircompare comparison report",
    "type": "object",
    "required": [
        "schema_version",
        "provenance",
        "analysis",
        "test",
        "effect_sizes",
        "power",
        "prospective",
        "warnings",
    ],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "provenance": {
            "type": "object",
            "required": ["ingest", "master_seed", "derived_seeds"],
            "properties": {
                "ingest": {
                    "type": "object",
                    "required": [
                        "source_name",
                        "eu_size",
                        "aggregator",
                        "shuffle_seed",
                        "n_rows",
                        "dropped_rows",
                    ],
                },
                "master_seed": {"type": ["integer", "null"]},
                "derived_seeds": {"type": "object"},
            },
        },
        "analysis": {
            "type": "object",
            "required": [
                "schema_version",
                "stats_u",
                "stats_v",
                "stats_diff",
                "histograms",
                "skew",
                "normality",
                "recommended_tests",
            ],
            "properties": {
                "stats_u": _SUMMARY_STATS_SCHEMA,
                "stats_v": _SUMMARY_STATS_SCHEMA,
                "stats_diff": _SUMMARY_STATS_SCHEMA,
                "histograms": {"type": "array", "items": _HISTOGRAM_SCHEMA, "minItems": 3},
                "skew": {
                    "type": "object",
                    "required": ["gamma", "class", "recommended_statistic", "degenerate"],
                },
                "normality": {
                    "type": "object",
                    "required": ["performed", "w_statistic", "p_value", "alpha1", "verdict"],
                },
                "recommended_tests": {
                    "type": "array",
                    "items": {"type": "string"},
                    "minItems": 1,
                },
            },
        },
        "test": _TEST_RESULT_SCHEMA,
        "effect_sizes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["index", "value", "n", "standardized"],
            },
        },
        "power": {
            "type": ["object", "null"],
            "required": ["points", "method", "trials", "seed", "test_id", "alpha", "direction"],
        },
        "prospective": {
            "type": ["object", "null"],
            "required": ["spec", "closed_form_n", "refined_n"],
        },
        "warnings": {"type": "array", "items": {"type": "string"}},
    },
}
