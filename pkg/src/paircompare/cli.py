"""Command-line driver for the full comparison pipeline and each step.

Subcommands: ``analyze``, ``test``, ``effect``, ``power``, ``sweep``,
``grid``, ``compare``, ``serve``. Each one either prints its primary JSON
document to stdout or, with ``--out DIR``, writes the document plus CSV/
Markdown sidecars into the directory. Outputs are byte-identical for
identical inputs, flags, and seeds.

Exit codes: 0 success, 2 usage error, 3 data error, 4 statistical
degeneracy.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from ._seeds import spawn_seed
from .analysis import TEST_IDS, analyze
from .effectsize import EFFECT_SIZE_INDICES, estimate, hodges_lehmann
from .errors import CeilingExceededError, DataError, DegenerateDataError
from .hypotests import DIRECTIONS, TestConfig, pairwise_grid, run_test
from .ingest import AGGREGATORS, EuConfig, aggregate_to_eus, parse_scores
from .power import (
    DEFAULT_SWEEP_SIZES,
    BetaPairSpec,
    NormalPairSpec,
    ProspectiveSpec,
    closed_form_sample_size,
    prospective_sample_size,
    pvalue_sweep,
    retrospective_power_bootstrap,
    retrospective_power_mc,
)
from .report import ProspectiveRecord, ReportProvenance, assemble, render_markdown

log = logging.getLogger("paircompare")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_DEGENERATE = 4

# Effect-size defaults by the analysis module's chosen statistic.
_MEAN_INDICES = ("cohens_d", "hedges_g")
_MEDIAN_INDICES = ("wilcoxon_r", "hodges_lehmann")


def _add_ingest_flags(parser: argparse.ArgumentParser):
    parser.add_argument("scores", help="path to the paired score file")
    parser.add_argument("--format", choices=("csv", "tsv"), default=None,
                        help="input format (default: by file extension)")
    parser.add_argument("--has-header", action="store_true",
                        help="skip the first non-comment line")
    parser.add_argument("--eu-size", type=int, default=1, metavar="M",
                        help="evaluation unit size (default 1)")
    parser.add_argument("--aggregator", choices=AGGREGATORS, default="mean",
                        help="per-EU aggregator (default mean)")
    parser.add_argument("--shuffle-seed", type=int, default=None, metavar="SEED",
                        help="shuffle rows with this seed before grouping (default: no shuffle)")


def _add_test_flags(parser: argparse.ArgumentParser, with_choice: bool = True):
    if with_choice:
        parser.add_argument("--test", dest="test_id", choices=TEST_IDS, default=None,
                            help="significance test (default: first recommended)")
    parser.add_argument("--direction", choices=DIRECTIONS, default="two_sided")
    parser.add_argument("--delta", type=float, default=0.0,
                        help="hypothesized statistic difference (default 0)")
    parser.add_argument("--alpha2", type=float, default=0.05,
                        help="significance level for the test (default 0.05)")
    parser.add_argument("--trials", type=int, default=10000, metavar="B",
                        help="resampling trials for bootstrap/permutation (default 10000)")


def _add_common_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--seed", type=int, default=0,
                        help="master seed; all internal streams derive from it (default 0)")
    parser.add_argument("--out", type=Path, default=None, metavar="DIR",
                        help="write outputs into DIR instead of stdout")
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--quiet", action="store_true", help="errors only")
    group.add_argument("--verbose", action="store_true", help="chatty progress logging")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paircompare",
        description="Compare two systems from paired evaluation scores: "
        "data analysis, significance testing, effect size, and power analysis.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="data analysis and test recommendation")
    _add_ingest_flags(p)
    p.add_argument("--alpha1", type=float, default=0.05,
                   help="significance level for the normality test (default 0.05)")
    p.add_argument("--bins", default="auto", help="histogram bins (integer or 'auto')")
    _add_common_flags(p)

    p = sub.add_parser("test", help="run one significance test")
    _add_ingest_flags(p)
    _add_test_flags(p)
    p.add_argument("--alpha1", type=float, default=0.05)
    _add_common_flags(p)

    p = sub.add_parser("effect", help="effect size estimation")
    _add_ingest_flags(p)
    p.add_argument("--indices", default=",".join(EFFECT_SIZE_INDICES),
                   help="comma-separated effect size indices (default: all four)")
    p.add_argument("--include-self-pairs", action="store_true",
                   help="Hodges-Lehmann: include i = j Walsh averages")
    _add_common_flags(p)

    p = sub.add_parser("power", help="prospective or retrospective power analysis")
    p.add_argument("--method", choices=("prospective", "mc", "bootstrap"), required=True)
    p.add_argument("scores", nargs="?", default=None,
                   help="score file (bootstrap method only)")
    p.add_argument("--format", choices=("csv", "tsv"), default=None)
    p.add_argument("--has-header", action="store_true")
    p.add_argument("--eu-size", type=int, default=1)
    p.add_argument("--aggregator", choices=AGGREGATORS, default="mean")
    p.add_argument("--shuffle-seed", type=int, default=None)
    p.add_argument("--mean-diff", type=float, default=None,
                   help="expected mean of the differences (prospective/mc)")
    p.add_argument("--std-dev", type=float, default=None,
                   help="expected standard deviation of the differences (prospective/mc)")
    p.add_argument("--target-power", type=float, default=0.8)
    p.add_argument("--alpha2", type=float, default=0.05)
    p.add_argument("--direction", choices=("two_sided", "one_sided", "left", "right"),
                   default="two_sided")
    p.add_argument("--test", dest="test_id", choices=TEST_IDS, default="t_test")
    p.add_argument("--sizes", default=None,
                   help="comma-separated sample sizes for the curve")
    p.add_argument("--power-trials", type=int, default=1000)
    _add_common_flags(p)

    p = sub.add_parser("sweep", help="p-value vs sample size simulation")
    p.add_argument("--generator", choices=("normal", "beta"), default="normal")
    p.add_argument("--params", default=None,
                   help="generator parameters: normal 'meanA,sdA,meanB,sdB' "
                        "(default 0.5,1,0.5,1); beta 'aA,bA,aB,bB'")
    p.add_argument("--test", dest="test_id", choices=TEST_IDS, default="t_test")
    p.add_argument("--iterations", type=int, default=20)
    p.add_argument("--sizes", default=None)
    p.add_argument("--trials", type=int, default=1000)
    _add_common_flags(p)

    p = sub.add_parser("grid", help="pairwise comparison grid with Bonferroni correction")
    p.add_argument("scores", help="CSV/TSV with one named column per system")
    p.add_argument("--format", choices=("csv", "tsv"), default=None)
    _add_test_flags(p, with_choice=False)
    p.add_argument("--test", dest="test_id", choices=TEST_IDS, default="wilcoxon_signed_rank")
    _add_common_flags(p)

    p = sub.add_parser("compare", help="full pipeline into one report")
    _add_ingest_flags(p)
    p.add_argument("--alpha1", type=float, default=0.05)
    _add_test_flags(p)
    p.add_argument("--effect-size", dest="effect_indices", default=None,
                   help="comma-separated indices (default: matched to the chosen statistic)")
    p.add_argument("--power", dest="power_method", choices=("bootstrap", "mc", "none"),
                   default="bootstrap")
    p.add_argument("--power-trials", type=int, default=1000)
    p.add_argument("--power-sizes", default=None)
    p.add_argument("--mc-mean", type=float, default=None)
    p.add_argument("--mc-std", type=float, default=None)
    _add_common_flags(p)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--listen", default="127.0.0.1:8000", metavar="HOST:PORT")
    p.add_argument("--data-dir", type=Path, default=None,
                   help="spill session state to this directory")
    p.add_argument("--static-dir", type=Path, default=None,
                   help="serve a built UI bundle from this directory")
    p.add_argument("--ttl-hours", type=float, default=24.0)
    p.add_argument("--max-upload-mb", type=float, default=50.0)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--quiet", action="store_true")
    group.add_argument("--verbose", action="store_true")
    return parser


def _configure_logging(args):
    level = logging.WARNING
    if getattr(args, "verbose", False):
        level = logging.INFO
    if getattr(args, "quiet", False):
        level = logging.ERROR
    logging.basicConfig(level=level, format="%(levelname)s %(message)s", stream=sys.stderr)


def _infer_format(path: str, explicit: str | None) -> str:
    if explicit:
        return explicit
    return "tsv" if path.endswith(".tsv") else "csv"


def _load_series(args):
    path = Path(args.scores)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    scores = parse_scores(
        raw,
        fmt=_infer_format(str(path), args.format),
        has_header=args.has_header,
        source_name=path.name,
    )
    config = EuConfig(
        eu_size=args.eu_size, aggregator=args.aggregator, shuffle_seed=args.shuffle_seed
    )
    series = aggregate_to_eus(scores, config)
    if series.provenance.dropped_rows:
        log.warning(
            "dropped %d trailing rows that did not fill an evaluation unit",
            series.provenance.dropped_rows,
        )
    return series


def _emit(args, primary_name: str, primary_text: str, sidecars: dict[str, str] | None = None):
    """Print the primary document, or write everything under --out."""
    if args.out is None:
        sys.stdout.write(primary_text)
        return
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    for name, text in {primary_name: primary_text, **(sidecars or {})}.items():
        with open(out / name, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        log.info("wrote %s", out / name)


def _json_doc(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _parse_sizes(text: str | None, default=DEFAULT_SWEEP_SIZES):
    if text is None:
        return list(default)
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise DataError(f"bad size list {text!r}; expected comma-separated integers") from None


def _cmd_analyze(args) -> int:
    series = _load_series(args)
    bins = args.bins if args.bins == "auto" else int(args.bins)
    report = analyze(series, alpha1=args.alpha1, bins=bins)
    sidecars = {
        "hist_u.csv": report.histograms[0].to_csv(),
        "hist_v.csv": report.histograms[1].to_csv(),
        "hist_diff.csv": report.histograms[2].to_csv(),
    }
    payload = {"analysis": report.to_dict(), "provenance": series.provenance.to_dict()}
    _emit(args, "analysis.json", _json_doc(payload), sidecars)
    return EXIT_OK


def _choose_test(args, analysis_report) -> str:
    if args.test_id is None:
        return analysis_report.recommended_tests[0]
    if args.test_id not in analysis_report.recommended_tests:
        log.warning(
            "test %s was not recommended for this sample (recommended: %s); running anyway",
            args.test_id,
            ", ".join(analysis_report.recommended_tests),
        )
    return args.test_id


def _cmd_test(args) -> int:
    series = _load_series(args)
    analysis_report = analyze(series, alpha1=args.alpha1)
    test_id = _choose_test(args, analysis_report)
    config = TestConfig(
        test_id=test_id,
        direction=args.direction,
        delta=args.delta,
        alpha2=args.alpha2,
        trials=args.trials,
        seed=spawn_seed(args.seed, 1),
    )
    result = run_test(series, config)
    payload = {"test": result.to_dict(), "provenance": series.provenance.to_dict()}
    _emit(args, "test.json", _json_doc(payload))
    return EXIT_OK


def _cmd_effect(args) -> int:
    series = _load_series(args)
    indices = [part.strip() for part in args.indices.split(",") if part.strip()]
    estimates = []
    for index in indices:
        if index == "hodges_lehmann" and args.include_self_pairs:
            estimates.append(hodges_lehmann(series, include_self_pairs=True))
        else:
            estimates.extend(estimate(series, [index]))
    payload = {
        "effect_sizes": [e.to_dict() for e in estimates],
        "provenance": series.provenance.to_dict(),
    }
    _emit(args, "effect_sizes.json", _json_doc(payload))
    return EXIT_OK


def _cmd_power(args) -> int:
    if args.method == "prospective":
        if args.mean_diff is None or args.std_dev is None:
            raise DataError("prospective power needs --mean-diff and --std-dev")
        direction = "one_sided" if args.direction in ("one_sided", "left", "right") else "two_sided"
        spec = ProspectiveSpec(
            expected_mean_diff=args.mean_diff,
            expected_std_dev=args.std_dev,
            target_power=args.target_power,
            alpha=args.alpha2,
            direction=direction,
        )
        record = ProspectiveRecord(
            spec=spec,
            closed_form_n=closed_form_sample_size(spec),
            refined_n=prospective_sample_size(spec),
        )
        _emit(args, "prospective.json", _json_doc({"prospective": record.to_dict()}))
        return EXIT_OK

    direction = args.direction if args.direction in DIRECTIONS else "two_sided"
    sizes = _parse_sizes(args.sizes, default=(10, 20, 50, 100, 200, 500))
    if args.method == "mc":
        if args.mean_diff is None or args.std_dev is None:
            raise DataError("Monte-Carlo power needs --mean-diff and --std-dev")
        curve = retrospective_power_mc(
            mean=args.mean_diff,
            std_dev=args.std_dev,
            test_id=args.test_id,
            alpha=args.alpha2,
            sample_sizes=sizes,
            trials=args.power_trials,
            seed=spawn_seed(args.seed, 2),
            direction=direction,
        )
    else:
        if args.scores is None:
            raise DataError("bootstrap power needs a score file")
        series = _load_series(args)
        curve = retrospective_power_bootstrap(
            series,
            test_id=args.test_id,
            alpha=args.alpha2,
            sample_sizes=sizes,
            trials=args.power_trials,
            seed=spawn_seed(args.seed, 2),
            direction=direction,
        )
    _emit(args, "power_curve.json", _json_doc({"power": curve.to_dict()}),
          {"power_curve.csv": curve.to_csv()})
    return EXIT_OK


def _make_generator(kind: str, params: str | None):
    if kind == "normal":
        values = [float(v) for v in params.split(",")] if params else [0.5, 1.0, 0.5, 1.0]
        if len(values) != 4:
            raise DataError("normal generator needs 4 parameters: meanA,sdA,meanB,sdB")
        return NormalPairSpec(*values)
    if params is None:
        raise DataError("beta generator needs --params aA,bA,aB,bB")
    values = [float(v) for v in params.split(",")]
    if len(values) != 4:
        raise DataError("beta generator needs 4 parameters: aA,bA,aB,bB")
    return BetaPairSpec(*values)


def _cmd_sweep(args) -> int:
    generator = _make_generator(args.generator, args.params)
    table = pvalue_sweep(
        generator,
        test_id=args.test_id,
        sample_sizes=_parse_sizes(args.sizes),
        iterations=args.iterations,
        seed=spawn_seed(args.seed, 3),
        trials=args.trials,
    )
    _emit(args, "sweep.json", _json_doc({"sweep": table.to_dict()}),
          {"sweep.csv": table.to_csv()})
    return EXIT_OK


def _read_multi_system(path: Path, fmt: str | None) -> list[tuple[str, list[float]]]:
    delimiter = "\t" if _infer_format(str(path), fmt) == "tsv" else ","
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) < 2:
        raise DataError(f"{path.name}: need a header row and at least one data row")
    names = [name.strip() for name in lines[0].split(delimiter)]
    columns: list[list[float]] = [[] for _ in names]
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(delimiter)
        if len(fields) != len(names):
            raise DataError(
                f"{path.name}: line {lineno}: expected {len(names)} fields, found {len(fields)}"
            )
        for col, fieldtext in enumerate(fields):
            try:
                columns[col].append(float(fieldtext))
            except ValueError:
                raise DataError(
                    f"{path.name}: line {lineno}, field {col + 1}: not a number"
                ) from None
    return list(zip(names, columns))


def _cmd_grid(args) -> int:
    systems = _read_multi_system(Path(args.scores), args.format)
    config = TestConfig(
        test_id=args.test_id,
        direction=args.direction,
        delta=args.delta,
        alpha2=args.alpha2,
        trials=args.trials,
        seed=spawn_seed(args.seed, 4),
    )
    result = pairwise_grid(systems, config)
    _emit(
        args,
        "grid.json",
        _json_doc({"grid": result.to_dict()}),
        {"grid_cells.csv": result.to_cells_csv(), "grid_matrix.csv": result.to_matrix_csv()},
    )
    return EXIT_OK


def _cmd_compare(args) -> int:
    series = _load_series(args)
    analysis_report = analyze(series, alpha1=args.alpha1)
    test_id = _choose_test(args, analysis_report)
    test_seed = spawn_seed(args.seed, 1)
    power_seed = spawn_seed(args.seed, 2)
    config = TestConfig(
        test_id=test_id,
        direction=args.direction,
        delta=args.delta,
        alpha2=args.alpha2,
        trials=args.trials,
        seed=test_seed,
    )
    result = run_test(series, config)

    warnings: list[str] = []
    if args.effect_indices:
        indices = [part.strip() for part in args.effect_indices.split(",") if part.strip()]
    elif analysis_report.skew.recommended_statistic == "mean":
        indices = list(_MEAN_INDICES)
    else:
        indices = list(_MEDIAN_INDICES)
    estimates = []
    for index in indices:
        try:
            estimates.extend(estimate(series, [index]))
        except DegenerateDataError as exc:
            warnings.append(f"effect size {index} skipped: {exc}")

    curve = None
    if args.power_method == "mc":
        mc_mean = args.mc_mean if args.mc_mean is not None else float(series.diffs.mean())
        mc_std = args.mc_std if args.mc_std is not None else float(series.diffs.std(ddof=1))
        curve = retrospective_power_mc(
            mean=mc_mean,
            std_dev=mc_std,
            test_id=test_id,
            alpha=args.alpha2,
            sample_sizes=_power_sizes(args, series.n),
            trials=args.power_trials,
            seed=power_seed,
            direction=args.direction,
        )
    elif args.power_method == "bootstrap":
        if series.n < 10:
            warnings.append(
                f"power analysis skipped: bootstrap needs at least 10 EUs, got {series.n}"
            )
        else:
            curve = retrospective_power_bootstrap(
                series,
                test_id=test_id,
                alpha=args.alpha2,
                sample_sizes=_power_sizes(args, series.n),
                trials=args.power_trials,
                seed=power_seed,
                direction=args.direction,
            )

    derived_seeds = {"test": test_seed}
    if curve is not None:
        derived_seeds["power"] = power_seed
    provenance = ReportProvenance(
        ingest=series.provenance,
        master_seed=args.seed,
        derived_seeds=derived_seeds,
    )
    report = assemble(
        provenance=provenance,
        analysis=analysis_report,
        test=result,
        effect_sizes=estimates,
        power=curve,
        warnings=warnings,
        alpha2=args.alpha2,
    )
    sidecars = {
        "hist_u.csv": analysis_report.histograms[0].to_csv(),
        "hist_v.csv": analysis_report.histograms[1].to_csv(),
        "hist_diff.csv": analysis_report.histograms[2].to_csv(),
    }
    files = {
        "histogram u": "hist_u.csv",
        "histogram v": "hist_v.csv",
        "histogram u-v": "hist_diff.csv",
    }
    if curve is not None:
        sidecars["power_curve.csv"] = curve.to_csv()
        files["power curve"] = "power_curve.csv"
    sidecars["report.md"] = render_markdown(report, files=files)
    _emit(args, "report.json", report.to_json(), sidecars)
    return EXIT_OK


def _power_sizes(args, n: int) -> list[int]:
    if args.power_sizes:
        return _parse_sizes(args.power_sizes)
    base = max(10, n)
    sizes = sorted({max(10, base // 4), max(10, base // 2), base, base * 2, base * 4})
    return sizes


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    host, _, port_text = args.listen.rpartition(":")
    if not host or not port_text.isdigit():
        raise DataError(f"--listen must look like HOST:PORT, got {args.listen!r}")
    app = create_app(
        data_dir=args.data_dir,
        static_dir=args.static_dir,
        ttl_seconds=args.ttl_hours * 3600.0,
        max_upload_bytes=int(args.max_upload_mb * 1024 * 1024),
    )
    uvicorn.run(app, host=host, port=int(port_text), log_level="warning")
    return EXIT_OK


_COMMANDS = {
    "analyze": _cmd_analyze,
    "test": _cmd_test,
    "effect": _cmd_effect,
    "power": _cmd_power,
    "sweep": _cmd_sweep,
    "grid": _cmd_grid,
    "compare": _cmd_compare,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    _configure_logging(args)
    try:
        return _COMMANDS[args.command](args)
    except DegenerateDataError as exc:
        print(f"error: statistical degeneracy: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except CeilingExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
