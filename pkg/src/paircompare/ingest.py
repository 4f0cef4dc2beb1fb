"""Paired score ingestion and evaluation-unit aggregation.

Input files hold one score pair per line: the same test instance judged by
system A and system B. Rows are optionally shuffled with a seeded
permutation and then grouped into evaluation units (EUs) of a fixed size m;
the per-EU mean or median of each column yields the (u_i, v_i) sample that
every downstream statistic runs on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._seeds import validate_seed
from .errors import DataError

AGGREGATORS = ("mean", "median")

_DELIMITERS = {"csv": ",", "tsv": "\t"}


@dataclass(frozen=True, eq=False)
class PairedScores:
    """Raw per-instance score pairs, in file order."""

    a: np.ndarray
    b: np.ndarray
    source_name: str = "<memory>"
    skipped_comments: int = 0
    skipped_blanks: int = 0

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.float64)
        b = np.asarray(self.b, dtype=np.float64)
        if a.ndim != 1 or b.ndim != 1 or a.size != b.size:
            raise DataError("score columns must be one-dimensional and equally long")
        if a.size == 0:
            raise DataError("no score rows")
        if not (np.isfinite(a).all() and np.isfinite(b).all()):
            raise DataError("scores must be finite (no NaN or infinity)")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __len__(self) -> int:
        return int(self.a.size)


@dataclass(frozen=True)
class EuConfig:
    """How raw rows become evaluation units.

    ``eu_size`` rows (adjacent after the optional shuffle) form one EU; the
    aggregator maps each EU's scores to a single value per system. A seed of
    None means no shuffle, so default runs are reproducible by construction.
    """

    eu_size: int = 1
    aggregator: str = "mean"
    shuffle_seed: int | None = None

    def __post_init__(self):
        if not isinstance(self.eu_size, (int, np.integer)) or self.eu_size < 1:
            raise DataError(f"eu_size must be a positive integer, got {self.eu_size!r}")
        if self.aggregator not in AGGREGATORS:
            raise DataError(f"aggregator must be one of {AGGREGATORS}, got {self.aggregator!r}")
        if self.shuffle_seed is not None:
            validate_seed(self.shuffle_seed, "shuffle_seed")

    def to_dict(self) -> dict:
        return {
            "eu_size": int(self.eu_size),
            "aggregator": self.aggregator,
            "shuffle_seed": None if self.shuffle_seed is None else int(self.shuffle_seed),
        }


@dataclass(frozen=True)
class EuProvenance:
    """Where an EU series came from; echoed into every downstream report."""

    source_name: str
    eu_size: int
    aggregator: str
    shuffle_seed: int | None
    n_rows: int
    dropped_rows: int
    skipped_comments: int = 0
    skipped_blanks: int = 0

    def to_dict(self) -> dict:
        return {
            "source_name": self.source_name,
            "eu_size": int(self.eu_size),
            "aggregator": self.aggregator,
            "shuffle_seed": None if self.shuffle_seed is None else int(self.shuffle_seed),
            "n_rows": int(self.n_rows),
            "dropped_rows": int(self.dropped_rows),
            "skipped_comments": int(self.skipped_comments),
            "skipped_blanks": int(self.skipped_blanks),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EuProvenance":
        return cls(
            source_name=d["source_name"],
            eu_size=int(d["eu_size"]),
            aggregator=d["aggregator"],
            shuffle_seed=None if d["shuffle_seed"] is None else int(d["shuffle_seed"]),
            n_rows=int(d["n_rows"]),
            dropped_rows=int(d["dropped_rows"]),
            skipped_comments=int(d.get("skipped_comments", 0)),
            skipped_blanks=int(d.get("skipped_blanks", 0)),
        )


@dataclass(frozen=True, eq=False)
class EuSeries:
    """Per-EU score pairs (u_i, v_i); the sample all inference runs on."""

    u: np.ndarray
    v: np.ndarray
    provenance: EuProvenance

    def __post_init__(self):
        u = np.asarray(self.u, dtype=np.float64)
        v = np.asarray(self.v, dtype=np.float64)
        if u.ndim != 1 or v.ndim != 1 or u.size != v.size:
            raise DataError("u and v must be one-dimensional and equally long")
        if u.size == 0:
            raise DataError("empty EU series")
        if not (np.isfinite(u).all() and np.isfinite(v).all()):
            raise DataError("EU values must be finite")
        u.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def n(self) -> int:
        return int(self.u.size)

    @property
    def diffs(self) -> np.ndarray:
        """Differences w_i = u_i - v_i, recomputed exactly on demand."""
        return self.u - self.v


def parse_scores(
    data: bytes | str,
    fmt: str = "csv",
    has_header: bool = False,
    source_name: str = "<memory>",
) -> PairedScores:
    """Parse a two-column score file into PairedScores.

    Accepts UTF-8 text or bytes with LF or CRLF line endings. Lines that are
    blank or start with '#' are skipped and counted. Every remaining line
    must carry exactly two finite numeric fields separated by the format's
    delimiter. ``has_header`` skips the first non-skipped line unparsed.
    """
    if fmt not in _DELIMITERS:
        raise DataError(f"format must be one of {tuple(_DELIMITERS)}, got {fmt!r}")
    delimiter = _DELIMITERS[fmt]
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DataError(f"{source_name}: not valid UTF-8: {exc}") from None
    else:
        text = data

    a_vals: list[float] = []
    b_vals: list[float] = []
    comments = 0
    blanks = 0
    header_pending = has_header
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            blanks += 1
            continue
        if line.startswith("#"):
            comments += 1
            continue
        if header_pending:
            header_pending = False
            continue
        fields = line.split(delimiter)
        if len(fields) != 2:
            raise DataError(
                f"{source_name}: line {lineno}: expected 2 fields, found {len(fields)}"
            )
        row = []
        for col, field in enumerate(fields, start=1):
            try:
                value = float(field.strip())
            except ValueError:
                raise DataError(
                    f"{source_name}: line {lineno}, field {col}: not a number: {field.strip()!r}"
                ) from None
            if not math.isfinite(value):
                raise DataError(
                    f"{source_name}: line {lineno}, field {col}: non-finite value {field.strip()!r}"
                )
            row.append(value)
        a_vals.append(row[0])
        b_vals.append(row[1])

    if not a_vals:
        raise DataError(f"{source_name}: no data rows")
    return PairedScores(
        a=np.array(a_vals),
        b=np.array(b_vals),
        source_name=source_name,
        skipped_comments=comments,
        skipped_blanks=blanks,
    )


def aggregate_to_eus(scores: PairedScores, config: EuConfig) -> EuSeries:
    """Group score rows into evaluation units of size ``config.eu_size``.

    If a shuffle seed is set, rows are first permuted by a seeded
    Fisher-Yates shuffle. Consecutive groups of m rows are then reduced with
    the configured aggregator; trailing rows that do not fill a group are
    dropped and the drop count recorded in provenance. A pure function of
    (scores, config): equal inputs give byte-identical series.
    """
    n_rows = len(scores)
    m = config.eu_size
    if n_rows < m:
        raise DataError(f"need at least eu_size={m} rows, got {n_rows}")
    a, b = scores.a, scores.b
    if config.shuffle_seed is not None:
        perm = np.random.default_rng(config.shuffle_seed).permutation(n_rows)
        a, b = a[perm], b[perm]
    n_eu = n_rows // m
    dropped = n_rows - n_eu * m
    grouped_a = a[: n_eu * m].reshape(n_eu, m)
    grouped_b = b[: n_eu * m].reshape(n_eu, m)
    reduce = np.mean if config.aggregator == "mean" else np.median
    provenance = EuProvenance(
        source_name=scores.source_name,
        eu_size=m,
        aggregator=config.aggregator,
        shuffle_seed=config.shuffle_seed,
        n_rows=n_rows,
        dropped_rows=dropped,
        skipped_comments=scores.skipped_comments,
        skipped_blanks=scores.skipped_blanks,
    )
    return EuSeries(u=reduce(grouped_a, axis=1), v=reduce(grouped_b, axis=1), provenance=provenance)


def eu_series_from_arrays(u, v, source_name: str = "<arrays>") -> EuSeries:
    """Wrap two aligned score arrays as an EU series (eu_size 1, no shuffle)."""
    u = np.asarray(u, dtype=np.float64)
    provenance = EuProvenance(
        source_name=source_name,
        eu_size=1,
        aggregator="mean",
        shuffle_seed=None,
        n_rows=int(u.size),
        dropped_rows=0,
    )
    return EuSeries(u=u, v=np.asarray(v, dtype=np.float64), provenance=provenance)


def eu_series_from_diffs(w, source_name: str = "<diffs>") -> EuSeries:
    """Wrap a difference sample as an EU series with v identically zero.

    Convenience for difference-scale workflows (simulation, power analysis)
    where only w = u - v is available.
    """
    w = np.asarray(w, dtype=np.float64)
    return eu_series_from_arrays(w, np.zeros_like(w), source_name=source_name)
