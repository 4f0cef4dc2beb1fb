"""HTTP API exposing the pipeline stepwise for the web workbench.

The service is a thin adapter: every response body comes from a core-module
call and no statistics are computed here. Sessions live in memory (with an
optional on-disk spill directory), are evicted after a TTL, and enforce the
step order upload -> aggregate -> (analyze | test | effect | power) ->
report.

Endpoints:
    POST /api/sessions                     upload scores (JSON body)
    POST /api/sessions/{id}/aggregate      EU aggregation
    POST /api/sessions/{id}/analyze        data analysis
    POST /api/sessions/{id}/test           significance test
    POST /api/sessions/{id}/effect         effect size indices
    POST /api/sessions/{id}/power          prospective / mc / bootstrap power
    GET  /api/sessions/{id}/report         assembled comparison report
                                           (canonical JSON text)
    POST /api/grid                         stateless pairwise comparison grid
    GET  /api/seeds?master_seed=N          per-step seeds derived from a master
    GET  /healthz

Errors: 400 validation, 404 unknown session, 409 step-order violation,
422 statistical degeneracy.
"""
from __future__ import annotations

import json
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from ._seeds import spawn_seed, validate_seed
from .analysis import AnalysisReport, analyze
from .effectsize import estimate
from .errors import CeilingExceededError, DataError, DegenerateDataError
from .hypotests import TestConfig, TestResult, pairwise_grid, run_test
from .ingest import EuConfig, EuSeries, PairedScores, aggregate_to_eus, parse_scores
from .power import (
    PowerCurve,
    ProspectiveSpec,
    closed_form_sample_size,
    prospective_sample_size,
    retrospective_power_bootstrap,
    retrospective_power_mc,
)
from .report import ProspectiveRecord, ReportProvenance, assemble

DEFAULT_TTL_SECONDS = 24 * 3600.0
DEFAULT_MAX_UPLOAD = 50 * 1024 * 1024


class StepOrderError(Exception):
    """A pipeline step was requested before its prerequisite."""


class UnknownSessionError(Exception):
    """No live session with the requested id."""


@dataclass
class Session:
    id: str
    scores: PairedScores
    created_at: float
    eu: EuSeries | None = None
    analysis: AnalysisReport | None = None
    test_result: TestResult | None = None
    effect_estimates: list = field(default_factory=list)
    power_curve: PowerCurve | None = None
    prospective: ProspectiveRecord | None = None
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class SessionStore:
    """In-memory session map with TTL eviction and optional disk spill.

    The spill holds only the uploaded scores (enough to replay a session
    after a restart); computed state is kept in memory.
    """

    def __init__(self, ttl_seconds: float, data_dir: Path | None):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._ttl = ttl_seconds
        self._data_dir = data_dir
        if data_dir is not None:
            data_dir.mkdir(parents=True, exist_ok=True)

    def _evict_expired(self, now: float):
        expired = [sid for sid, s in self._sessions.items() if now - s.created_at > self._ttl]
        for sid in expired:
            del self._sessions[sid]

    def create(self, scores: PairedScores) -> Session:
        session = Session(id=secrets.token_hex(16), scores=scores, created_at=time.time())
        with self._lock:
            self._evict_expired(session.created_at)
            self._sessions[session.id] = session
        if self._data_dir is not None:
            payload = {
                "a": [float(x) for x in scores.a],
                "b": [float(x) for x in scores.b],
                "source_name": scores.source_name,
                "created_at": session.created_at,
            }
            (self._data_dir / f"{session.id}.json").write_text(json.dumps(payload))
        return session

    def get(self, session_id: str) -> Session:
        now = time.time()
        with self._lock:
            self._evict_expired(now)
            session = self._sessions.get(session_id)
            if session is None and self._data_dir is not None:
                session = self._load_spilled(session_id, now)
                if session is not None:
                    self._sessions[session_id] = session
            if session is None:
                raise UnknownSessionError(session_id)
            return session

    def _load_spilled(self, session_id: str, now: float) -> Session | None:
        path = self._data_dir / f"{session_id}.json"
        if not path.exists():
            return None
        payload = json.loads(path.read_text())
        if now - payload["created_at"] > self._ttl:
            return None
        scores = PairedScores(
            a=payload["a"], b=payload["b"], source_name=payload["source_name"]
        )
        return Session(id=session_id, scores=scores, created_at=payload["created_at"])


class UploadBody(BaseModel):
    content: str
    format: str = "csv"
    has_header: bool = False
    name: str = "<upload>"


class AggregateBody(BaseModel):
    eu_size: int = 1
    aggregator: str = "mean"
    shuffle_seed: int | None = None


class AnalyzeBody(BaseModel):
    alpha1: float = 0.05
    bins: int | str = "auto"


class TestBody(BaseModel):
    test_id: str | None = None
    direction: str = "two_sided"
    delta: float = 0.0
    alpha2: float = 0.05
    trials: int = 10000
    seed: int = 0


class EffectBody(BaseModel):
    indices: list[str] = Field(default_factory=lambda: ["cohens_d", "hedges_g"])


class PowerBody(BaseModel):
    method: str
    test_id: str = "t_test"
    alpha: float = 0.05
    direction: str = "two_sided"
    sample_sizes: list[int] | None = None
    trials: int = 1000
    seed: int = 0
    mean_diff: float | None = None
    std_dev: float | None = None
    target_power: float = 0.8


class GridBody(BaseModel):
    systems: dict[str, list[float]]
    test_id: str = "wilcoxon_signed_rank"
    direction: str = "two_sided"
    delta: float = 0.0
    alpha2: float = 0.05
    trials: int = 10000
    seed: int = 0


def create_app(
    data_dir: Path | None = None,
    static_dir: Path | None = None,
    ttl_seconds: float = DEFAULT_TTL_SECONDS,
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD,
    cors_origins: tuple[str, ...] = ("*",),
) -> FastAPI:
    app = FastAPI(title="paircompare service", docs_url="/docs")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(ttl_seconds=ttl_seconds, data_dir=data_dir)

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": "validation", "detail": exc.errors()})

    @app.exception_handler(DataError)
    async def data_handler(request: Request, exc: DataError):
        return JSONResponse(status_code=400, content={"error": "data", "detail": str(exc)})

    @app.exception_handler(DegenerateDataError)
    async def degenerate_handler(request: Request, exc: DegenerateDataError):
        return JSONResponse(status_code=422, content={"error": "degenerate", "detail": str(exc)})

    @app.exception_handler(CeilingExceededError)
    async def ceiling_handler(request: Request, exc: CeilingExceededError):
        return JSONResponse(status_code=422, content={"error": "ceiling", "detail": str(exc)})

    @app.exception_handler(StepOrderError)
    async def order_handler(request: Request, exc: StepOrderError):
        return JSONResponse(status_code=409, content={"error": "step_order", "detail": str(exc)})

    @app.exception_handler(UnknownSessionError)
    async def missing_handler(request: Request, exc: UnknownSessionError):
        return JSONResponse(status_code=404, content={"error": "unknown_session"})

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.post("/api/sessions")
    async def create_session(body: UploadBody):
        if len(body.content.encode("utf-8")) > max_upload_bytes:
            raise DataError(f"upload exceeds the {max_upload_bytes} byte limit")
        scores = parse_scores(
            body.content, fmt=body.format, has_header=body.has_header, source_name=body.name
        )
        session = store.create(scores)
        return {"session_id": session.id, "n_rows": len(scores)}

    @app.post("/api/sessions/{session_id}/aggregate")
    async def aggregate(session_id: str, body: AggregateBody):
        session = store.get(session_id)
        with session.lock:
            config = EuConfig(
                eu_size=body.eu_size,
                aggregator=body.aggregator,
                shuffle_seed=body.shuffle_seed,
            )
            session.eu = aggregate_to_eus(session.scores, config)
            # Downstream state is stale once the sample changes.
            session.analysis = None
            session.test_result = None
            session.effect_estimates = []
            session.power_curve = None
            return {"n": session.eu.n, "provenance": session.eu.provenance.to_dict()}

    def _require_eu(session: Session) -> EuSeries:
        if session.eu is None:
            raise StepOrderError("aggregate must run before this step")
        return session.eu

    @app.post("/api/sessions/{session_id}/analyze")
    async def analyze_step(session_id: str, body: AnalyzeBody):
        session = store.get(session_id)
        with session.lock:
            series = _require_eu(session)
            bins = body.bins if body.bins == "auto" else int(body.bins)
            session.analysis = analyze(series, alpha1=body.alpha1, bins=bins)
            return session.analysis.to_dict()

    @app.post("/api/sessions/{session_id}/test")
    async def test_step(session_id: str, body: TestBody):
        session = store.get(session_id)
        with session.lock:
            series = _require_eu(session)
            test_id = body.test_id
            not_recommended = False
            if test_id is None:
                if session.analysis is None:
                    raise StepOrderError("analyze must run before a recommendation-based test")
                test_id = session.analysis.recommended_tests[0]
            elif session.analysis is not None:
                not_recommended = test_id not in session.analysis.recommended_tests
            config = TestConfig(
                test_id=test_id,
                direction=body.direction,
                delta=body.delta,
                alpha2=body.alpha2,
                trials=body.trials,
                seed=body.seed,
            )
            session.test_result = run_test(series, config)
            payload = session.test_result.to_dict()
            payload["not_recommended"] = not_recommended
            return payload

    @app.post("/api/sessions/{session_id}/effect")
    async def effect_step(session_id: str, body: EffectBody):
        session = store.get(session_id)
        with session.lock:
            series = _require_eu(session)
            estimates = estimate(series, body.indices)
            session.effect_estimates = estimates
            return {"effect_sizes": [e.to_dict() for e in estimates]}

    @app.post("/api/sessions/{session_id}/power")
    async def power_step(session_id: str, body: PowerBody):
        session = store.get(session_id)
        with session.lock:
            if body.method == "prospective":
                if body.mean_diff is None or body.std_dev is None:
                    raise DataError("prospective power needs mean_diff and std_dev")
                spec = ProspectiveSpec(
                    expected_mean_diff=body.mean_diff,
                    expected_std_dev=body.std_dev,
                    target_power=body.target_power,
                    alpha=body.alpha,
                    direction=body.direction
                    if body.direction in ("two_sided", "one_sided")
                    else "two_sided",
                )
                session.prospective = ProspectiveRecord(
                    spec=spec,
                    closed_form_n=closed_form_sample_size(spec),
                    refined_n=prospective_sample_size(spec),
                )
                return session.prospective.to_dict()
            if body.method == "mc":
                if body.mean_diff is None or body.std_dev is None:
                    raise DataError("Monte-Carlo power needs mean_diff and std_dev")
                sizes = body.sample_sizes or [10, 20, 50, 100, 200]
                session.power_curve = retrospective_power_mc(
                    mean=body.mean_diff,
                    std_dev=body.std_dev,
                    test_id=body.test_id,
                    alpha=body.alpha,
                    sample_sizes=sizes,
                    trials=body.trials,
                    seed=body.seed,
                    direction=body.direction,
                )
                return session.power_curve.to_dict()
            if body.method == "bootstrap":
                series = _require_eu(session)
                sizes = body.sample_sizes or sorted(
                    {max(10, series.n // 2), max(10, series.n), series.n * 2}
                )
                session.power_curve = retrospective_power_bootstrap(
                    series,
                    test_id=body.test_id,
                    alpha=body.alpha,
                    sample_sizes=sizes,
                    trials=body.trials,
                    seed=body.seed,
                    direction=body.direction,
                )
                return session.power_curve.to_dict()
            raise DataError(f"unknown power method {body.method!r}")

    @app.get("/api/sessions/{session_id}/report")
    async def report_step(session_id: str, master_seed: int | None = None):
        session = store.get(session_id)
        with session.lock:
            series = _require_eu(session)
            if session.analysis is None:
                raise StepOrderError("analyze must run before the report")
            derived = {}
            if session.test_result is not None:
                derived["test"] = session.test_result.config.seed
            if session.power_curve is not None:
                derived["power"] = session.power_curve.seed
            provenance = ReportProvenance(
                ingest=series.provenance,
                master_seed=master_seed,
                derived_seeds=derived,
            )
            report = assemble(
                provenance=provenance,
                analysis=session.analysis,
                test=session.test_result,
                effect_sizes=tuple(session.effect_estimates),
                power=session.power_curve,
                prospective=session.prospective,
            )
            # Canonical text, byte-identical to the CLI's report.json.
            return Response(content=report.to_json(), media_type="application/json")

    @app.post("/api/grid")
    async def grid_endpoint(body: GridBody):
        config = TestConfig(
            test_id=body.test_id,
            direction=body.direction,
            delta=body.delta,
            alpha2=body.alpha2,
            trials=body.trials,
            seed=body.seed,
        )
        return pairwise_grid(body.systems, config).to_dict()

    @app.get("/api/seeds")
    async def derived_seeds(master_seed: int):
        """Per-step seeds the CLI derives from --seed; lets clients match it."""
        validate_seed(master_seed, "master_seed")
        return {
            "master_seed": master_seed,
            "test": spawn_seed(master_seed, 1),
            "power": spawn_seed(master_seed, 2),
            "sweep": spawn_seed(master_seed, 3),
            "grid": spawn_seed(master_seed, 4),
        }

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="workbench")

    return app
