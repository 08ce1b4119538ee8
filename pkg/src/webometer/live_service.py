"""HTTP service exposing live TLD, file-format, and time-series analyses
as JSON, plus the raw /search wire protocol over any configured backend."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import analytics, backend as be, timeseries
from .config import Config, Runtime
from .errors import (
    BackendUnavailableError,
    InsufficientDataError,
    QueryError,
    QuotaError,
    RangeError,
    UrlParseError,
    WebometerError,
)
from .model import parse_query
from .timeseries import SampleStore

DEFAULT_PORT = 8077
DEFAULT_TLD_N = 250
DEFAULT_MAX_LAG = 10


class ApiError(Exception):
    def __init__(self, status: int, kind: str, message: str):
        self.status = status
        self.kind = kind
        self.message = message


def _error_response(status: int, kind: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message, "kind": kind})


def create_app(
    runtime: Runtime,
    store: SampleStore | None = None,
    cors_origins: list[str] | None = None,
    max_lag: int = DEFAULT_MAX_LAG,
) -> FastAPI:
    app = FastAPI(title="webometer live service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins if cors_origins is not None else ["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    def get_backend(name: str | None) -> be.SearchBackend:
        if name is None:
            name = next(iter(runtime.backends))
        backend = runtime.backends.get(name)
        if backend is None:
            raise ApiError(400, "bad-request", f"unknown backend {name!r}")
        return backend

    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError):
        return _error_response(exc.status, exc.kind, exc.message)

    @app.exception_handler(WebometerError)
    async def webometer_error_handler(request: Request, exc: WebometerError):
        if isinstance(exc, QuotaError):
            return JSONResponse(
                status_code=429,
                content={
                    "error": str(exc),
                    "kind": "quota",
                    "reset": exc.reset.isoformat(),
                },
            )
        if isinstance(exc, BackendUnavailableError):
            return _error_response(502, "backend-unavailable", str(exc))
        if isinstance(exc, (QueryError, RangeError, UrlParseError, InsufficientDataError)):
            return _error_response(400, "bad-request", str(exc))
        return _error_response(500, "internal", str(exc))

    @app.get("/api/tld")
    def api_tld(
        q: str = "",
        n: int = DEFAULT_TLD_N,
        backend: str | None = None,
        fit: str = analytics.OLS_LOGLOG,
    ):
        if not q:
            raise ApiError(400, "bad-request", "missing query parameter q")
        bk = get_backend(backend)
        if not (1 <= n <= bk.per_query_result_cap):
            raise ApiError(
                400, "bad-request", f"n must be in [1, {bk.per_query_result_cap}]"
            )
        if fit not in analytics.FIT_METHODS:
            raise ApiError(400, "bad-request", f"unknown fit method {fit!r}")
        query = parse_query(q)
        urls = be.fetch_top(bk, query, n)
        if urls.truncated:
            raise BackendUnavailableError("backend failed before n results")
        dist = analytics.tld_distribution(list(urls))
        fit_doc = None
        if len(dist.ranked) >= 3:
            fit_doc = analytics.fit_power_law(dist, fit).to_json_dict()
        return {
            "query": q,
            "n_requested": n,
            "n_analyzed": dist.total_urls,
            "skipped": dist.skipped,
            "ranked": [
                {"rank": r, "tld": t, "count": c} for r, t, c in dist.ranked
            ],
            "fit": fit_doc,
            "quota_remaining": (
                bk.quota.remaining() if bk.quota is not None else None
            ),
        }

    @app.get("/api/formats")
    def api_formats(
        q: str = "",
        mode: str = analytics.FACET_QUERY,
        backend: str | None = None,
        n: int = 100,
    ):
        if not q:
            raise ApiError(400, "bad-request", "missing query parameter q")
        if mode not in analytics.FORMAT_MODES:
            raise ApiError(400, "bad-request", f"unknown mode {mode!r}")
        bk = get_backend(backend)
        query = parse_query(q)
        extensions = None
        if mode == analytics.FACET_QUERY:
            extensions = [e for e, _ in runtime.config.sim.filetype_weights]
        dist = analytics.format_distribution(
            bk, query, extensions=extensions, mode=mode, k=n
        )
        doc = dist.to_json_dict()
        doc["query"] = q
        return doc

    @app.get("/api/timeseries")
    def api_timeseries(q: str = ""):
        if not q:
            raise ApiError(400, "bad-request", "missing query parameter q")
        if store is None:
            raise ApiError(404, "not-found", "no sample store configured")
        interfaces = store.interfaces(q)
        if len(interfaces) < 2:
            raise ApiError(404, "not-found", f"no series for query id {q!r}")
        names = list(runtime.backends)
        pair = [n for n in names if n in interfaces][:2] or interfaces[:2]
        x = store.series(q, pair[0])
        y = store.series(q, pair[1])
        usable_lag = min(max_lag, max(0, len(x.points) - 3))
        lag = timeseries.lag_correlate(x, y, usable_lag)
        return {
            "query": q,
            "series": {
                s.interface: [
                    {"day": d.isoformat(), "hits": h} for d, h in s.points
                ]
                for s in (x, y)
            },
            "lag": lag.to_json_dict(),
        }

    @app.get("/search")
    def wire_search(
        q: str = "",
        start: int = 0,
        num: int = 10,
        filetype: str | None = None,
        link: str | None = None,
        backend: str | None = None,
    ):
        bk = get_backend(backend)
        if link:
            query = parse_query(f"link:{link}")
        else:
            if not q:
                raise ApiError(400, "bad-request", "missing query parameter q")
            query = parse_query(q)
        if filetype:
            from dataclasses import replace

            query = replace(query, filetype_filter=filetype.lower())
        page = be.search(bk, query, start=start, page_size=num)
        return {
            "estimatedTotal": page.estimated_total,
            "start": page.start,
            "results": [
                {
                    "rank": r.rank,
                    "url": r.url,
                    "title": r.title,
                    "snippet": r.snippet,
                }
                for r in page.results
            ],
        }

    return app


def serve(
    config: Config,
    port: int = DEFAULT_PORT,
    host: str = "127.0.0.1",
    store_path: str | None = None,
):
    """Run the service until interrupted (uvicorn)."""
    import uvicorn

    runtime = Runtime(config)
    store = None
    path = store_path or config.store_path
    if path:
        store = SampleStore(path)
    app = create_app(runtime, store=store)
    uvicorn.run(app, host=host, port=port, log_level="info")
