"""Read-only HTTP API over one immutable dataset.

Every response body embeds the dataset snapshot digest so clients can detect
content changes across restarts. Derived products (grids, bundled geometry)
are cached compute-once per parameter key; nothing ever mutates the dataset,
so handlers are freely concurrent. Errors come back as 400/404 with a
``{"code", "message"}`` body.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Any, Callable, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .bundling import (
    InvalidLevelError,
    Projection,
    bundle_at_level,
    segments_from_transfers,
)
from .core import SEVERITY_ERROR, Copy
from .dataset import Dataset, DatasetSnapshot, take_snapshot
from .heatmaps import (
    DEFAULT_BUCKET_WIDTH,
    GridOrdering,
    HeatmapGrid,
    InvalidBucketError,
    copy_summary,
    flatten_transfers,
    location_heatmap,
    od_matrix,
    time_heatmap,
)
from .queries import (
    NotFoundError,
    QueryKind,
    QueryResult,
    UnknownLabelError,
    query_by_id,
    query_full_journey,
    query_od_cell,
)
from .timelines import (
    DEFAULT_SEGMENT_MS,
    AnimationMode,
    AnimationTimeline,
    NoMappablePathError,
    build_animation_timeline,
)
from .transfers import Transfer


class DatasetValidationError(ValueError):
    """The dataset carries severity=error findings; refusing to serve it."""


class BindFailureError(OSError):
    """The listen address could not be bound."""


@dataclass(frozen=True)
class ServeConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    bucket_width: int = DEFAULT_BUCKET_WIDTH
    current_year: Optional[int] = None


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


class _KeyedCache:
    """Compute-once cache; the lock covers the compute so racers wait."""

    def __init__(self) -> None:
        self._values: dict[Any, Any] = {}
        self._lock = threading.Lock()

    def get(self, key: Any, compute: Callable[[], Any]) -> Any:
        with self._lock:
            if key not in self._values:
                self._values[key] = compute()
            return self._values[key]


def _geo_json(geo) -> Optional[dict]:
    if geo is None:
        return None
    return {"lat": geo.lat, "lon": geo.lon, "country_code": geo.country_code}


def _transfer_json(t: Transfer) -> dict:
    return {
        "copy_id": t.copy_id,
        "j": t.order_index,
        "from_provenance": t.from_provenance,
        "to_provenance": t.to_provenance,
        "interval": list(t.interval) if t.interval is not None else None,
        "consistent": t.consistent,
        "from_geo": _geo_json(t.from_geo),
        "to_geo": _geo_json(t.to_geo),
        "from_country": t.from_country,
        "to_country": t.to_country,
        "mappable": t.mappable,
        "zero_length": t.zero_length,
    }


def _provenance_json(p) -> dict:
    return {
        "order_index": p.order_index,
        "start_year": p.start_year,
        "end_year": p.end_year,
        "place": p.place,
        "geo": _geo_json(p.geo),
        "completeness": {
            "start_time": p.completeness.start_time.value,
            "end_time": p.completeness.end_time.value,
            "location": p.completeness.location.value,
        },
        "evidence": p.evidence,
    }


def _copy_brief(c: Copy) -> dict:
    first, last = c.provenances[0], c.provenances[-1]
    return {
        "mei_id": c.mei_id,
        "istc": c.istc_code,
        "n_provenances": c.n_provenances,
        "mei_url": c.mei_url,
        "origin_place": first.place,
        "origin_country": first.geo.country_code if first.geo else None,
        "current_place": last.place,
        "current_country": last.geo.country_code if last.geo else None,
    }


def _grid_json(grid: HeatmapGrid) -> dict:
    return {
        "row_labels": list(grid.row_labels),
        "col_labels": list(grid.col_labels),
        "counts": [list(row) for row in grid.counts],
        "kind": grid.kind.value,
        "ordering": grid.ordering.value,
    }


def _result_json(result: QueryResult) -> dict:
    spec: dict[str, Any] = {"kind": result.spec.kind.value}
    if result.spec.od is not None:
        spec["from"], spec["to"] = result.spec.od
    if result.spec.journey is not None:
        spec["origin"], spec["destination"] = result.spec.journey
    if result.spec.id is not None:
        spec["id"] = result.spec.id
    return {
        "spec": spec,
        "copy_ids": list(result.copy_ids),
        "matched_transfers": {k: sorted(v) for k, v in result.matched_transfers.items()},
        "stats": {
            "n_copies": result.stats.n_copies,
            "n_matched_transfers": result.stats.n_matched_transfers,
            "n_distinct_countries": result.stats.n_distinct_countries,
        },
    }


def _timeline_json(timeline: AnimationTimeline) -> dict:
    return {
        "mode": timeline.mode.value,
        "total_ms": timeline.total_ms,
        "tracks": [
            {
                "mei_id": tr.mei_id,
                "color_index": tr.color_index,
                "segments": [
                    {
                        "from": [s.from_lat, s.from_lon],
                        "to": [s.to_lat, s.to_lon],
                        "start_ms": s.start_ms,
                        "duration_ms": s.duration_ms,
                        "j": s.j,
                    }
                    for s in tr.segments
                ],
            }
            for tr in timeline.tracks
        ],
        "skipped": [list(pair) for pair in timeline.skipped],
    }


def create_app(dataset: Dataset, *, bucket_width: int = DEFAULT_BUCKET_WIDTH,
               current_year: Optional[int] = None) -> FastAPI:
    """Assemble the API over a validated dataset.

    Raises DatasetValidationError when any severity=error finding exists.
    """
    errors = [f for f in dataset.findings() if f.severity == SEVERITY_ERROR]
    if errors:
        raise DatasetValidationError(
            f"{len(errors)} error finding(s), first: {errors[0].rule} on {errors[0].record_id}")

    app = FastAPI(title="provenance-atlas", docs_url=None, redoc_url=None)
    snapshot: DatasetSnapshot = take_snapshot(dataset)
    cache = _KeyedCache()

    geo_points = [p.geo for c in dataset.copies for p in c.provenances if p.geo is not None]
    projection = Projection.fit(geo_points)

    def envelope(**payload: Any) -> dict:
        return {"digest": snapshot.digest, **payload}

    @app.exception_handler(ApiError)
    async def _api_error(_: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(status_code=exc.status,
                            content={"code": exc.code, "message": exc.message})

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.get("/api/snapshot")
    def get_snapshot() -> dict:
        return envelope(
            loaded_at=snapshot.loaded_at,
            counts={
                "editions": snapshot.n_editions,
                "copies": snapshot.n_copies,
                "provenances": snapshot.n_provenances,
                "transfers": snapshot.n_transfers,
            },
        )

    @app.get("/api/editions")
    def get_editions() -> dict:
        return envelope(editions=[
            {
                "istc": e.istc_code,
                "title": e.title,
                "print_place": e.print_place,
                "print_year": e.print_year,
            }
            for e in dataset.editions
        ])

    @app.get("/api/copies")
    def get_copies(limit: Optional[int] = None, offset: int = 0) -> dict:
        briefs = [_copy_brief(c) for c in dataset.copies]
        window = briefs[offset: offset + limit if limit is not None else None]
        return envelope(total=len(briefs), copies=window)

    @app.get("/api/copies/{mei_id}")
    def get_copy(mei_id: str, query_from: Optional[str] = None,
                 query_to: Optional[str] = None) -> dict:
        copy = dataset.copy(mei_id)
        if copy is None:
            raise ApiError(404, "NOT_FOUND", f"no copy {mei_id!r}")
        active = (query_from, query_to) if query_from is not None and query_to is not None else None
        summary = copy_summary(copy, active)
        return envelope(
            copy=_copy_brief(copy),
            journey=[
                {
                    "provenance": _provenance_json(node.provenance),
                    "transfer": _transfer_json(node.transfer) if node.transfer else None,
                }
                for node in summary.journey_nodes
            ],
            transfers=[_transfer_json(t) for t in dataset.transfers_of(mei_id)],
            summary={
                "n_provenances": summary.n_provenances,
                "completeness_spokes": [list(s) for s in summary.completeness_spokes],
                "highlight": sorted(summary.highlight),
            },
        )

    @app.get("/api/heatmaps/od")
    def get_od(order: str = "frequency") -> dict:
        try:
            ordering = GridOrdering(order)
        except ValueError:
            raise ApiError(400, "INVALID_ORDERING", f"unknown ordering {order!r}")
        if ordering is GridOrdering.DATASET:
            raise ApiError(400, "INVALID_ORDERING", "od grid orders by frequency or alphabetical")
        grid = cache.get(("od", ordering),
                         lambda: od_matrix(flatten_transfers(dataset), ordering))
        return envelope(grid=_grid_json(grid))

    @app.get("/api/heatmaps/time")
    def get_time(bucket: Optional[int] = None) -> dict:
        width = bucket if bucket is not None else bucket_width
        try:
            grid = cache.get(("time", width, current_year),
                             lambda: time_heatmap(dataset, width, current_year))
        except InvalidBucketError as exc:
            raise ApiError(400, "INVALID_BUCKET", str(exc))
        return envelope(grid=_grid_json(grid))

    @app.get("/api/heatmaps/location")
    def get_location() -> dict:
        grid = cache.get(("location",), lambda: location_heatmap(dataset))
        return envelope(grid=_grid_json(grid))

    @app.get("/api/query")
    def get_query(kind: str,
                  from_country: Optional[str] = None,
                  to: Optional[str] = None,
                  origin: Optional[str] = None,
                  destination: Optional[str] = None,
                  id: Optional[str] = None,
                  request: Request = None) -> dict:
        # FastAPI cannot declare a parameter literally named "from".
        if request is not None and from_country is None:
            from_country = request.query_params.get("from")
        try:
            if kind == QueryKind.OD_CELL.value:
                if from_country is None or to is None:
                    raise ApiError(400, "MISSING_PARAM", "od query needs from and to")
                result = query_od_cell(dataset, from_country, to)
            elif kind == QueryKind.FULL_JOURNEY.value:
                if origin is None or destination is None:
                    raise ApiError(400, "MISSING_PARAM", "journey query needs origin and destination")
                result = query_full_journey(dataset, origin, destination)
            elif kind == QueryKind.MEI_ID.value:
                if id is None:
                    raise ApiError(400, "MISSING_PARAM", "id query needs id")
                result = query_by_id(dataset, id)
            else:
                raise ApiError(400, "INVALID_KIND", f"unknown query kind {kind!r}")
        except UnknownLabelError as exc:
            raise ApiError(400, "UNKNOWN_LABEL", str(exc))
        except NotFoundError as exc:
            raise ApiError(404, "NOT_FOUND", str(exc.args[0]))
        return envelope(result=_result_json(result))

    @app.get("/api/bundle")
    def get_bundle(level: int = 0) -> dict:
        def compute() -> list[dict]:
            segments = segments_from_transfers(flatten_transfers(dataset), projection)
            polylines = bundle_at_level(segments, level)
            return [
                {
                    "copy_id": poly.id[0],
                    "j": poly.id[1],
                    "points": [list(projection.unproject(p)) for p in poly.points],
                }
                for poly in polylines
            ]
        try:
            payload = cache.get(("bundle", level), compute)
        except InvalidLevelError as exc:
            raise ApiError(400, "INVALID_LEVEL", str(exc))
        return envelope(level=level, polylines=payload)

    @app.post("/api/animation")
    async def post_animation(request: Request) -> dict:
        body = await request.json()
        ids = body.get("ids")
        mode_name = body.get("mode")
        if not isinstance(ids, list) or not all(isinstance(i, str) for i in ids) or not ids:
            raise ApiError(400, "MISSING_PARAM", "body needs a non-empty ids list")
        try:
            mode = AnimationMode(mode_name)
        except ValueError:
            raise ApiError(400, "INVALID_MODE", f"unknown animation mode {mode_name!r}")
        segment_ms = body.get("segment_ms", DEFAULT_SEGMENT_MS)
        if not isinstance(segment_ms, int) or segment_ms < 1:
            raise ApiError(400, "INVALID_DURATION", "segment_ms must be a positive integer")
        try:
            timeline = build_animation_timeline(dataset, ids, mode, segment_ms)
        except NotFoundError as exc:
            raise ApiError(404, "NOT_FOUND", str(exc.args[0]))
        except NoMappablePathError as exc:
            raise ApiError(400, "NO_MAPPABLE_PATH", str(exc))
        return envelope(timeline=_timeline_json(timeline))

    return app


def serve(dataset: Dataset, config: ServeConfig = ServeConfig()) -> None:
    """Validate, build the app, and block serving it."""
    import uvicorn

    app = create_app(dataset, bucket_width=config.bucket_width,
                     current_year=config.current_year)
    try:
        uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    except OSError as exc:
        raise BindFailureError(f"BIND_FAILURE: {exc}") from exc
