"""HTTP JSON API over the query pipeline.

Stateless between requests: every tunable travels in the request body, so
console sliders re-rank by re-querying. All handlers read the same
immutable workspace snapshot; malformed JSON is a 400, constraint or
lookup errors are a 422/404 carrying the error class name.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from . import psr, topics, trajops
from .errors import TrajectaError, UnknownRegion
from .relevance import ScoredPoi, bm25_term
from .workspace import LoadedWorkspace, run_query, to_canonical_json


def _json_response(payload, status_code: int = 200) -> Response:
    return Response(
        content=to_canonical_json(payload),
        status_code=status_code,
        media_type="application/json",
    )


def _error(name: str, detail: str, status_code: int) -> Response:
    return _json_response({"error": name, "detail": detail}, status_code)


async def _read_json(request: Request):
    body = await request.body()
    try:
        parsed = json.loads(body)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON: {exc}") from None
    if not isinstance(parsed, dict):
        raise ValueError("request body must be a JSON object")
    return parsed


def create_app(ws: LoadedWorkspace, timer=None, cors_origins=("*",)) -> FastAPI:
    app = FastAPI(title="trajecta", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )

    @app.get("/health")
    async def health():
        return _json_response({"status": "ok", "partitions": ws.index.partition_count})

    @app.post("/query")
    async def query(request: Request):
        try:
            body = await _read_json(request)
        except ValueError as exc:
            return _error("BadRequest", str(exc), 400)
        try:
            payload = run_query(ws, body, timer=timer)
        except TrajectaError as exc:
            return _error(type(exc).__name__, str(exc), 422)
        except ValueError as exc:
            return _error("BadRequest", str(exc), 422)
        return _json_response(payload)

    @app.get("/pois")
    async def pois(q: str = "", k: int = 10):
        from .docgen import tokenize

        words = tokenize(q)
        if not words or k < 1:
            return _json_response({"pois": []})
        scored: list[ScoredPoi] = []
        for doc in ws.poi_docs:
            hits = [(w, bm25_term(w, doc, ws.params)) for w in words]
            total = sum(c for _, c in hits)
            if total > 0.0:
                scored.append(ScoredPoi(doc.poi_id, total, hits))
        scored.sort(key=lambda sp: (-sp.score, sp.poi_id))
        payload = []
        for sp in scored[:k]:
            poi = ws.poi_by_id[sp.poi_id]
            payload.append({
                "poi_id": sp.poi_id,
                "name": poi.name,
                "category": poi.category,
                "station_id": ws.assignment.poi_to_station.get(sp.poi_id),
                "lon": poi.lon,
                "lat": poi.lat,
                "score": float(sp.score),
            })
        return _json_response({"pois": payload})

    @app.get("/regions/{station_id}")
    async def region(station_id: str):
        station = ws.station_by_id.get(station_id)
        if station is None:
            return _error("UnknownStation", station_id, 404)
        try:
            q = topics.region_semantics(ws.model, station_id).q
        except UnknownRegion as exc:
            return _error(type(exc).__name__, str(exc), 404)
        polygons = psr.voronoi_polygons(ws.stations, ws.bbox, ws.origin)
        polygon = next(p for p in polygons if p.station_id == station_id)
        return _json_response({
            "station_id": station_id,
            "lon": station.lon,
            "lat": station.lat,
            "topics": [float(x) for x in q],
            "poi_count": len(ws.assignment.station_to_pois.get(station_id, [])),
            "polygon": psr.polygon_json(polygon),
        })

    @app.get("/trajectories/{trajectory_id}")
    async def trajectory(trajectory_id: str):
        traj = ws.trajectories.get(trajectory_id)
        if traj is None:
            return _error("UnknownTrajectory", trajectory_id, 404)
        doc = ws.index.docs_by_id[trajectory_id]
        points = []
        for entry in doc.entries:
            q = topics.region_semantics(ws.model, entry.station_id).q
            points.append({
                "station_id": entry.station_id,
                "lon": entry.lon,
                "lat": entry.lat,
                "timestamp": entry.timestamp,
                "time_word": entry.time_word,
                "topics": [float(x) for x in q],
            })
        stops = [
            {"region_id": r, "start": s, "end": e, "duration_s": d}
            for r, s, e, d in trajops.stopovers(traj)
        ]
        return _json_response({"id": trajectory_id, "points": points, "stopovers": stops})

    @app.post("/similar")
    async def similar(request: Request):
        try:
            body = await _read_json(request)
        except ValueError as exc:
            return _error("BadRequest", str(exc), 400)
        id_a = body.get("id_a")
        id_b = body.get("id_b")
        if id_a not in ws.trajectories or id_b not in ws.trajectories:
            return _error("UnknownTrajectory", f"{id_a!r} or {id_b!r}", 404)
        weights = trajops.MatchWeights(
            w1=float(body.get("w1", 1.0)), w2=float(body.get("w2", 1.0))
        )
        sem_a = topics.trajectory_semantics(ws.model, ws.trajectories[id_a])
        sem_b = topics.trajectory_semantics(ws.model, ws.trajectories[id_b])
        solver = trajops.distance_ordered if body.get("ordered", True) else trajops.distance_unordered
        result = solver(sem_a, sem_b, weights)
        return _json_response({
            "id_a": id_a,
            "id_b": id_b,
            "ordered": bool(body.get("ordered", True)),
            "cost": float(result.cost),
            "matched": [[int(i), int(j)] for i, j in result.matched],
            "unmatched_a": [int(i) for i in result.unmatched_a],
            "unmatched_b": [int(j) for j in result.unmatched_b],
        })

    @app.get("/topics")
    async def topic_listing():
        words = sorted(ws.model.vocab, key=lambda w: ws.model.vocab[w])
        payload = []
        for t in range(ws.model.n_topics):
            row = ws.model.phi[t]
            order = sorted(range(len(words)), key=lambda w: (-row[w], words[w]))[:5]
            payload.append({
                "index": t,
                "label": ws.topic_labels[t],
                "top_words": [
                    {"word": words[w], "p": float(row[w])} for w in order
                ],
            })
        return _json_response({"topics": payload})

    return app


def serve(ws: LoadedWorkspace, port: int = 8000, host: str = "127.0.0.1") -> None:
    import uvicorn

    uvicorn.run(create_app(ws), host=host, port=port, log_level="warning")
