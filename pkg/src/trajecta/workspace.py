"""Workspace layout, stage artifacts and the end-to-end query pipeline.

Every pipeline stage persists its output under the workspace root, so
stages re-run independently and both the CLI and the HTTP service load
the same artifacts. `run_query` is the single implementation behind
`trajecta query` and POST /query: the service adds no logic of its own.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field

from . import docgen, embed, index as index_mod, nlq, psr, relevance, topics
from .core import Station, Trajectory, TrajectoryPoint
from .dictionaries import Dictionaries
from .dictionaries import defaults as default_dictionaries
from .dictionaries import load as load_dictionaries
from .errors import MissingArtifact, NoSpatialConstraint


@dataclass
class WorkspaceLayout:
    root: str

    @property
    def data_dir(self):
        return os.path.join(self.root, "data")

    @property
    def docs_dir(self):
        return os.path.join(self.root, "docs")

    @property
    def models_dir(self):
        return os.path.join(self.root, "models")

    @property
    def index_dir(self):
        return os.path.join(self.root, "index")

    @property
    def config_dir(self):
        return os.path.join(self.root, "config")

    def path(self, *parts) -> str:
        return os.path.join(self.root, *parts)

    def require(self, path: str, what: str, hint: str) -> str:
        if not os.path.exists(path):
            raise MissingArtifact(what, path, hint)
        return path


def resolve_root(explicit: str | None = None) -> str:
    if explicit:
        return explicit
    return os.environ.get("TRAJECTA_HOME", os.getcwd())


@dataclass
class LoadedWorkspace:
    stations: list[Station]
    pois: list
    assignment: psr.RegionAssignment
    trajectory_docs: list[docgen.TrajectoryDocument]
    poi_docs: list[docgen.PoiDocument]
    model: topics.TopicModel
    space: embed.EmbeddingSpace
    index: index_mod.TemporalTextualIndex
    params: relevance.Bm25Params
    dictionaries: Dictionaries
    topic_label_overrides: dict[int, str] = field(default_factory=dict)

    station_by_id: dict[str, Station] = field(default_factory=dict)
    poi_by_id: dict = field(default_factory=dict)
    trajectories: dict[str, Trajectory] = field(default_factory=dict)
    origin: tuple[float, float] = (0.0, 0.0)
    bbox: tuple[float, float, float, float] = (0.0, 0.0, 1.0, 1.0)

    def __post_init__(self):
        self.station_by_id = {s.id: s for s in self.stations}
        self.poi_by_id = {p.id: p for p in self.pois}
        for tid, doc in self.index.docs_by_id.items():
            points = [TrajectoryPoint(e.station_id, e.timestamp) for e in doc.entries]
            self.trajectories[tid] = Trajectory(tid, points)
        self.origin = psr.stations_origin(self.stations)
        xs, ys = [], []
        for s in self.stations:
            x, y = psr.project(s.lon, s.lat, self.origin)
            xs.append(x)
            ys.append(y)
        pad = 0.1 * max(max(xs) - min(xs), max(ys) - min(ys), 1000.0)
        self.bbox = (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)

    @property
    def topic_labels(self) -> list[str]:
        labels = list(self.model.topic_labels)
        for i, name in self.topic_label_overrides.items():
            if 0 <= i < len(labels):
                labels[i] = name
        return labels


def load_workspace(root: str | None = None) -> LoadedWorkspace:
    """Load every stage artifact, failing fast on whichever is missing."""
    ws = WorkspaceLayout(resolve_root(root))
    from .core import load_pois, load_stations

    stations = load_stations(ws.require(ws.path("data", "stations.csv"), "stations.csv", "synth"))
    pois = load_pois(ws.require(ws.path("data", "pois.csv"), "pois.csv", "synth"))

    assignment_path = ws.require(ws.path("docs", "assignment.json"), "region assignment", "ingest")
    with open(assignment_path, encoding="utf-8") as fh:
        poi_to_station = json.load(fh)["poi_to_station"]
    station_to_pois: dict[str, list[str]] = {s.id: [] for s in stations}
    for pid in sorted(poi_to_station):
        station_to_pois[poi_to_station[pid]].append(pid)
    assignment = psr.RegionAssignment(poi_to_station, station_to_pois)
    for p in pois:
        p.region_id = poi_to_station.get(p.id)

    trajectory_docs = docgen.load_trajectory_documents(
        ws.require(ws.path("docs", "trajectory_documents.jsonl"), "trajectory documents", "ingest")
    )
    poi_docs = docgen.load_poi_documents(
        ws.require(ws.path("docs", "poi_documents.jsonl"), "POI documents", "ingest")
    )
    model = topics.load_model(
        ws.require(ws.path("models", "lda.json"), "topic model", "train-topics")
    )
    space = embed.load_embeddings(
        ws.require(ws.path("models", "vectors.txt"), "word vectors", "train-embed")
    )
    ws.require(ws.path("index", "meta.json"), "index", "build-index")
    ttindex = index_mod.load_index(ws.index_dir)

    dict_path = ws.path("config", "dictionaries.json")
    dictionaries = load_dictionaries(dict_path) if os.path.exists(dict_path) else default_dictionaries()
    label_path = ws.path("config", "topic_labels.json")
    overrides: dict[int, str] = {}
    if os.path.exists(label_path):
        with open(label_path, encoding="utf-8") as fh:
            overrides = {int(k): str(v) for k, v in json.load(fh).items()}

    params = relevance.Bm25Params.from_documents(poi_docs)
    return LoadedWorkspace(
        stations=stations,
        pois=pois,
        assignment=assignment,
        trajectory_docs=trajectory_docs,
        poi_docs=poi_docs,
        model=model,
        space=space,
        index=ttindex,
        params=params,
        dictionaries=dictionaries,
        topic_label_overrides=overrides,
    )


def _window_json(w) -> dict:
    return {
        "start": None if w.start == float("-inf") else w.start,
        "end": None if w.end == float("inf") else w.end,
        "daily": w.daily,
    }


def to_canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def run_query(ws: LoadedWorkspace, request: dict, timer=None) -> dict:
    """The full query pipeline: parse, score POIs, retrieve, assemble.

    ``request`` mirrors the POST /query body; ``timer`` is injectable so
    callers that need byte-stable output can fix the clock.
    """
    timer = timer or time.perf_counter
    t0 = timer()

    sentence = request.get("sentence", "")
    if not isinstance(sentence, str):
        raise ValueError("sentence must be a string")
    topic_weights = request.get("topic_weights")
    if topic_weights is not None:
        topic_weights = [float(x) for x in topic_weights]
        if len(topic_weights) != ws.model.n_topics:
            raise ValueError(
                f"topic_weights must have length {ws.model.n_topics}, got {len(topic_weights)}"
            )
    defaults = nlq.QueryDefaults(
        alpha=float(request.get("alpha", 1.0)),
        beta=float(request.get("beta", 0.0)),
        k=int(request.get("k", 10)),
        topic_weights=topic_weights,
    )
    if defaults.k < 1:
        raise ValueError("k must be >= 1")
    max_results = int(request.get("max_results", 100))
    overrides = request.get("word_overrides") or None

    words = nlq.classify_words(sentence, ws.dictionaries, overrides)
    constraints = nlq.extract_constraints(sentence, defaults, ws.dictionaries, overrides)
    if not constraints.groups:
        raise NoSpatialConstraint()

    per_group = relevance.top_k_pois(
        constraints, ws.space, ws.model, ws.poi_docs, ws.params, ws.assignment
    )
    scored = index_mod.query(ws.index, constraints, per_group, ws.assignment)

    groups_payload = []
    for group, pois in zip(constraints.groups, per_group):
        keyword_payload = []
        for word in group.keywords:
            try:
                near = embed.neighbors(ws.space, word)
            except embed.UnknownWord:
                near = []
            keyword_payload.append({
                "word": word,
                "neighbors": [{"word": w, "sim": float(s)} for w, s in near],
            })
        poi_payload = []
        for sp in pois:
            poi = ws.poi_by_id.get(sp.poi_id)
            poi_payload.append({
                "poi_id": sp.poi_id,
                "name": poi.name if poi else "",
                "category": poi.category if poi else "",
                "station_id": ws.assignment.poi_to_station.get(sp.poi_id),
                "lon": poi.lon if poi else 0.0,
                "lat": poi.lat if poi else 0.0,
                "score": float(sp.score),
                "keyword_hits": [[w, float(c)] for w, c in sp.keyword_hits],
            })
        groups_payload.append({
            "keywords": keyword_payload,
            "order_index": group.order_index,
            "pois": poi_payload,
        })

    trajectory_payload = []
    for st in scored[:max_results]:
        doc = ws.index.docs_by_id[st.trajectory_id]
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
        trajectory_payload.append({
            "id": st.trajectory_id,
            "relevance": float(st.relevance),
            "matched": [
                [[int(i), pid, int(ts)] for i, pid, ts in glist] for glist in st.matched
            ],
            "points": points,
        })

    elapsed_ms = (timer() - t0) * 1000.0
    return {
        "constraints": {
            "sentence": sentence,
            "words": [{"text": w.text, "kind": w.kind} for w in words],
            "windows": [_window_json(w) for w in constraints.windows],
            "groups": [
                {"keywords": g.keywords, "order_index": g.order_index}
                for g in constraints.groups
            ],
            "combinator": constraints.combinator,
            "alpha": constraints.alpha,
            "beta": constraints.beta,
            "topic_weights": constraints.topic_weights,
            "k": constraints.k,
        },
        "groups": groups_payload,
        "trajectories": trajectory_payload,
        "total_results": len(scored),
        "timing_ms": elapsed_ms,
    }
