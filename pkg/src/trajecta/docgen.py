"""Textualization: trajectories, regions and POIs become documents.

Each trajectory point is enriched with a day-part word and the names and
categories of the POIs inside its region; regions become bags of POI
category words (one word per POI) for topic modeling; POIs become short
token documents for BM25.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .core import SECONDS_PER_DAY, Poi, Trajectory
from .dictionaries import Dictionaries
from .psr import RegionAssignment

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase and split on any non-alphanumeric character."""
    return _TOKEN_RE.findall(text.lower())


def category_word(category: str) -> str:
    """Normalize a category to a single region-document word."""
    return "_".join(tokenize(category))


@dataclass
class DocEntry:
    timestamp: int
    time_word: str
    station_id: str
    lon: float
    lat: float
    poi_names: list[list[str]]  # one token list per POI of the region
    poi_categories: list[str]  # flattened category tokens, POI-id order


@dataclass
class TrajectoryDocument:
    trajectory_id: str
    entries: list[DocEntry]


@dataclass
class RegionDocument:
    region_id: str
    words: list[str]  # multiset; exactly one word per POI in the region


@dataclass
class PoiDocument:
    poi_id: str
    tokens: list[str]

    @property
    def length(self) -> int:
        return len(self.tokens)


def build_documents(
    trajectories: list[Trajectory],
    stations,
    assignment: RegionAssignment,
    pois: list[Poi],
    temporal: Dictionaries,
) -> tuple[list[TrajectoryDocument], list[RegionDocument], list[PoiDocument]]:
    """Build all three document kinds in one deterministic pass.

    POIs are listed in ascending id within every entry so output is
    byte-stable for identical inputs.
    """
    station_by_id = {s.id: s for s in stations}
    poi_by_id = {p.id: p for p in pois}

    names_by_station: dict[str, list[list[str]]] = {}
    cats_by_station: dict[str, list[str]] = {}
    region_docs: list[RegionDocument] = []
    for sid in sorted(assignment.station_to_pois):
        poi_ids = assignment.station_to_pois[sid]  # already sorted
        names_by_station[sid] = [tokenize(poi_by_id[pid].name) for pid in poi_ids]
        cats: list[str] = []
        for pid in poi_ids:
            cats.extend(tokenize(poi_by_id[pid].category))
        cats_by_station[sid] = cats
        region_docs.append(
            RegionDocument(sid, [category_word(poi_by_id[pid].category) for pid in poi_ids])
        )

    empty_names: list[list[str]] = []
    empty_cats: list[str] = []
    traj_docs: list[TrajectoryDocument] = []
    for traj in trajectories:
        entries = []
        for point in traj.points:
            station = station_by_id[point.station_id]
            time_word = temporal.time_word_for(point.timestamp % SECONDS_PER_DAY)
            entries.append(
                DocEntry(
                    timestamp=point.timestamp,
                    time_word=time_word,
                    station_id=point.station_id,
                    lon=station.lon,
                    lat=station.lat,
                    poi_names=names_by_station.get(point.station_id, empty_names),
                    poi_categories=cats_by_station.get(point.station_id, empty_cats),
                )
            )
        traj_docs.append(TrajectoryDocument(traj.id, entries))

    poi_docs = [
        PoiDocument(
            p.id,
            tokenize(p.name) + tokenize(p.category) + tokenize(p.description),
        )
        for p in sorted(pois, key=lambda p: p.id)
    ]
    return traj_docs, region_docs, poi_docs


# --- JSON-lines persistence ------------------------------------------------

def entry_to_json(index: int, entry: DocEntry) -> dict:
    return {
        "i": index,
        "timestamp": entry.timestamp,
        "time_word": entry.time_word,
        "station_id": entry.station_id,
        "lon": entry.lon,
        "lat": entry.lat,
        "poi_names": entry.poi_names,
        "poi_categories": entry.poi_categories,
    }


def entry_from_json(raw: dict) -> tuple[int, DocEntry]:
    return raw["i"], DocEntry(
        timestamp=raw["timestamp"],
        time_word=raw["time_word"],
        station_id=raw["station_id"],
        lon=raw["lon"],
        lat=raw["lat"],
        poi_names=[list(toks) for toks in raw["poi_names"]],
        poi_categories=list(raw["poi_categories"]),
    )


def save_trajectory_documents(docs: list[TrajectoryDocument], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            line = {
                "trajectory_id": doc.trajectory_id,
                "entries": [entry_to_json(i, e) for i, e in enumerate(doc.entries)],
            }
            fh.write(json.dumps(line, sort_keys=True, separators=(",", ":")))
            fh.write("\n")


def load_trajectory_documents(path) -> list[TrajectoryDocument]:
    docs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            raw = json.loads(line)
            entries = [entry_from_json(e)[1] for e in raw["entries"]]
            docs.append(TrajectoryDocument(raw["trajectory_id"], entries))
    return docs


def save_region_documents(docs: list[RegionDocument], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps({"region_id": doc.region_id, "words": doc.words},
                                sort_keys=True, separators=(",", ":")))
            fh.write("\n")


def load_region_documents(path) -> list[RegionDocument]:
    with open(path, encoding="utf-8") as fh:
        return [RegionDocument(d["region_id"], list(d["words"]))
                for d in map(json.loads, fh)]


def save_poi_documents(docs: list[PoiDocument], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps({"poi_id": doc.poi_id, "tokens": doc.tokens},
                                sort_keys=True, separators=(",", ":")))
            fh.write("\n")


def load_poi_documents(path) -> list[PoiDocument]:
    with open(path, encoding="utf-8") as fh:
        return [PoiDocument(d["poi_id"], list(d["tokens"])) for d in map(json.loads, fh)]
