"""Time-partitioned inverted index over trajectory documents.

Documents are split into uniform time windows; each partition holds an
inverted keyword -> trajectory-id map plus the document slice for that
window, so partition hits can be refined to point level without touching
the rest of the corpus. Partition lookup is a single binary search.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .core import TimeWindow
from .docgen import DocEntry, TrajectoryDocument, entry_from_json, entry_to_json
from .errors import EmptyCorpus, NoCandidates
from .nlq import QueryConstraints
from .psr import RegionAssignment
from .relevance import ScoredPoi


@dataclass
class Partition:
    start: int
    postings: dict[str, list[str]]  # keyword -> sorted, deduplicated ids
    docs: dict[str, list[tuple[int, DocEntry]]]  # id -> (point index, entry)


@dataclass
class TemporalTextualIndex:
    window_size: int
    partition_starts: list[int]
    partitions: list[Partition]
    docs_by_id: dict[str, TrajectoryDocument]
    station_keywords: dict[str, frozenset] = field(default_factory=dict)

    @property
    def partition_count(self) -> int:
        return len(self.partitions)


@dataclass
class ScoredTrajectory:
    trajectory_id: str
    relevance: float
    matched: list[list[tuple[int, str, int]]]  # per group: (point idx, poi id, ts)


def entry_matches(index: TemporalTextualIndex, entry: DocEntry, key: str) -> bool:
    if key == entry.time_word:
        return True
    static = index.station_keywords.get(entry.station_id)
    return static is not None and key in static


def build_index(
    trajectory_docs: list[TrajectoryDocument],
    window_size: int = 600,
) -> TemporalTextualIndex:
    """Partition documents by time and build per-partition postings.

    Indexed keywords per point: the station id, the POI name tokens and
    category tokens of its region, and the day-part word. A trajectory is
    listed under a keyword in a partition iff one of its points inside
    that window carries the keyword.
    """
    if window_size <= 0:
        raise ValueError("window_size must be positive")
    entries_exist = any(doc.entries for doc in trajectory_docs)
    if not trajectory_docs or not entries_exist:
        raise EmptyCorpus("trajectory document corpus")

    min_ts = min(e.timestamp for d in trajectory_docs for e in d.entries)
    max_ts = max(e.timestamp for d in trajectory_docs for e in d.entries)
    first_start = (min_ts // window_size) * window_size
    starts = list(range(first_start, max_ts + 1, window_size))

    station_keywords: dict[str, frozenset] = {}
    def keywords_of(entry: DocEntry) -> frozenset:
        static = station_keywords.get(entry.station_id)
        if static is None:
            words = {entry.station_id}
            for name_tokens in entry.poi_names:
                words.update(name_tokens)
            words.update(entry.poi_categories)
            static = frozenset(words)
            station_keywords[entry.station_id] = static
        return static

    raw_postings: list[dict[str, set[str]]] = [dict() for _ in starts]
    part_docs: list[dict[str, list[tuple[int, DocEntry]]]] = [dict() for _ in starts]
    docs_by_id: dict[str, TrajectoryDocument] = {}
    for doc in sorted(trajectory_docs, key=lambda d: d.trajectory_id):
        docs_by_id[doc.trajectory_id] = doc
        for i, entry in enumerate(doc.entries):
            pi = (entry.timestamp - first_start) // window_size
            part_docs[pi].setdefault(doc.trajectory_id, []).append((i, entry))
            posting = raw_postings[pi]
            for key in keywords_of(entry):
                posting.setdefault(key, set()).add(doc.trajectory_id)
            if entry.time_word:
                posting.setdefault(entry.time_word, set()).add(doc.trajectory_id)

    partitions = [
        Partition(
            start=starts[pi],
            postings={k: sorted(ids) for k, ids in sorted(raw_postings[pi].items())},
            docs=part_docs[pi],
        )
        for pi in range(len(starts))
    ]
    return TemporalTextualIndex(
        window_size=window_size,
        partition_starts=starts,
        partitions=partitions,
        docs_by_id=docs_by_id,
        station_keywords=station_keywords,
    )


def lookup_partitions(
    index: TemporalTextualIndex,
    window: TimeWindow,
    on_probe=None,
) -> range:
    """Minimal contiguous partition range intersecting ``window``.

    One binary search finds the first intersecting partition; starts are
    uniformly spaced, so the end of the range follows arithmetically.
    ``on_probe`` fires once per comparison for instrumentation.
    """
    starts = index.partition_starts
    p = len(starts)
    w = index.window_size
    if p == 0:
        return range(0)
    if window.daily:
        return range(0, p)  # day-part windows recur; refine at point level

    if window.start == float("-inf"):
        first = 0
    else:
        key = window.start - w  # first partition with start + w > window.start
        lo, hi = 0, p
        while lo < hi:
            mid = (lo + hi) // 2
            if on_probe is not None:
                on_probe()
            if starts[mid] > key:
                hi = mid
            else:
                lo = mid + 1
        first = lo

    if window.end == float("inf"):
        last = p - 1
    else:
        # last partition with start < window.end, via uniform spacing
        offset = window.end - starts[0]
        if offset <= 0:
            return range(0)
        last = min(p - 1, int((offset - 1) // w))
    if first > last:
        return range(0)
    return range(first, last + 1)


def retrieve(
    index: TemporalTextualIndex,
    keys,
    windows: list[TimeWindow],
) -> set[str]:
    """Ids of trajectories with >= 1 point inside the windows carrying any key.

    Partitions fully covered by a window are taken straight from postings;
    boundary and daily windows are refined against the stored documents.
    """
    keys = list(keys)
    result: set[str] = set()
    for window in windows:
        for pi in lookup_partitions(index, window):
            part = index.partitions[pi]
            covered = (
                not window.daily
                and window.start <= part.start
                and part.start + index.window_size <= window.end
            )
            for key in keys:
                ids = part.postings.get(key)
                if not ids:
                    continue
                if covered:
                    result.update(ids)
                    continue
                for tid in ids:
                    if tid in result:
                        continue
                    for _, entry in part.docs[tid]:
                        if window.contains(entry.timestamp) and entry_matches(index, entry, key):
                            result.add(tid)
                            break
    return result


def _group_matches(
    index: TemporalTextualIndex,
    trajectory_id: str,
    stations: set[str],
    best_poi: dict[str, tuple[float, str]],
    windows: list[TimeWindow],
) -> list[tuple[int, str, int]]:
    """All points of a trajectory matching a group, in time order."""
    doc = index.docs_by_id[trajectory_id]
    matches = []
    for i, entry in enumerate(doc.entries):
        if entry.station_id not in stations:
            continue
        if not any(w.contains(entry.timestamp) for w in windows):
            continue
        matches.append((i, best_poi[entry.station_id][1], entry.timestamp))
    return matches


def query(
    index: TemporalTextualIndex,
    constraints: QueryConstraints,
    per_group_pois: list[list[ScoredPoi]],
    assignment: RegionAssignment,
) -> list[ScoredTrajectory]:
    """Retrieve and rank trajectories for scored per-group POIs.

    Group POIs map to their region stations; candidate sets combine by the
    group combinator (ordered queries imply intersection) and ordering is
    checked as a strictly-increasing-timestamp subsequence. The relevance
    of a trajectory is the sum over groups of its best matched POI score,
    normalized so the best result is 1.0.
    """
    if not constraints.groups:
        return []
    for gi, pois in enumerate(per_group_pois):
        if not pois:
            raise NoCandidates(gi)

    group_stations: list[set[str]] = []
    group_best: list[dict[str, tuple[float, str]]] = []
    for pois in per_group_pois:
        stations: set[str] = set()
        best: dict[str, tuple[float, str]] = {}
        for sp in sorted(pois, key=lambda sp: (-sp.score, sp.poi_id)):
            sid = assignment.poi_to_station[sp.poi_id]
            stations.add(sid)
            if sid not in best:
                best[sid] = (sp.score, sp.poi_id)
        group_stations.append(stations)
        group_best.append(best)

    candidate_sets = [
        retrieve(index, stations, constraints.windows) for stations in group_stations
    ]
    ordered = any(g.order_index is not None for g in constraints.groups)
    if constraints.combinator == "or" and not ordered:
        candidates = set().union(*candidate_sets)
    else:
        candidates = set.intersection(*candidate_sets)

    results: list[ScoredTrajectory] = []
    for tid in sorted(candidates):
        matches = [
            _group_matches(index, tid, group_stations[gi], group_best[gi], constraints.windows)
            for gi in range(len(constraints.groups))
        ]
        if ordered:
            chain: list[tuple[int, str, int]] = []
            prev_ts = float("-inf")
            ok = True
            for glist in matches:
                chosen = next((m for m in glist if m[2] > prev_ts), None)
                if chosen is None:
                    ok = False
                    break
                chain.append(chosen)
                prev_ts = chosen[2]
            if not ok:
                continue
            matched = [[m] for m in chain]
        else:
            matched = matches
        doc = index.docs_by_id[tid]
        total = 0.0
        for gi, glist in enumerate(matched):
            if glist:
                total += max(group_best[gi][doc.entries[m[0]].station_id][0] for m in glist)
        results.append(ScoredTrajectory(tid, total, matched))

    if not results:
        return []
    top = max(r.relevance for r in results)
    if top > 0:
        for r in results:
            r.relevance = r.relevance / top
    results.sort(key=lambda r: (-r.relevance, r.trajectory_id))
    return results


# --- persistence -------------------------------------------------------------

def save_index(index: TemporalTextualIndex, dirpath) -> None:
    os.makedirs(dirpath, exist_ok=True)
    meta = {"window_size": index.window_size, "partition_starts": index.partition_starts}
    with open(os.path.join(dirpath, "meta.json"), "w", encoding="utf-8") as fh:
        json.dump(meta, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")
    for pi, part in enumerate(index.partitions):
        with open(os.path.join(dirpath, f"p{pi}.postings"), "w", encoding="utf-8") as fh:
            for key in sorted(part.postings):
                fh.write(f"{key}\t{','.join(part.postings[key])}\n")
        with open(os.path.join(dirpath, f"p{pi}.docs.jsonl"), "w", encoding="utf-8") as fh:
            for tid in sorted(part.docs):
                line = {
                    "trajectory_id": tid,
                    "entries": [entry_to_json(i, e) for i, e in part.docs[tid]],
                }
                fh.write(json.dumps(line, sort_keys=True, separators=(",", ":")))
                fh.write("\n")


def load_index(dirpath) -> TemporalTextualIndex:
    with open(os.path.join(dirpath, "meta.json"), encoding="utf-8") as fh:
        meta = json.load(fh)
    starts = [int(s) for s in meta["partition_starts"]]
    partitions: list[Partition] = []
    doc_entries: dict[str, list[tuple[int, DocEntry]]] = {}
    station_keywords: dict[str, frozenset] = {}
    for pi, start in enumerate(starts):
        postings: dict[str, list[str]] = {}
        with open(os.path.join(dirpath, f"p{pi}.postings"), encoding="utf-8") as fh:
            for line in fh:
                key, _, ids = line.rstrip("\n").partition("\t")
                postings[key] = ids.split(",") if ids else []
        docs: dict[str, list[tuple[int, DocEntry]]] = {}
        with open(os.path.join(dirpath, f"p{pi}.docs.jsonl"), encoding="utf-8") as fh:
            for line in fh:
                raw = json.loads(line)
                pairs = [entry_from_json(e) for e in raw["entries"]]
                docs[raw["trajectory_id"]] = pairs
                doc_entries.setdefault(raw["trajectory_id"], []).extend(pairs)
        partitions.append(Partition(start, postings, docs))

    docs_by_id: dict[str, TrajectoryDocument] = {}
    for tid, pairs in doc_entries.items():
        pairs.sort(key=lambda pe: pe[0])
        entries = [e for _, e in pairs]
        docs_by_id[tid] = TrajectoryDocument(tid, entries)
        for e in entries:
            if e.station_id not in station_keywords:
                words = {e.station_id}
                for toks in e.poi_names:
                    words.update(toks)
                words.update(e.poi_categories)
                station_keywords[e.station_id] = frozenset(words)
    window = int(meta["window_size"])
    return TemporalTextualIndex(window, starts, partitions, docs_by_id, station_keywords)
