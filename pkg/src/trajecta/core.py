"""Domain entities and ingestion for station-referenced trajectory datasets."""

from __future__ import annotations

import calendar
import csv
import datetime as dt
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import DuplicateId, MalformedRow, UnknownStation

SECONDS_PER_DAY = 86400

PER_USER = "per-user"
PER_USER_PER_DAY = "per-user-per-day"


@dataclass(frozen=True)
class Station:
    id: str
    lon: float
    lat: float


@dataclass
class Poi:
    id: str
    name: str
    category: str
    description: str = ""
    lon: float = 0.0
    lat: float = 0.0
    region_id: str | None = None  # filled in by psr.assign_regions


@dataclass(frozen=True)
class TrajectoryPoint:
    station_id: str
    timestamp: int


@dataclass
class Trajectory:
    id: str
    points: list[TrajectoryPoint]


@dataclass(frozen=True)
class TimeWindow:
    """Half-open time interval [start, end).

    Absolute windows hold epoch seconds; ``daily`` windows hold
    seconds-of-day and match the same hours on every day.
    """

    start: float
    end: float
    daily: bool = False

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError(f"window start {self.start} must precede end {self.end}")

    @classmethod
    def unbounded(cls) -> "TimeWindow":
        return cls(float("-inf"), float("inf"))

    @property
    def is_unbounded(self) -> bool:
        return self.start == float("-inf") and self.end == float("inf")

    def contains(self, ts: float) -> bool:
        if self.daily:
            return self.start <= ts % SECONDS_PER_DAY < self.end
        return self.start <= ts < self.end


class Record(NamedTuple):
    """One raw sample: who was at which station when."""

    user_id: str
    station_id: str
    timestamp: int


def parse_timestamp(text: str) -> int:
    """Parse an integer epoch or a naive ISO-8601 timestamp to epoch seconds.

    Naive timestamps are taken at face value (single-city data, no timezone
    arithmetic): the conversion treats them like UTC wall time so the
    mapping is deterministic on every host.
    """
    text = text.strip()
    if text.lstrip("-").isdigit():
        return int(text)
    parsed = dt.datetime.fromisoformat(text)
    if parsed.tzinfo is not None:
        parsed = parsed.astimezone(dt.timezone.utc).replace(tzinfo=None)
    return calendar.timegm(parsed.timetuple())


def epoch_to_datetime(ts: int) -> dt.datetime:
    return dt.datetime(1970, 1, 1) + dt.timedelta(seconds=ts)


def datetime_to_epoch(value: dt.datetime) -> int:
    return calendar.timegm(value.timetuple())


def day_key(ts: int) -> str:
    return epoch_to_datetime(ts).date().isoformat()


def _read_rows(path) -> list[list[str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def _check_header(rows: list[list[str]], expected: list[str], what: str) -> None:
    if not rows:
        raise MalformedRow(1, f"{what}: missing header {','.join(expected)}")
    got = [cell.strip().lower() for cell in rows[0]]
    if got != expected:
        raise MalformedRow(1, f"{what}: expected header {','.join(expected)}, got {','.join(got)}")


def _parse_float(cell: str, line: int, what: str) -> float:
    try:
        return float(cell)
    except ValueError:
        raise MalformedRow(line, f"{what}: not a number: {cell!r}") from None


def load_stations(path) -> list[Station]:
    rows = _read_rows(path)
    _check_header(rows, ["id", "lon", "lat"], "stations")
    stations: list[Station] = []
    seen: set[str] = set()
    for line, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 3:
            raise MalformedRow(line, f"stations: expected 3 fields, got {len(row)}")
        sid = row[0].strip()
        if not sid:
            raise MalformedRow(line, "stations: empty id")
        if sid in seen:
            raise DuplicateId(sid)
        lon = _parse_float(row[1], line, "lon")
        lat = _parse_float(row[2], line, "lat")
        if not -180.0 <= lon <= 180.0:
            raise MalformedRow(line, f"lon {lon} out of range")
        if not -90.0 <= lat <= 90.0:
            raise MalformedRow(line, f"lat {lat} out of range")
        seen.add(sid)
        stations.append(Station(sid, lon, lat))
    return stations


def load_pois(path) -> list[Poi]:
    rows = _read_rows(path)
    _check_header(rows, ["id", "name", "category", "description", "lon", "lat"], "pois")
    pois: list[Poi] = []
    seen: set[str] = set()
    for line, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 6:
            raise MalformedRow(line, f"pois: expected 6 fields, got {len(row)}")
        pid = row[0].strip()
        if not pid:
            raise MalformedRow(line, "pois: empty id")
        if pid in seen:
            raise DuplicateId(pid)
        lon = _parse_float(row[4], line, "lon")
        lat = _parse_float(row[5], line, "lat")
        if not -180.0 <= lon <= 180.0:
            raise MalformedRow(line, f"lon {lon} out of range")
        if not -90.0 <= lat <= 90.0:
            raise MalformedRow(line, f"lat {lat} out of range")
        seen.add(pid)
        pois.append(Poi(pid, row[1].strip(), row[2].strip(), row[3].strip(), lon, lat))
    return pois


def load_records(path) -> list[Record]:
    rows = _read_rows(path)
    if not rows:
        return []  # an empty records file is a valid empty dataset
    _check_header(rows, ["user_id", "station_id", "timestamp"], "records")
    records: list[Record] = []
    for line, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 3:
            raise MalformedRow(line, f"records: expected 3 fields, got {len(row)}")
        user = row[0].strip()
        station = row[1].strip()
        if not user or not station:
            raise MalformedRow(line, "records: empty user_id or station_id")
        try:
            ts = parse_timestamp(row[2])
        except ValueError:
            raise MalformedRow(line, f"records: bad timestamp {row[2]!r}") from None
        records.append(Record(user, station, ts))
    return records


def load_dataset(stations_path, pois_path, records_path):
    """Load the three CSV inputs, failing fast with row-numbered errors."""
    return load_stations(stations_path), load_pois(pois_path), load_records(records_path)


def assemble_trajectories(
    records: Iterable[Record],
    stations: Iterable[Station] | None = None,
    grouping: str = PER_USER_PER_DAY,
) -> list[Trajectory]:
    """Group raw records into time-ordered trajectories.

    Exact-duplicate records (same user, station, timestamp) collapse to one
    point; mobile logs commonly repeat heartbeats. Output is independent of
    record order: groups and points are fully sorted.
    """
    if grouping not in (PER_USER, PER_USER_PER_DAY):
        raise ValueError(f"unknown grouping {grouping!r}")
    known: set[str] | None = None
    if stations is not None:
        known = {s.id if isinstance(s, Station) else str(s) for s in stations}

    unique: set[Record] = set()
    for rec in records:
        if known is not None and rec.station_id not in known:
            raise UnknownStation(rec.station_id)
        unique.add(rec)

    groups: dict[str, list[Record]] = {}
    for rec in unique:
        if grouping == PER_USER:
            key = rec.user_id
        else:
            key = f"{rec.user_id}:{day_key(rec.timestamp)}"
        groups.setdefault(key, []).append(rec)

    trajectories = []
    for key in sorted(groups):
        recs = sorted(groups[key], key=lambda r: (r.timestamp, r.station_id))
        points = [TrajectoryPoint(r.station_id, r.timestamp) for r in recs]
        trajectories.append(Trajectory(key, points))
    return trajectories
