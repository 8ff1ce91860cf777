"""Deterministic synthetic city and population generator.

Provides ground truth for tests and benchmarks: zones with distinct POI
category mixes (so topic recovery is checkable end to end) and commuter
users with known home/work stations emitting heartbeat-style records.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
import random
from dataclasses import dataclass, field

from .core import Poi, Record, Station, datetime_to_epoch

DEFAULT_BBOX = (120.60, 27.90, 120.80, 28.10)  # lon_min, lat_min, lon_max, lat_max

CATEGORY_NAMES = {
    "restaurant": ["golden wok restaurant", "noodle house", "dumpling bar", "riverside restaurant"],
    "hotel": ["grand hotel", "harbor inn", "plaza hotel"],
    "school": ["city college", "student apartment", "students dormitory",
               "university library", "middle school"],
    "hospital": ["people hospital", "central clinic"],
    "market": ["sunrise supermarket", "shopping mall", "night market"],
    "park": ["baihua park", "river park"],
    "transport": ["train station", "bus terminal", "ferry dock"],
    "office": ["office tower", "trade center"],
    "residence": ["garden residence", "lakeside apartment", "old town house"],
}


@dataclass
class Zone:
    name: str
    center: tuple[float, float]  # (lon, lat)
    radius_deg: float
    category_mix: dict[str, float]


def default_zones() -> list[Zone]:
    return [
        Zone("oldtown", (120.65, 28.05), 0.03,
             {"residence": 0.5, "restaurant": 0.2, "market": 0.15, "park": 0.1, "hospital": 0.05}),
        Zone("downtown", (120.74, 28.02), 0.03,
             {"office": 0.4, "restaurant": 0.25, "hotel": 0.15, "market": 0.2}),
        Zone("campus", (120.67, 27.94), 0.025,
             {"school": 0.6, "residence": 0.2, "restaurant": 0.2}),
        Zone("gateway", (120.77, 27.95), 0.025,
             {"transport": 0.4, "hotel": 0.25, "restaurant": 0.2, "market": 0.15}),
    ]


@dataclass
class SynthConfig:
    n_stations: int = 40
    n_pois: int = 400
    n_users: int = 30
    n_days: int = 3
    start_date: dt.date = dt.date(2014, 1, 10)
    zones: list[Zone] = field(default_factory=default_zones)
    bbox: tuple[float, float, float, float] = DEFAULT_BBOX
    seed: int = 7
    points_per_workday: int = 13  # approximate; jitter varies the exact count


@dataclass
class SynthResult:
    stations: list[Station]
    pois: list[Poi]
    records: list[Record]
    ground_truth: dict


def _pick(rng: random.Random, mix: dict[str, float]) -> str:
    r = rng.random()
    acc = 0.0
    items = sorted(mix.items())
    for cat, p in items:
        acc += p
        if r <= acc:
            return cat
    return items[-1][0]


def _nearest_station(stations: list[Station], lon: float, lat: float) -> Station:
    return min(stations, key=lambda s: ((s.lon - lon) ** 2 + (s.lat - lat) ** 2, s.id))


def generate(config: SynthConfig) -> SynthResult:
    """Build a synthetic dataset; identical config -> identical output."""
    rng = random.Random(config.seed)
    lon_min, lat_min, lon_max, lat_max = config.bbox

    width = len(str(max(config.n_stations - 1, 1)))
    stations = [
        Station(
            f"s{i:0{width}d}",
            round(rng.uniform(lon_min, lon_max), 6),
            round(rng.uniform(lat_min, lat_max), 6),
        )
        for i in range(config.n_stations)
    ]

    pois: list[Poi] = []
    pwidth = len(str(max(config.n_pois - 1, 1)))
    for i in range(config.n_pois):
        zone = config.zones[i % len(config.zones)]
        category = _pick(rng, zone.category_mix)
        lon = round(min(max(rng.gauss(zone.center[0], zone.radius_deg), lon_min), lon_max), 6)
        lat = round(min(max(rng.gauss(zone.center[1], zone.radius_deg), lat_min), lat_max), 6)
        name = f"{rng.choice(CATEGORY_NAMES[category])} {i}"
        description = f"{zone.name} {category}" if rng.random() < 0.3 else ""
        pois.append(Poi(f"p{i:0{pwidth}d}", name, category, description, lon, lat))

    def zone_stations(zone: Zone) -> list[Station]:
        ranked = sorted(
            stations,
            key=lambda s: ((s.lon - zone.center[0]) ** 2 + (s.lat - zone.center[1]) ** 2, s.id),
        )
        return ranked[: max(3, len(stations) // len(config.zones))]

    residential = zone_stations(config.zones[0])
    work_zones = [zone_stations(z) for z in config.zones[1:]] or [stations]

    records: list[Record] = []
    truth_users: dict[str, dict] = {}
    uwidth = len(str(max(config.n_users - 1, 1)))
    for u in range(config.n_users):
        uid = f"u{u:0{uwidth}d}"
        home = rng.choice(residential)
        pool = work_zones[u % len(work_zones)]
        work = rng.choice([s for s in pool if s.id != home.id] or stations)
        leisure = rng.choice([s for s in stations if s.id not in (home.id, work.id)])
        itinerary = []
        for day in range(config.n_days):
            date = config.start_date + dt.timedelta(days=day)
            base = datetime_to_epoch(dt.datetime(date.year, date.month, date.day))
            def ping(station: Station, hour: float, jitter_s: int = 600):
                ts = base + int(hour * 3600) + rng.randrange(-jitter_s, jitter_s + 1)
                ts = max(base, min(base + 86399, ts))
                records.append(Record(uid, station.id, ts))
            for hour in (0.5, 2.0, 3.5, 5.0):
                ping(home, hour)
            ping(home, 6.8, 300)
            commute = rng.choice(stations)
            ping(commute, 8.0, 300)
            for hour in (9.3, 11.0, 13.0, 15.0, 16.5):
                ping(work, hour)
            if rng.random() < 0.5:
                ping(leisure, 18.5, 900)
            for hour in (20.5, 22.0, 23.3):
                ping(home, hour)
            itinerary.append({
                "day": date.isoformat(),
                "stations": [home.id, commute.id, work.id, home.id],
            })
        truth_users[uid] = {"home": home.id, "work": work.id,
                            "leisure": leisure.id, "itinerary": itinerary}

    records.sort(key=lambda r: (r.user_id, r.timestamp, r.station_id))
    ground_truth = {
        "start_date": config.start_date.isoformat(),
        "n_days": config.n_days,
        "users": truth_users,
    }
    return SynthResult(stations, pois, records, ground_truth)


def write_workspace(result: SynthResult, data_dir) -> None:
    """Emit stations.csv / pois.csv / records.csv / ground_truth.json."""
    import os

    os.makedirs(data_dir, exist_ok=True)
    with open(os.path.join(data_dir, "stations.csv"), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "lon", "lat"])
        for s in result.stations:
            writer.writerow([s.id, repr(s.lon), repr(s.lat)])
    with open(os.path.join(data_dir, "pois.csv"), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "name", "category", "description", "lon", "lat"])
        for p in result.pois:
            writer.writerow([p.id, p.name, p.category, p.description, repr(p.lon), repr(p.lat)])
    with open(os.path.join(data_dir, "records.csv"), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["user_id", "station_id", "timestamp"])
        for r in result.records:
            iso = (dt.datetime(1970, 1, 1) + dt.timedelta(seconds=r.timestamp)).isoformat()
            writer.writerow([r.user_id, r.station_id, iso])
    with open(os.path.join(data_dir, "ground_truth.json"), "w", encoding="utf-8") as fh:
        json.dump(result.ground_truth, fh, indent=2, sort_keys=True)
        fh.write("\n")
