"""Possible spatial regions: Voronoi cells of base stations.

Region membership is computed as nearest-station under a local
equirectangular projection, which is mathematically the same as
point-in-Voronoi-cell but avoids polygon robustness issues. Explicit
polygons are built only for display, by clipping the bounding box with
perpendicular-bisector half-planes (O(n^2), fine at city scale).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Poi, Station
from .errors import DuplicateStationPosition, NoStations

EARTH_RADIUS_M = 6371000.0
_EPS = 1e-9


def project(lon: float, lat: float, origin: tuple[float, float]) -> tuple[float, float]:
    """Equirectangular projection to meters around ``origin`` = (lon, lat)."""
    lon0, lat0 = origin
    x = EARTH_RADIUS_M * math.radians(lon - lon0) * math.cos(math.radians(lat0))
    y = EARTH_RADIUS_M * math.radians(lat - lat0)
    return x, y


def stations_origin(stations: list[Station]) -> tuple[float, float]:
    """Default projection origin: centroid of the station coordinates."""
    if not stations:
        raise NoStations()
    return (
        sum(s.lon for s in stations) / len(stations),
        sum(s.lat for s in stations) / len(stations),
    )


@dataclass
class RegionAssignment:
    poi_to_station: dict[str, str]
    station_to_pois: dict[str, list[str]]


@dataclass
class RegionPolygon:
    station_id: str
    vertices: list[tuple[float, float]]  # closed ring, last edge implicit

    def contains(self, x: float, y: float) -> bool:
        """Point-in-convex-polygon test (boundary counts as inside)."""
        n = len(self.vertices)
        for i in range(n):
            ax, ay = self.vertices[i]
            bx, by = self.vertices[(i + 1) % n]
            cross = (bx - ax) * (y - ay) - (by - ay) * (x - ax)
            if cross < -1e-6:
                return False
        return True


def assign_regions(
    stations: list[Station],
    pois: list[Poi],
    origin: tuple[float, float] | None = None,
) -> RegionAssignment:
    """Map every POI to its nearest station; ties go to the smaller station id.

    Also stamps ``poi.region_id`` so downstream modules can read it directly.
    """
    if not stations:
        raise NoStations()
    if origin is None:
        origin = stations_origin(stations)

    order = sorted(range(len(stations)), key=lambda i: stations[i].id)
    sxy = np.array([project(stations[i].lon, stations[i].lat, origin) for i in order])
    ids = [stations[i].id for i in order]

    poi_to_station: dict[str, str] = {}
    station_to_pois: dict[str, list[str]] = {sid: [] for sid in ids}
    for poi in pois:
        px, py = project(poi.lon, poi.lat, origin)
        d2 = (sxy[:, 0] - px) ** 2 + (sxy[:, 1] - py) ** 2
        # stations are scanned in id order, so the first minimum wins ties
        best = ids[int(np.argmin(d2))]
        poi.region_id = best
        poi_to_station[poi.id] = best
        station_to_pois[best].append(poi.id)
    for sid in station_to_pois:
        station_to_pois[sid].sort()
    return RegionAssignment(poi_to_station, station_to_pois)


def _clip_halfplane(ring: list[tuple[float, float]], a: float, b: float, c: float):
    """Sutherland-Hodgman clip of a convex ring against a*x + b*y <= c."""
    out: list[tuple[float, float]] = []
    n = len(ring)
    for i in range(n):
        px, py = ring[i]
        qx, qy = ring[(i + 1) % n]
        p_in = a * px + b * py <= c + _EPS
        q_in = a * qx + b * qy <= c + _EPS
        if p_in:
            out.append((px, py))
        if p_in != q_in:
            denom = a * (qx - px) + b * (qy - py)
            if abs(denom) > _EPS:
                t = (c - a * px - b * py) / denom
                out.append((px + t * (qx - px), py + t * (qy - py)))
    deduped: list[tuple[float, float]] = []
    for v in out:
        if not deduped or (abs(v[0] - deduped[-1][0]) > _EPS or abs(v[1] - deduped[-1][1]) > _EPS):
            deduped.append(v)
    if len(deduped) > 1 and abs(deduped[0][0] - deduped[-1][0]) <= _EPS and abs(deduped[0][1] - deduped[-1][1]) <= _EPS:
        deduped.pop()
    return deduped


def _cell(
    sxy: list[tuple[float, float]],
    idx: int,
    bbox: tuple[float, float, float, float],
) -> list[tuple[float, float]]:
    xmin, ymin, xmax, ymax = bbox
    ring = [(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)]
    sx, sy = sxy[idx]
    for j, (tx, ty) in enumerate(sxy):
        if j == idx:
            continue
        # closer to s than to t: 2(t-s).p <= |t|^2 - |s|^2
        a = 2.0 * (tx - sx)
        b = 2.0 * (ty - sy)
        c = tx * tx + ty * ty - sx * sx - sy * sy
        ring = _clip_halfplane(ring, a, b, c)
        if not ring:
            break
    return ring


def voronoi_polygons(
    stations: list[Station],
    bbox: tuple[float, float, float, float],
    origin: tuple[float, float] | None = None,
) -> list[RegionPolygon]:
    """Clip every station's Voronoi cell to ``bbox`` (projected meters)."""
    if not stations:
        raise NoStations()
    if origin is None:
        origin = stations_origin(stations)
    ordered = sorted(stations, key=lambda s: s.id)
    sxy = [project(s.lon, s.lat, origin) for s in ordered]
    for i in range(len(sxy)):
        for j in range(i + 1, len(sxy)):
            if abs(sxy[i][0] - sxy[j][0]) <= _EPS and abs(sxy[i][1] - sxy[j][1]) <= _EPS:
                raise DuplicateStationPosition(ordered[i].id, ordered[j].id)
    return [
        RegionPolygon(ordered[i].id, _cell(sxy, i, bbox))
        for i in range(len(ordered))
    ]


def polygon_json(polygon: RegionPolygon) -> dict:
    return {
        "station_id": polygon.station_id,
        "vertices": [[float(x), float(y)] for x, y in polygon.vertices],
    }
