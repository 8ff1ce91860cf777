"""Operations on semantically represented trajectories.

Distance between two topic-vector sequences minimizes
w1 * sum(delta over matched pairs) + w2 * sum(gamma over unmatched points),
where delta is the Euclidean distance between topic vectors and gamma the
vector norm. Two solvers ship side by side: an order-preserving edit DP
(matched pairs must increase in both sequences) and an unordered
Hungarian-assignment relaxation, which lower-bounds the ordered cost.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SECONDS_PER_DAY, TimeWindow, Trajectory
from .errors import BadTopicIndex, DimensionMismatch, KTooLarge
from .topics import TrajectorySemantics


@dataclass
class MatchWeights:
    w1: float = 1.0  # matched-pair weight
    w2: float = 1.0  # unmatched-point weight


@dataclass
class MatchResult:
    cost: float
    matched: list[tuple[int, int]]
    unmatched_a: list[int]
    unmatched_b: list[int]


def _vectors(seq) -> np.ndarray:
    if isinstance(seq, TrajectorySemantics):
        rows = [q for q, _ in seq.points]
    else:
        rows = list(seq)
    if not rows:
        return np.zeros((0, 0))
    return np.array(rows, dtype=float)


def _check_dims(a: np.ndarray, b: np.ndarray) -> None:
    if len(a) and len(b) and a.shape[1] != b.shape[1]:
        raise DimensionMismatch(a.shape[1], b.shape[1])


def distance_ordered(seq_a, seq_b, weights: MatchWeights = MatchWeights()) -> MatchResult:
    """Optimal order-preserving partial matching via edit-distance DP."""
    a = _vectors(seq_a)
    b = _vectors(seq_b)
    _check_dims(a, b)
    n, m = len(a), len(b)
    gamma_a = [float(np.linalg.norm(a[i])) for i in range(n)]
    gamma_b = [float(np.linalg.norm(b[j])) for j in range(m)]
    w1, w2 = weights.w1, weights.w2

    d = [[0.0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        d[i][0] = d[i - 1][0] + w2 * gamma_a[i - 1]
    for j in range(1, m + 1):
        d[0][j] = d[0][j - 1] + w2 * gamma_b[j - 1]
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            delta = float(np.linalg.norm(a[i - 1] - b[j - 1]))
            d[i][j] = min(
                d[i - 1][j - 1] + w1 * delta,
                d[i - 1][j] + w2 * gamma_a[i - 1],
                d[i][j - 1] + w2 * gamma_b[j - 1],
            )

    matched: list[tuple[int, int]] = []
    i, j = n, m
    while i > 0 and j > 0:
        delta = float(np.linalg.norm(a[i - 1] - b[j - 1]))
        if abs(d[i][j] - (d[i - 1][j - 1] + w1 * delta)) <= 1e-12:
            matched.append((i - 1, j - 1))
            i -= 1
            j -= 1
        elif abs(d[i][j] - (d[i - 1][j] + w2 * gamma_a[i - 1])) <= 1e-12:
            i -= 1
        else:
            j -= 1
    matched.reverse()
    in_a = {i for i, _ in matched}
    in_b = {j for _, j in matched}
    return MatchResult(
        cost=d[n][m],
        matched=matched,
        unmatched_a=[i for i in range(n) if i not in in_a],
        unmatched_b=[j for j in range(m) if j not in in_b],
    )


def _hungarian(cost: np.ndarray) -> list[int]:
    """Minimum-cost perfect assignment on a square matrix (potentials method).

    Returns col assigned to each row.
    """
    n = cost.shape[0]
    INF = float("inf")
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    p = [0] * (n + 1)  # p[j] = row matched to column j (1-based)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = INF
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    assign = [0] * n
    for j in range(1, n + 1):
        if p[j] > 0:
            assign[p[j] - 1] = j - 1
    return assign


def distance_unordered(seq_a, seq_b, weights: MatchWeights = MatchWeights()) -> MatchResult:
    """Minimum-cost assignment relaxation: order of points is ignored.

    Both sides are padded with dummies so every real point may stay
    unmatched at cost w2 * gamma.
    """
    a = _vectors(seq_a)
    b = _vectors(seq_b)
    _check_dims(a, b)
    n, m = len(a), len(b)
    if n == 0 and m == 0:
        return MatchResult(0.0, [], [], [])
    size = n + m
    big = np.zeros((size, size))
    gamma_a = [float(np.linalg.norm(a[i])) for i in range(n)]
    gamma_b = [float(np.linalg.norm(b[j])) for j in range(m)]
    for i in range(n):
        for j in range(m):
            big[i][j] = weights.w1 * float(np.linalg.norm(a[i] - b[j]))
        for j in range(m, size):
            big[i][j] = weights.w2 * gamma_a[i]
    for i in range(n, size):
        for j in range(m):
            big[i][j] = weights.w2 * gamma_b[j]
        # dummy-dummy edges stay 0

    assign = _hungarian(big)
    matched = [(i, assign[i]) for i in range(n) if assign[i] < m]
    matched.sort()
    in_a = {i for i, _ in matched}
    in_b = {j for _, j in matched}
    unmatched_a = [i for i in range(n) if i not in in_a]
    unmatched_b = [j for j in range(m) if j not in in_b]
    cost = (
        weights.w1 * sum(float(np.linalg.norm(a[i] - b[j])) for i, j in matched)
        + weights.w2 * sum(gamma_a[i] for i in unmatched_a)
        + weights.w2 * sum(gamma_b[j] for j in unmatched_b)
    )
    return MatchResult(cost, matched, unmatched_a, unmatched_b)


def stopovers(trajectory: Trajectory) -> list[tuple[str, int, int, int]]:
    """Collapse maximal same-region runs to (region, start, end, duration)."""
    result: list[tuple[str, int, int, int]] = []
    run_station: str | None = None
    run_start = run_end = 0
    for point in trajectory.points:
        if point.station_id == run_station:
            run_end = point.timestamp
        else:
            if run_station is not None:
                result.append((run_station, run_start, run_end, run_end - run_start))
            run_station = point.station_id
            run_start = run_end = point.timestamp
    if run_station is not None:
        result.append((run_station, run_start, run_end, run_end - run_start))
    return result


@dataclass
class FilterPredicate:
    topic_index: int
    min_probability: float = 0.0
    min_stopover_s: int = 0
    window: TimeWindow | None = None


def _window_overlaps(window: TimeWindow, start: int, end: int) -> bool:
    """Does the closed span [start, end] intersect the window?

    Daily windows compare in seconds-of-day space; a span covering a
    whole day intersects every daily window.
    """
    if not window.daily:
        return start < window.end and end >= window.start
    if end - start >= SECONDS_PER_DAY:
        return True
    s = start % SECONDS_PER_DAY
    e = s + (end - start)  # may run past midnight
    for shift in (0, SECONDS_PER_DAY):
        if s < window.end + shift and e >= window.start + shift:
            return True
    return False


def filter_trajectories(
    trajectories: list[Trajectory],
    semantics: dict[str, TrajectorySemantics],
    predicate: FilterPredicate,
) -> list[Trajectory]:
    """Keep trajectories with a stopover satisfying every threshold."""
    kept = []
    for traj in trajectories:
        sem = semantics[traj.id]
        if sem.points and not 0 <= predicate.topic_index < len(sem.points[0][0]):
            raise BadTopicIndex(predicate.topic_index, len(sem.points[0][0]))
        q_by_station = {traj.points[i].station_id: sem.points[i][0]
                        for i in range(len(traj.points))}
        for region, start, end, duration in stopovers(traj):
            if duration < predicate.min_stopover_s:
                continue
            if float(q_by_station[region][predicate.topic_index]) < predicate.min_probability:
                continue
            if predicate.window is not None and not _window_overlaps(predicate.window, start, end):
                continue
            kept.append(traj)
            break
    return kept


def extract_home_work(
    trajectory: Trajectory,
    semantics: TrajectorySemantics,
    night_hours: tuple[int, int] = (0, 6),
    day_hours: tuple[int, int] = (9, 17),
):
    """Guess home and workplace regions from daily presence.

    Presence is the number of samples whose time of day falls in the
    window; home is the night maximum, work the day maximum excluding
    home. The feature vector concatenates the two regions' topic vectors
    (zeros where a region is absent).
    """
    n_topics = len(semantics.points[0][0]) if semantics.points else 0

    def presence(hours: tuple[int, int]) -> dict[str, int]:
        lo, hi = hours[0] * 3600, hours[1] * 3600
        counts: dict[str, int] = {}
        for point in trajectory.points:
            sod = point.timestamp % SECONDS_PER_DAY
            if lo <= sod < hi:
                counts[point.station_id] = counts.get(point.station_id, 0) + 1
        return counts

    def argmax(counts: dict[str, int], exclude: str | None = None) -> str | None:
        best = None
        for region in sorted(counts):
            if region == exclude:
                continue
            if best is None or counts[region] > counts[best]:
                best = region
        return best

    home = argmax(presence(night_hours))
    work = argmax(presence(day_hours), exclude=home)

    q_by_station = {trajectory.points[i].station_id: semantics.points[i][0]
                    for i in range(len(trajectory.points))}
    feature = np.zeros(2 * n_topics)
    if home is not None:
        feature[:n_topics] = q_by_station[home]
    if work is not None:
        feature[n_topics:] = q_by_station[work]
    return {"home_region": home, "work_region": work, "feature": feature}


def kmeans(features, k: int, seed: int = 0, max_iters: int = 100):
    """Lloyd's algorithm with k-means++ seeding; deterministic per seed."""
    points = np.array(features, dtype=float)
    n = len(points)
    if k > n:
        raise KTooLarge(k, n)
    rng = np.random.default_rng(seed)

    centroids = np.empty((k, points.shape[1]))
    centroids[0] = points[rng.integers(n)]
    d2 = np.full(n, np.inf)
    for c in range(1, k):
        d2 = np.minimum(d2, ((points - centroids[c - 1]) ** 2).sum(axis=1))
        total = d2.sum()
        if total == 0:
            centroids[c] = points[rng.integers(n)]
            continue
        r = rng.random() * total
        centroids[c] = points[min(int(np.searchsorted(np.cumsum(d2), r)), n - 1)]

    assignments = np.full(n, -1)
    for _ in range(max_iters):
        dists = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_assignments = dists.argmin(axis=1)
        if np.array_equal(new_assignments, assignments):
            break
        assignments = new_assignments
        for c in range(k):
            members = points[assignments == c]
            if len(members):
                centroids[c] = members.mean(axis=0)
            else:
                # deterministic re-seed: point farthest from its centroid
                far = int(dists.min(axis=1).argmax())
                centroids[c] = points[far]
    return assignments.tolist(), centroids
