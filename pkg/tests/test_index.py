import math
import random

import pytest

from trajecta.core import TimeWindow, Trajectory, TrajectoryPoint, assemble_trajectories
from trajecta.dictionaries import defaults
from trajecta.docgen import build_documents
from trajecta.errors import EmptyCorpus, NoCandidates
from trajecta.index import (
    build_index,
    entry_matches,
    load_index,
    lookup_partitions,
    query,
    retrieve,
    save_index,
)
from trajecta.nlq import QueryConstraints, SpatialGroup
from trajecta.psr import assign_regions
from trajecta.relevance import ScoredPoi
from trajecta.synth import SynthConfig, generate


def _entry_has_key(index, entry, key):
    return entry_matches(index, entry, key)


def _scan_oracle(index, docs, key, windows):
    """Linear scan over all documents: the reference for retrieve()."""
    hits = set()
    for doc in docs:
        for entry in doc.entries:
            if any(w.contains(entry.timestamp) for w in windows) and _entry_has_key(index, entry, key):
                hits.add(doc.trajectory_id)
                break
    return hits


def _docs(trajectories, city):
    stations, pois, assignment = city
    docs, _, _ = build_documents(trajectories, stations, assignment, pois, defaults())
    return docs, assignment


@pytest.fixture(scope="module")
def city():
    from trajecta.core import Poi, Station

    stations = [Station("sa", 120.00, 28.0), Station("sb", 120.10, 28.0), Station("sc", 120.20, 28.0)]
    pois = [
        Poi("pa", "alpha tower", "office", "", 120.001, 28.0),
        Poi("pb", "beta park", "park", "", 120.101, 28.0),
        Poi("pc", "gamma market", "market", "", 120.201, 28.0),
    ]
    assignment = assign_regions(stations, pois)
    return stations, pois, assignment


@pytest.fixture(scope="module")
def synth_corpus():
    config = SynthConfig(n_stations=25, n_pois=150, n_users=20, n_days=3, seed=13)
    result = generate(config)
    trajectories = assemble_trajectories(result.records, result.stations)
    assignment = assign_regions(result.stations, result.pois)
    docs, _, _ = build_documents(trajectories, result.stations, assignment, result.pois, defaults())
    return docs, build_index(docs, window_size=600)


class TestBuildIndex:
    def test_trajectory_spanning_two_windows_in_both(self, city):
        traj = Trajectory("t1", [TrajectoryPoint("sa", 100), TrajectoryPoint("sa", 700)])
        docs, _ = _docs([traj], city)
        index = build_index(docs, window_size=600)
        assert index.partition_starts == [0, 600]
        assert index.partitions[0].postings["sa"] == ["t1"]
        assert index.partitions[1].postings["sa"] == ["t1"]

    def test_window_covering_all_data_single_partition(self, city):
        traj = Trajectory("t1", [TrajectoryPoint("sa", 100), TrajectoryPoint("sb", 700)])
        docs, _ = _docs([traj], city)
        index = build_index(docs, window_size=100000)
        assert index.partition_count == 1

    def test_empty_corpus_rejected(self):
        with pytest.raises(EmptyCorpus):
            build_index([], window_size=600)

    def test_postings_match_linear_scan_probes(self, synth_corpus):
        docs, index = synth_corpus
        rng = random.Random(4)
        keywords = sorted({k for p in index.partitions for k in p.postings})
        for _ in range(50):
            key = rng.choice(keywords)
            pi = rng.randrange(index.partition_count)
            part = index.partitions[pi]
            window = [TimeWindow(part.start, part.start + index.window_size)]
            expected = sorted(_scan_oracle(index, docs, key, window))
            assert part.postings.get(key, []) == expected

    def test_uniform_spacing_and_coverage(self, synth_corpus):
        docs, index = synth_corpus
        starts = index.partition_starts
        assert all(b - a == index.window_size for a, b in zip(starts, starts[1:]))
        min_ts = min(e.timestamp for d in docs for e in d.entries)
        max_ts = max(e.timestamp for d in docs for e in d.entries)
        assert starts[0] <= min_ts < starts[0] + index.window_size
        assert starts[-1] <= max_ts < starts[-1] + index.window_size


class TestLookupPartitions:
    def _index(self, starts, window_size):
        # minimal index whose first/last points pin the partition range
        from trajecta.docgen import DocEntry, TrajectoryDocument

        entries = [DocEntry(s, "", "sa", 0.0, 0.0, [], []) for s in (starts[0], starts[-1])]
        return build_index([TrajectoryDocument("t", entries)], window_size)

    def test_example_range(self):
        index = self._index([0, 1800], 600)
        assert index.partition_starts == [0, 600, 1200, 1800]
        assert lookup_partitions(index, TimeWindow(650, 1300)) == range(1, 3)

    def test_query_before_first_partition_empty(self):
        index = self._index([1000000, 1003000], 600)
        assert list(lookup_partitions(index, TimeWindow(10, 20))) == []

    def test_unbounded_window_full_range(self):
        index = self._index([0, 5400], 600)
        assert lookup_partitions(index, TimeWindow.unbounded()) == range(0, 10)

    def test_probe_budget(self):
        for p in (1, 2, 7, 64, 1000):
            index = self._index([0, (p - 1) * 600], 600)
            assert index.partition_count == p
            budget = math.ceil(math.log2(p)) + 2 if p > 1 else 2
            rng = random.Random(p)
            for _ in range(50):
                lo = rng.randrange(-1000, p * 600 + 1000)
                hi = lo + rng.randrange(1, 3000)
                probes = []
                lookup_partitions(index, TimeWindow(lo, hi), on_probe=lambda: probes.append(1))
                assert len(probes) <= budget

    def test_matches_linear_scan_over_starts(self):
        rng = random.Random(9)
        index = self._index([0, 59 * 600], 600)
        for _ in range(200):
            lo = rng.randrange(-2000, 40000)
            hi = lo + rng.randrange(1, 20000)
            window = TimeWindow(lo, hi)
            got = list(lookup_partitions(index, window))
            expected = [
                i for i, s in enumerate(index.partition_starts)
                if s < hi and s + 600 > lo
            ]
            assert got == expected


class TestRetrieve:
    def test_absent_keyword_empty(self, synth_corpus):
        _, index = synth_corpus
        assert retrieve(index, ["no-such-keyword"], [TimeWindow.unbounded()]) == set()

    def test_known_fixture_point_found(self, city):
        traj = Trajectory("t1", [TrajectoryPoint("sa", 500)])
        docs, _ = _docs([traj], city)
        index = build_index(docs, window_size=600)
        assert retrieve(index, ["sa"], [TimeWindow(0, 1000)]) == {"t1"}
        assert retrieve(index, ["alpha"], [TimeWindow(0, 1000)]) == {"t1"}
        assert retrieve(index, ["sa"], [TimeWindow(501, 1000)]) == set()

    def test_twenty_random_queries_match_oracle(self, synth_corpus):
        docs, index = synth_corpus
        rng = random.Random(8)
        keywords = sorted({k for p in index.partitions for k in p.postings})
        min_ts = index.partition_starts[0]
        span = index.partition_starts[-1] + index.window_size - min_ts
        for _ in range(20):
            key = rng.choice(keywords)
            lo = min_ts + rng.randrange(span)
            hi = lo + rng.randrange(600, span)
            windows = [TimeWindow(lo, hi)]
            assert retrieve(index, [key], windows) == _scan_oracle(index, docs, key, windows)

    def test_daily_window_refines_by_time_of_day(self, synth_corpus):
        docs, index = synth_corpus
        windows = [TimeWindow(6 * 3600, 9 * 3600, daily=True)]
        rng = random.Random(3)
        keywords = sorted({k for p in index.partitions for k in p.postings})
        for _ in range(10):
            key = rng.choice(keywords)
            assert retrieve(index, [key], windows) == _scan_oracle(index, docs, key, windows)


def _mk_constraints(groups, combinator="and", ordered=False, windows=None):
    sgs = []
    for i, g in enumerate(groups):
        sgs.append(SpatialGroup(list(g), order_index=i if ordered else None))
    return QueryConstraints(
        windows=windows or [TimeWindow.unbounded()],
        groups=sgs,
        combinator=combinator,
    )


@pytest.fixture(scope="module")
def abc_fixture(city):
    stations, pois, assignment = city
    trajs = [
        Trajectory("t_ab", [TrajectoryPoint("sa", 100), TrajectoryPoint("sb", 200)]),
        Trajectory("t_ba", [TrajectoryPoint("sb", 100), TrajectoryPoint("sa", 200)]),
        Trajectory("t_a", [TrajectoryPoint("sa", 150)]),
    ]
    docs, _ = _docs(trajs, city)
    index = build_index(docs, window_size=600)
    group_a = [ScoredPoi("pa", 1.0, [])]
    group_b = [ScoredPoi("pb", 0.5, [])]
    return index, assignment, group_a, group_b


class TestQuery:
    def test_single_group_equals_retrieve(self, abc_fixture):
        index, assignment, group_a, _ = abc_fixture
        constraints = _mk_constraints([["alpha"]])
        results = query(index, constraints, [group_a], assignment)
        ids = {r.trajectory_id for r in results}
        assert ids == retrieve(index, ["sa"], constraints.windows)
        assert all(r.matched[0] for r in results)

    def test_ordered_a_before_b_selects_only_correct_one(self, abc_fixture):
        index, assignment, group_a, group_b = abc_fixture
        constraints = _mk_constraints([["alpha"], ["beta"]], ordered=True)
        results = query(index, constraints, [group_a, group_b], assignment)
        assert [r.trajectory_id for r in results] == ["t_ab"]
        (match_a,), (match_b,) = results[0].matched
        assert match_a[2] < match_b[2]

    def test_and_or_match_set_algebra_oracle(self, abc_fixture):
        index, assignment, group_a, group_b = abc_fixture
        set_a = retrieve(index, ["sa"], [TimeWindow.unbounded()])
        set_b = retrieve(index, ["sb"], [TimeWindow.unbounded()])
        both = query(index, _mk_constraints([["alpha"], ["beta"]], "and"),
                     [group_a, group_b], assignment)
        either = query(index, _mk_constraints([["alpha"], ["beta"]], "or"),
                       [group_a, group_b], assignment)
        assert {r.trajectory_id for r in both} == set_a & set_b
        assert {r.trajectory_id for r in either} == set_a | set_b

    def test_before_subset_of_and(self, abc_fixture):
        index, assignment, group_a, group_b = abc_fixture
        ordered = query(index, _mk_constraints([["alpha"], ["beta"]], ordered=True),
                        [group_a, group_b], assignment)
        unordered = query(index, _mk_constraints([["alpha"], ["beta"]], "and"),
                          [group_a, group_b], assignment)
        assert {r.trajectory_id for r in ordered} <= {r.trajectory_id for r in unordered}

    def test_relevance_normalized_top_is_one(self, abc_fixture):
        index, assignment, group_a, group_b = abc_fixture
        results = query(index, _mk_constraints([["alpha"], ["beta"]], "or"),
                        [group_a, group_b], assignment)
        assert results
        assert results[0].relevance == pytest.approx(1.0)
        assert all(0.0 <= r.relevance <= 1.0 for r in results)
        # t_ab and t_ba hit both groups, t_a only group a
        by_id = {r.trajectory_id: r.relevance for r in results}
        assert by_id["t_a"] < by_id["t_ab"] == by_id["t_ba"] == 1.0

    def test_empty_result_is_value_not_error(self, abc_fixture):
        index, assignment, group_a, group_b = abc_fixture
        constraints = _mk_constraints([["alpha"], ["beta"]], "and",
                                      windows=[TimeWindow(10_000_000, 10_000_600)])
        assert query(index, constraints, [group_a, group_b], assignment) == []

    def test_empty_candidate_group_raises(self, abc_fixture):
        index, assignment, group_a, _ = abc_fixture
        with pytest.raises(NoCandidates):
            query(index, _mk_constraints([["alpha"], ["beta"]]), [group_a, []], assignment)


class TestPersistence:
    def test_rebuild_is_byte_identical(self, city, tmp_path):
        trajs = [
            Trajectory("t1", [TrajectoryPoint("sa", 100), TrajectoryPoint("sb", 800)]),
            Trajectory("t2", [TrajectoryPoint("sc", 7 * 3600)]),
        ]
        docs, _ = _docs(trajs, city)
        dir1 = tmp_path / "i1"
        dir2 = tmp_path / "i2"
        save_index(build_index(docs, 600), dir1)
        save_index(build_index(docs, 600), dir2)
        files1 = sorted(p.name for p in dir1.iterdir())
        files2 = sorted(p.name for p in dir2.iterdir())
        assert files1 == files2
        for name in files1:
            assert (dir1 / name).read_bytes() == (dir2 / name).read_bytes()

    def test_roundtrip_preserves_retrieval(self, city, tmp_path):
        trajs = [
            Trajectory("t1", [TrajectoryPoint("sa", 100), TrajectoryPoint("sb", 800)]),
            Trajectory("t2", [TrajectoryPoint("sc", 7 * 3600)]),
        ]
        docs, _ = _docs(trajs, city)
        index = build_index(docs, 600)
        save_index(index, tmp_path / "idx")
        loaded = load_index(tmp_path / "idx")
        assert loaded.partition_starts == index.partition_starts
        assert loaded.window_size == index.window_size
        for key in ("sa", "sb", "sc", "alpha", "morning"):
            assert retrieve(loaded, [key], [TimeWindow.unbounded()]) == retrieve(
                index, [key], [TimeWindow.unbounded()]
            )
        assert loaded.docs_by_id.keys() == index.docs_by_id.keys()
        for tid in loaded.docs_by_id:
            assert loaded.docs_by_id[tid] == index.docs_by_id[tid]
