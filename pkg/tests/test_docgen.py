from trajecta.core import Poi, Station, Trajectory, TrajectoryPoint
from trajecta.dictionaries import defaults
from trajecta.docgen import (
    build_documents,
    load_trajectory_documents,
    save_trajectory_documents,
    tokenize,
)
from trajecta.psr import assign_regions


class TestTokenize:
    def test_empty(self):
        assert tokenize("") == []

    def test_hyphen_splits(self):
        assert tokenize("WZ Train-Station") == ["wz", "train", "station"]

    def test_punctuation_and_digits(self):
        assert tokenize("Baihua park, No.7") == ["baihua", "park", "no", "7"]

    def test_underscore_splits(self):
        assert tokenize("a_b") == ["a", "b"]


def _city():
    stations = [Station("sa", 120.00, 28.0), Station("sb", 120.10, 28.0), Station("sc", 120.20, 28.0)]
    pois = [
        Poi("p1", "golden wok", "restaurant", "", 120.001, 28.0),
        Poi("p2", "noodle house", "restaurant", "", 120.002, 28.0),
        Poi("p3", "river park", "park", "", 120.003, 28.0),
        Poi("p4", "grand hotel", "hotel", "", 120.101, 28.0),
    ]
    assignment = assign_regions(stations, pois)
    return stations, pois, assignment


class TestBuildDocuments:
    def test_time_word_morning(self):
        stations, pois, assignment = _city()
        # 1970-01-01 07:30 local naive
        traj = Trajectory("t1", [TrajectoryPoint("sa", 7 * 3600 + 1800)])
        docs, _, _ = build_documents([traj], stations, assignment, pois, defaults())
        assert docs[0].entries[0].time_word == "morning"

    def test_time_word_outside_windows_is_empty(self):
        stations, pois, assignment = _city()
        traj = Trajectory("t1", [TrajectoryPoint("sa", 10 * 3600)])
        docs, _, _ = build_documents([traj], stations, assignment, pois, defaults())
        assert docs[0].entries[0].time_word == ""

    def test_region_document_is_category_multiset(self):
        stations, pois, assignment = _city()
        _, region_docs, _ = build_documents([], stations, assignment, pois, defaults())
        by_id = {d.region_id: d.words for d in region_docs}
        assert by_id["sa"] == ["restaurant", "restaurant", "park"]
        assert by_id["sb"] == ["hotel"]
        assert by_id["sc"] == []

    def test_zero_poi_station_entry_has_empty_lists(self):
        stations, pois, assignment = _city()
        traj = Trajectory("t1", [TrajectoryPoint("sc", 1000)])
        docs, _, _ = build_documents([traj], stations, assignment, pois, defaults())
        entry = docs[0].entries[0]
        assert entry.poi_names == [] and entry.poi_categories == []

    def test_total_region_words_equal_poi_count(self):
        stations, pois, assignment = _city()
        _, region_docs, _ = build_documents([], stations, assignment, pois, defaults())
        assert sum(len(d.words) for d in region_docs) == len(pois)

    def test_poi_document_tokens_and_length(self):
        stations, pois, assignment = _city()
        _, _, poi_docs = build_documents([], stations, assignment, pois, defaults())
        d = next(doc for doc in poi_docs if doc.poi_id == "p1")
        assert d.tokens == ["golden", "wok", "restaurant"]
        assert d.length == 3

    def test_entries_parallel_points_and_carry_station_coords(self):
        stations, pois, assignment = _city()
        traj = Trajectory("t1", [TrajectoryPoint("sa", 100), TrajectoryPoint("sb", 200)])
        docs, _, _ = build_documents([traj], stations, assignment, pois, defaults())
        entries = docs[0].entries
        assert len(entries) == len(traj.points)
        assert entries[1].lon == 120.10 and entries[1].station_id == "sb"

    def test_poi_names_follow_poi_id_order(self):
        stations, pois, assignment = _city()
        traj = Trajectory("t1", [TrajectoryPoint("sa", 100)])
        docs, _, _ = build_documents([traj], stations, assignment, pois, defaults())
        assert docs[0].entries[0].poi_names == [["golden", "wok"], ["noodle", "house"], ["river", "park"]]

    def test_deterministic_and_roundtrips_via_jsonl(self, tmp_path):
        stations, pois, assignment = _city()
        trajs = [
            Trajectory("t1", [TrajectoryPoint("sa", 100), TrajectoryPoint("sb", 200)]),
            Trajectory("t2", [TrajectoryPoint("sc", 7 * 3600 + 60)]),
        ]
        docs1, _, _ = build_documents(trajs, stations, assignment, pois, defaults())
        docs2, _, _ = build_documents(trajs, stations, assignment, pois, defaults())
        assert docs1 == docs2
        path = tmp_path / "docs.jsonl"
        save_trajectory_documents(docs1, path)
        first = path.read_bytes()
        save_trajectory_documents(docs2, path)
        assert path.read_bytes() == first
        assert load_trajectory_documents(path) == docs1
