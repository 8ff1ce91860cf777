import numpy as np
import pytest

from trajecta.core import Trajectory, TrajectoryPoint
from trajecta.docgen import RegionDocument
from trajecta.errors import EmptyCorpus, TooFewTopics, UnknownRegion
from trajecta.topics import (
    load_model,
    region_semantics,
    save_model,
    train_lda,
    trajectory_semantics,
)


def _two_word_corpus():
    docs = []
    for i in range(20):
        docs.append(RegionDocument(f"ra{i}", ["a"] * 12))
        docs.append(RegionDocument(f"rb{i}", ["b"] * 12))
    return docs


def _anchored_corpus():
    """Pure restaurant docs, pure hotel docs, and one 4:1 mixed region."""
    docs = []
    for i in range(15):
        docs.append(RegionDocument(f"rest{i}", ["restaurant"] * 10))
        docs.append(RegionDocument(f"hot{i}", ["hotel"] * 10))
    docs.append(RegionDocument("mixed", ["restaurant"] * 4 + ["hotel"]))
    return docs


class TestTrainLda:
    def test_two_cluster_words_dominate_different_topics(self):
        model = train_lda(_two_word_corpus(), 2, iters=200, alpha_lda=0.5, seed=1)
        ia, ib = model.vocab["a"], model.vocab["b"]
        assert max(model.phi[t][ia] for t in range(2)) >= 0.9
        assert max(model.phi[t][ib] for t in range(2)) >= 0.9
        assert int(np.argmax(model.phi[:, ia])) != int(np.argmax(model.phi[:, ib]))

    def test_mixed_region_near_80_20(self):
        model = train_lda(_anchored_corpus(), 2, iters=300, alpha_lda=0.1, seed=3)
        rest_topic = int(np.argmax(model.phi[:, model.vocab["restaurant"]]))
        q = region_semantics(model, "mixed").q
        assert q[rest_topic] == pytest.approx(0.8, abs=0.15)
        assert q[1 - rest_topic] == pytest.approx(0.2, abs=0.15)

    def test_fixed_seed_bit_identical(self):
        docs = _two_word_corpus()
        m1 = train_lda(docs, 2, iters=50, seed=42)
        m2 = train_lda(docs, 2, iters=50, seed=42)
        assert np.array_equal(m1.phi, m2.phi)
        assert np.array_equal(m1.theta, m2.theta)

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            train_lda([RegionDocument("r", [])], 2)

    def test_too_few_topics(self):
        with pytest.raises(TooFewTopics):
            train_lda(_two_word_corpus(), 1)

    def test_gibbs_conserves_token_count_every_sweep(self):
        docs = _two_word_corpus()
        total_tokens = sum(len(d.words) for d in docs)
        seen = []
        train_lda(docs, 3, iters=10, seed=0, sweep_hook=lambda s, n: seen.append(n))
        assert len(seen) == 10
        assert all(n == total_tokens for n in seen)

    def test_rows_are_distributions(self):
        model = train_lda(_anchored_corpus(), 3, iters=50, seed=7)
        assert np.all(model.phi >= 0) and np.all(model.theta >= 0)
        np.testing.assert_allclose(model.phi.sum(axis=1), 1.0, atol=1e-9)
        np.testing.assert_allclose(model.theta.sum(axis=1), 1.0, atol=1e-9)

    def test_topic_labels_are_top_words(self):
        model = train_lda(_two_word_corpus(), 2, iters=100, alpha_lda=0.5, seed=1)
        assert all("/" in label for label in model.topic_labels)
        assert any(label.startswith("a/") or label.startswith("a") for label in model.topic_labels)


class TestRegionSemantics:
    def test_empty_document_region_is_exactly_uniform(self):
        docs = _two_word_corpus() + [RegionDocument("empty", [])]
        model = train_lda(docs, 4, iters=20, seed=0)
        q = region_semantics(model, "empty").q
        np.testing.assert_allclose(q, 0.25, atol=1e-12)

    def test_sums_to_one(self):
        model = train_lda(_anchored_corpus(), 3, iters=30, seed=2)
        for region in model.regions:
            assert region_semantics(model, region).q.sum() == pytest.approx(1.0, abs=1e-9)

    def test_unknown_region(self):
        model = train_lda(_two_word_corpus(), 2, iters=10, seed=0)
        with pytest.raises(UnknownRegion):
            region_semantics(model, "nowhere")


class TestTrajectorySemantics:
    def _model(self):
        return train_lda(_two_word_corpus(), 2, iters=30, seed=0)

    def test_single_point_composition(self):
        model = self._model()
        traj = Trajectory("t", [TrajectoryPoint("ra0", 100)])
        sem = trajectory_semantics(model, traj)
        assert len(sem.points) == 1
        np.testing.assert_array_equal(sem.points[0][0], region_semantics(model, "ra0").q)
        assert sem.points[0][1] == 100

    def test_length_and_timestamps_match(self):
        model = self._model()
        traj = Trajectory("t", [TrajectoryPoint("ra0", i * 60) for i in range(5)])
        sem = trajectory_semantics(model, traj)
        assert [ts for _, ts in sem.points] == [i * 60 for i in range(5)]

    def test_same_region_gives_identical_vectors(self):
        model = self._model()
        traj = Trajectory("t", [TrajectoryPoint("rb3", 1), TrajectoryPoint("rb3", 2)])
        sem = trajectory_semantics(model, traj)
        np.testing.assert_array_equal(sem.points[0][0], sem.points[1][0])


class TestPersistence:
    def test_save_load_roundtrip(self, tmp_path):
        model = train_lda(_anchored_corpus(), 3, iters=40, seed=5)
        path = tmp_path / "lda.json"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded.n_topics == model.n_topics
        assert loaded.vocab == model.vocab
        assert loaded.regions == model.regions
        assert loaded.topic_labels == model.topic_labels
        np.testing.assert_allclose(loaded.phi, model.phi, atol=0)
        np.testing.assert_allclose(loaded.theta, model.theta, atol=0)
