"""Regional functional topics via LDA over region documents.

Regions are documents, POI category words are the words. Training is
collapsed Gibbs sampling: a single seeded chain, point estimates taken
from the final count state with Dirichlet smoothing. That keeps runs
bit-reproducible, which matters more here than posterior averaging.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

import numpy as np

from .core import Trajectory
from .docgen import RegionDocument
from .errors import EmptyCorpus, TooFewTopics, UnknownRegion


@dataclass
class TopicModel:
    n_topics: int
    phi: np.ndarray  # (T, V) word-topic rows, each a distribution
    theta: np.ndarray  # (R, T) region-topic rows, each a distribution
    vocab: dict[str, int]
    regions: list[str]
    topic_labels: list[str]
    region_index: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.region_index:
            self.region_index = {rid: i for i, rid in enumerate(self.regions)}


@dataclass
class RegionSemantics:
    region_id: str
    q: np.ndarray  # length-T probability vector


@dataclass
class TrajectorySemantics:
    trajectory_id: str
    points: list[tuple[np.ndarray, int]]  # (topic vector, timestamp)


def _top_words(phi_row: np.ndarray, words: list[str], n: int) -> list[str]:
    order = sorted(range(len(words)), key=lambda w: (-phi_row[w], words[w]))
    return [words[w] for w in order[:n]]


def train_lda(
    region_docs: list[RegionDocument],
    n_topics: int,
    iters: int = 1000,
    alpha_lda: float | None = None,
    beta_lda: float = 0.01,
    seed: int = 0,
    sweep_hook=None,
) -> TopicModel:
    """Collapsed Gibbs sampling over region documents.

    ``alpha_lda`` defaults to 50/T. Empty documents are kept: they get a
    theta row that smoothing makes exactly uniform. ``sweep_hook(sweep,
    assigned_tokens)`` fires after every sweep for instrumentation.
    """
    if n_topics < 2:
        raise TooFewTopics(n_topics)
    if not any(doc.words for doc in region_docs):
        raise EmptyCorpus("region corpus")
    if alpha_lda is None:
        alpha_lda = 50.0 / n_topics

    words_sorted = sorted({w for doc in region_docs for w in doc.words})
    vocab = {w: i for i, w in enumerate(words_sorted)}
    V = len(vocab)
    T = n_topics
    docs = [[vocab[w] for w in doc.words] for doc in region_docs]
    R = len(docs)

    rng = random.Random(seed)
    # counts as flat python lists: the sampler below is the hot loop
    n_tw = [[0] * V for _ in range(T)]
    n_rt = [[0] * T for _ in range(R)]
    n_t = [0] * T
    z = [[0] * len(doc) for doc in docs]
    for d, doc in enumerate(docs):
        for pos, w in enumerate(doc):
            t = rng.randrange(T)
            z[d][pos] = t
            n_tw[t][w] += 1
            n_rt[d][t] += 1
            n_t[t] += 1

    v_beta = V * beta_lda
    topic_range = range(T)
    probs = [0.0] * T
    rand = rng.random
    for sweep in range(iters):
        for d, doc in enumerate(docs):
            z_d = z[d]
            n_d = n_rt[d]
            for pos, w in enumerate(doc):
                t_old = z_d[pos]
                n_tw[t_old][w] -= 1
                n_d[t_old] -= 1
                n_t[t_old] -= 1
                total = 0.0
                for t in topic_range:
                    p = (n_tw[t][w] + beta_lda) * (n_d[t] + alpha_lda) / (n_t[t] + v_beta)
                    probs[t] = p
                    total += p
                u = rand() * total
                acc = 0.0
                t_new = T - 1
                for t in topic_range:
                    acc += probs[t]
                    if u <= acc:
                        t_new = t
                        break
                z_d[pos] = t_new
                n_tw[t_new][w] += 1
                n_d[t_new] += 1
                n_t[t_new] += 1
        if sweep_hook is not None:
            sweep_hook(sweep, sum(n_t))

    phi = np.array(n_tw, dtype=float) + beta_lda
    phi /= phi.sum(axis=1, keepdims=True)
    theta = np.array(n_rt, dtype=float) + alpha_lda
    theta /= theta.sum(axis=1, keepdims=True)

    labels = ["/".join(_top_words(phi[t], words_sorted, 3)) for t in range(T)]
    return TopicModel(
        n_topics=T,
        phi=phi,
        theta=theta,
        vocab=vocab,
        regions=[doc.region_id for doc in region_docs],
        topic_labels=labels,
    )


def region_semantics(model: TopicModel, region_id: str) -> RegionSemantics:
    idx = model.region_index.get(region_id)
    if idx is None:
        raise UnknownRegion(region_id)
    return RegionSemantics(region_id, model.theta[idx])


def trajectory_semantics(model: TopicModel, trajectory: Trajectory) -> TrajectorySemantics:
    """Per-point (topic vector, timestamp) pairs; a point's region is its station's cell."""
    points = [
        (region_semantics(model, p.station_id).q, p.timestamp)
        for p in trajectory.points
    ]
    return TrajectorySemantics(trajectory.id, points)


# --- persistence -------------------------------------------------------------

def save_model(model: TopicModel, path) -> None:
    payload = {
        "n_topics": model.n_topics,
        "vocab": model.vocab,
        "phi": [[float(x) for x in row] for row in model.phi],
        "theta": {rid: [float(x) for x in model.theta[i]]
                  for i, rid in enumerate(model.regions)},
        "regions": model.regions,
        "topic_labels": model.topic_labels,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_model(path) -> TopicModel:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    regions = raw["regions"]
    theta = np.array([raw["theta"][rid] for rid in regions], dtype=float)
    return TopicModel(
        n_topics=raw["n_topics"],
        phi=np.array(raw["phi"], dtype=float),
        theta=theta,
        vocab={w: int(i) for w, i in raw["vocab"].items()},
        regions=list(regions),
        topic_labels=list(raw["topic_labels"]),
    )
