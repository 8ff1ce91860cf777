"""POI relevance: BM25 scoring, regional-topic enrichment, top-K selection.

The POI corpus is small, so scoring is a full scan; the same scan doubles
as the test oracle. Term frequency is normalized by document length
(f/|D|) and negative raw IDF values clamp to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .docgen import PoiDocument
from .embed import EmbeddingSpace, UnknownWord, neighbors
from .errors import NoSpatialConstraint
from .nlq import QueryConstraints
from .psr import RegionAssignment
from .topics import TopicModel, region_semantics


@dataclass
class Bm25Params:
    k: float = 1.2
    b: float = 0.75
    avgdl: float = 1.0
    m: int = 1
    df: dict[str, int] = field(default_factory=dict)  # word -> docs containing it

    @classmethod
    def from_documents(cls, docs: list[PoiDocument], k: float = 1.2, b: float = 0.75):
        if not docs:
            raise ValueError("need at least one POI document")
        df: dict[str, int] = {}
        total_len = 0
        for doc in docs:
            total_len += doc.length
            for word in set(doc.tokens):
                df[word] = df.get(word, 0) + 1
        avgdl = total_len / len(docs)
        if avgdl <= 0:
            raise ValueError("all POI documents are empty; BM25 is undefined")
        return cls(k=k, b=b, avgdl=avgdl, m=len(docs), df=df)


@dataclass
class ScoredPoi:
    poi_id: str
    score: float
    keyword_hits: list[tuple[str, float]]  # (keyword, BM25 contribution)


def idf(m: int, m_w: int) -> float:
    """Clamped inverse document frequency: max(0, ln((m-M+0.5)/(M+0.5)))."""
    return max(0.0, math.log((m - m_w + 0.5) / (m_w + 0.5)))


def bm25_term(word: str, doc: PoiDocument, params: Bm25Params) -> float:
    """Single-term relevance with length-normalized term frequency f/|D|."""
    if doc.length == 0:
        return 0.0
    f = doc.tokens.count(word)
    if f == 0:
        return 0.0
    tf = f / doc.length
    denom = tf + params.k * (1.0 - params.b + params.b * doc.length / params.avgdl)
    return idf(params.m, params.df.get(word, 0)) * tf * (params.k + 1.0) / denom


def score(doc: PoiDocument, weighted_words, params: Bm25Params) -> float:
    """Weighted sum of per-term relevances over the keyword list."""
    return sum(weight * bm25_term(word, doc, params) for word, weight in weighted_words)


def cosine(u, v) -> float:
    """Cosine of two vectors; zero when either has no magnitude."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(u @ v) / (nu * nv)


def enriched_score(
    doc: PoiDocument,
    weighted_words,
    params: Bm25Params,
    region_topics,
    preference,
    alpha: float,
    beta: float,
) -> float:
    """alpha * BM25 score + beta * cos(region topics, user preference)."""
    base = alpha * score(doc, weighted_words, params)
    if beta == 0.0 or preference is None:
        return base
    return base + beta * cosine(region_topics, preference)


def augment_keywords(
    space: EmbeddingSpace | None,
    keywords: list[str],
    neighbor_k: int = 4,
    min_sim: float = 0.35,
    weighted: bool = True,
) -> list[tuple[str, float]]:
    """Expand constraint keywords with embedding neighbors.

    Original words carry weight 1; neighbors carry their cosine similarity
    (or 1 in unweighted mode). Words absent from the space pass through
    unaugmented. Duplicates keep their highest weight.
    """
    weights: dict[str, float] = {}
    order: list[str] = []
    def put(word: str, weight: float):
        if word not in weights:
            weights[word] = weight
            order.append(word)
        elif weight > weights[word]:
            weights[word] = weight

    for word in keywords:
        put(word, 1.0)
        if space is None:
            continue
        try:
            near = neighbors(space, word, k=neighbor_k, min_sim=min_sim)
        except UnknownWord:
            continue
        for other, similarity in near:
            put(other, similarity if weighted else 1.0)
    return [(w, weights[w]) for w in order]


def top_k_pois(
    constraints: QueryConstraints,
    space: EmbeddingSpace | None,
    model: TopicModel | None,
    poi_docs: list[PoiDocument],
    params: Bm25Params,
    assignment: RegionAssignment,
    neighbor_k: int = 4,
    min_sim: float = 0.35,
    weighted: bool = True,
) -> list[list[ScoredPoi]]:
    """Per spatial group: augment keywords, score every POI, keep the top K.

    Only POIs with positive score are returned, ordered by score then id.
    """
    if not constraints.groups:
        raise NoSpatialConstraint()
    preference = constraints.topic_weights
    if preference is not None and not any(preference):
        preference = None  # all-zero preference contributes nothing by convention

    region_q: dict[str, np.ndarray] = {}
    def topics_for(poi_id: str):
        sid = assignment.poi_to_station.get(poi_id)
        if sid is None or model is None:
            return None
        if sid not in region_q:
            region_q[sid] = region_semantics(model, sid).q
        return region_q[sid]

    results: list[list[ScoredPoi]] = []
    for group in constraints.groups:
        weighted_words = augment_keywords(space, group.keywords, neighbor_k, min_sim, weighted)
        scored: list[ScoredPoi] = []
        for doc in poi_docs:
            hits = [(w, weight * bm25_term(w, doc, params)) for w, weight in weighted_words]
            base = sum(h for _, h in hits)
            total = constraints.alpha * base
            if constraints.beta != 0.0 and preference is not None:
                tl = topics_for(doc.poi_id)
                if tl is not None:
                    total += constraints.beta * cosine(tl, preference)
            if total > 0.0:
                scored.append(ScoredPoi(doc.poi_id, total, hits))
        scored.sort(key=lambda sp: (-sp.score, sp.poi_id))
        results.append(scored[: constraints.k])
    return results
