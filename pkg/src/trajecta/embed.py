"""Word vector space for spatial-keyword augmentation.

Desk-scale trainer: a PPMI co-occurrence matrix factored by truncated
SVD. Deterministic, no SGD. Pretrained vectors in the plain text format
(`<count> <dim>` header, one word per line) can be loaded instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadHeader, DimTooLarge, EmptyCorpus, RowDimMismatch, UnknownWord, ZeroVector


@dataclass
class EmbeddingSpace:
    dim: int
    vectors: dict[str, np.ndarray]


def train_embeddings(
    documents: list[list[str]],
    dim: int,
    window: int = 4,
    seed: int = 0,
) -> EmbeddingSpace:
    """Factor a symmetric-window PPMI matrix into ``dim`` dimensions.

    ``seed`` is accepted for interface symmetry with stochastic trainers;
    the pipeline here is fully deterministic regardless.
    """
    del seed
    vocab_words = sorted({w for doc in documents for w in doc})
    if not vocab_words:
        raise EmptyCorpus("embedding corpus")
    if dim > len(vocab_words):
        raise DimTooLarge(dim, len(vocab_words))
    index = {w: i for i, w in enumerate(vocab_words)}

    V = len(vocab_words)
    counts = np.zeros((V, V), dtype=float)
    for doc in documents:
        idx = [index[w] for w in doc]
        n = len(idx)
        for i in range(n):
            lo = max(0, i - window)
            hi = min(n, i + window + 1)
            wi = idx[i]
            for j in range(lo, hi):
                if j != i:
                    counts[wi, idx[j]] += 1.0

    total = counts.sum()
    if total == 0:
        # single-word documents only: no co-occurrence signal at all
        raise EmptyCorpus("embedding corpus (no co-occurrences)")
    row = counts.sum(axis=1, keepdims=True)
    col = counts.sum(axis=0, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        pmi = np.log(counts * total / (row @ col))
    ppmi = np.where(np.isfinite(pmi), np.maximum(pmi, 0.0), 0.0)

    u, s, _ = np.linalg.svd(ppmi, full_matrices=False)
    vecs = u[:, :dim] * np.sqrt(s[:dim])
    return EmbeddingSpace(dim, {w: vecs[i].copy() for w, i in index.items()})


def load_embeddings(path) -> EmbeddingSpace:
    """Load a text vector file: header `<count> <dim>`, then word rows."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise BadHeader("expected `<count> <dim>`")
        try:
            _, dim = int(header[0]), int(header[1])
        except ValueError:
            raise BadHeader("count and dim must be integers") from None
        if dim < 1:
            raise BadHeader("dim must be >= 1")
        vectors: dict[str, np.ndarray] = {}
        for lineno, line in enumerate(fh, start=2):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != dim + 1:
                raise RowDimMismatch(lineno)
            try:
                vec = np.array([float(x) for x in parts[1:]])
            except ValueError:
                raise RowDimMismatch(lineno) from None
            vectors[parts[0]] = vec
    return EmbeddingSpace(dim, vectors)


def save_embeddings(space: EmbeddingSpace, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(space.vectors)} {space.dim}\n")
        for word in sorted(space.vectors):
            floats = " ".join(repr(float(x)) for x in space.vectors[word])
            fh.write(f"{word} {floats}\n")


def _vector(space: EmbeddingSpace, word: str) -> np.ndarray:
    vec = space.vectors.get(word)
    if vec is None:
        raise UnknownWord(word)
    return vec


def sim(space: EmbeddingSpace, w1: str, w2: str) -> float:
    """Cosine similarity between two words' vectors."""
    v1 = _vector(space, w1)
    v2 = _vector(space, w2)
    n1 = math.sqrt(float(v1 @ v1))
    n2 = math.sqrt(float(v2 @ v2))
    if n1 == 0.0:
        raise ZeroVector(w1)
    if n2 == 0.0:
        raise ZeroVector(w2)
    return float(v1 @ v2) / (n1 * n2)


def neighbors(
    space: EmbeddingSpace,
    word: str,
    k: int = 4,
    min_sim: float = 0.35,
) -> list[tuple[str, float]]:
    """Up to ``k`` nearest words with similarity >= ``min_sim``.

    The query word itself and words with all-zero vectors are excluded;
    ties break lexicographically.
    """
    _vector(space, word)
    scored: list[tuple[str, float]] = []
    for other in space.vectors:
        if other == word:
            continue
        try:
            s = sim(space, word, other)
        except ZeroVector:
            continue
        if s >= min_sim:
            scored.append((other, s))
    scored.sort(key=lambda ws: (-ws[1], ws[0]))
    return scored[: max(0, k)]
