"""LDA topic model trained by collapsed Gibbs sampling.

Only the twenty heaviest words of each topic are exposed as the knowledge
base: :func:`word_weight` returns 0 for anything outside a topic's top list.
"""

from __future__ import annotations

import base64
import hashlib
import json
import logging
import os
import re
import struct
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
from numba import njit

log = logging.getLogger(__name__)

TOP_N = 20
MAGIC = b"TCTM"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sH32s")

_TOKEN_RE = re.compile(r"[^\W_]+")


class ConfigurationError(ValueError):
    pass


class ModelFormatError(ValueError):
    pass


class ModelChecksumError(ModelFormatError):
    pass


def tokenize(text: str) -> list[str]:
    """Lowercase and split on anything that is not a letter or digit."""
    return _TOKEN_RE.findall(text.lower())


def read_reference_corpus(path) -> list[list[str]]:
    """A directory holds one document per ``*.txt`` file; a file holds one per line."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"reference corpus not found: {path}")
    if path.is_dir():
        return [tokenize(p.read_text(encoding="utf-8")) for p in sorted(path.glob("*.txt"))]
    with open(path, encoding="utf-8") as fh:
        return [tokenize(line) for line in fh if line.strip()]


@dataclass(frozen=True)
class Vocabulary:
    words: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))
        index = {w: i for i, w in enumerate(self.words)}
        if len(index) != len(self.words):
            raise ValueError("vocabulary words must be unique")
        object.__setattr__(self, "_index", index)

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in self._index

    @property
    def size(self) -> int:
        return len(self.words)

    def id(self, word: str) -> Optional[int]:
        return self._index.get(word)

    def as_dict(self) -> dict[str, int]:
        return dict(self._index)


def build_vocabulary(corpus: Iterable[Sequence[str]], min_count: int = 1, stopwords: Iterable[str] = ()) -> Vocabulary:
    """Lowercased words seen at least ``min_count`` times, ids in first-seen order."""
    if min_count < 1:
        raise ConfigurationError("min_count must be >= 1")
    stop = {w.lower() for w in stopwords}
    counts: dict[str, int] = {}
    for doc in corpus:
        for tok in doc:
            w = tok.lower()
            counts[w] = counts.get(w, 0) + 1
    # dicts keep insertion order, i.e. first occurrence
    words = tuple(w for w, c in counts.items() if c >= min_count and w not in stop)
    if not words:
        raise ConfigurationError("vocabulary is empty after frequency and stopword filtering")
    return Vocabulary(words)


@njit(cache=True)
def _gibbs_sweep(words, docs, z, ndk, nkw, nk, alpha, beta, vbeta, u, p):
    K = nk.shape[0]
    for i in range(words.shape[0]):
        w = words[i]
        d = docs[i]
        k = z[i]
        ndk[d, k] -= 1
        nkw[k, w] -= 1
        nk[k] -= 1
        total = 0.0
        for t in range(K):
            total += (ndk[d, t] + alpha) * (nkw[t, w] + beta) / (nk[t] + vbeta)
            p[t] = total
        r = u[i] * total
        k = 0
        while k < K - 1 and p[k] <= r:
            k += 1
        z[i] = k
        ndk[d, k] += 1
        nkw[k, w] += 1
        nk[k] += 1


def _top_words(phi: np.ndarray, words: Sequence[str], n: int) -> tuple:
    V = phi.shape[1]
    ids = np.arange(V)
    out = []
    for row in phi:
        order = np.lexsort((ids, -row))[: min(n, V)]
        out.append(tuple((words[j], float(row[j])) for j in order))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class TopicModel:
    vocabulary: Vocabulary
    phi: np.ndarray
    alpha: float
    beta: float
    seed: int
    iterations: int
    top_n: int = TOP_N
    top_words: tuple = field(init=False, repr=False)
    _weights: tuple = field(init=False, repr=False)
    _by_word: dict = field(init=False, repr=False)

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=np.float64)
        if phi.ndim != 2 or phi.shape[1] != len(self.vocabulary):
            raise ValueError(f"phi shape {phi.shape} does not match vocabulary size {len(self.vocabulary)}")
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)
        top = _top_words(phi, self.vocabulary.words, self.top_n)
        object.__setattr__(self, "top_words", top)
        object.__setattr__(self, "_weights", tuple(dict(t) for t in top))
        by_word: dict[str, list] = {}
        for k, pairs in enumerate(top):
            for w, weight in pairs:
                by_word.setdefault(w, []).append((k, weight))
        object.__setattr__(self, "_by_word", {w: tuple(v) for w, v in by_word.items()})

    @property
    def K(self) -> int:
        return self.phi.shape[0]

    @property
    def V(self) -> int:
        return self.phi.shape[1]

    def topics_of(self, word: str) -> tuple:
        """``(topic, weight)`` pairs for every topic whose top list holds ``word``."""
        return self._by_word.get(word.lower(), ())

    def checksum(self) -> str:
        return hashlib.sha256(_payload(self)).hexdigest()

    def __eq__(self, other):
        if not isinstance(other, TopicModel):
            return NotImplemented
        return (
            self.vocabulary == other.vocabulary
            and self.phi.shape == other.phi.shape
            and np.array_equal(self.phi, other.phi)
            and (self.alpha, self.beta, self.seed, self.iterations, self.top_n)
            == (other.alpha, other.beta, other.seed, other.iterations, other.top_n)
        )

    __hash__ = None


def train_lda(
    corpus: Sequence[Sequence[str]],
    vocab: Vocabulary,
    K: int = 500,
    alpha: Optional[float] = None,
    beta: float = 0.01,
    iterations: int = 1000,
    seed: int = 0,
    top_n: int = TOP_N,
) -> TopicModel:
    """Fit ``K`` topics by collapsed Gibbs sampling; ``alpha`` defaults to 50/K.

    Each token's topic is resampled from

        p(z = k) ~ (n_dk + alpha) * (n_kw + beta) / (n_k + V * beta)

    with the token's own assignment removed from the counts.  phi is the
    point estimate of the final sample.  Uniform draws come from a seeded
    numpy generator, so a given input and seed always yield the same phi.
    """
    if K < 1:
        raise ConfigurationError("K must be >= 1")
    if alpha is None:
        alpha = 50.0 / K
    if alpha <= 0 or beta <= 0:
        raise ConfigurationError("alpha and beta must be positive")
    if iterations < 1:
        raise ConfigurationError("iterations must be >= 1")

    word_ids: list[int] = []
    doc_ids: list[int] = []
    for d, doc in enumerate(corpus):
        for tok in doc:
            j = vocab.id(tok.lower())
            if j is not None:
                word_ids.append(j)
                doc_ids.append(d)
    if not word_ids:
        raise ConfigurationError("corpus is empty after vocabulary filtering")

    V = len(vocab)
    D = len(corpus)
    words = np.asarray(word_ids, dtype=np.int64)
    docs = np.asarray(doc_ids, dtype=np.int64)
    rng = np.random.default_rng(seed)
    z = rng.integers(0, K, size=words.shape[0]).astype(np.int64)
    ndk = np.zeros((D, K), dtype=np.int64)
    nkw = np.zeros((K, V), dtype=np.int64)
    np.add.at(ndk, (docs, z), 1)
    np.add.at(nkw, (z, words), 1)
    nk = nkw.sum(axis=1)
    p = np.empty(K, dtype=np.float64)

    log.info("training LDA: K=%d V=%d D=%d tokens=%d iterations=%d", K, V, D, words.shape[0], iterations)
    for it in range(iterations):
        u = rng.random(words.shape[0])
        _gibbs_sweep(words, docs, z, ndk, nkw, nk, float(alpha), float(beta), V * float(beta), u, p)
        if (it + 1) % 100 == 0:
            log.debug("iteration %d/%d", it + 1, iterations)

    phi = (nkw + beta) / (nk[:, None] + V * beta)
    return TopicModel(vocab, phi, float(alpha), float(beta), int(seed), int(iterations), top_n)


def word_weight(model: TopicModel, word: str, topic: int) -> float:
    """phi[topic][word] when ``word`` is in the topic's top list, else 0."""
    if not 0 <= topic < model.K:
        raise IndexError(f"topic {topic} out of range for K={model.K}")
    return model._weights[topic].get(word.lower(), 0.0)


def _payload(model: TopicModel) -> bytes:
    phi = np.ascontiguousarray(model.phi, dtype="<f8")
    body = {
        "K": model.K,
        "V": model.V,
        "alpha": model.alpha,
        "beta": model.beta,
        "seed": model.seed,
        "iterations": model.iterations,
        "top_n": model.top_n,
        "vocabulary": list(model.vocabulary.words),
        "phi": base64.b64encode(phi.tobytes()).decode("ascii"),
        "top_words": [[[w, x] for w, x in topic] for topic in model.top_words],
    }
    return json.dumps(body, ensure_ascii=False, sort_keys=True).encode("utf-8")


def save_model(model: TopicModel) -> bytes:
    payload = _payload(model)
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, hashlib.sha256(payload).digest())
    return header + zlib.compress(payload, 9)


def load_model(data: bytes) -> TopicModel:
    if len(data) < _HEADER.size:
        raise ModelChecksumError("model file truncated")
    magic, version, digest = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ModelFormatError("not a topic model file")
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format version {version} (expected {FORMAT_VERSION})")
    try:
        payload = zlib.decompress(data[_HEADER.size :])
    except zlib.error:
        raise ModelChecksumError("model file is truncated or corrupt") from None
    if hashlib.sha256(payload).digest() != digest:
        raise ModelChecksumError("model checksum mismatch")
    body = json.loads(payload)
    phi = np.frombuffer(base64.b64decode(body["phi"]), dtype="<f8").reshape(body["K"], body["V"]).astype(np.float64)
    model = TopicModel(
        Vocabulary(body["vocabulary"]),
        phi,
        body["alpha"],
        body["beta"],
        body["seed"],
        body["iterations"],
        body["top_n"],
    )
    stored = tuple(tuple((w, x) for w, x in topic) for topic in body["top_words"])
    if stored != model.top_words:
        raise ModelFormatError("stored top-word lists disagree with phi")
    return model


def save_model_file(model: TopicModel, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(save_model(model))
    os.replace(tmp, path)


def load_model_file(path) -> TopicModel:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"topic model not found: {path}")
    return load_model(path.read_bytes())
