"""Three-stage event coreference clustering.

1. temporal: events anchored to the same calendar value,
2. lemma: split each date cluster by head lemma (run1 stops here),
3. topic: split each lemma cluster in two with k-means over the events'
   argument topic vectors (run2).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from timeline_coref.corpus import AnnotatedDocument, CalendarValue, Granularity
from timeline_coref.entities import TargetEntity, filter_events
from timeline_coref.temporal import ANCHORED, TimeAnchor, anchor_events, build_graph
from timeline_coref.topics import TopicModel
from timeline_coref.vectorize import EventVector, vectorize

log = logging.getLogger(__name__)

MemberKey = tuple[str, str]  # (doc_id, event_id)

COARSENING = {
    None: None,
    "none": None,
    "day": Granularity.DAY,
    "month": Granularity.MONTH,
    "year": Granularity.YEAR,
}


class InvariantError(RuntimeError):
    """A stage broke a structural guarantee of the pipeline."""


@dataclass(frozen=True)
class Cluster:
    members: tuple[MemberKey, ...]
    date: CalendarValue
    lemma: Optional[str] = None

    def __post_init__(self):
        members = tuple(sorted(set(self.members)))
        if not members:
            raise ValueError("a cluster needs at least one member")
        if len(members) != len(self.members):
            raise ValueError("duplicate cluster members")
        object.__setattr__(self, "members", members)

    def sort_key(self):
        return (self.date.sort_key(), self.lemma or "", self.members)


@dataclass(frozen=True, eq=False)
class KMeansResult:
    assignments: tuple[int, ...]
    centroids: np.ndarray
    iterations_used: int
    inertia: float
    history: tuple[float, ...] = ()
    degenerate: bool = False
    empty: tuple[bool, ...] = ()


@dataclass(frozen=True)
class PipelineOptions:
    k: int = 2
    min_split_size: int = 3
    max_iter: int = 100
    coarsen: Optional[str] = None
    multiset: bool = True
    token_fallback: bool = False

    def __post_init__(self):
        if self.coarsen not in COARSENING:
            raise ValueError(f"unknown date coarsening {self.coarsen!r}")
        if self.k < 1 or self.min_split_size < 1 or self.max_iter < 1:
            raise ValueError("k, min_split_size and max_iter must be positive")


# -- stage 1 -----------------------------------------------------------------


def temporal_cluster(
    events: Iterable[tuple[str, str, TimeAnchor]], coarsen: Optional[str] = None
) -> list[Cluster]:
    """One cluster per distinct anchored date, ascending by date.

    ORDERED_ONLY and UNRESOLVED events are left out; see :func:`unanchored`.
    """
    level = COARSENING[coarsen]
    groups: dict[CalendarValue, list[MemberKey]] = {}
    for doc_id, event_id, anchor in events:
        if anchor.status != ANCHORED:
            continue
        value = anchor.value if level is None else anchor.value.truncate(level)
        groups.setdefault(value, []).append((doc_id, event_id))
    return [Cluster(tuple(groups[d]), d) for d in sorted(groups)]


def unanchored(events: Iterable[tuple[str, str, TimeAnchor]]) -> list[tuple[str, str, str]]:
    return [(doc_id, event_id, a.status) for doc_id, event_id, a in events if a.status != ANCHORED]


# -- stage 2 -----------------------------------------------------------------


def lemma_cluster(cluster: Cluster, lemmas: Mapping[MemberKey, str]) -> list[Cluster]:
    groups: dict[str, list[MemberKey]] = {}
    for m in cluster.members:
        groups.setdefault(lemmas[m], []).append(m)
    return [Cluster(tuple(groups[lem]), cluster.date, lem) for lem in sorted(groups)]


# -- stage 3 -----------------------------------------------------------------


def _sq_distances(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    diff = X[:, None, :] - C[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _kmeanspp(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = _sq_distances(X, X[chosen[0]][None, :])[:, 0]
    for _ in range(1, k):
        total = d2.sum()
        r = rng.random() * total
        idx = int(np.searchsorted(np.cumsum(d2), r, side="right"))
        if idx >= n or d2[idx] <= 0:
            idx = int(np.argmax(d2))
        chosen.append(idx)
        d2 = np.minimum(d2, _sq_distances(X, X[idx][None, :])[:, 0])
    return X[chosen].copy()


def _degenerate(X: np.ndarray, k: int) -> KMeansResult:
    # fewer distinct points than clusters: each distinct vector is its own cluster
    first_seen: dict[bytes, int] = {}
    labels = []
    for row in X:
        key = (row + 0.0).tobytes()  # -0.0 and 0.0 are the same point
        if key not in first_seen:
            first_seen[key] = len(first_seen)
        labels.append(first_seen[key])
    m = len(first_seen)
    centroids = np.zeros((k, X.shape[1]))
    for i, lab in enumerate(labels):
        centroids[lab] = X[i]
    return KMeansResult(
        tuple(labels), centroids, 0, 0.0, (0.0,), degenerate=True, empty=tuple(j >= m for j in range(k))
    )


def kmeans(vectors: Sequence, k: int, seed: int = 0, max_iter: int = 100) -> KMeansResult:
    """Lloyd's algorithm with seeded k-means++ starts and Euclidean distance.

    Stops when assignments stop changing or after ``max_iter`` updates.  A
    cluster that empties is reseeded at the point farthest from its own
    centroid.  Ties in distance go to the lower cluster index.  If there are
    fewer distinct vectors than ``k`` the result is flagged degenerate and
    the surplus clusters are flagged empty.
    """
    X = np.asarray([v.values if isinstance(v, EventVector) else v for v in vectors], dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("kmeans needs a non-empty list of equal-length vectors")
    if k < 1:
        raise ValueError("k must be >= 1")
    n = X.shape[0]
    if k > len(np.unique(X, axis=0)):
        return _degenerate(X, k)

    rng = np.random.default_rng(seed)
    C = _kmeanspp(X, k, rng)
    D = _sq_distances(X, C)
    labels = D.argmin(axis=1)
    history = [float(D[np.arange(n), labels].sum())]
    iterations = 0
    for _ in range(max_iter):
        iterations += 1
        new_C = np.empty_like(C)
        counts = np.bincount(labels, minlength=k)
        for j in range(k):
            if counts[j]:
                new_C[j] = X[labels == j].mean(axis=0)
        empties = [j for j in range(k) if not counts[j]]
        if empties:
            own = np.einsum("ij,ij->i", X - new_C[labels], X - new_C[labels])
            for j in empties:
                far = int(np.argmax(own))
                new_C[j] = X[far]
                own[far] = -1.0
                log.debug("k-means: reseeded empty cluster %d at point %d", j, far)
        D = _sq_distances(X, new_C)
        new_labels = D.argmin(axis=1)
        history.append(float(D[np.arange(n), new_labels].sum()))
        C = new_C
        if np.array_equal(new_labels, labels):
            labels = new_labels
            break
        labels = new_labels
    counts = np.bincount(labels, minlength=k)
    return KMeansResult(
        tuple(int(x) for x in labels),
        C,
        iterations,
        history[-1],
        tuple(history),
        degenerate=False,
        empty=tuple(bool(c == 0) for c in counts),
    )


def topic_cluster(
    cluster: Cluster,
    vectors: Mapping[MemberKey, object],
    seed: int = 0,
    *,
    k: int = 2,
    min_split_size: int = 3,
    max_iter: int = 100,
) -> list[Cluster]:
    """Split a lemma cluster with k-means; small clusters pass through."""
    if len(cluster.members) < min_split_size:
        return [cluster]
    rows = [vectors[m] for m in cluster.members]
    result = kmeans(rows, k, seed=seed, max_iter=max_iter)
    groups: dict[int, list[MemberKey]] = {}
    for m, lab in zip(cluster.members, result.assignments):
        groups.setdefault(lab, []).append(m)
    if len(groups) == 1:
        return [cluster]
    parts = [Cluster(tuple(g), cluster.date, cluster.lemma) for g in groups.values()]
    return sorted(parts, key=Cluster.sort_key)


# -- whole pipeline ----------------------------------------------------------


def check_partition(parent: Sequence[Cluster], children: Sequence[Cluster], stage: str) -> None:
    before = [m for c in parent for m in c.members]
    after = [m for c in children for m in c.members]
    if len(after) != len(set(after)):
        raise InvariantError(f"{stage}: an event landed in two clusters")
    if set(before) != set(after) or len(before) != len(after):
        raise InvariantError(f"{stage}: events lost or invented")


def anchor_corpus(corpus: Sequence[AnnotatedDocument]) -> dict[str, dict[str, TimeAnchor]]:
    seen: set[str] = set()
    out = {}
    for doc in corpus:
        if doc.doc_id in seen:
            raise ValueError(f"duplicate doc_id {doc.doc_id!r} in corpus")
        seen.add(doc.doc_id)
        out[doc.doc_id] = anchor_events(doc, build_graph(doc))
    return out


def run_pipeline(
    corpus: Sequence[AnnotatedDocument],
    target: TargetEntity,
    model: Optional[TopicModel] = None,
    mode: str = "run1",
    seed: int = 0,
    options: Optional[PipelineOptions] = None,
    anchors: Optional[Mapping[str, Mapping[str, TimeAnchor]]] = None,
) -> list[Cluster]:
    """Coreference clusters for one target, ascending by date then lemma."""
    if mode not in ("run1", "run2"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "run2" and model is None:
        raise ValueError("run2 needs a topic model")
    options = options or PipelineOptions()
    if anchors is None:
        anchors = anchor_corpus(corpus)

    selected = []
    lemmas: dict[MemberKey, str] = {}
    events: dict[MemberKey, object] = {}
    for doc in corpus:
        by_id = {ev.event_id: ev for ev in doc.events}
        for event_id in filter_events(doc, target, token_fallback=options.token_fallback):
            key = (doc.doc_id, event_id)
            selected.append((doc.doc_id, event_id, anchors[doc.doc_id][event_id]))
            lemmas[key] = by_id[event_id].head_lemma
            events[key] = by_id[event_id]

    dated = temporal_cluster(selected, options.coarsen)
    clusters = [c for d in dated for c in lemma_cluster(d, lemmas)]
    check_partition(dated, clusters, "lemma clustering")
    if mode == "run2":
        vectors = {
            m: vectorize(events[m], model, multiset=options.multiset).values for c in clusters for m in c.members
        }
        refined = [
            part
            for c in clusters
            for part in topic_cluster(
                c, vectors, seed, k=options.k, min_split_size=options.min_split_size, max_iter=options.max_iter
            )
        ]
        check_partition(clusters, refined, "topic clustering")
        clusters = refined
    return sorted(clusters, key=Cluster.sort_key)
