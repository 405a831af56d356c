"""Event-topic matrix rows built from A0/A1 argument nouns."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from timeline_coref.corpus import EventMention
from timeline_coref.topics import TopicModel


@dataclass(frozen=True, eq=False)
class EventVector:
    event_id: str
    values: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, EventVector):
            return NotImplemented
        return self.event_id == other.event_id and np.array_equal(self.values, other.values)

    __hash__ = None


def argument_nouns(event: EventMention) -> list[str]:
    nouns: list[str] = []
    for arg in event.arguments:
        if arg.role in ("A0", "A1"):
            nouns.extend(n.lower() for n in arg.noun_tokens)
    return nouns


def topic_weights(nouns: Iterable[str], model: TopicModel, *, multiset: bool = True) -> np.ndarray:
    """Per-topic sum of the top-list weights of ``nouns``.

    Sums use ``math.fsum`` so the result does not depend on noun order.
    """
    nouns = list(nouns)
    if not multiset:
        nouns = sorted(set(nouns))
    terms: dict[int, list[float]] = {}
    for noun in nouns:
        for topic, weight in model.topics_of(noun):
            terms.setdefault(topic, []).append(weight)
    values = np.zeros(model.K, dtype=np.float64)
    for topic, ws in terms.items():
        values[topic] = math.fsum(ws)
    return values


def vectorize(event: EventMention, model: TopicModel, *, multiset: bool = True) -> EventVector:
    return EventVector(event.event_id, topic_weights(argument_nouns(event), model, multiset=multiset))


def matrix_tsv(rows: Sequence[tuple[str, np.ndarray]]) -> str:
    """``key<TAB>v0<TAB>v1 ...`` per row; values printed round-trip exact."""
    return "".join(key + "\t" + "\t".join(repr(float(x)) for x in vec) + "\n" for key, vec in rows)
