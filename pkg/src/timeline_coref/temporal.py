"""Time anchors for events by navigating the temporal-link graph.

Links are normalized to three relations (BEFORE, SIMULTANEOUS, IS_INCLUDED)
and closed under a small composition table:

    BEFORE o BEFORE            -> BEFORE
    SIMULTANEOUS o R, R o SIMULTANEOUS -> R      (for every R)
    BEFORE o IS_INCLUDED       -> nothing (unknown)

Everything not listed derives nothing.  SIMULTANEOUS is therefore an
equivalence, and the closure is computed over its classes: BEFORE is the
transitive closure of the class-level BEFORE edges, IS_INCLUDED the
class-level IS_INCLUDED edges spread over class members.  Reflexive
SIMULTANEOUS/IS_INCLUDED triples carry no information and are left out of
the result (they still take part in composition); a reflexive BEFORE is
kept because it witnesses an inconsistency.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from timeline_coref.corpus import (
    AFTER,
    BEFORE,
    INCLUDES,
    IS_INCLUDED,
    SIMULTANEOUS,
    AnnotatedDocument,
    CalendarValue,
)

log = logging.getLogger(__name__)

ANCHORED = "ANCHORED"
ORDERED_ONLY = "ORDERED_ONLY"
UNRESOLVED = "UNRESOLVED"

Triple = tuple[str, str, str]


@dataclass(frozen=True)
class TimeAnchor:
    event_id: str
    value: Optional[CalendarValue]
    status: str

    def __post_init__(self):
        if (self.value is not None) != (self.status == ANCHORED):
            raise ValueError(f"value must be present iff status is ANCHORED: {self!r}")
        if self.status not in (ANCHORED, ORDERED_ONLY, UNRESOLVED):
            raise ValueError(f"unknown anchor status {self.status!r}")


@dataclass(frozen=True)
class TemporalGraph:
    """Nodes, normalized edges and (once closed) the derived relation table.

    ``edges`` holds ``(source, relation, target, link_id)`` with relation in
    BEFORE / SIMULTANEOUS / IS_INCLUDED.  ``values`` maps timex ids (and the
    DCT id) to their calendar value.
    """

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str, str, str], ...]
    values: Mapping[str, CalendarValue] = field(default_factory=dict)
    closure: frozenset = frozenset()
    closed: bool = False
    consistent: bool = True

    @property
    def status(self) -> str:
        if not self.closed:
            return "OPEN"
        return "CONSISTENT" if self.consistent else "INCONSISTENT"

    def triples(self) -> list[Triple]:
        return [(a, r, b) for a, r, b, _ in self.edges]


def normalize(source: str, relation: str, target: str) -> Triple:
    if relation == AFTER:
        return (target, BEFORE, source)
    if relation == INCLUDES:
        return (target, IS_INCLUDED, source)
    return (source, relation, target)


def build_graph(doc: AnnotatedDocument) -> TemporalGraph:
    nodes = [ev.event_id for ev in doc.events] + [tx.timex_id for tx in doc.timexes] + [doc.dct_id]
    values = {tx.timex_id: tx.value for tx in doc.timexes}
    values[doc.dct_id] = doc.dct
    edges = tuple(normalize(t.source_id, t.relation, t.target_id) + (t.link_id,) for t in doc.tlinks)
    return TemporalGraph(tuple(nodes), edges, values)


def closure_of(nodes: Iterable[str], triples: Iterable[Triple]) -> frozenset:
    """Least fixpoint of the composition table over ``triples``."""
    parent = {n: n for n in nodes}
    triples = list(triples)
    for a, _, b in triples:
        parent.setdefault(a, a)
        parent.setdefault(b, b)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, r, b in triples:
        if r == SIMULTANEOUS:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

    members: dict[str, list[str]] = {}
    for n in parent:
        members.setdefault(find(n), []).append(n)

    before: dict[str, set[str]] = {}
    included: set[tuple[str, str]] = set()
    for a, r, b in triples:
        if r == BEFORE:
            before.setdefault(find(a), set()).add(find(b))
        elif r == IS_INCLUDED:
            included.add((find(a), find(b)))

    out: set[Triple] = set()
    for group in members.values():
        for a in group:
            for b in group:
                if a != b:
                    out.add((a, SIMULTANEOUS, b))

    for start in before:
        reach: set[str] = set()
        stack = list(before[start])
        while stack:
            c = stack.pop()
            if c in reach:
                continue
            reach.add(c)
            stack.extend(before.get(c, ()))
        for c in reach:
            for a in members[start]:
                for b in members[c]:
                    out.add((a, BEFORE, b))

    for ca, cb in included:
        for a in members[ca]:
            for b in members[cb]:
                if a != b:
                    out.add((a, IS_INCLUDED, b))
    return frozenset(out)


def _has_before_cycle(closure: frozenset) -> bool:
    return any(r == BEFORE and a == b for a, r, b in closure)


def close(graph: TemporalGraph) -> TemporalGraph:
    if graph.closed:
        return graph
    closure = closure_of(graph.nodes, graph.triples())
    return TemporalGraph(
        graph.nodes, graph.edges, graph.values, closure, closed=True, consistent=not _has_before_cycle(closure)
    )


def _link_order(link_id: str):
    return [int(p) if p.isdigit() else p for p in re.split(r"(\d+)", link_id)]


def repair(graph: TemporalGraph) -> tuple[TemporalGraph, list[str]]:
    """Drop contradictory links so the closure is consistent.

    Links are re-added one at a time in natural link-id order; a link whose
    addition creates a BEFORE cycle is dropped.  Returns the closed graph and
    the dropped link ids.
    """
    kept: list[tuple[str, str, str, str]] = []
    dropped: list[str] = []
    for edge in sorted(graph.edges, key=lambda e: _link_order(e[3])):
        trial = kept + [edge]
        if _has_before_cycle(closure_of(graph.nodes, [e[:3] for e in trial])):
            dropped.append(edge[3])
        else:
            kept = trial
    kept_ids = {e[3] for e in kept}
    edges = tuple(e for e in graph.edges if e[3] in kept_ids)
    repaired = close(TemporalGraph(graph.nodes, edges, graph.values))
    return repaired, dropped


def _pick(values: set[CalendarValue]) -> CalendarValue:
    # finest granularity first, then the earliest value
    return min(values, key=lambda v: (-int(v.granularity), v.sort_key()))


def anchor_events(doc: AnnotatedDocument, graph: TemporalGraph) -> dict[str, TimeAnchor]:
    """Assign every event of ``doc`` a :class:`TimeAnchor`.

    An event SIMULTANEOUS with, or IS_INCLUDED in, a timex (directly or
    through the closure) is ANCHORED to that timex's value.  An event that is
    only BEFORE/AFTER something anchored is ORDERED_ONLY; anything else is
    UNRESOLVED.
    """
    graph = close(graph)
    if not graph.consistent:
        graph, dropped = repair(graph)
        log.warning("%s: inconsistent temporal links, dropped %s", doc.doc_id, ", ".join(dropped))

    values = graph.values
    candidates: dict[str, set[CalendarValue]] = {}
    before_nbrs: dict[str, set[str]] = {}
    for a, r, b in graph.closure:
        if r in (SIMULTANEOUS, IS_INCLUDED) and b in values:
            candidates.setdefault(a, set()).add(values[b])
        elif r == BEFORE:
            before_nbrs.setdefault(a, set()).add(b)
            before_nbrs.setdefault(b, set()).add(a)

    anchors: dict[str, TimeAnchor] = {}
    for ev in doc.events:
        found = candidates.get(ev.event_id)
        if found:
            value = _pick(found)
            if len(found) > 1:
                log.warning(
                    "%s: event %s anchored to conflicting values %s; keeping %s",
                    doc.doc_id,
                    ev.event_id,
                    ", ".join(sorted(map(str, found))),
                    value,
                )
            anchors[ev.event_id] = TimeAnchor(ev.event_id, value, ANCHORED)

    for ev in doc.events:
        if ev.event_id in anchors:
            continue
        nbrs = before_nbrs.get(ev.event_id, ())
        ordered = any(
            n in values or (n in anchors and anchors[n].status == ANCHORED) for n in nbrs
        )
        anchors[ev.event_id] = TimeAnchor(ev.event_id, None, ORDERED_ONLY if ordered else UNRESOLVED)
    return {ev.event_id: anchors[ev.event_id] for ev in doc.events}


def dump_graph(graph: TemporalGraph) -> str:
    """One ``source RELATION target`` line per closure triple, sorted."""
    graph = close(graph)
    lines = [f"# status {graph.status}"]
    lines.extend(f"{a} {r} {b}" for a, r, b in sorted(graph.closure))
    return "\n".join(lines) + "\n"
