"""Oracles, generators and hypothesis strategies shared by the test modules.

The oracles here are deliberately naive re-implementations: they share no
code with the package so that agreement means something.
"""

from __future__ import annotations

import itertools
import string
from collections import Counter
from pathlib import Path

import numpy as np
from hypothesis import strategies as st

from timeline_coref.corpus import (
    AnnotatedDocument,
    CalendarValue,
    EntityMention,
    EventMention,
    Granularity,
    Sentence,
    SRLArgument,
    TemporalExpression,
    TemporalLink,
)
from timeline_coref.timeline import MentionRef, Timeline, TimelineEntry
from timeline_coref.topics import TopicModel, Vocabulary

PKG_DATA = Path(__file__).resolve().parents[1] / "src" / "timeline_coref" / "data"
MINI = PKG_DATA / "mini"
FIXTURES = Path(__file__).resolve().parent / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"

B, S, I = "BEFORE", "SIMULTANEOUS", "IS_INCLUDED"
ALL_RELATIONS = ("BEFORE", "AFTER", "SIMULTANEOUS", "IS_INCLUDED", "INCLUDES")


# -- closure oracle ------------------------------------------------------------


def oracle_normalize(a, rel, b):
    if rel == "AFTER":
        return (b, B, a)
    if rel == "INCLUDES":
        return (b, I, a)
    return (a, rel, b)


def _compose(r1, r2):
    if r1 == S:
        return r2
    if r2 == S:
        return r1
    if r1 == B and r2 == B:
        return B
    return None


def oracle_closure(triples):
    """Naive fixpoint: compose every pair of triples until nothing new appears."""
    facts = set(triples)
    facts |= {(b, S, a) for a, r, b in facts if r == S}
    while True:
        new = set()
        for a, r1, b in facts:
            if r1 == S:
                new.add((b, S, a))
            for b2, r2, c in facts:
                if b2 != b:
                    continue
                r = _compose(r1, r2)
                if r is not None:
                    new.add((a, r, c))
        if new <= facts:
            break
        facts |= new
    return frozenset(t for t in facts if not (t[0] == t[2] and t[1] in (S, I)))


def random_link_graph(rng, max_nodes=8):
    n = int(rng.integers(1, max_nodes + 1))
    nodes = [f"n{i}" for i in range(n)]
    triples = []
    if n > 1:
        for _ in range(int(rng.integers(0, 2 * n + 1))):
            a, b = rng.choice(n, size=2, replace=False)
            rel = ALL_RELATIONS[int(rng.integers(len(ALL_RELATIONS)))]
            triples.append(oracle_normalize(nodes[a], rel, nodes[b]))
    return nodes, triples


# -- k-means oracle ------------------------------------------------------------


def inertia_of(X, labels):
    X = np.asarray(X, dtype=float)
    total = 0.0
    for lab in set(labels):
        pts = X[[i for i, l in enumerate(labels) if l == lab]]
        total += float(((pts - pts.mean(axis=0)) ** 2).sum())
    return total


def best_two_partition(X):
    """Minimum-inertia split into two non-empty groups, by enumeration."""
    n = len(X)
    best, best_groups = None, None
    for labels in itertools.product((0, 1), repeat=n - 1):
        labels = (0,) + labels
        if len(set(labels)) < 2:
            continue
        val = inertia_of(X, labels)
        if best is None or val < best - 1e-12:
            best, best_groups = val, labels
    return best, as_partition(best_groups)


def as_partition(labels):
    groups = {}
    for i, lab in enumerate(labels):
        groups.setdefault(lab, []).append(i)
    return frozenset(frozenset(g) for g in groups.values())


# -- vocabulary oracle -----------------------------------------------------------


def oracle_vocabulary(corpus, min_count, stopwords=()):
    counts = Counter(w.lower() for doc in corpus for w in doc)
    order = []
    seen = set()
    for doc in corpus:
        for w in doc:
            w = w.lower()
            if w not in seen:
                seen.add(w)
                order.append(w)
    stop = {s.lower() for s in stopwords}
    return [w for w in order if counts[w] >= min_count and w not in stop]


# -- toy topic models ------------------------------------------------------------


def toy_model():
    """K=3 over 43 words with exact binary-fraction weights.

    Top lists: topic 0 holds users (256/1024) and problems (128/1024); topic 2
    holds phones (512/1024) and users (64/1024); topic 1 holds none of them.
    """
    fillers = [f"f{i}" for i in range(40)]
    words = ["users", "problems", "phones"] + fillers
    col = {w: i for i, w in enumerate(words)}
    counts = np.zeros((3, len(words)))
    counts[0, col["users"]] = 256
    counts[0, col["problems"]] = 128
    for i in range(18):
        counts[0, col[f"f{i}"]] = 32
    for i in range(18, 34):
        counts[0, col[f"f{i}"]] = 4
    for i in range(20, 40):
        counts[1, col[f"f{i}"]] = 48
    for i in range(16):
        counts[1, col[f"f{i}"]] = 4
    counts[2, col["phones"]] = 512
    counts[2, col["users"]] = 64
    for i in range(22, 40):
        counts[2, col[f"f{i}"]] = 24
    for i in range(16):
        counts[2, col[f"f{i}"]] = 1
    assert (counts.sum(axis=1) == 1024).all()
    return TopicModel(Vocabulary(words), counts / 1024.0, alpha=1.0, beta=0.01, seed=0, iterations=1)


def random_model(rng, K=6, V=40):
    words = [f"w{i}" for i in range(V)]
    phi = rng.dirichlet(np.full(V, 0.3), size=K)
    return TopicModel(Vocabulary(words), phi, alpha=50.0 / K, beta=0.01, seed=0, iterations=1)


# -- corpus generator ------------------------------------------------------------

LEMMAS = ("approve", "reject", "launch", "sue", "report")
DATES = ("2015-01-05", "2015-01-06", "2015-01", "2015", "2015-02-01")


def random_corpus(rng, vocabulary, n_docs=None, target="Acme"):
    """Documents with random anchoring, lemmas, argument nouns and target mentions."""
    docs = []
    n_docs = int(rng.integers(0, 5)) if n_docs is None else n_docs
    for d in range(n_docs):
        n_sent = int(rng.integers(1, 5))
        sentences, events, timexes, tlinks, entities = [], [], [], [], []
        for s in range(n_sent):
            tokens = ["word"] * 6
            mention_target = rng.random() < 0.6
            if mention_target:
                tokens[0] = target
                entities.append(EntityMention(f"m{s}", s, (0, 0), target, "ORGANIZATION"))
            sentences.append(Sentence(s, tuple(tokens)))
            tid = f"t{s + 1}"
            timexes.append(
                TemporalExpression(tid, s, (5, 5), CalendarValue.parse(DATES[int(rng.integers(len(DATES)))]))
            )
            for j in range(int(rng.integers(0, 4))):
                eid = f"e{s}_{j}"
                nouns = tuple(vocabulary[int(k)] for k in rng.integers(0, len(vocabulary), size=int(rng.integers(0, 4))))
                args = (SRLArgument("A0", (2, 2), nouns),) if nouns else ()
                events.append(EventMention(eid, s, (1 + j % 3, 1 + j % 3), LEMMAS[int(rng.integers(len(LEMMAS)))], "verb", args))
                roll = rng.random()
                if roll < 0.5:
                    tlinks.append(TemporalLink(f"l{len(tlinks) + 1}", eid, tid, "SIMULTANEOUS"))
                elif roll < 0.7:
                    tlinks.append(TemporalLink(f"l{len(tlinks) + 1}", eid, tid, "IS_INCLUDED"))
                elif roll < 0.8:
                    tlinks.append(TemporalLink(f"l{len(tlinks) + 1}", eid, "t0", "SIMULTANEOUS"))
                elif roll < 0.9:
                    tlinks.append(TemporalLink(f"l{len(tlinks) + 1}", eid, tid, "BEFORE"))
        docs.append(
            AnnotatedDocument(
                doc_id=f"doc{d}",
                dct=CalendarValue.parse("2015-01-07"),
                sentences=tuple(sentences),
                events=tuple(events),
                timexes=tuple(timexes),
                tlinks=tuple(tlinks),
                entities=tuple(entities),
            )
        )
    return docs


# -- hypothesis strategies -------------------------------------------------------

_ALNUM = string.ascii_letters + string.digits


@st.composite
def calendar_values(draw):
    g = draw(st.sampled_from(list(Granularity)))
    year = draw(st.integers(1900, 2100))
    if g == Granularity.YEAR:
        return CalendarValue(g, year)
    month = draw(st.integers(1, 12))
    if g == Granularity.MONTH:
        return CalendarValue(g, year, month)
    return CalendarValue(g, year, month, draw(st.integers(1, 28)))


def _span(draw, length):
    a = draw(st.integers(0, length - 1))
    b = draw(st.integers(a, length - 1))
    return (a, b)


_token = st.text(alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters="\x00"), min_size=1, max_size=8)
_ident = st.text(alphabet=_ALNUM + "_-", min_size=1, max_size=10)


@st.composite
def documents(draw):
    n_sent = draw(st.integers(1, 4))
    sentences = tuple(
        Sentence(i, tuple(draw(st.lists(_token, min_size=1, max_size=8)))) for i in range(n_sent)
    )
    ids = iter(f"x{i}" for i in itertools.count())

    events = []
    for _ in range(draw(st.integers(0, 4))):
        s = draw(st.integers(0, n_sent - 1))
        n = len(sentences[s].tokens)
        args = tuple(
            SRLArgument(
                draw(st.sampled_from(["A0", "A1"])),
                _span(draw, n),
                tuple(draw(st.lists(st.sampled_from(["phone", "users", "court", "deal"]), max_size=3))),
            )
            for _ in range(draw(st.integers(0, 2)))
        )
        events.append(
            EventMention(next(ids), s, _span(draw, n), draw(st.sampled_from(LEMMAS)), draw(st.sampled_from(["verb", "noun", "other"])), args)
        )
    timexes = []
    for _ in range(draw(st.integers(0, 3))):
        s = draw(st.integers(0, n_sent - 1))
        timexes.append(TemporalExpression(next(ids), s, _span(draw, len(sentences[s].tokens)), draw(calendar_values())))
    temporal_ids = [e.event_id for e in events] + [t.timex_id for t in timexes] + ["t0"]
    tlinks = []
    if len(temporal_ids) > 1:
        for i in range(draw(st.integers(0, 4))):
            a, b = draw(st.lists(st.sampled_from(temporal_ids), min_size=2, max_size=2, unique=True))
            tlinks.append(TemporalLink(f"l{i}", a, b, draw(st.sampled_from(ALL_RELATIONS))))
    entities = []
    for _ in range(draw(st.integers(0, 3))):
        s = draw(st.integers(0, n_sent - 1))
        entities.append(
            EntityMention(
                next(ids),
                s,
                _span(draw, len(sentences[s].tokens)),
                draw(st.text(min_size=1, max_size=12).filter(lambda x: "\x00" not in x)),
                draw(st.sampled_from(["PERSON", "LOCATION", "ORGANIZATION", "MISC"])),
            )
        )
    chains = ()
    if entities:
        chains = tuple(
            frozenset(draw(st.lists(st.sampled_from([e.entity_mention_id for e in entities]), min_size=1, max_size=3)))
            for _ in range(draw(st.integers(0, 2)))
        )
    return AnnotatedDocument(
        doc_id=draw(_ident),
        dct=draw(calendar_values()),
        sentences=sentences,
        events=tuple(events),
        timexes=tuple(timexes),
        tlinks=tuple(tlinks),
        entities=tuple(entities),
        coref_chains=chains,
    )


_doc_ids = st.text(alphabet=_ALNUM + "_.-", min_size=1, max_size=10)


@st.composite
def mention_refs(draw):
    a = draw(st.integers(0, 50))
    return MentionRef(draw(_doc_ids), draw(st.integers(0, 30)), (a, a + draw(st.integers(0, 3))))


@st.composite
def timelines(draw, target=None):
    dates = sorted(draw(st.lists(calendar_values(), max_size=6)))
    refs = draw(st.lists(mention_refs(), min_size=len(dates), max_size=len(dates) * 3, unique_by=lambda m: m.key))
    entries = []
    for i, date in enumerate(dates):
        chunk = refs[i::len(dates)] if dates else []
        entries.append(TimelineEntry(i + 1, date, tuple(sorted(chunk))))
    name = target or draw(st.text(alphabet=_ALNUM + " .&", min_size=1, max_size=15).filter(lambda x: x.strip()))
    return Timeline(name, tuple(entries))
