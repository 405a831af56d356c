"""Annotated news documents and the two formats they are read from.

Documents come either as a small TimeML dialect (docs/FORMATS.md) or as
canonical JSONL with one document per line.  Both readers finish with
:func:`validate`, so every id that a link, chain or argument mentions is
known to resolve inside its document.
"""

from __future__ import annotations

import calendar
import enum
import functools
import json
import logging
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

log = logging.getLogger(__name__)

BEFORE = "BEFORE"
AFTER = "AFTER"
SIMULTANEOUS = "SIMULTANEOUS"
IS_INCLUDED = "IS_INCLUDED"
INCLUDES = "INCLUDES"
RELATIONS = frozenset({BEFORE, AFTER, SIMULTANEOUS, IS_INCLUDED, INCLUDES})

ROLES = frozenset({"A0", "A1"})
POS_TAGS = frozenset({"verb", "noun", "other"})
ENTITY_CLASSES = frozenset({"PERSON", "LOCATION", "ORGANIZATION", "MISC"})
_CLASS_ALIASES = {"PER": "PERSON", "LOC": "LOCATION", "ORG": "ORGANIZATION"}

# Function words never proposed as argument nouns by the fallback.
FUNCTION_WORDS = frozenset(
    """
    a an the this that these those some any all each every no
    and or but nor so yet if then than as
    of in on at by for with from to into onto over under about after before
    during since until against between through without within among per via
    i me my we us our you your he him his she her it its they them their
    who whom whose which what where when why how
    is are was were be been being am has have had do does did
    will would shall should can could may might must
    not very also just only more most much many few other such own same
    there here up down out off again further once
    """.split()
)

Span = tuple[int, int]


class CorpusError(ValueError):
    """Base class for ingestion failures."""


class CorpusParseError(CorpusError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class CorpusValidationError(CorpusError):
    def __init__(self, message: str, element_id: Optional[str] = None):
        self.element_id = element_id
        super().__init__(message)


class CorpusSchemaError(CorpusError):
    def __init__(self, line: int, field_name: str, message: str):
        self.line = line
        self.field = field_name
        super().__init__(f"line {line}: field '{field_name}': {message}")


class Granularity(enum.IntEnum):
    """Calendar precision; a larger value is finer."""

    YEAR = 0
    MONTH = 1
    DAY = 2


_DATE_RE = re.compile(r"^(\d{4})(?:-(\d{2})(?:-(\d{2})(?:T[0-9:.]*)?)?)?$")


@functools.total_ordering
@dataclass(frozen=True)
class CalendarValue:
    granularity: Granularity
    year: int
    month: Optional[int] = None
    day: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "granularity", Granularity(self.granularity))
        g = self.granularity
        if (self.month is not None) != (g >= Granularity.MONTH):
            raise ValueError(f"month must be present iff granularity is MONTH or DAY: {self!r}")
        if (self.day is not None) != (g == Granularity.DAY):
            raise ValueError(f"day must be present iff granularity is DAY: {self!r}")
        if self.month is not None and not 1 <= self.month <= 12:
            raise ValueError(f"month out of range: {self.month}")
        if self.day is not None:
            last = calendar.monthrange(self.year, self.month)[1]
            if not 1 <= self.day <= last:
                raise ValueError(f"day {self.day} invalid for {self.year:04d}-{self.month:02d}")

    @classmethod
    def parse(cls, text: str) -> "CalendarValue":
        """Parse ``YYYY``, ``YYYY-MM`` or ``YYYY-MM-DD``.

        A trailing time of day (``2015-03-14T10:30``) is truncated to the day.
        """
        m = _DATE_RE.match(text.strip())
        if not m:
            raise ValueError(f"unsupported calendar value: {text!r}")
        year, month, day = m.groups()
        if day is not None:
            return cls(Granularity.DAY, int(year), int(month), int(day))
        if month is not None:
            return cls(Granularity.MONTH, int(year), int(month))
        return cls(Granularity.YEAR, int(year))

    def truncate(self, granularity: Granularity) -> "CalendarValue":
        if granularity >= self.granularity:
            return self
        if granularity == Granularity.MONTH:
            return CalendarValue(Granularity.MONTH, self.year, self.month)
        return CalendarValue(Granularity.YEAR, self.year)

    def sort_key(self) -> tuple[int, int, int, int]:
        return (self.year, self.month or 0, self.day or 0, int(self.granularity))

    def __lt__(self, other):
        if not isinstance(other, CalendarValue):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __str__(self):
        if self.granularity == Granularity.DAY:
            return f"{self.year:04d}-{self.month:02d}-{self.day:02d}"
        if self.granularity == Granularity.MONTH:
            return f"{self.year:04d}-{self.month:02d}"
        return f"{self.year:04d}"


@dataclass(frozen=True)
class Sentence:
    index: int
    tokens: tuple[str, ...]

    @property
    def token_ids(self) -> range:
        return range(len(self.tokens))


@dataclass(frozen=True)
class SRLArgument:
    role: str
    token_span: Span
    noun_tokens: tuple[str, ...] = ()


@dataclass(frozen=True)
class EventMention:
    event_id: str
    sentence_index: int
    token_span: Span
    head_lemma: str
    pos: str = "other"
    arguments: tuple[SRLArgument, ...] = ()


@dataclass(frozen=True)
class TemporalExpression:
    timex_id: str
    sentence_index: int
    token_span: Span
    value: CalendarValue


@dataclass(frozen=True)
class TemporalLink:
    link_id: str
    source_id: str
    target_id: str
    relation: str


@dataclass(frozen=True)
class EntityMention:
    entity_mention_id: str
    sentence_index: int
    token_span: Span
    surface: str
    semantic_class: str = "MISC"


@dataclass(frozen=True)
class AnnotatedDocument:
    doc_id: str
    dct: CalendarValue
    sentences: tuple[Sentence, ...] = ()
    events: tuple[EventMention, ...] = ()
    timexes: tuple[TemporalExpression, ...] = ()
    tlinks: tuple[TemporalLink, ...] = ()
    entities: tuple[EntityMention, ...] = ()
    coref_chains: tuple[frozenset[str], ...] = ()
    # id under which links may point at the document creation time
    dct_id: str = "t0"

    def event(self, event_id: str) -> EventMention:
        for ev in self.events:
            if ev.event_id == event_id:
                return ev
        raise KeyError(event_id)

    def span_text(self, sentence_index: int, span: Span) -> str:
        return " ".join(self.sentences[sentence_index].tokens[span[0] : span[1] + 1])


_E_DROPPED = re.compile(r"(?:[vcuz]|[aeiou][sg]|[^aeiou](?:in|at|ur|ir|id|il|ot))$")


def guess_lemma(token: str, pos: str = "other") -> str:
    """Crude suffix-stripping lemma for inputs that carry none."""
    w = token.lower()
    if pos == "verb":
        if w.endswith("ied") and len(w) > 4:
            return w[:-3] + "y"
        for suffix in ("ing", "ed"):
            if w.endswith(suffix) and len(w) - len(suffix) >= 2:
                stem = w[: -len(suffix)]
                if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] not in "ls":
                    return stem[:-1]
                if _E_DROPPED.search(stem):
                    return stem + "e"
                return stem
        if w.endswith("ies") and len(w) > 4:
            return w[:-3] + "y"
        if w.endswith("es") and w[-3] in "sxz" or w.endswith(("ches", "shes")):
            return w[:-2]
        if w.endswith("s") and not w.endswith("ss") and len(w) > 3:
            return w[:-1]
        return w
    if pos == "noun":
        if w.endswith("ies") and len(w) > 4:
            return w[:-3] + "y"
        if w.endswith("s") and not w.endswith("ss") and len(w) > 3:
            return w[:-1]
    return w


def noun_candidates(tokens: Iterable[str]) -> tuple[str, ...]:
    """Fallback noun guess: every alphabetic token that is not a function word."""
    out = []
    for tok in tokens:
        w = tok.lower()
        if any(c.isalpha() for c in w) and w not in FUNCTION_WORDS:
            out.append(w)
    return tuple(out)


def _check_span(span: Span, sentence: Sentence, what: str, element_id: str):
    start, end = span
    if not 0 <= start <= end < len(sentence.tokens):
        raise CorpusValidationError(
            f"{what} {element_id!r}: token span {start}..{end} outside sentence "
            f"{sentence.index} ({len(sentence.tokens)} tokens)",
            element_id,
        )


def _sentence(doc: AnnotatedDocument, index: int, what: str, element_id: str) -> Sentence:
    if not 0 <= index < len(doc.sentences):
        raise CorpusValidationError(f"{what} {element_id!r}: no sentence {index}", element_id)
    return doc.sentences[index]


def validate(doc: AnnotatedDocument) -> AnnotatedDocument:
    """Check the document invariants, raising :class:`CorpusValidationError`."""
    if not doc.doc_id:
        raise CorpusValidationError("document has an empty doc_id")
    for i, s in enumerate(doc.sentences):
        if s.index != i:
            raise CorpusValidationError(f"{doc.doc_id}: sentence indices not contiguous at {s.index}")

    temporal_ids: set[str] = {doc.dct_id}
    for ev in doc.events:
        if ev.event_id in temporal_ids:
            raise CorpusValidationError(f"{doc.doc_id}: duplicate id {ev.event_id!r}", ev.event_id)
        temporal_ids.add(ev.event_id)
        sent = _sentence(doc, ev.sentence_index, "event", ev.event_id)
        _check_span(ev.token_span, sent, "event", ev.event_id)
        if not ev.head_lemma:
            raise CorpusValidationError(f"event {ev.event_id!r}: empty head lemma", ev.event_id)
        if ev.pos not in POS_TAGS:
            raise CorpusValidationError(f"event {ev.event_id!r}: bad pos {ev.pos!r}", ev.event_id)
        for arg in ev.arguments:
            if arg.role not in ROLES:
                raise CorpusValidationError(f"event {ev.event_id!r}: bad role {arg.role!r}", ev.event_id)
            _check_span(arg.token_span, sent, f"{arg.role} argument of event", ev.event_id)
    for tx in doc.timexes:
        if tx.timex_id in temporal_ids:
            raise CorpusValidationError(f"{doc.doc_id}: duplicate id {tx.timex_id!r}", tx.timex_id)
        temporal_ids.add(tx.timex_id)
        sent = _sentence(doc, tx.sentence_index, "timex", tx.timex_id)
        _check_span(tx.token_span, sent, "timex", tx.timex_id)

    link_ids: set[str] = set()
    for tl in doc.tlinks:
        if tl.link_id in link_ids:
            raise CorpusValidationError(f"{doc.doc_id}: duplicate link id {tl.link_id!r}", tl.link_id)
        link_ids.add(tl.link_id)
        if tl.relation not in RELATIONS:
            raise CorpusValidationError(f"tlink {tl.link_id!r}: bad relation {tl.relation!r}", tl.link_id)
        for end in (tl.source_id, tl.target_id):
            if end not in temporal_ids:
                raise CorpusValidationError(
                    f"tlink {tl.link_id!r} references unknown id {end!r}", end
                )
        if tl.source_id == tl.target_id:
            raise CorpusValidationError(f"tlink {tl.link_id!r} links {tl.source_id!r} to itself", tl.link_id)

    mention_ids: set[str] = set()
    for en in doc.entities:
        if en.entity_mention_id in mention_ids:
            raise CorpusValidationError(
                f"{doc.doc_id}: duplicate entity id {en.entity_mention_id!r}", en.entity_mention_id
            )
        mention_ids.add(en.entity_mention_id)
        sent = _sentence(doc, en.sentence_index, "entity", en.entity_mention_id)
        _check_span(en.token_span, sent, "entity", en.entity_mention_id)
        if en.semantic_class not in ENTITY_CLASSES:
            raise CorpusValidationError(
                f"entity {en.entity_mention_id!r}: bad class {en.semantic_class!r}", en.entity_mention_id
            )
    for chain in doc.coref_chains:
        for mid in sorted(chain):
            if mid not in mention_ids:
                raise CorpusValidationError(f"coref chain references unknown entity {mid!r}", mid)
    return doc


# -- TimeML dialect ---------------------------------------------------------

_SOURCE_ATTRS = ("eventInstanceID", "eventID", "timeID")
_TARGET_ATTRS = ("relatedToEventInstance", "relatedToEvent", "relatedToTime")
_SPAN_RE = re.compile(r"^\s*(\d+)\s*(?:\.\.|-)\s*(\d+)\s*$")


def _require(elem: ET.Element, attr: str) -> str:
    value = elem.get(attr)
    if value is None or not value.strip():
        ident = elem.get("eid") or elem.get("tid") or elem.get("id") or elem.get("lid") or ""
        where = f" {ident!r}" if ident else ""
        raise CorpusValidationError(f"<{elem.tag}>{where} is missing attribute {attr!r}", ident or None)
    return value.strip()


def _walk(elem: ET.Element, tokens: list[str], found: list):
    """Collect whitespace tokens under ``elem`` and the token span of each child."""
    slot = len(found)
    found.append(None)
    start = len(tokens)
    if elem.text:
        tokens.extend(elem.text.split())
    for child in elem:
        _walk(child, tokens, found)
        if child.tail:
            tokens.extend(child.tail.split())
    found[slot] = (elem, start, len(tokens) - 1)


def parse_timeml(xml_text: str, *, noun_fallback: bool = False, doc_id: Optional[str] = None) -> AnnotatedDocument:
    """Parse one document in the simplified TimeML dialect.

    Tokens are the whitespace-separated words inside each ``<s>`` element;
    EVENT, TIMEX3, ENTITY and ARG elements take the span of the tokens they
    wrap.  Unknown elements are ignored (their text still yields tokens).
    With ``noun_fallback`` an ARG lacking a ``nouns`` attribute takes every
    non-function word it covers as a noun.
    """
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        raise CorpusParseError(f"malformed XML: {exc.msg if hasattr(exc, 'msg') else exc}", exc.position[0]) from None

    docid_el = next(root.iter("DOCID"), None)
    if docid_el is not None and docid_el.text and docid_el.text.strip():
        doc_id = docid_el.text.strip()
    if not doc_id:
        raise CorpusValidationError("document has no <DOCID>")

    dct_el = next(root.iter("DCT"), None)
    if dct_el is None:
        raise CorpusValidationError(f"{doc_id}: document has no <DCT>")
    dct_id = dct_el.get("tid", "t0")
    dct_text = dct_el.get("value")
    if dct_text is None:
        inner = next(dct_el.iter("TIMEX3"), None)
        if inner is not None:
            dct_text = inner.get("value")
            dct_id = inner.get("tid", dct_id)
    if dct_text is None:
        raise CorpusValidationError(f"{doc_id}: <DCT> has no value")
    try:
        dct = CalendarValue.parse(dct_text)
    except ValueError as exc:
        raise CorpusValidationError(f"{doc_id}: <DCT>: {exc}", dct_id) from None

    sentences = []
    events = []
    timexes = []
    entities = []
    pending_args = []  # (event_id, sentence_index, SRLArgument)

    for s_index, s_el in enumerate(root.iter("s")):
        tokens: list[str] = []
        found: list = []
        _walk(s_el, tokens, found)
        sentences.append(Sentence(s_index, tuple(tokens)))
        for elem, start, end in found:
            tag = elem.tag
            if tag not in ("EVENT", "TIMEX3", "ENTITY", "ARG"):
                continue
            if tag == "ARG" and elem.get("span") is not None:
                m = _SPAN_RE.match(elem.get("span"))
                if not m:
                    raise CorpusValidationError(f"<ARG> has malformed span {elem.get('span')!r}")
                start, end = int(m.group(1)), int(m.group(2))
            if end < start:
                ident = elem.get("eid") or elem.get("tid") or elem.get("id") or elem.get("eventID")
                raise CorpusValidationError(f"<{tag}> {ident!r} in sentence {s_index} wraps no tokens", ident)
            surface = tokens[start : end + 1]
            if tag == "EVENT":
                pos = elem.get("pos", "other").lower()
                if pos not in POS_TAGS:
                    pos = "other"
                lemma = elem.get("lemma")
                lemma = lemma.strip().lower() if lemma and lemma.strip() else guess_lemma(surface[-1], pos)
                events.append(EventMention(_require(elem, "eid"), s_index, (start, end), lemma, pos))
            elif tag == "TIMEX3":
                tid = _require(elem, "tid")
                try:
                    value = CalendarValue.parse(_require(elem, "value"))
                except ValueError as exc:
                    raise CorpusValidationError(f"<TIMEX3> {tid!r}: {exc}", tid) from None
                timexes.append(TemporalExpression(tid, s_index, (start, end), value))
            elif tag == "ENTITY":
                cls = elem.get("class", "MISC").upper()
                cls = _CLASS_ALIASES.get(cls, cls)
                entities.append(EntityMention(_require(elem, "id"), s_index, (start, end), " ".join(surface), cls))
            else:
                role = _require(elem, "role").upper()
                if role not in ROLES:
                    continue
                nouns = elem.get("nouns")
                if nouns is not None:
                    noun_tokens = tuple(n.lower() for n in nouns.split())
                elif noun_fallback:
                    noun_tokens = noun_candidates(tokens[start : end + 1] if end < len(tokens) else ())
                else:
                    noun_tokens = ()
                pending_args.append((_require(elem, "eventID"), s_index, SRLArgument(role, (start, end), noun_tokens)))

    by_event = {ev.event_id: ev for ev in events}
    args: dict[str, list[SRLArgument]] = {}
    for event_id, s_index, arg in pending_args:
        ev = by_event.get(event_id)
        if ev is None:
            raise CorpusValidationError(f"<ARG> references unknown event {event_id!r}", event_id)
        if ev.sentence_index != s_index:
            raise CorpusValidationError(f"<ARG> of event {event_id!r} lies outside the event's sentence", event_id)
        args.setdefault(event_id, []).append(arg)
    events = [
        EventMention(ev.event_id, ev.sentence_index, ev.token_span, ev.head_lemma, ev.pos, tuple(args.get(ev.event_id, ())))
        for ev in events
    ]

    tlinks = []
    for el in root.iter("TLINK"):
        lid = _require(el, "lid")
        rel = el.get("relType", "").upper()
        if rel not in RELATIONS:
            log.warning("%s: dropping TLINK %s with unsupported relType %r", doc_id, lid, rel)
            continue
        src = next((el.get(a) for a in _SOURCE_ATTRS if el.get(a)), None)
        tgt = next((el.get(a) for a in _TARGET_ATTRS if el.get(a)), None)
        if src is None or tgt is None:
            raise CorpusValidationError(f"TLINK {lid!r} lacks a source or target id", lid)
        tlinks.append(TemporalLink(lid, src, tgt, rel))

    chains = []
    for el in root.iter("COREF"):
        ids = _require(el, "mentions").split()
        chains.append(frozenset(ids))

    doc = AnnotatedDocument(
        doc_id=doc_id,
        dct=dct,
        sentences=tuple(sentences),
        events=tuple(events),
        timexes=tuple(timexes),
        tlinks=tuple(tlinks),
        entities=tuple(entities),
        coref_chains=tuple(chains),
        dct_id=dct_id,
    )
    return validate(doc)


# -- JSONL ------------------------------------------------------------------


def _span_json(span: Span) -> list[int]:
    return [span[0], span[1]]


def document_to_json(doc: AnnotatedDocument) -> dict:
    return {
        "doc_id": doc.doc_id,
        "dct": str(doc.dct),
        "dct_id": doc.dct_id,
        "sentences": [{"index": s.index, "tokens": list(s.tokens)} for s in doc.sentences],
        "events": [
            {
                "event_id": ev.event_id,
                "sentence_index": ev.sentence_index,
                "token_span": _span_json(ev.token_span),
                "head_lemma": ev.head_lemma,
                "pos": ev.pos,
                "arguments": [
                    {"role": a.role, "token_span": _span_json(a.token_span), "noun_tokens": list(a.noun_tokens)}
                    for a in ev.arguments
                ],
            }
            for ev in doc.events
        ],
        "timexes": [
            {
                "timex_id": tx.timex_id,
                "sentence_index": tx.sentence_index,
                "token_span": _span_json(tx.token_span),
                "value": str(tx.value),
            }
            for tx in doc.timexes
        ],
        "tlinks": [
            {"link_id": t.link_id, "source_id": t.source_id, "target_id": t.target_id, "relation": t.relation}
            for t in doc.tlinks
        ],
        "entities": [
            {
                "entity_mention_id": en.entity_mention_id,
                "sentence_index": en.sentence_index,
                "token_span": _span_json(en.token_span),
                "surface": en.surface,
                "semantic_class": en.semantic_class,
            }
            for en in doc.entities
        ],
        "coref_chains": [sorted(chain) for chain in doc.coref_chains],
    }


def serialize_jsonl(docs: Iterable[AnnotatedDocument]) -> str:
    return "".join(json.dumps(document_to_json(d), ensure_ascii=False) + "\n" for d in docs)


class _Fields:
    """Typed field access that reports the line and dotted path on failure."""

    def __init__(self, line: int):
        self.line = line

    def get(self, obj, key, kind, path, default=...):
        if not isinstance(obj, dict):
            raise CorpusSchemaError(self.line, path, "expected an object")
        if key not in obj:
            if default is not ...:
                return default
            raise CorpusSchemaError(self.line, f"{path}.{key}".lstrip("."), "missing")
        value = obj[key]
        if kind is int and isinstance(value, bool) or not isinstance(value, kind):
            raise CorpusSchemaError(self.line, f"{path}.{key}".lstrip("."), f"expected {kind.__name__}")
        return value

    def span(self, obj, path):
        value = self.get(obj, "token_span", list, path)
        if len(value) != 2 or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
            raise CorpusSchemaError(self.line, f"{path}.token_span", "expected [start, end] integers")
        return (value[0], value[1])

    def strings(self, obj, key, path, default=...):
        value = self.get(obj, key, list, path, default)
        if not all(isinstance(v, str) for v in value):
            raise CorpusSchemaError(self.line, f"{path}.{key}", "expected a list of strings")
        return tuple(value)

    def date(self, obj, key, path):
        text = self.get(obj, key, str, path)
        try:
            return CalendarValue.parse(text)
        except ValueError as exc:
            raise CorpusSchemaError(self.line, f"{path}.{key}".lstrip("."), str(exc)) from None


def document_from_json(obj: dict, line: int = 1) -> AnnotatedDocument:
    f = _Fields(line)
    sentences = tuple(
        Sentence(f.get(s, "index", int, f"sentences[{i}]"), f.strings(s, "tokens", f"sentences[{i}]"))
        for i, s in enumerate(f.get(obj, "sentences", list, ""))
    )
    events = []
    for i, e in enumerate(f.get(obj, "events", list, "", [])):
        p = f"events[{i}]"
        args = tuple(
            SRLArgument(
                f.get(a, "role", str, f"{p}.arguments[{j}]"),
                f.span(a, f"{p}.arguments[{j}]"),
                tuple(n.lower() for n in f.strings(a, "noun_tokens", f"{p}.arguments[{j}]", [])),
            )
            for j, a in enumerate(f.get(e, "arguments", list, p, []))
        )
        events.append(
            EventMention(
                f.get(e, "event_id", str, p),
                f.get(e, "sentence_index", int, p),
                f.span(e, p),
                f.get(e, "head_lemma", str, p),
                f.get(e, "pos", str, p, "other"),
                args,
            )
        )
    timexes = tuple(
        TemporalExpression(
            f.get(t, "timex_id", str, f"timexes[{i}]"),
            f.get(t, "sentence_index", int, f"timexes[{i}]"),
            f.span(t, f"timexes[{i}]"),
            f.date(t, "value", f"timexes[{i}]"),
        )
        for i, t in enumerate(f.get(obj, "timexes", list, "", []))
    )
    tlinks = tuple(
        TemporalLink(
            f.get(t, "link_id", str, f"tlinks[{i}]"),
            f.get(t, "source_id", str, f"tlinks[{i}]"),
            f.get(t, "target_id", str, f"tlinks[{i}]"),
            f.get(t, "relation", str, f"tlinks[{i}]"),
        )
        for i, t in enumerate(f.get(obj, "tlinks", list, "", []))
    )
    entities = tuple(
        EntityMention(
            f.get(en, "entity_mention_id", str, f"entities[{i}]"),
            f.get(en, "sentence_index", int, f"entities[{i}]"),
            f.span(en, f"entities[{i}]"),
            f.get(en, "surface", str, f"entities[{i}]"),
            f.get(en, "semantic_class", str, f"entities[{i}]", "MISC"),
        )
        for i, en in enumerate(f.get(obj, "entities", list, "", []))
    )
    chains = []
    for i, c in enumerate(f.get(obj, "coref_chains", list, "", [])):
        if not isinstance(c, list) or not all(isinstance(m, str) for m in c):
            raise CorpusSchemaError(line, f"coref_chains[{i}]", "expected a list of strings")
        chains.append(frozenset(c))
    return AnnotatedDocument(
        doc_id=f.get(obj, "doc_id", str, ""),
        dct=f.date(obj, "dct", ""),
        sentences=sentences,
        events=tuple(events),
        timexes=timexes,
        tlinks=tlinks,
        entities=entities,
        coref_chains=tuple(chains),
        dct_id=f.get(obj, "dct_id", str, "", "t0"),
    )


def parse_corpus_jsonl(lines) -> list[AnnotatedDocument]:
    """Read documents from JSONL text (a string or any iterable of lines)."""
    if isinstance(lines, str):
        # records end at LF only; U+2028 and friends may sit inside JSON strings
        lines = lines.split("\n")
    docs = []
    seen: set[str] = set()
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusParseError(f"invalid JSON: {exc.msg}", line_no) from None
        if not isinstance(obj, dict):
            raise CorpusSchemaError(line_no, "<root>", "expected a JSON object")
        doc = document_from_json(obj, line_no)
        try:
            validate(doc)
        except CorpusValidationError as exc:
            raise CorpusValidationError(f"line {line_no}: {exc}", exc.element_id) from None
        if doc.doc_id in seen:
            raise CorpusValidationError(f"line {line_no}: duplicate doc_id {doc.doc_id!r}", doc.doc_id)
        seen.add(doc.doc_id)
        docs.append(doc)
    return docs


CORPUS_SUFFIXES = (".tml", ".xml", ".jsonl")


def read_corpus_path(path, *, noun_fallback: bool = False) -> list[AnnotatedDocument]:
    """Load a ``.jsonl`` file, a TimeML file, or a directory of either (sorted by name)."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"corpus path not found: {path}")
    files = sorted(p for p in path.iterdir() if p.suffix in CORPUS_SUFFIXES) if path.is_dir() else [path]
    docs: list[AnnotatedDocument] = []
    for f in files:
        try:
            if f.suffix == ".jsonl":
                with open(f, encoding="utf-8") as fh:
                    docs.extend(parse_corpus_jsonl(fh))
            else:
                docs.append(parse_timeml(f.read_text(encoding="utf-8"), noun_fallback=noun_fallback, doc_id=f.stem))
        except CorpusError as exc:
            raise CorpusError(f"{f}: {exc}") from exc
    return docs
