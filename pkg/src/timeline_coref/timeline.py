"""Date-ordered timelines and their text format.

A timeline file starts with the target name; every further line is

    ordinal<TAB>date<TAB>ref ref ...

where ``date`` is ``YYYY``, ``YYYY-MM`` or ``YYYY-MM-DD`` and each ``ref``
is ``doc_id-sentence-first..last``.  Files are UTF-8 with LF endings.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence, Union

from timeline_coref.clustering import Cluster
from timeline_coref.corpus import AnnotatedDocument, CalendarValue
from timeline_coref.entities import TargetEntity

_REF_RE = re.compile(r"^(\S+)-(\d+)-(\d+)\.\.(\d+)$")


class TimelineFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True, order=True)
class MentionRef:
    doc_id: str
    sentence_index: int
    token_span: tuple[int, int]
    # display only: not stored in timeline files, not part of identity
    surface: str = field(default="", compare=False)

    @property
    def key(self) -> tuple[str, int, tuple[int, int]]:
        return (self.doc_id, self.sentence_index, self.token_span)

    def __str__(self):
        return f"{self.doc_id}-{self.sentence_index}-{self.token_span[0]}..{self.token_span[1]}"

    @classmethod
    def parse(cls, text: str) -> "MentionRef":
        m = _REF_RE.match(text)
        if not m:
            raise ValueError(f"malformed mention reference {text!r}")
        start, end = int(m.group(3)), int(m.group(4))
        if end < start:
            raise ValueError(f"mention reference {text!r} has an empty span")
        return cls(m.group(1), int(m.group(2)), (start, end))


@dataclass(frozen=True)
class TimelineEntry:
    ordinal: int
    date: CalendarValue
    mentions: tuple[MentionRef, ...]


@dataclass(frozen=True)
class Timeline:
    target: str
    entries: tuple[TimelineEntry, ...] = ()

    def __post_init__(self):
        if not self.target or "\n" in self.target:
            raise ValueError("timeline target must be a non-empty single line")
        object.__setattr__(self, "entries", tuple(self.entries))
        seen: set = set()
        prev_ordinal, prev_date = 0, None
        for e in self.entries:
            if e.ordinal <= prev_ordinal or (prev_ordinal == 0 and e.ordinal != 1):
                raise ValueError(f"ordinals must start at 1 and increase (got {e.ordinal} after {prev_ordinal})")
            if prev_date is not None and e.date < prev_date:
                raise ValueError(f"entry {e.ordinal} is dated {e.date}, before {prev_date}")
            if not e.mentions:
                raise ValueError(f"entry {e.ordinal} has no mentions")
            for m in e.mentions:
                if m.key in seen:
                    raise ValueError(f"mention {m} appears twice in the timeline")
                seen.add(m.key)
            prev_ordinal, prev_date = e.ordinal, e.date

    def pairs(self) -> set:
        """``(mention key, date)`` for every mention on the timeline."""
        return {(m.key, e.date) for e in self.entries for m in e.mentions}


def assemble(
    clusters: Sequence[Cluster],
    target: Union[TargetEntity, str],
    docs: Mapping[str, AnnotatedDocument],
) -> Timeline:
    """One entry per cluster: ascending date, same-date clusters by lemma."""
    name = target.name if isinstance(target, TargetEntity) else target
    entries = []
    for ordinal, cluster in enumerate(sorted(clusters, key=Cluster.sort_key), start=1):
        refs = []
        for doc_id, event_id in cluster.members:
            doc = docs[doc_id]
            ev = doc.event(event_id)
            refs.append(
                MentionRef(doc_id, ev.sentence_index, ev.token_span, doc.span_text(ev.sentence_index, ev.token_span))
            )
        entries.append(TimelineEntry(ordinal, cluster.date, tuple(sorted(refs))))
    return Timeline(name, tuple(entries))


def write_timeline(tl: Timeline) -> str:
    lines = [tl.target]
    for e in tl.entries:
        for m in e.mentions:
            if re.search(r"\s", m.doc_id):
                raise ValueError(f"doc_id {m.doc_id!r} cannot be written in a timeline file")
        lines.append(f"{e.ordinal}\t{e.date}\t" + " ".join(str(m) for m in e.mentions))
    return "\n".join(lines) + "\n"


def read_timeline(text: str) -> Timeline:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or not lines[0].strip():
        raise TimelineFormatError("missing target header", 1)
    target = lines[0]
    entries = []
    seen: set = set()
    prev = 0
    for line_no, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != 3:
            raise TimelineFormatError(f"expected 3 tab-separated fields, got {len(fields)}", line_no)
        try:
            ordinal = int(fields[0])
            date = CalendarValue.parse(fields[1])
            refs = tuple(MentionRef.parse(r) for r in fields[2].split(" "))
        except ValueError as exc:
            raise TimelineFormatError(str(exc), line_no) from None
        if ordinal <= prev or (prev == 0 and ordinal != 1):
            raise TimelineFormatError(f"ordinal {ordinal} out of sequence", line_no)
        if entries and date < entries[-1].date:
            raise TimelineFormatError(f"date {date} precedes the previous entry", line_no)
        for r in refs:
            if r.key in seen:
                raise TimelineFormatError(f"mention {r} listed twice", line_no)
            seen.add(r.key)
        prev = ordinal
        entries.append(TimelineEntry(ordinal, date, refs))
    return Timeline(target, tuple(entries))


def slugify(name: str) -> str:
    slug = re.sub(r"[^0-9a-z]+", "-", name.lower()).strip("-")
    return slug or "target"


def atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_timeline_file(tl: Timeline, directory) -> Path:
    path = Path(directory) / f"{slugify(tl.target)}.txt"
    atomic_write_text(path, write_timeline(tl))
    return path


def read_timeline_dir(directory) -> list[Timeline]:
    out = []
    for path in sorted(Path(directory).glob("*.txt")):
        try:
            out.append(read_timeline(path.read_text(encoding="utf-8")))
        except TimelineFormatError as exc:
            raise TimelineFormatError(f"{path}: {exc}") from None
    return out
