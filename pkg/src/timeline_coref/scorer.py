"""Micro-averaged precision, recall and F1 of predicted timelines against gold.

Default matching unit: a (mention, date) pair.  In ``ordered`` mode the
unit is an ordered mention pair ``(a, b)`` with ``a`` on an earlier entry
than ``b``, and dates are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from timeline_coref.timeline import Timeline

DEFAULT_CORPUS = "corpus"


@dataclass(frozen=True)
class Counts:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    def __add__(self, other: "Counts") -> "Counts":
        return Counts(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn)

    @property
    def precision(self) -> float:
        d = self.tp + self.fp
        return self.tp / d if d else 0.0

    @property
    def recall(self) -> float:
        d = self.tp + self.fn
        return self.tp / d if d else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0


@dataclass(frozen=True)
class ScoreReport:
    per_target: Mapping[str, Counts] = field(default_factory=dict)
    per_corpus: Mapping[str, Counts] = field(default_factory=dict)
    target_corpus: Mapping[str, str] = field(default_factory=dict)
    ordered: bool = False

    @property
    def total(self) -> Counts:
        out = Counts()
        for c in self.per_corpus.values():
            out = out + c
        return out


def _units(tl: Timeline, ordered: bool) -> set:
    if not ordered:
        return tl.pairs()
    out = set()
    for i, a in enumerate(tl.entries):
        for b in tl.entries[i + 1 :]:
            for ma in a.mentions:
                for mb in b.mentions:
                    out.add((ma.key, mb.key))
    return out


def _index(timelines: Sequence[Timeline], side: str) -> dict[str, Timeline]:
    out: dict[str, Timeline] = {}
    for tl in timelines:
        if tl.target in out:
            raise ValueError(f"{side}: two timelines for target {tl.target!r}")
        keys = [m.key for e in tl.entries for m in e.mentions]
        if len(keys) != len(set(keys)):
            raise ValueError(f"{side}: duplicate mention in timeline for {tl.target!r}")
        out[tl.target] = tl
    return out


def score(
    pred: Sequence[Timeline],
    gold: Sequence[Timeline],
    corpora: Optional[Mapping[str, str]] = None,
    *,
    ordered: bool = False,
) -> ScoreReport:
    """Score ``pred`` against ``gold``; ``corpora`` maps target name to corpus label.

    A target missing on either side counts as an empty timeline.
    """
    p_idx = _index(pred, "prediction")
    g_idx = _index(gold, "gold")
    corpora = corpora or {}
    per_target: dict[str, Counts] = {}
    per_corpus: dict[str, Counts] = {}
    target_corpus: dict[str, str] = {}
    for name in sorted(set(p_idx) | set(g_idx)):
        p = _units(p_idx[name], ordered) if name in p_idx else set()
        g = _units(g_idx[name], ordered) if name in g_idx else set()
        c = Counts(len(p & g), len(p - g), len(g - p))
        per_target[name] = c
        label = corpora.get(name, DEFAULT_CORPUS)
        target_corpus[name] = label
        per_corpus[label] = per_corpus.get(label, Counts()) + c
    return ScoreReport(per_target, dict(sorted(per_corpus.items())), target_corpus, ordered)


def merge(reports: Sequence[ScoreReport]) -> ScoreReport:
    per_target: dict[str, Counts] = {}
    per_corpus: dict[str, Counts] = {}
    target_corpus: dict[str, str] = {}
    for r in reports:
        for name, c in r.per_target.items():
            key = name if name not in per_target else f"{r.target_corpus[name]}/{name}"
            per_target[key] = c
            target_corpus[key] = r.target_corpus[name]
        for label, c in r.per_corpus.items():
            per_corpus[label] = per_corpus.get(label, Counts()) + c
    ordered = any(r.ordered for r in reports)
    return ScoreReport(per_target, dict(sorted(per_corpus.items())), target_corpus, ordered)


def _pct(x: float) -> str:
    return f"{100.0 * x:.2f}"


def report_table(report: ScoreReport, label: str = "run") -> str:
    """Fixed-width table: one column per corpus plus Total, rows P/R/F1 in percent."""
    columns = list(report.per_corpus) + ["Total"]
    rows = [f"{label}-P", f"{label}-R", f"{label}-F1"]
    first = max(len("TRACK"), *(len(r) for r in rows)) + 2
    widths = [max(len(c), 6) + 2 for c in columns]
    out = ["TRACK".ljust(first) + "".join(c.rjust(w) for c, w in zip(columns, widths))]
    if report.per_target:
        cells = [report.per_corpus[c] for c in columns[:-1]] + [report.total]
        for row, metric in zip(rows, ("precision", "recall", "f1")):
            out.append(row.ljust(first) + "".join(_pct(getattr(c, metric)).rjust(w) for c, w in zip(cells, widths)))
    return "\n".join(out) + "\n"


def report_tsv(report: ScoreReport) -> str:
    lines = ["scope\tname\ttp\tfp\tfn\tprecision\trecall\tf1"]

    def row(scope, name, c):
        lines.append(f"{scope}\t{name}\t{c.tp}\t{c.fp}\t{c.fn}\t{c.precision:.4f}\t{c.recall:.4f}\t{c.f1:.4f}")

    for name, c in report.per_target.items():
        row("target", f"{report.target_corpus[name]}/{name}", c)
    for label, c in report.per_corpus.items():
        row("corpus", label, c)
    row("total", "Total", report.total)
    return "\n".join(lines) + "\n"
