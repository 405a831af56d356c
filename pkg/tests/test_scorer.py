import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from timeline_coref.corpus import CalendarValue
from timeline_coref.scorer import Counts, ScoreReport, merge, report_table, report_tsv, score
from timeline_coref.timeline import MentionRef, Timeline, TimelineEntry

from support import timelines

D = CalendarValue.parse


def tl(target, *entries):
    return Timeline(
        target,
        tuple(
            TimelineEntry(i, D(date), tuple(MentionRef.parse(r) for r in refs))
            for i, (date, refs) in enumerate(entries, start=1)
        ),
    )


# gold: four (mention, date) pairs; prediction: three of them and one on the wrong date
GOLD = tl("Apple", ("2015-03-10", ["d-0-1..1", "d-1-2..2"]), ("2015-03-11", ["d-2-0..0", "d-3-4..4"]))
PRED = tl("Apple", ("2015-03-10", ["d-0-1..1", "d-1-2..2"]), ("2015-03-11", ["d-2-0..0"]), ("2015-03-12", ["d-3-4..4"]))


class TestScore:
    def test_hand_counted_fixture(self):
        report = score([PRED], [GOLD])
        c = report.total
        assert (c.tp, c.fp, c.fn) == (3, 1, 1)
        assert (c.precision, c.recall, c.f1) == (0.75, 0.75, 0.75)
        assert report_table(report).splitlines()[-1].split()[-1] == "75.00"

    def test_identity(self):
        c = score([GOLD], [GOLD]).total
        assert c.precision == c.recall == c.f1 == 1.0

    def test_empty_prediction(self):
        c = score([], [GOLD]).total
        assert (c.precision, c.recall, c.f1) == (0.0, 0.0, 0.0)
        assert "0.00" in report_table(score([], [GOLD]))

    def test_zero_everything_is_zero_not_nan(self):
        c = Counts()
        assert (c.precision, c.recall, c.f1) == (0.0, 0.0, 0.0)
        assert not any(math.isnan(x) for x in (c.precision, c.recall, c.f1))

    def test_duplicate_target_rejected(self):
        with pytest.raises(ValueError):
            score([GOLD, GOLD], [GOLD])

    def test_micro_average_pools_counts(self):
        other_gold = tl("Samsung", ("2015", ["e-0-0..0"]))
        report = score([PRED], [GOLD, other_gold], {"Apple": "a", "Samsung": "b"})
        assert report.per_corpus["a"] == Counts(3, 1, 1)
        assert report.per_corpus["b"] == Counts(0, 0, 1)
        assert report.total == Counts(3, 1, 2)
        assert report.total.recall == 3 / 5

    def test_ordered_mode(self):
        # gold orders (a,c) (a,d) (b,c) (b,d); pred additionally has d after c
        report = score([PRED], [GOLD], ordered=True)
        assert report.total == Counts(4, 1, 0)

    @settings(max_examples=200)
    @given(timelines(target="T"))
    def test_self_score_is_one(self, t):
        c = score([t], [t]).total
        expected = 1.0 if t.entries else 0.0
        assert c.precision == c.recall == c.f1 == expected

    @settings(max_examples=200)
    @given(timelines(target="T"), timelines(target="T"), st.booleans())
    def test_swap_exchanges_fp_and_fn(self, a, b, ordered):
        ab = score([a], [b], ordered=ordered).total
        ba = score([b], [a], ordered=ordered).total
        assert (ab.tp, ab.fp, ab.fn) == (ba.tp, ba.fn, ba.fp)

    @settings(max_examples=200)
    @given(timelines(target="T"))
    def test_recall_monotone_in_prediction(self, gold):
        # dropping the last prediction entry never raises tp
        if not gold.entries:
            return
        fewer = Timeline("T", gold.entries[:-1])
        assert score([fewer], [gold]).total.tp <= score([gold], [gold]).total.tp


class TestReports:
    def test_empty_report_is_header_only(self):
        table = report_table(ScoreReport())
        assert table.count("\n") == 1 and table.split() == ["TRACK", "Total"]

    def test_perfect_run_total(self):
        table = report_table(score([GOLD], [GOLD], {"Apple": "airbus"}), label="R1")
        header, p, r, f = table.splitlines()
        assert header.split() == ["TRACK", "airbus", "Total"]
        assert f.split() == ["R1-F1", "100.00", "100.00"]

    def test_merge_sums_corpora(self):
        a = score([PRED], [GOLD], {"Apple": "x"})
        b = score([GOLD], [GOLD], {"Apple": "y"})
        m = merge([a, b])
        assert m.per_corpus == {"x": Counts(3, 1, 1), "y": Counts(4, 0, 0)}
        assert set(m.per_target) == {"Apple", "y/Apple"}

    def test_tsv(self):
        lines = report_tsv(score([PRED], [GOLD])).splitlines()
        assert lines[0].split("\t")[:5] == ["scope", "name", "tp", "fp", "fn"]
        assert lines[-1] == "total\tTotal\t3\t1\t1\t0.7500\t0.7500\t0.7500"
