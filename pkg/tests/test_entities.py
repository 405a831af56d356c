import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from timeline_coref.corpus import AnnotatedDocument, CalendarValue, EntityMention, EventMention, Sentence
from timeline_coref.entities import TargetEntity, filter_events, matching_sentences, mention_matches

APPLE = TargetEntity("Apple", ("Apple Inc.",))


def doc_with(entities, chains=(), n_sent=4):
    sentences = tuple(Sentence(i, ("w",) * 6) for i in range(n_sent))
    events = tuple(EventMention(f"e{i}", i, (3, 3), "act", "verb") for i in range(n_sent))
    return AnnotatedDocument(
        "d", CalendarValue.parse("2015"), sentences, events, entities=tuple(entities), coref_chains=tuple(chains)
    )


def mention(mid, sent, surface):
    return EntityMention(mid, sent, (0, 0), surface, "ORGANIZATION")


class TestMentionMatches:
    @pytest.mark.parametrize("surface", ["Apple", "apple", "APPLE", "Apple Inc.", "shares of Apple Inc. rose"])
    def test_matches(self, surface):
        assert mention_matches(mention("m", 0, surface), APPLE)

    @pytest.mark.parametrize("surface", ["Pineapple", "Apple's", "the company", "Apple Records"])
    def test_does_not_match(self, surface):
        assert not mention_matches(mention("m", 0, surface), APPLE)

    def test_blank_name_rejected(self):
        with pytest.raises(ValueError):
            TargetEntity("  ")


class TestFilterEvents:
    def test_no_mention(self):
        assert filter_events(doc_with([mention("m1", 0, "Samsung")]), APPLE) == []

    def test_direct_mention(self):
        assert filter_events(doc_with([mention("m1", 1, "Apple")]), APPLE) == ["e1"]

    def test_coref_chain_expansion(self):
        ents = [mention("m1", 1, "Apple"), mention("m3", 3, "the company")]
        assert filter_events(doc_with(ents), APPLE) == ["e1"]
        assert filter_events(doc_with(ents, [frozenset({"m1", "m3"})]), APPLE) == ["e1", "e3"]

    def test_overlapping_chains_are_transitive(self):
        ents = [mention("m1", 1, "Apple"), mention("m2", 2, "it"), mention("m3", 3, "the company")]
        chains = [frozenset({"m2", "m3"}), frozenset({"m1", "m2"})]
        assert filter_events(doc_with(ents, chains), APPLE) == ["e1", "e2", "e3"]

    def test_chain_without_match_adds_nothing(self):
        ents = [mention("m2", 2, "Samsung"), mention("m3", 3, "the company")]
        assert filter_events(doc_with(ents, [frozenset({"m2", "m3"})]), APPLE) == []

    def test_token_fallback(self):
        doc = doc_with([])
        s = Sentence(2, ("Shares", "of", "Apple", "Inc.", "fell", "."))
        doc = AnnotatedDocument(doc.doc_id, doc.dct, doc.sentences[:2] + (s,) + doc.sentences[3:], doc.events)
        assert filter_events(doc, APPLE) == []
        assert filter_events(doc, APPLE, token_fallback=True) == ["e2"]

    @settings(max_examples=200)
    @given(
        st.lists(st.tuples(st.integers(0, 3), st.sampled_from(["Apple", "it", "the firm", "Samsung"])), max_size=6),
        st.lists(st.sets(st.integers(0, 5), min_size=1, max_size=3), max_size=3),
        st.data(),
    )
    def test_monotone_under_chain_removal(self, ents, chains, data):
        mentions = [mention(f"m{i}", s, surf) for i, (s, surf) in enumerate(ents)]
        ids = {m.entity_mention_id for m in mentions}
        chains = [frozenset(f"m{i}" for i in c) & ids for c in chains]
        chains = [c for c in chains if c]
        full = set(filter_events(doc_with(mentions, chains), APPLE))
        kept = data.draw(st.lists(st.sampled_from(chains), unique=True)) if chains else []
        fewer = set(filter_events(doc_with(mentions, kept), APPLE))
        assert fewer <= full
        # oracle: manual chain expansion
        hit = {m.entity_mention_id for m in mentions if m.surface == "Apple"}
        for _ in chains:
            for c in chains:
                if c & hit:
                    hit = hit | c
        assert matching_sentences(doc_with(mentions, chains), APPLE) == {
            m.sentence_index for m in mentions if m.entity_mention_id in hit
        }
