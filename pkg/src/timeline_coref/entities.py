"""Target-entity filtering of event mentions.

An event may enter a target's timeline when its sentence holds a mention of
the target, or a mention sharing a coreference chain with one.
"""

from __future__ import annotations

from dataclasses import dataclass

from timeline_coref.corpus import AnnotatedDocument, EntityMention


@dataclass(frozen=True)
class TargetEntity:
    name: str
    aliases: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.name or not self.name.strip():
            raise ValueError("target entity name must be non-empty")
        object.__setattr__(self, "aliases", tuple(self.aliases))

    @property
    def forms(self) -> tuple[str, ...]:
        return (self.name,) + self.aliases


def _words(text: str) -> list[str]:
    return text.casefold().split()


def _contains(haystack: list[str], needle: list[str]) -> bool:
    n = len(needle)
    return any(haystack[i : i + n] == needle for i in range(len(haystack) - n + 1))


def mention_matches(mention: EntityMention, target: TargetEntity) -> bool:
    """Case-insensitive exact match, or a multiword form found inside the mention."""
    surface = _words(mention.surface)
    for form in target.forms:
        words = _words(form)
        if not words:
            continue
        if surface == words:
            return True
        if len(words) > 1 and _contains(surface, words):
            return True
    return False


def matching_sentences(doc: AnnotatedDocument, target: TargetEntity, *, token_fallback: bool = False) -> set[int]:
    matched = {en.entity_mention_id for en in doc.entities if mention_matches(en, target)}
    # chains may overlap; coreference is transitive, so expand to a fixpoint
    expanded = set(matched)
    pending = list(doc.coref_chains)
    grew = True
    while grew:
        grew = False
        for chain in list(pending):
            if chain & expanded:
                expanded |= chain
                pending.remove(chain)
                grew = True
    sentences = {en.sentence_index for en in doc.entities if en.entity_mention_id in expanded}
    if token_fallback:
        # stands in for an entity tagger when the input carries no ENTITY markup
        forms = [_words(f) for f in target.forms]
        for s in doc.sentences:
            toks = [t.casefold() for t in s.tokens]
            if any(f and _contains(toks, f) for f in forms):
                sentences.add(s.index)
    return sentences


def filter_events(doc: AnnotatedDocument, target: TargetEntity, *, token_fallback: bool = False) -> list[str]:
    """Ids of the events of ``doc`` eligible for ``target``'s timeline, in document order."""
    sentences = matching_sentences(doc, target, token_fallback=token_fallback)
    out: list[str] = []
    seen: set[str] = set()
    for ev in doc.events:
        if ev.sentence_index in sentences and ev.event_id not in seen:
            seen.add(ev.event_id)
            out.append(ev.event_id)
    return out
