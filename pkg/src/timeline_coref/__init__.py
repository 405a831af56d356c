"""Cross-document event timelines from TimeML-annotated news.

Events are grouped into coreference clusters in three passes (same date,
same head lemma, then a 2-means split on argument topic vectors) and the
clusters are laid out as one date-ordered timeline per target entity.
"""

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
    parse_corpus_jsonl,
    parse_timeml,
    serialize_jsonl,
)
from timeline_coref.entities import TargetEntity, filter_events
from timeline_coref.temporal import TimeAnchor, anchor_events, build_graph, close
from timeline_coref.topics import TopicModel, Vocabulary, build_vocabulary, train_lda, word_weight
from timeline_coref.vectorize import EventVector, argument_nouns, vectorize
from timeline_coref.clustering import Cluster, KMeansResult, kmeans, run_pipeline
from timeline_coref.timeline import MentionRef, Timeline, assemble, read_timeline, write_timeline
from timeline_coref.scorer import ScoreReport, report_table, score

__version__ = "0.1.0"

__all__ = [
    "AnnotatedDocument",
    "CalendarValue",
    "Cluster",
    "EntityMention",
    "EventMention",
    "EventVector",
    "Granularity",
    "KMeansResult",
    "MentionRef",
    "ScoreReport",
    "Sentence",
    "SRLArgument",
    "TargetEntity",
    "TemporalExpression",
    "TemporalLink",
    "TimeAnchor",
    "Timeline",
    "TopicModel",
    "Vocabulary",
    "anchor_events",
    "argument_nouns",
    "assemble",
    "build_graph",
    "build_vocabulary",
    "close",
    "filter_events",
    "kmeans",
    "parse_corpus_jsonl",
    "parse_timeml",
    "read_timeline",
    "report_table",
    "run_pipeline",
    "score",
    "serialize_jsonl",
    "train_lda",
    "vectorize",
    "word_weight",
    "write_timeline",
]
