"""Command-line entry point: train, build, score, validate and debug dumps.

Exit codes: 0 success, 1 usage or configuration error, 2 input validation
error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from timeline_coref.clustering import InvariantError, PipelineOptions, anchor_corpus, run_pipeline
from timeline_coref.corpus import FUNCTION_WORDS, CorpusError, read_corpus_path
from timeline_coref.entities import TargetEntity
from timeline_coref.scorer import merge, report_table, report_tsv, score
from timeline_coref.temporal import build_graph, close, dump_graph
from timeline_coref.timeline import (
    TimelineFormatError,
    assemble,
    atomic_write_text,
    read_timeline_dir,
    slugify,
    write_timeline,
)
from timeline_coref.topics import (
    ConfigurationError,
    ModelFormatError,
    build_vocabulary,
    load_model_file,
    read_reference_corpus,
    save_model_file,
    train_lda,
)
from timeline_coref.vectorize import matrix_tsv, vectorize

log = logging.getLogger("timeline_coref")

EXIT_OK, EXIT_CONFIG, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3


class ConfigError(Exception):
    pass


@dataclass
class TopicSettings:
    path: Optional[str] = None
    reference: Optional[str] = None
    K: int = 500
    alpha: Optional[float] = None
    beta: float = 0.01
    iterations: int = 1000
    min_count: int = 1
    stopwords: list = field(default_factory=lambda: sorted(FUNCTION_WORDS))


@dataclass
class RunConfig:
    corpora: dict
    targets: list
    seed: Optional[int] = None
    mode: str = "run1"
    output: str = "out"
    gold: Optional[str] = None
    noun_fallback: bool = False
    topic_model: TopicSettings = field(default_factory=TopicSettings)
    clustering: PipelineOptions = field(default_factory=PipelineOptions)
    # (target, corpora it applies to or None for all)
    target_corpora: dict = field(default_factory=dict)
    source: Optional[str] = None
    raw: dict = field(default_factory=dict)

    def check(self, need_model: bool = False):
        if self.seed is None:
            raise ConfigError("a seed is required (config key 'seed' or --seed)")
        if self.mode not in ("run1", "run2"):
            raise ConfigError(f"mode must be run1 or run2, not {self.mode!r}")
        if (self.mode == "run2" or need_model) and not (self.topic_model.path or self.topic_model.reference):
            raise ConfigError("run2 needs topic_model.path or topic_model.reference")


_TOP_KEYS = {"seed", "mode", "output", "gold", "noun_fallback", "corpora", "targets", "topic_model", "clustering"}
_TOPIC_KEYS = set(TopicSettings.__dataclass_fields__)
_CLUSTER_KEYS = set(PipelineOptions.__dataclass_fields__)


def _unknown(section: str, given: dict, allowed: set):
    extra = sorted(set(given) - allowed)
    if extra:
        raise ConfigError(f"unknown key(s) in {section}: {', '.join(extra)}")


def load_config(path: Optional[str]) -> RunConfig:
    """Read a YAML run config; relative paths resolve against its directory."""
    if path is None:
        return RunConfig(corpora={}, targets=[])
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    try:
        raw = yaml.safe_load(p.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"{p}: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{p}: expected a mapping at top level")
    _unknown("config", raw, _TOP_KEYS)
    base = p.parent

    def resolve(x):
        return None if x is None else str((base / x)) if not Path(x).is_absolute() else str(x)

    corpora = {}
    for name, paths in (raw.get("corpora") or {}).items():
        paths = [paths] if isinstance(paths, str) else list(paths)
        corpora[str(name)] = [resolve(x) for x in paths]
    targets = []
    target_corpora = {}
    for t in raw.get("targets") or []:
        if isinstance(t, str):
            t = {"name": t}
        _unknown("targets", t, {"name", "aliases", "corpora"})
        try:
            target = TargetEntity(t["name"], tuple(t.get("aliases") or ()))
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad target entry {t!r}: {exc}") from None
        targets.append(target)
        target_corpora[target.name] = t.get("corpora")

    tm = dict(raw.get("topic_model") or {})
    _unknown("topic_model", tm, _TOPIC_KEYS)
    for key in ("path", "reference"):
        if tm.get(key) is not None:
            tm[key] = resolve(tm[key])
    if isinstance(tm.get("stopwords"), str):
        sw = Path(resolve(tm["stopwords"]))
        tm["stopwords"] = sw.read_text(encoding="utf-8").split()
    cl = dict(raw.get("clustering") or {})
    _unknown("clustering", cl, _CLUSTER_KEYS)
    if cl.get("coarsen") == "none":
        cl["coarsen"] = None
    try:
        options = PipelineOptions(**cl)
        settings = TopicSettings(**tm)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{p}: {exc}") from None
    return RunConfig(
        corpora=corpora,
        targets=targets,
        seed=raw.get("seed"),
        mode=raw.get("mode", "run1"),
        output=resolve(raw["output"]) if "output" in raw else "out",
        gold=resolve(raw.get("gold")),
        noun_fallback=bool(raw.get("noun_fallback", False)),
        topic_model=settings,
        clustering=options,
        target_corpora=target_corpora,
        source=str(p),
        raw=raw,
    )


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    for key in ("seed", "mode", "output", "gold"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    if getattr(args, "model", None):
        cfg.topic_model.path = args.model
    if getattr(args, "reference", None):
        cfg.topic_model.reference = args.reference
    for key in ("K", "alpha", "beta", "iterations", "min_count"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg.topic_model, key, value)
    return cfg


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _train(cfg: RunConfig):
    tm = cfg.topic_model
    if not tm.reference:
        raise ConfigError("training needs topic_model.reference (or --reference)")
    corpus = read_reference_corpus(tm.reference)
    if not corpus:
        raise ConfigurationError(f"reference corpus {tm.reference} holds no documents")
    vocab = build_vocabulary(corpus, tm.min_count, tm.stopwords)
    model = train_lda(corpus, vocab, tm.K, tm.alpha, tm.beta, tm.iterations, cfg.seed)
    print(f"trained K={model.K} V={model.V} documents={len(corpus)} iterations={model.iterations} seed={model.seed}")
    return model


def cmd_train(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    if cfg.seed is None:
        raise ConfigError("a seed is required (config key 'seed' or --seed)")
    if not cfg.topic_model.path:
        raise ConfigError("no output path for the model (topic_model.path or --model)")
    model = _train(cfg)
    save_model_file(model, cfg.topic_model.path)
    print(f"wrote {cfg.topic_model.path} sha256={model.checksum()}")
    return EXIT_OK


def _load_corpora(cfg: RunConfig) -> dict:
    if not cfg.corpora:
        raise ConfigError("no corpora configured")
    out = {}
    for name, paths in cfg.corpora.items():
        docs = []
        for path in paths:
            docs.extend(read_corpus_path(path, noun_fallback=cfg.noun_fallback))
        out[name] = docs
    return out


def cmd_build(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    cfg.check()
    if not cfg.targets:
        raise ConfigError("no target entities configured")
    corpora = _load_corpora(cfg)

    model = None
    model_info = None
    if cfg.mode == "run2":
        if cfg.topic_model.path and Path(cfg.topic_model.path).exists():
            model = load_model_file(cfg.topic_model.path)
        else:
            model = _train(cfg)
            if cfg.topic_model.path:
                save_model_file(model, cfg.topic_model.path)
        model_info = {"checksum": model.checksum(), "K": model.K, "V": model.V}

    out_dir = Path(cfg.output)
    outputs = {}
    for corpus_name, docs in corpora.items():
        anchors = anchor_corpus(docs)
        by_id = {d.doc_id: d for d in docs}
        for target in cfg.targets:
            only = cfg.target_corpora.get(target.name)
            if only is not None and corpus_name not in only:
                continue
            clusters = run_pipeline(docs, target, model, cfg.mode, cfg.seed, cfg.clustering, anchors)
            text = write_timeline(assemble(clusters, target, by_id))
            rel = f"{corpus_name}/{slugify(target.name)}.txt"
            atomic_write_text(out_dir / rel, text)
            outputs[rel] = hashlib.sha256(text.encode("utf-8")).hexdigest()
            log.info("%s: %d entries", rel, text.count("\n") - 1)

    inputs = {}
    base = Path(cfg.source).parent if cfg.source else Path.cwd()
    for paths in cfg.corpora.values():
        for p in paths:
            p = Path(p)
            files = sorted(x for x in p.iterdir() if x.is_file()) if p.is_dir() else [p]
            for f in files:
                inputs[_relative(f, base)] = _sha256(f)
    manifest = {
        "mode": cfg.mode,
        "seed": cfg.seed,
        "config": cfg.raw,
        "clustering": {
            "k": cfg.clustering.k,
            "min_split_size": cfg.clustering.min_split_size,
            "max_iter": cfg.clustering.max_iter,
            "coarsen": cfg.clustering.coarsen,
            "multiset": cfg.clustering.multiset,
        },
        "inputs": inputs,
        "topic_model": model_info,
        "outputs": outputs,
    }
    atomic_write_text(out_dir / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")
    print(f"wrote {len(outputs)} timeline(s) to {out_dir}")
    return EXIT_OK


def _relative(path: Path, base: Path) -> str:
    try:
        return str(path.resolve().relative_to(base.resolve()))
    except ValueError:
        return str(path)


def _timeline_tree(directory: Path) -> dict:
    """corpus name -> timelines; bare ``*.txt`` at top level form corpus 'corpus'."""
    tree = {}
    if any(directory.glob("*.txt")):
        tree["corpus"] = read_timeline_dir(directory)
    for sub in sorted(p for p in directory.iterdir() if p.is_dir()):
        tree[sub.name] = read_timeline_dir(sub)
    return tree


def cmd_score(args) -> int:
    cfg = load_config(args.config) if args.config else None
    pred_dir = Path(args.pred or (cfg.output if cfg else ""))
    gold_dir = Path(args.gold or (cfg.gold if cfg and cfg.gold else ""))
    for label, d in (("prediction", pred_dir), ("gold", gold_dir)):
        if not str(d) or not d.is_dir():
            raise ConfigError(f"{label} directory not found: {d}")
    pred = _timeline_tree(pred_dir)
    gold = _timeline_tree(gold_dir)
    reports = []
    for corpus_name in sorted(set(pred) | set(gold)):
        p = pred.get(corpus_name, [])
        g = gold.get(corpus_name, [])
        gold_names = {t.target for t in g}
        for t in p:
            if t.target not in gold_names:
                log.warning("no gold timeline for %s/%s; scoring against an empty one", corpus_name, t.target)
        names = {t.target for t in p} | gold_names
        reports.append(score(p, g, {n: corpus_name for n in names}, ordered=args.ordered))
    report = merge(reports)
    table = report_table(report, args.label)
    sys.stdout.write(table)
    if args.tsv:
        atomic_write_text(Path(args.tsv), report_tsv(report))
    return EXIT_OK


def cmd_validate(args) -> int:
    status = EXIT_OK
    for path in args.paths:
        try:
            docs = read_corpus_path(path, noun_fallback=args.noun_fallback)
        except CorpusError as exc:
            print(f"INVALID {exc}")
            status = EXIT_INPUT
            continue
        for d in docs:
            graph = close(build_graph(d))
            print(
                f"OK {d.doc_id}: {len(d.sentences)} sentences, {len(d.events)} events, "
                f"{len(d.timexes)} timexes, {len(d.tlinks)} tlinks, graph {graph.status}"
            )
    return status


def cmd_dump_graph(args) -> int:
    for d in read_corpus_path(args.corpus, noun_fallback=args.noun_fallback):
        if args.doc and d.doc_id != args.doc:
            continue
        sys.stdout.write(f"# {d.doc_id}\n" + dump_graph(build_graph(d)))
    return EXIT_OK


def cmd_dump_matrix(args) -> int:
    model = load_model_file(args.model)
    rows = []
    for d in read_corpus_path(args.corpus, noun_fallback=args.noun_fallback):
        for ev in d.events:
            rows.append((f"{d.doc_id}:{ev.event_id}", vectorize(ev, model).values))
    sys.stdout.write(matrix_tsv(rows))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="timeline-coref", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train", help="train the LDA topic model on a reference corpus")
    p.add_argument("--config")
    p.add_argument("--reference", help="reference corpus: text file (one doc per line) or directory of .txt")
    p.add_argument("--model", help="output model path")
    p.add_argument("--seed", type=int)
    p.add_argument("--K", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--iterations", type=int)
    p.add_argument("--min-count", dest="min_count", type=int)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("build", help="build timelines for every configured target")
    p.add_argument("--config", required=True)
    p.add_argument("--mode", choices=["run1", "run2"])
    p.add_argument("--seed", type=int)
    p.add_argument("--output")
    p.add_argument("--model")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("score", help="score predicted timelines against gold")
    p.add_argument("--config")
    p.add_argument("--pred")
    p.add_argument("--gold")
    p.add_argument("--tsv", help="also write a per-target TSV report here")
    p.add_argument("--ordered", action="store_true", help="score ordered mention pairs, ignoring dates")
    p.add_argument("--label", default="run", help="row label prefix in the table")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("validate", help="parse corpora and check invariants")
    p.add_argument("paths", nargs="+")
    p.add_argument("--noun-fallback", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("dump-graph", help="print the closed temporal graph of each document")
    p.add_argument("corpus")
    p.add_argument("--doc")
    p.add_argument("--noun-fallback", action="store_true")
    p.set_defaults(func=cmd_dump_graph)

    p = sub.add_parser("dump-matrix", help="print the event-topic matrix as TSV")
    p.add_argument("corpus")
    p.add_argument("--model", required=True)
    p.add_argument("--noun-fallback", action="store_true")
    p.set_defaults(func=cmd_dump_matrix)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ConfigurationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CorpusError, TimelineFormatError, ModelFormatError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
