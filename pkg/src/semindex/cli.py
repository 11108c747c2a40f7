"""Command-line frontend: index, cluster, export, eval, pipeline."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from . import agents, cocluster as cc, graphs, kb as kbmod, lexicon, metrics
from .corpus import ingest
from .errors import SemindexError


@dataclass(frozen=True)
class Config:
    kb_path: str = ""
    corpus_dir: str = ""
    tau: float = 0.2
    reference_year: int = 0
    threshold_mode: str = "min_count:2"
    k: int = 2
    seed: int = 0
    refine_passes: int = 1
    level: str = "lexical"
    out_dir: str = "out"
    gold_path: str = ""


_INT_FIELDS = {"reference_year", "k", "seed", "refine_passes"}
_FLOAT_FIELDS = {"tau"}


def load_config(path) -> Config:
    values = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise SemindexError(f"{path}:{lineno}: expected key = value")
        values[key.strip()] = value.strip()
    return _apply(Config(), values)


def _apply(config: Config, values: dict) -> Config:
    fields = {}
    for key, value in values.items():
        if value is None:
            continue
        if key not in Config.__dataclass_fields__:
            raise SemindexError(f"unknown config key {key!r}")
        if key in _INT_FIELDS:
            value = int(value)
        elif key in _FLOAT_FIELDS:
            value = float(value)
        fields[key] = value
    config = replace(config, **fields)
    if not 0.0 <= config.tau <= 1.0:
        raise SemindexError(f"tau must lie in [0,1], got {config.tau}")
    if config.k < 1:
        raise SemindexError(f"k must be >= 1, got {config.k}")
    return config


def parse_threshold(text: str):
    kind, sep, value = text.partition(":")
    if sep and kind == "min_count":
        return lexicon.MinCount(int(value))
    if sep and kind == "top_n":
        return lexicon.TopN(int(value))
    raise SemindexError(f"bad threshold_mode {text!r}, use min_count:N or top_n:N")


def parse_level(text: str) -> lexicon.ExtractionLevel:
    try:
        return lexicon.ExtractionLevel(text.lower())
    except ValueError:
        raise SemindexError(f"unknown extraction level {text!r}") from None


STATUS_BY_CODE = {s.value: s for s in agents.TermStatus}


def write_index_store(indexed_docs, years: dict, path) -> None:
    data = {
        "documents": {
            doc.doc_id: {
                "routing": doc.routing.value,
                "year": years[doc.doc_id],
                "terms": {
                    t: {"n": n, "status": s.value}
                    for t, (n, s) in sorted(doc.terms.items())
                },
            }
            for doc in indexed_docs
        }
    }
    Path(path).write_text(
        json.dumps(data, indent=2, ensure_ascii=False, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def read_index_store(path) -> list:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    docs = []
    for doc_id in sorted(data["documents"]):
        entry = data["documents"][doc_id]
        terms = {
            t: (v["n"], STATUS_BY_CODE[v["status"]])
            for t, v in entry["terms"].items()
        }
        docs.append(
            agents.IndexedDocument(
                doc_id, terms, agents.Routing(entry["routing"]), 0
            )
        )
    return docs


def _load_corpus(config: Config):
    paths = sorted(Path(config.corpus_dir).glob("*.txt"))
    if not paths:
        raise SemindexError(f"no .txt documents under {config.corpus_dir!r}")
    return ingest(paths)


def cmd_index(config: Config) -> None:
    parse_level(config.level)  # validate, pragmatic is rejected here
    if parse_level(config.level) is lexicon.ExtractionLevel.PRAGMATIC:
        raise SemindexError("pragmatic level is declared but unimplemented")
    kb = kbmod.load_kb(config.kb_path)
    corpus = _load_corpus(config)
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    pipe_config = agents.PipelineConfig(
        tau=config.tau,
        reference_year=config.reference_year,
        blackboard_path=out / "blackboard.xml",
    )
    indexed, board = agents.run_pipeline(kb, corpus, pipe_config)
    if not board.entries:
        agents.write_blackboard(board, out / "blackboard.xml")
    years = {doc.id: doc.year for doc in corpus}
    write_index_store(indexed, years, out / "index_store.json")


def _matrix_from_store(config: Config):
    indexed = read_index_store(Path(config.out_dir) / "index_store.json")
    vocab = lexicon.build_vocabulary(indexed, parse_threshold(config.threshold_mode))
    return vocab, cc.build_matrix(vocab, indexed)


def cmd_cluster(config: Config) -> None:
    out = Path(config.out_dir)
    vocab, matrix = _matrix_from_store(config)
    lexicon.save_vocabulary(vocab, out / "vocabulary.tsv")
    clustering = cc.cocluster(matrix, config.k, config.seed, config.refine_passes)
    cc.write_cluster_report(clustering, matrix, out / "clusters.json")


def cmd_export(config: Config, term: str = "") -> None:
    out = Path(config.out_dir)
    _, matrix = _matrix_from_store(config)
    if term:
        graph = graphs.ego_network(matrix, term)
        graphs.export_pajek(graph, out / f"ego_{term}.net")
    else:
        clustering = cc.cocluster(matrix, config.k, config.seed, config.refine_passes)
        graph = graphs.cluster_graph(matrix, clustering)
        graphs.export_pajek(graph, out / "clusters.net")


def cmd_eval(config: Config) -> None:
    if not config.gold_path:
        raise SemindexError("eval requires gold_path")
    indexed = read_index_store(Path(config.out_dir) / "index_store.json")
    produced = {
        doc.doc_id: set(doc.accepted_counts())
        for doc in indexed
        if doc.routing is agents.Routing.INDEX
    }
    gold = metrics.load_gold(config.gold_path)
    precision, recall = metrics.precision_recall(produced, gold)
    print(f"precision\t{precision:.12f}")
    print(f"recall\t{recall:.12f}")


def cmd_pipeline(config: Config) -> None:
    cmd_index(config)
    cmd_cluster(config)
    cmd_export(config)
    if config.gold_path:
        cmd_eval(config)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file")
    for name in Config.__dataclass_fields__:
        common.add_argument(f"--{name}")
    parser = argparse.ArgumentParser(prog="semindex", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("index", parents=[common])
    sub.add_parser("cluster", parents=[common])
    export = sub.add_parser("export", parents=[common])
    export.add_argument("--term", default="", help="center an ego network on this term")
    sub.add_parser("eval", parents=[common])
    sub.add_parser("pipeline", parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config) if args.config else Config()
        overrides = {
            name: getattr(args, name) for name in Config.__dataclass_fields__
        }
        config = _apply(config, overrides)
        if args.command == "index":
            cmd_index(config)
        elif args.command == "cluster":
            cmd_cluster(config)
        elif args.command == "export":
            cmd_export(config, args.term)
        elif args.command == "eval":
            cmd_eval(config)
        else:
            cmd_pipeline(config)
    except SemindexError as exc:
        module = type(exc).__module__.rsplit(".", 1)[-1]
        print(f"error: {module}.{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
