"""Command-line front end.

Subcommands: ingest, stats, walks, train, run, bench.  Flags mirror the
pipeline configuration one-to-one in kebab-case.  Exit codes: 0 ok,
1 usage, 2 data error, 3 resource error.  The WALKVEC_MEMORY_BUDGET
environment variable overrides the training memory budget (bytes).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import benchgen, pipeline, walks as walks_mod
from .graph import build_graph, compute_stats
from .ingest import ParseError, Vocabulary
from .w2v import TrainingDiverged, train

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RESOURCE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_input_flags(parser):
    parser.add_argument("--input", required=True, help="input graph file")
    parser.add_argument("--format", choices=("nt", "csv", "tsv", "txt"),
                        help="input format (inferred from extension when omitted)")
    parser.add_argument("--include-literals", action="store_true",
                        help="tokenize literal objects as nodes instead of dropping them")
    parser.add_argument("--strict", action="store_true",
                        help="abort on the first malformed line instead of skipping")
    parser.add_argument("--has-header", action="store_true", help="skip a header row (csv/tsv/txt)")


def _add_config_flags(parser, include_walks=True, include_training=True):
    if include_walks:
        parser.add_argument("--walk-strategy", choices=("random", "bfs"), default="random")
        parser.add_argument("--walk-depth", type=int, default=5)
        parser.add_argument("--walk-number", type=int, default=100)
        parser.add_argument("--duplicate-free", action="store_true")
        parser.add_argument("--projection", choices=("full", "entity", "property"), default="full")
    if include_training:
        parser.add_argument("--embedding-model", choices=("skipgram", "cbow"), default="skipgram")
        parser.add_argument("--epochs", type=int, default=5)
        parser.add_argument("--batch-size", type=int, default=None)
        parser.add_argument("--vector-size", type=int, default=100)
        parser.add_argument("--window-size", type=int, default=5)
        parser.add_argument("--min-count", type=int, default=10)
        parser.add_argument("--learning-rate", type=float, default=0.01)
        parser.add_argument("--negative-samples", type=int, default=5)
        parser.add_argument("--sync-interval-ms", type=int, default=500)
        parser.add_argument("--memory-budget-bytes", type=int, default=None)
        parser.add_argument("--memory-cap-fraction", type=float, default=0.9)
        parser.add_argument("--dense-updates", action="store_true",
                            help="use dense optimizer moments instead of sparse row updates")
    parser.add_argument("--random-state", type=int, default=42)
    parser.add_argument("--reproducible", action="store_true")
    parser.add_argument("--workers", type=int, default=1)


def _config_from_args(args) -> pipeline.PipelineConfig:
    return pipeline.PipelineConfig(
        walk_strategy=getattr(args, "walk_strategy", "random"),
        walk_depth=getattr(args, "walk_depth", 5),
        walk_number=getattr(args, "walk_number", 100),
        embedding_model=getattr(args, "embedding_model", "skipgram"),
        epochs=getattr(args, "epochs", 5),
        batch_size=getattr(args, "batch_size", None),
        vector_size=getattr(args, "vector_size", 100),
        window_size=getattr(args, "window_size", 5),
        min_count=getattr(args, "min_count", 10),
        learning_rate=getattr(args, "learning_rate", 0.01),
        negative_samples=getattr(args, "negative_samples", 5),
        random_state=args.random_state,
        reproducible=args.reproducible,
        workers=args.workers,
        generate_artifact=getattr(args, "generate_artifact", False),
        projection=getattr(args, "projection", "full"),
        duplicate_free=getattr(args, "duplicate_free", False),
        include_literals=getattr(args, "include_literals", False),
        strict=getattr(args, "strict", False),
        sync_interval_ms=getattr(args, "sync_interval_ms", 500),
        memory_budget_bytes=getattr(args, "memory_budget_bytes", None),
        memory_cap_fraction=getattr(args, "memory_cap_fraction", 0.9),
        use_sparse=not getattr(args, "dense_updates", False),
    )


def _load(args):
    errors: list[ParseError] = []
    vocab, edges = pipeline.load_data(
        args.input, format=args.format, include_literals=args.include_literals,
        strict=args.strict, has_header=getattr(args, "has_header", False), error_sink=errors)
    for err in errors:
        print(f"warning: skipped {err}", file=sys.stderr)
    return vocab, edges


def _cmd_ingest(args) -> int:
    vocab, edges = _load(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    np.save(out / "edges.npy", edges)
    vocab.save_tsv(out / "vocabulary.tsv")
    print(f"tokens: {len(vocab)} (entities {vocab.entity_count}, predicates {vocab.predicate_count})")
    print(f"edges: {len(edges)}")
    print(f"workspace: {out}")
    return EXIT_OK


def _cmd_stats(args) -> int:
    vocab, edges = _load(args)
    graph = build_graph(edges, len(vocab))
    stats = compute_stats(graph, with_betweenness=args.betweenness)
    print(f"{'vertices':<18} {stats.vertices}")
    print(f"{'edges':<18} {stats.edges}")
    print(f"{'avg degree':<18} {stats.avg_degree:.4f}")
    if stats.avg_betweenness is not None:
        print(f"{'avg betweenness':<18} {stats.avg_betweenness:.4f}")
    print(f"{'density':<18} {stats.density:.7f}")
    return EXIT_OK


def _cmd_walks(args) -> int:
    workspace = Path(args.workspace)
    vocab = Vocabulary.load_tsv(workspace / "vocabulary.tsv")
    edges = np.load(workspace / "edges.npy")
    graph = build_graph(edges, len(vocab))
    config = pipeline.PipelineConfig(
        walk_strategy=args.strategy,
        walk_depth=args.depth,
        walk_number=args.walks_per_vertex,
        duplicate_free=args.duplicate_free,
        projection=args.projection,
        random_state=args.random_state,
        reproducible=args.reproducible,
        workers=args.workers,
    )
    if args.strategy == "bfs" and args.walks_per_vertex != 100:
        print("warning: --walks-per-vertex is ignored for the bfs strategy "
              "(walk count follows the spanning-tree leaves)", file=sys.stderr)
    corpus = pipeline.extract_walks(graph, vocab.entity_tokens(), config)
    walks_mod.save_corpus_binary(corpus, args.out)
    if args.text_out:
        walks_mod.save_corpus_text(corpus, vocab, args.text_out)
    print(f"walks: {len(corpus)}")
    print(f"tokens: {corpus.total_tokens}")
    print(f"corpus: {args.out}")
    return EXIT_OK


def _cmd_train(args) -> int:
    workspace = Path(args.workspace)
    vocab = Vocabulary.load_tsv(workspace / "vocabulary.tsv")
    corpus = walks_mod.load_corpus_binary(args.corpus)
    config = _config_from_args(args)
    model, losses = train(corpus, len(vocab), config.train_config(), config.random_state)
    vocab.frequency = np.bincount(corpus.tokens, minlength=len(vocab)).astype(np.int64)
    table = pipeline.EmbeddingTable(vocab, model.input_matrix, model.trained_mask, losses)
    artifacts = pipeline.save_artifacts(table, replace(config, generate_artifact=True), args.out_dir)
    print(f"epochs: {len(losses)}, final loss: {losses[-1]:.6f}")
    print(f"embeddings: {artifacts.embeddings_path}")
    return EXIT_OK


def _cmd_run(args) -> int:
    config = _config_from_args(args)
    table, artifacts = pipeline.run(args.input, config, out_dir=args.out_dir, format=args.format,
                                    walk_vertices=args.walk_vertex or None)
    print(f"vocab: {len(table.vocab)}, vectors: {table.vectors.shape[0]}x{table.vectors.shape[1]}")
    print(f"epoch losses: {', '.join(f'{x:.4f}' for x in table.losses)}")
    for stage, seconds in table.timings.items():
        print(f"{stage}: {seconds:.3f}")
    if not artifacts.empty:
        print(f"artifacts: {artifacts.manifest_path.parent}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    specs = [benchgen.parse_spec_file(p) for p in args.spec or []]
    if args.model:
        specs.append(benchgen.GeneratorSpec(
            model=args.model, n=args.n, p=args.p, m=args.m,
            predicate_set_size=args.predicates, seed=args.random_state))
    if not specs:
        print("error: provide --spec files or an inline --model/--n", file=sys.stderr)
        return EXIT_USAGE
    config = _config_from_args(args)
    report = benchgen.run_benchmark(specs, [config], repeats=args.repeats, timeout_s=args.timeout_s)
    print(report.format_table())
    if args.out:
        report.to_csv(args.out)
        print(f"report: {args.out}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="walkvec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse + tokenize into a workspace")
    _add_input_flags(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("stats", help="graph statistics table")
    _add_input_flags(p)
    p.add_argument("--betweenness", action="store_true")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("walks", help="extract a walk corpus from a workspace")
    p.add_argument("--workspace", required=True, help="directory produced by ingest")
    p.add_argument("--strategy", choices=("random", "bfs"), default="random")
    p.add_argument("--depth", type=int, default=5)
    p.add_argument("--walks-per-vertex", type=int, default=100)
    p.add_argument("--duplicate-free", action="store_true")
    p.add_argument("--projection", choices=("full", "entity", "property"), default="full")
    p.add_argument("--random-state", type=int, default=42)
    p.add_argument("--reproducible", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="binary corpus output path")
    p.add_argument("--text-out", help="optional text corpus output path")
    p.set_defaults(func=_cmd_walks)

    p = sub.add_parser("train", help="train embeddings from an exported corpus")
    p.add_argument("--workspace", required=True)
    p.add_argument("--corpus", required=True)
    _add_config_flags(p, include_walks=False)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("run", help="end-to-end: ingest, walks, train, artifacts")
    _add_input_flags(p)
    _add_config_flags(p)
    p.add_argument("--generate-artifact", action="store_true")
    p.add_argument("--walk-vertex", action="append",
                   help="restrict walk roots to this lexical token (repeatable)")
    p.add_argument("--out-dir")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("bench", help="synthetic-graph benchmark harness")
    p.add_argument("--spec", action="append", help="key=value generator spec file (repeatable)")
    p.add_argument("--model", choices=("barabasi", "erdos_renyi", "uniform_attachment"))
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--p", type=float, default=0.4)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--predicates", type=int, default=10)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--timeout-s", type=float, default=None)
    p.add_argument("--out", help="CSV report path")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (ParseError, TrainingDiverged) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DATA
    except pipeline.PipelineError as err:
        print(f"error: {err}", file=sys.stderr)
        if isinstance(err.cause, (OSError, MemoryError)):
            return EXIT_RESOURCE
        return EXIT_DATA
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, MemoryError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
