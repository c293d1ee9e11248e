"""End-to-end orchestration: load data, extract walks, train, emit artifacts.

The configuration surface mirrors the constructor-style hyperparameters:
walk strategy/depth/number, model kind, epochs, window, learning rate,
negatives, seeds, and a single ``workers`` knob that governs both walk
shards and trainer workers.  Stages run sequentially and any stage error
names its stage.
"""

from __future__ import annotations

import json
import platform
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import walks as walks_mod
from .graph import Graph, build_graph
from .ingest import Vocabulary, build_vocabulary, parse_edge_table, parse_ntriples
from .w2v import CBOW, SKIPGRAM, TrainConfig, resolve_memory_budget, train
from .walks import BFS, ENTITY, FULL, PROPERTY, RANDOM, WalkCorpus

_FORMATS = ("nt", "csv", "tsv", "txt")
_UNSUPPORTED = {".parquet": "parquet", ".orc": "orc"}


class PipelineError(RuntimeError):
    """A stage failure; ``stage`` names the stage that raised."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineConfig:
    """All pipeline hyperparameters, defaulting to the library's canonical
    minimal-example values."""

    walk_strategy: str = RANDOM
    walk_depth: int = 5
    walk_number: int = 100
    embedding_model: str = SKIPGRAM
    epochs: int = 5
    batch_size: int | None = None
    vector_size: int = 100
    window_size: int = 5
    min_count: int = 10
    learning_rate: float = 0.01
    negative_samples: int = 5
    random_state: int = 42
    reproducible: bool = False
    workers: int = 1
    generate_artifact: bool = False
    projection: str = FULL
    duplicate_free: bool = False
    include_literals: bool = False
    strict: bool = False
    sync_interval_ms: int = 500
    memory_budget_bytes: int | None = None
    memory_cap_fraction: float = 0.9
    use_sparse: bool = True

    def __post_init__(self):
        if self.walk_strategy not in (RANDOM, BFS):
            raise ValueError(f"walk_strategy must be 'random' or 'bfs', got {self.walk_strategy!r}")
        if self.embedding_model not in (SKIPGRAM, CBOW):
            raise ValueError(f"embedding_model must be 'skipgram' or 'cbow', got {self.embedding_model!r}")
        if self.projection not in (FULL, ENTITY, PROPERTY):
            raise ValueError(f"projection must be full/entity/property, got {self.projection!r}")
        for name in ("walk_depth", "walk_number", "epochs", "vector_size", "window_size",
                     "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.min_count < 0:
            raise ValueError("min_count must be >= 0")
        if self.negative_samples < 0:
            raise ValueError("negative_samples must be >= 0")
        if self.random_state < 0:
            raise ValueError("random_state must be >= 0")
        if self.batch_size is not None and self.batch_size < 1:
            raise ValueError("batch_size must be >= 1 or None")

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            model=self.embedding_model,
            epochs=self.epochs,
            window_size=self.window_size,
            negative_samples=self.negative_samples,
            learning_rate=self.learning_rate,
            min_count=self.min_count,
            vector_size=self.vector_size,
            batch_size=self.batch_size,
            sync_interval_ms=self.sync_interval_ms,
            memory_budget_bytes=self.memory_budget_bytes,
            memory_cap_fraction=self.memory_cap_fraction,
            use_sparse=self.use_sparse,
            workers=self.workers,
            reproducible=self.reproducible,
        )


def detect_format(path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix in _UNSUPPORTED:
        raise ValueError(f"format unsupported: {_UNSUPPORTED[suffix]}")
    mapped = {".nt": "nt", ".csv": "csv", ".tsv": "tsv", ".txt": "txt"}.get(suffix)
    if mapped is None:
        raise ValueError(f"cannot infer format from {suffix!r}; pass format explicitly")
    return mapped


def load_data(path, format: str | None = None, include_literals: bool = False,
              strict: bool = False, has_header: bool = False, error_sink: list | None = None):
    """Parse and tokenize an input file; returns (vocabulary, edges).

    ``format`` is nt/csv/tsv/txt, inferred from the extension when omitted.
    Parquet/ORC are declared unsupported with a clear error.
    """
    if format is None:
        format = detect_format(path)
    if format not in _FORMATS:
        if format in _UNSUPPORTED.values():
            raise ValueError(f"format unsupported: {format}")
        raise ValueError(f"unknown format: {format!r}")
    try:
        if format == "nt":
            triples = parse_ntriples(path, strict=strict, error_sink=error_sink)
        else:
            triples = parse_edge_table(path, format=format, has_header=has_header)
        return build_vocabulary(triples, include_literals=include_literals)
    except (ValueError, OSError) as err:
        raise PipelineError("ingest", err) from err


class EmbeddingTable:
    """|vocab| x d embedding rows keyed by lexical token."""

    def __init__(self, vocab: Vocabulary, vectors: np.ndarray, trained_mask: np.ndarray,
                 losses: list[float], timings: dict | None = None):
        self.vocab = vocab
        self.vectors = vectors
        self.trained_mask = trained_mask
        self.losses = losses
        self.timings = timings or {}

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def __contains__(self, lexical: str) -> bool:
        return lexical in self.vocab.token_of

    def __getitem__(self, lexical: str) -> np.ndarray:
        return self.vectors[self.vocab.token_of[lexical]]

    def as_dict(self) -> dict[str, np.ndarray]:
        return {lex: self.vectors[tok] for lex, tok in self.vocab.token_of.items()}


def extract_walks(graph: Graph, roots, config: PipelineConfig) -> WalkCorpus:
    """Run the configured walk strategy and projection over the graph."""
    if config.walk_strategy == RANDOM:
        corpus = walks_mod.random_walks(
            graph,
            start_vertices=roots,
            walk_depth=config.walk_depth,
            walk_number=config.walk_number,
            rng_seed=config.random_state,
            duplicate_free=config.duplicate_free,
            workers=config.workers,
        )
    else:
        # walk_number does not apply to BFS: the spanning-tree leaves decide.
        corpus, _ = walks_mod.bfs_walks(graph, start_vertices=roots, walk_depth=config.walk_depth)
    return walks_mod.project_corpus(corpus, config.projection)


def fit_transform(edges: np.ndarray, vocab: Vocabulary, config: PipelineConfig,
                  walk_vertices=None, on_event=None) -> EmbeddingTable:
    """Graph build, walk extraction, and training in one call.

    ``walk_vertices=None`` roots walks at every entity vertex (subjects and
    objects).  Returns the |vocab| x d table keyed by lexical token, with
    the per-epoch loss trace and stage timings attached.
    """
    if len(edges) == 0:
        raise PipelineError("graph", ValueError("no edges to embed"))
    timings: dict[str, float] = {}

    try:
        start = time.perf_counter()
        graph = build_graph(edges, len(vocab))
        timings["graph_s"] = time.perf_counter() - start
    except ValueError as err:
        raise PipelineError("graph", err) from err

    try:
        roots = vocab.entity_tokens() if walk_vertices is None else walk_vertices
        start = time.perf_counter()
        corpus = extract_walks(graph, roots, config)
        timings["walks_s"] = time.perf_counter() - start
    except ValueError as err:
        raise PipelineError("walks", err) from err

    try:
        start = time.perf_counter()
        model, losses = train(corpus, len(vocab), config.train_config(),
                              config.random_state, on_event=on_event)
        timings["train_s"] = time.perf_counter() - start
    except (ValueError, RuntimeError) as err:
        raise PipelineError("train", err) from err

    vocab.frequency = np.bincount(corpus.tokens, minlength=len(vocab)).astype(np.int64)
    table = EmbeddingTable(vocab, model.input_matrix, model.trained_mask, losses, timings)
    return table


@dataclass
class RunArtifacts:
    embeddings_path: Path | None = None
    embeddings_tsv_path: Path | None = None
    vocabulary_path: Path | None = None
    loss_trace_path: Path | None = None
    manifest_path: Path | None = None
    manifest: dict = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return self.manifest_path is None


def save_embeddings_text(vectors: np.ndarray, vocab: Vocabulary, path):
    """word2vec text format: a ``<count> <dim>`` header, then one
    ``<lexical> <d floats>`` line per token (repr-precision floats)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{vectors.shape[0]} {vectors.shape[1]}\n")
        for token in range(vectors.shape[0]):
            row = " ".join(f"{x:.8g}" for x in vectors[token])
            fh.write(f"{vocab.lexical(token)} {row}\n")


def save_embeddings_tsv(vectors: np.ndarray, vocab: Vocabulary, path):
    """Tab-separated export: lexical, then the d vector components."""
    with open(path, "w", encoding="utf-8") as fh:
        for token in range(vectors.shape[0]):
            row = "\t".join(f"{x:.8g}" for x in vectors[token])
            fh.write(f"{_escape_lexical_tsv(vocab.lexical(token))}\t{row}\n")


def _escape_lexical_tsv(value: str) -> str:
    return value.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def load_embeddings_text(path):
    """Read the word2vec text format back to (lexicals, matrix).

    Keys containing spaces round-trip because the vector is always the last
    ``dim`` whitespace-separated fields of a line.
    """
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        count, dim = int(header[0]), int(header[1])
        lexicals: list[str] = []
        matrix = np.empty((count, dim))
        for i in range(count):
            parts = fh.readline().rstrip("\n").split(" ")
            lexicals.append(" ".join(parts[: len(parts) - dim]))
            matrix[i] = [float(x) for x in parts[len(parts) - dim :]]
    return lexicals, matrix


def save_loss_trace(losses, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("epoch,loss\n")
        for epoch, loss in enumerate(losses, start=1):
            fh.write(f"{epoch},{loss!r}\n")


def save_artifacts(table: EmbeddingTable, config: PipelineConfig, out_dir) -> RunArtifacts:
    """Write embeddings, vocabulary, loss trace, and the run manifest.

    A no-op returning empty artifacts when ``generate_artifact`` is false.
    The manifest carries the full configuration, so a run can be replayed
    from it alone.
    """
    if not config.generate_artifact:
        return RunArtifacts()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    embeddings_path = out / "embeddings.w2v.txt"
    embeddings_tsv_path = out / "embeddings.tsv"
    vocab_path = out / "vocabulary.tsv"
    loss_path = out / "loss.csv"
    manifest_path = out / "manifest.json"

    save_embeddings_text(table.vectors, table.vocab, embeddings_path)
    save_embeddings_tsv(table.vectors, table.vocab, embeddings_tsv_path)
    table.vocab.save_tsv(vocab_path)
    save_loss_trace(table.losses, loss_path)

    manifest = {
        "config": asdict(config),
        "seed": config.random_state,
        "timings": table.timings,
        "vocab_size": len(table.vocab),
        "epoch_losses": list(map(float, table.losses)),
        "batch_size_policy": ("explicit" if config.batch_size is not None
                              else "auto:min(memory_budget/4*per_sample, ceil(pairs/20))"),
        "memory_budget_bytes": resolve_memory_budget(config.train_config()),
        "python": platform.python_version(),
    }
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return RunArtifacts(embeddings_path, embeddings_tsv_path, vocab_path, loss_path,
                        manifest_path, manifest)


def load_manifest(path) -> PipelineConfig:
    """Reconstruct the PipelineConfig recorded in a run manifest."""
    with open(path, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    return PipelineConfig(**manifest["config"])


def run(input_path, config: PipelineConfig, out_dir=None, format: str | None = None,
        walk_vertices=None, on_event=None):
    """Load, fit, and (optionally) save artifacts; returns
    ``(EmbeddingTable, RunArtifacts)``.

    ``walk_vertices`` may hold tokens or lexical keys; lexical keys are
    resolved against the loaded vocabulary.
    """
    vocab, edges = load_data(input_path, format=format,
                             include_literals=config.include_literals, strict=config.strict)
    if walk_vertices is not None:
        resolved = []
        for v in walk_vertices:
            if isinstance(v, str):
                if v not in vocab.token_of:
                    raise PipelineError("walks", ValueError(f"unknown walk vertex: {v!r}"))
                resolved.append(vocab.token_of[v])
            else:
                resolved.append(int(v))
        walk_vertices = resolved
    table = fit_transform(edges, vocab, config, walk_vertices=walk_vertices, on_event=on_event)
    artifacts = RunArtifacts()
    if config.generate_artifact:
        if out_dir is None:
            raise ValueError("generate_artifact=True requires an output directory")
        try:
            artifacts = save_artifacts(table, config, out_dir)
        except OSError as err:
            raise PipelineError("artifacts", err) from err
    return table, artifacts
