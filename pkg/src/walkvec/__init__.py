"""walkvec: knowledge-graph embeddings from graph walks.

The pipeline tokenizes RDF or tabular edge data, stores the graph in a
compressed adjacency layout, extracts walk corpora (random, duplicate-free
random, BFS predecessor-tree, plus entity/property projections), and trains
skip-gram or CBOW embeddings with uniform negative sampling and sparse row
updates.  A synthetic-graph generator and timing harness round out the
toolkit.

Typical use:

    from walkvec import PipelineConfig, load_data, fit_transform

    vocab, edges = load_data("graph.nt")
    config = PipelineConfig(walk_depth=4, walk_number=25, min_count=1, epochs=5)
    table = fit_transform(edges, vocab, config)
    vector = table["http://example.org/apple"]
"""

from .benchgen import (
    BenchReport,
    GeneratorSpec,
    assign_predicates,
    gen_barabasi,
    gen_erdos_renyi,
    gen_uniform_attachment,
    run_benchmark,
)
from .graph import Graph, GraphStats, brandes_betweenness, build_graph, compute_stats
from .ingest import (
    PAD,
    ParseError,
    Triple,
    Vocabulary,
    build_vocabulary,
    parse_edge_table,
    parse_ntriples,
)
from .pipeline import (
    EmbeddingTable,
    PipelineConfig,
    PipelineError,
    RunArtifacts,
    fit_transform,
    load_data,
    load_embeddings_text,
    load_manifest,
    run,
    save_artifacts,
    save_embeddings_text,
    save_embeddings_tsv,
)
from .w2v import (
    EmbeddingModel,
    RowAdam,
    TrainConfig,
    TrainingDiverged,
    apply_sparse_update,
    cbow_batch_loss,
    generate_pairs,
    init_embeddings,
    sample_negatives,
    sgns_batch_loss,
    suggest_batch_size,
    train,
)
from .walks import (
    PathTable,
    Walk,
    WalkCorpus,
    bfs_walks,
    load_corpus_binary,
    project_corpus,
    project_entity,
    project_property,
    random_walks,
    save_corpus_binary,
    save_corpus_text,
)

__version__ = "0.1.0"

__all__ = [
    "PAD",
    "BenchReport",
    "EmbeddingModel",
    "EmbeddingTable",
    "GeneratorSpec",
    "Graph",
    "GraphStats",
    "ParseError",
    "PathTable",
    "PipelineConfig",
    "PipelineError",
    "RowAdam",
    "RunArtifacts",
    "TrainConfig",
    "TrainingDiverged",
    "Triple",
    "Vocabulary",
    "Walk",
    "WalkCorpus",
    "apply_sparse_update",
    "assign_predicates",
    "bfs_walks",
    "brandes_betweenness",
    "build_graph",
    "build_vocabulary",
    "cbow_batch_loss",
    "compute_stats",
    "fit_transform",
    "gen_barabasi",
    "gen_erdos_renyi",
    "gen_uniform_attachment",
    "generate_pairs",
    "init_embeddings",
    "load_corpus_binary",
    "load_data",
    "load_embeddings_text",
    "load_manifest",
    "parse_edge_table",
    "parse_ntriples",
    "project_corpus",
    "project_entity",
    "project_property",
    "random_walks",
    "run",
    "run_benchmark",
    "sample_negatives",
    "save_artifacts",
    "save_corpus_binary",
    "save_corpus_text",
    "save_embeddings_text",
    "save_embeddings_tsv",
    "sgns_batch_loss",
    "suggest_batch_size",
    "train",
]
