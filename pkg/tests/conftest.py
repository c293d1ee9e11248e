import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make tests/oracles.py importable

from walkvec import Triple, build_graph, build_vocabulary

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA


def triples_from_pairs(rows):
    """(subject, predicate, object) label rows -> Triple list."""
    return [Triple(s, p, o) for s, p, o in rows]


def graph_from_rows(rows):
    """Build (vocab, graph) from (subject, predicate, object) label rows."""
    vocab, edges = build_vocabulary(triples_from_pairs(rows))
    return vocab, build_graph(edges, len(vocab))


def chain_rows():
    # a -p-> b -q-> c
    return [("a", "p", "b"), ("b", "q", "c")]


def star_rows():
    return [("r", "p", "a"), ("r", "p", "b"), ("r", "p", "c")]


def diamond_rows():
    return [("r", "p", "a"), ("r", "p", "b"), ("a", "q", "c"), ("b", "q", "c")]


def two_clique_rows():
    """Two 5-cliques (directed both ways) joined by one bridge edge."""
    rows = []
    for base in ("x", "y"):
        members = [f"{base}{i}" for i in range(5)]
        for u in members:
            for v in members:
                if u != v:
                    rows.append((u, "p", v))
    rows.append(("x0", "p", "y0"))
    return rows


def random_edge_rows(rng, n_vertices, n_edges, n_predicates=3):
    """Random labeled multigraph rows over v0..v{n-1} / p0..p{k-1}."""
    rows = []
    for _ in range(n_edges):
        u = int(rng.integers(0, n_vertices))
        v = int(rng.integers(0, n_vertices))
        p = int(rng.integers(0, n_predicates))
        rows.append((f"v{u}", f"p{p}", f"v{v}"))
    return rows


def adjacency_pairs(graph):
    """Per-vertex ordered (predicate, target) lists, for the BFS oracle."""
    out = []
    for v in range(graph.vertex_count):
        preds, targets = graph.out_neighbors(v)
        out.append(list(zip(preds.tolist(), targets.tolist())))
    return out
