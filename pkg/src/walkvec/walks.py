"""Walk-corpus extraction: random walks, BFS predecessor trees, projections.

Walks are token sequences alternating entity, predicate, entity, ...; a
walk of depth ``h`` (edge traversals) has at most ``2h + 1`` tokens.  The
random-walk kernel fills a fixed-width buffer padded with ``PAD`` for early
terminations and strips the padding before the corpus is emitted.

Extraction is embarrassingly parallel over fixed-size shards of the
replicated start-vertex list.  Each shard owns an independent RNG stream
seeded by (rng_seed, shard index) and results concatenate in shard order,
so a corpus is byte-identical for any worker count.
"""

from __future__ import annotations

import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph
from .ingest import PAD, Vocabulary

RANDOM = "random"
BFS = "bfs"

FULL = "full"
ENTITY = "entity"
PROPERTY = "property"

#: Work items per shard; constant so shard boundaries (and therefore RNG
#: streams) never depend on the worker count.
SHARD_SIZE = 8192

_CORPUS_MAGIC = b"WVC1"


@dataclass(frozen=True)
class Walk:
    walk_id: int
    tokens: np.ndarray


class WalkCorpus:
    """Variable-length token sequences in flat storage.

    ``tokens`` holds every walk back to back; ``offsets`` (length
    ``len(corpus) + 1``) slices it per walk.  Walk ids are the positional
    indices 0..n-1.
    """

    def __init__(self, tokens: np.ndarray, offsets: np.ndarray, strategy: str, projection: str = FULL):
        self.tokens = tokens
        self.offsets = offsets
        self.strategy = strategy
        self.projection = projection

    def __len__(self) -> int:
        return len(self.offsets) - 1

    @property
    def total_tokens(self) -> int:
        return int(len(self.tokens))

    def walk_tokens(self, i: int) -> np.ndarray:
        return self.tokens[self.offsets[i] : self.offsets[i + 1]]

    def __iter__(self):
        for i in range(len(self)):
            yield Walk(i, self.walk_tokens(i))

    def sequences(self) -> list[np.ndarray]:
        return [self.walk_tokens(i) for i in range(len(self))]

    @classmethod
    def from_sequences(cls, sequences, strategy: str = RANDOM, projection: str = FULL) -> "WalkCorpus":
        lengths = np.fromiter((len(s) for s in sequences), dtype=np.int64, count=len(sequences))
        offsets = np.zeros(len(sequences) + 1, dtype=np.int64)
        np.cumsum(lengths, out=offsets[1:])
        tokens = np.empty(int(offsets[-1]), dtype=np.int64)
        for i, seq in enumerate(sequences):
            tokens[offsets[i] : offsets[i + 1]] = seq
        return cls(tokens, offsets, strategy, projection)


@dataclass
class PathTable:
    """Per-walk edge rows (source, target, walk_id) of BFS leaf-to-root paths.

    Rows are grouped by walk_id; inside a group they run leaf-edge first and
    climb to the root, so each group reconstructs one contiguous path.
    """

    sources: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    targets: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    walk_ids: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))

    def __len__(self) -> int:
        return len(self.sources)

    def rows(self) -> list[tuple[int, int, int]]:
        return list(zip(self.sources.tolist(), self.targets.tolist(), self.walk_ids.tolist()))


def _resolve_roots(graph: Graph, start_vertices) -> np.ndarray:
    if start_vertices is None:
        return np.arange(graph.vertex_count, dtype=np.int64)
    roots = np.asarray(list(start_vertices) if not isinstance(start_vertices, np.ndarray) else start_vertices, dtype=np.int64)
    if roots.size == 0:
        raise ValueError("start_vertices must be non-empty")
    if roots.min() < 0 or roots.max() >= graph.vertex_count:
        raise ValueError("start vertex out of range")
    return roots


def _walk_shard(graph: Graph, roots: np.ndarray, depth: int, rng: np.random.Generator):
    """Vectorized fixed-width walk buffer for one shard of start vertices."""
    n = len(roots)
    width = 2 * depth + 1
    buf = np.full((n, width), PAD, dtype=np.int64)
    buf[:, 0] = roots
    cur = roots.copy()
    offsets, targets, preds = graph.row_offsets, graph.col_targets, graph.col_predicates
    alive = np.ones(n, dtype=bool)
    for hop in range(depth):
        deg = offsets[cur + 1] - offsets[cur]
        alive &= deg > 0
        if not alive.any():
            break
        draw = rng.random(n)  # one draw per row per hop, alive or not, keeps the stream layout fixed
        pick = (draw * deg).astype(np.int64)
        np.minimum(pick, np.maximum(deg - 1, 0), out=pick)
        chosen = (offsets[cur] + pick)[alive]
        nxt = targets[chosen]
        buf[alive, 2 * hop + 1] = preds[chosen]
        buf[alive, 2 * hop + 2] = nxt
        cur[alive] = nxt
    mask = buf != PAD
    lengths = mask.sum(axis=1).astype(np.int64)
    return buf[mask], lengths


def random_walks(
    graph: Graph,
    start_vertices=None,
    walk_depth: int = 5,
    walk_number: int = 1,
    rng_seed: int = 0,
    duplicate_free: bool = False,
    workers: int = 1,
) -> WalkCorpus:
    """Fixed-depth uniform random walks over out-edges.

    Every start vertex is replicated ``walk_number`` times into one flat
    work list; at each hop the next edge is uniform over the out-edges, and
    a vertex without out-edges ends the walk early.  With
    ``duplicate_free``, identical token sequences from the same start-vertex
    replica group collapse to their first occurrence.
    """
    if walk_depth < 1:
        raise ValueError("walk_depth must be >= 1")
    if walk_number < 1:
        raise ValueError("walk_number must be >= 1")
    roots = _resolve_roots(graph, start_vertices)
    work = np.repeat(roots, walk_number)

    shards = [(i, work[lo : lo + SHARD_SIZE]) for i, lo in enumerate(range(0, len(work), SHARD_SIZE))]

    def run(shard):
        index, shard_roots = shard
        rng = np.random.default_rng(np.random.SeedSequence([int(rng_seed), 0, int(index)]))
        return _walk_shard(graph, shard_roots, walk_depth, rng)

    if workers > 1 and len(shards) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, shards))
    else:
        results = [run(s) for s in shards]

    tokens = np.concatenate([r[0] for r in results]) if results else np.empty(0, dtype=np.int64)
    lengths = np.concatenate([r[1] for r in results]) if results else np.empty(0, dtype=np.int64)
    offsets = np.zeros(len(lengths) + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])

    if duplicate_free:
        keep = np.zeros(len(lengths), dtype=bool)
        for g in range(len(roots)):
            seen = set()
            for i in range(g * walk_number, (g + 1) * walk_number):
                key = tokens[offsets[i] : offsets[i + 1]].tobytes()
                if key not in seen:
                    seen.add(key)
                    keep[i] = True
        kept = np.flatnonzero(keep)
        token_mask = np.zeros(len(tokens), dtype=bool)
        for i in kept:
            token_mask[offsets[i] : offsets[i + 1]] = True
        tokens = tokens[token_mask]
        lengths = lengths[kept]
        offsets = np.zeros(len(lengths) + 1, dtype=np.int64)
        np.cumsum(lengths, out=offsets[1:])

    return WalkCorpus(tokens, offsets, RANDOM)


def _bfs_tree(graph: Graph, root: int, depth: int):
    """Bounded BFS spanning tree; returns (discovery order, parent, parent_pred).

    One predecessor edge per discovered vertex: first discovery wins, ties
    inside a frontier break by frontier position then ascending adjacency
    position.  Implemented with per-level vectorized gathers.
    """
    offsets, targets, preds = graph.row_offsets, graph.col_targets, graph.col_predicates
    parent = {root: -1}
    parent_pred = {root: -1}
    order = [root]
    frontier = np.array([root], dtype=np.int64)
    for _ in range(depth):
        counts = offsets[frontier + 1] - offsets[frontier]
        total = int(counts.sum())
        if total == 0:
            break
        # Concatenate the adjacency slices of the frontier, in frontier order.
        idx = _concat_slices(offsets[frontier], counts, total)
        cand_targets = targets[idx]
        cand_parents = np.repeat(frontier, counts)
        cand_preds = preds[idx]
        # First occurrence per target in concatenated order == pinned tie-break.
        _, first = np.unique(cand_targets, return_index=True)
        first.sort()
        new_frontier = []
        for j in first:
            v = int(cand_targets[j])
            if v in parent:
                continue
            parent[v] = int(cand_parents[j])
            parent_pred[v] = int(cand_preds[j])
            order.append(v)
            new_frontier.append(v)
        if not new_frontier:
            break
        frontier = np.array(new_frontier, dtype=np.int64)
    return order, parent, parent_pred


def _concat_slices(starts: np.ndarray, counts: np.ndarray, total: int) -> np.ndarray:
    """Index array selecting [starts[i], starts[i]+counts[i]) back to back."""
    nz = counts > 0  # zero-length slices would collapse the boundary arithmetic
    starts, counts = starts[nz], counts[nz]
    if len(starts) == 0:
        return np.empty(0, dtype=np.int64)
    idx = np.ones(total, dtype=np.int64)
    idx[0] = starts[0]
    if len(starts) > 1:
        boundaries = np.cumsum(counts)[:-1]
        idx[boundaries] = starts[1:] - (starts[:-1] + counts[:-1]) + 1
    return np.cumsum(idx)


def bfs_walks(graph: Graph, start_vertices=None, walk_depth: int = 5):
    """BFS predecessor-tree walks with leaf-to-root path materialization.

    Per start vertex, a depth-bounded BFS records one predecessor edge per
    discovered vertex; every leaf of the spanning tree seeds one walk,
    reconstructed by climbing predecessors and reversed to root-to-leaf
    token order.  A root whose tree has no edges emits the length-1 walk
    ``[root]``.  Returns the corpus plus the per-walk edge table.
    """
    if walk_depth < 1:
        raise ValueError("walk_depth must be >= 1")
    roots = _resolve_roots(graph, start_vertices)

    sequences: list[np.ndarray] = []
    rows_src: list[int] = []
    rows_dst: list[int] = []
    rows_wid: list[int] = []
    walk_id = 0
    for root in roots.tolist():
        order, parent, parent_pred = _bfs_tree(graph, root, walk_depth)
        children = set(parent.values())
        leaves = [v for v in order if v not in children]
        if not leaves:  # tree is the bare root
            leaves = [root]
        for leaf in leaves:
            chain = []
            v = leaf
            while v != root:
                chain.append(v)
                rows_src.append(parent[v])
                rows_dst.append(v)
                rows_wid.append(walk_id)
                v = parent[v]
            chain.append(root)
            chain.reverse()
            tokens = np.empty(2 * len(chain) - 1, dtype=np.int64)
            tokens[0] = chain[0]
            for i, v in enumerate(chain[1:], start=1):
                tokens[2 * i - 1] = parent_pred[v]
                tokens[2 * i] = v
            sequences.append(tokens)
            walk_id += 1

    corpus = WalkCorpus.from_sequences(sequences, BFS)
    table = PathTable(
        np.asarray(rows_src, dtype=np.int64),
        np.asarray(rows_dst, dtype=np.int64),
        np.asarray(rows_wid, dtype=np.int64),
    )
    return corpus, table


def project_entity(walk: Walk) -> Walk:
    """Keep only entity tokens (even positions) of a full walk."""
    return Walk(walk.walk_id, walk.tokens[0::2])


def project_property(walk: Walk) -> Walk:
    """Keep the start entity followed by all predicate tokens of a full walk."""
    return Walk(walk.walk_id, np.concatenate([walk.tokens[:1], walk.tokens[1::2]]))


def project_corpus(corpus: WalkCorpus, projection: str) -> WalkCorpus:
    """Apply an entity/property projection to every full walk of a corpus."""
    if projection == FULL:
        return corpus
    if corpus.projection != FULL:
        raise ValueError("corpus is already projected")
    pos = np.arange(corpus.total_tokens, dtype=np.int64) - np.repeat(corpus.offsets[:-1], np.diff(corpus.offsets))
    if projection == ENTITY:
        keep = pos % 2 == 0
    elif projection == PROPERTY:
        keep = (pos == 0) | (pos % 2 == 1)
    else:
        raise ValueError(f"unknown projection: {projection!r}")
    lengths = np.diff(corpus.offsets)
    kept_per_walk = np.add.reduceat(keep.astype(np.int64), corpus.offsets[:-1]) if len(corpus) else np.empty(0, dtype=np.int64)
    kept_per_walk = np.where(lengths == 0, 0, kept_per_walk)
    offsets = np.zeros(len(corpus) + 1, dtype=np.int64)
    np.cumsum(kept_per_walk, out=offsets[1:])
    return WalkCorpus(corpus.tokens[keep], offsets, corpus.strategy, projection)


def save_corpus_binary(corpus: WalkCorpus, path):
    """Write the corpus as length-prefixed u32 token records (little-endian).

    Layout: magic ``WVC1``, strategy byte, projection byte, u16 reserved,
    u32 walk count, then per walk a u32 length followed by that many u32
    tokens.
    """
    if corpus.total_tokens and int(corpus.tokens.max()) >= 2**32:
        raise ValueError("token does not fit in u32")
    strategies = {RANDOM: 0, BFS: 1}
    projections = {FULL: 0, ENTITY: 1, PROPERTY: 2}
    lengths = np.diff(corpus.offsets).astype(np.uint32)
    with open(path, "wb") as fh:
        fh.write(_CORPUS_MAGIC)
        fh.write(struct.pack("<BBHI", strategies[corpus.strategy], projections[corpus.projection], 0, len(corpus)))
        body = np.empty(len(corpus) + corpus.total_tokens, dtype="<u4")
        insert_at = corpus.offsets[:-1] + np.arange(len(corpus), dtype=np.int64)
        body[insert_at] = lengths
        mask = np.ones(len(body), dtype=bool)
        mask[insert_at] = False
        body[mask] = corpus.tokens.astype("<u4")
        fh.write(body.tobytes())


def load_corpus_binary(path) -> WalkCorpus:
    strategies = {0: RANDOM, 1: BFS}
    projections = {0: FULL, 1: ENTITY, 2: PROPERTY}
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _CORPUS_MAGIC:
            raise ValueError("not a walk corpus file")
        strategy_b, projection_b, _, count = struct.unpack("<BBHI", fh.read(8))
        body = np.frombuffer(fh.read(), dtype="<u4")
    offsets = np.zeros(count + 1, dtype=np.int64)
    sequences_at = 0
    tokens = np.empty(len(body) - count, dtype=np.int64)
    pos = 0
    for i in range(count):
        length = int(body[sequences_at])
        tokens[pos : pos + length] = body[sequences_at + 1 : sequences_at + 1 + length]
        sequences_at += 1 + length
        pos += length
        offsets[i + 1] = pos
    if sequences_at != len(body):
        raise ValueError("corrupt walk corpus file")
    return WalkCorpus(tokens, offsets, strategies[strategy_b], projections[projection_b])


def save_corpus_text(corpus: WalkCorpus, vocab: Vocabulary, path):
    """One walk per line, space-separated lexical tokens."""
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(len(corpus)):
            fh.write(" ".join(vocab.lexical(int(t)) for t in corpus.walk_tokens(i)))
            fh.write("\n")
