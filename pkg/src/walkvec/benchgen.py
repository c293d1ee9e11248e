"""Synthetic labeled-graph generators and the runtime benchmark harness.

Three growth models produce directed edge lists: preferential attachment
(heavy-tailed degrees), independent edge sampling, and uniform attachment.
Predicates are assigned i.i.d. uniform from a fixed set, giving labeled
triples the rest of the pipeline ingests like any other input.

The harness runs generator x pipeline-config cells strictly sequentially,
records per-stage wall clock over repeated runs with fresh seeds, and marks
cells exceeding the timeout as timed out (timeouts are data, not errors).
"""

from __future__ import annotations

import csv
import hashlib
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .graph import build_graph
from .ingest import Triple, build_vocabulary
from .pipeline import EmbeddingTable, PipelineConfig, extract_walks

BARABASI = "barabasi"
ERDOS_RENYI = "erdos_renyi"
UNIFORM_ATTACHMENT = "uniform_attachment"

_ER_BLOCK_CELLS = 1 << 24  # cap the Bernoulli matrix block at ~16M cells


@dataclass(frozen=True)
class GeneratorSpec:
    model: str
    n: int
    p: float = 0.4
    m: int | None = None  # defaults per model: barabasi 1, uniform_attachment 10
    predicate_set_size: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.model not in (BARABASI, ERDOS_RENYI, UNIFORM_ATTACHMENT):
            raise ValueError(f"unknown generator model: {self.model!r}")
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if not 0 < self.p < 1:
            raise ValueError("p must be in (0, 1)")
        if self.m is not None and self.m < 1:
            raise ValueError("m must be >= 1")
        if self.predicate_set_size < 1:
            raise ValueError("predicate_set_size must be >= 1")

    @property
    def edges_per_vertex(self) -> int:
        if self.m is not None:
            return self.m
        return 1 if self.model == BARABASI else 10

    def generate(self) -> np.ndarray:
        if self.model == BARABASI:
            return gen_barabasi(self.n, self.edges_per_vertex, self.seed)
        if self.model == ERDOS_RENYI:
            return gen_erdos_renyi(self.n, self.p, self.seed)
        return gen_uniform_attachment(self.n, self.edges_per_vertex, self.seed)

    def label(self) -> str:
        if self.model == ERDOS_RENYI:
            return f"{self.model}-{self.n}-p{self.p}"
        return f"{self.model}-{self.n}-m{self.edges_per_vertex}"


def _gen_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), 2]))


def gen_barabasi(n: int, m: int = 1, seed: int = 0) -> np.ndarray:
    """Preferential attachment: each new vertex adds ``m`` directed edges to
    existing vertices drawn with probability proportional to degree + 1.

    The attachment bag holds every vertex once per unit of (degree + 1), so
    a uniform draw from it realizes the weighting.  ``m=1`` yields exactly
    ``n - 1`` edges.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = _gen_rng(seed)
    # Worst-case bag size: one entry per vertex plus two per edge.
    bag = np.empty(n + 2 * (n - 1) * m, dtype=np.int64)
    bag[0] = 0
    bag_len = 1
    src, dst = [], []
    for v in range(1, n):
        targets: list[int] = []
        limit = min(m, v)
        while len(targets) < limit:
            t = int(bag[int(rng.integers(0, bag_len))])
            if t not in targets:
                targets.append(t)
        for t in targets:
            src.append(v)
            dst.append(t)
            bag[bag_len] = t
            bag[bag_len + 1] = v
            bag_len += 2
        bag[bag_len] = v
        bag_len += 1
    return np.column_stack([np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64)])


def gen_erdos_renyi(n: int, p: float, seed: int = 0) -> np.ndarray:
    """Each ordered pair (u, v), u != v, appears independently with
    probability ``p``.  Generated in row blocks to bound memory."""
    if not 0 < p < 1:
        raise ValueError("p must be in (0, 1)")
    rng = _gen_rng(seed)
    rows_per_block = max(1, _ER_BLOCK_CELLS // n)
    chunks = []
    for lo in range(0, n, rows_per_block):
        hi = min(lo + rows_per_block, n)
        block = rng.random((hi - lo, n)) < p
        rr, cc = np.nonzero(block)
        rr = rr + lo
        keep = rr != cc
        chunks.append(np.column_stack([rr[keep], cc[keep]]))
    return np.vstack(chunks).astype(np.int64)


def gen_uniform_attachment(n: int, m: int = 10, seed: int = 0) -> np.ndarray:
    """Growing graph: each new vertex draws ``m`` targets uniformly from the
    existing vertices; duplicate draws collapse, so a step contributes at
    most ``min(m, v)`` edges.  ``m=1`` gives a random recursive tree.

    Every vertex past the seed is an edge source, so the returned edge list
    spans the whole vertex set on its own (vertices that would be isolated
    simply never appear in it downstream).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if m < 1:
        raise ValueError("m must be >= 1")
    rng = _gen_rng(seed)
    src, dst = [], []
    for v in range(1, n):
        targets = np.unique(rng.integers(0, v, size=m))
        src.extend([v] * len(targets))
        dst.extend(targets.tolist())
    return np.column_stack([np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64)])


def assign_predicates(edges: np.ndarray, predicate_set_size: int = 10, seed: int = 0) -> list[Triple]:
    """Label each edge with an i.i.d. uniform predicate from {P0..P(s-1)}."""
    if predicate_set_size < 1:
        raise ValueError("predicate_set_size must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 3]))
    picks = rng.integers(0, predicate_set_size, size=len(edges))
    return [
        Triple(f"v{int(u)}", f"P{int(k)}", f"v{int(w)}")
        for (u, w), k in zip(np.asarray(edges, dtype=np.int64), picks)
    ]


@dataclass
class RunTiming:
    walk_s: float = 0.0
    train_s: float = 0.0
    total_s: float = 0.0
    timed_out: bool = False
    embedding_digest: str | None = None


@dataclass
class BenchCell:
    generator: GeneratorSpec
    config: PipelineConfig
    runs: list[RunTiming] = field(default_factory=list)

    @property
    def timed_out(self) -> bool:
        return any(r.timed_out for r in self.runs)

    def _completed(self, attr):
        return np.array([getattr(r, attr) for r in self.runs if not r.timed_out])

    def mean_std(self, attr: str):
        """Population mean/std over completed runs; (None, None) when the
        cell timed out, mirroring the empty-entry convention."""
        if self.timed_out or not self.runs:
            return None, None
        values = self._completed(attr)
        return float(values.mean()), float(values.std())  # ddof=0: zero for a single run


@dataclass
class BenchReport:
    cells: list[BenchCell]
    repeats: int
    timeout_s: float | None

    def to_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([
                "generator", "n", "strategy", "model", "epochs", "walk_number", "walk_depth",
                "repeat", "walk_s", "train_s", "total_s", "timed_out",
            ])
            for cell in self.cells:
                for i, r in enumerate(cell.runs):
                    writer.writerow([
                        cell.generator.label(), cell.generator.n, cell.config.walk_strategy,
                        cell.config.embedding_model, cell.config.epochs, cell.config.walk_number,
                        cell.config.walk_depth, i,
                        f"{r.walk_s:.6f}", f"{r.train_s:.6f}", f"{r.total_s:.6f}",
                        int(r.timed_out),
                    ])

    def format_table(self) -> str:
        lines = [f"{'cell':<34} {'total (s)':>16} {'walks (s)':>16} {'train (s)':>16}"]
        for cell in self.cells:
            name = f"{cell.generator.label()}/{cell.config.embedding_model}"
            mean, std = cell.mean_std("total_s")
            if mean is None:
                lines.append(f"{name:<34} {'(timeout)':>16}")
                continue
            wmean, wstd = cell.mean_std("walk_s")
            tmean, tstd = cell.mean_std("train_s")
            lines.append(
                f"{name:<34} {mean:>9.3f}±{std:<6.3f} {wmean:>9.3f}±{wstd:<6.3f} {tmean:>9.3f}±{tstd:<6.3f}"
            )
        return "\n".join(lines)


def _digest(table: EmbeddingTable) -> str:
    return hashlib.sha256(np.ascontiguousarray(table.vectors).tobytes()).hexdigest()


def bench_one(spec: GeneratorSpec, config: PipelineConfig, timeout_s: float | None = None) -> RunTiming:
    """One benchmarked pipeline run; cooperative stage-boundary timeout."""
    timing = RunTiming()
    start = time.perf_counter()

    def expired() -> bool:
        return timeout_s is not None and (time.perf_counter() - start) >= timeout_s

    if expired():
        timing.timed_out = True
        return timing

    triples = assign_predicates(spec.generate(), spec.predicate_set_size, spec.seed)
    vocab, edges = build_vocabulary(triples)
    if expired():
        timing.timed_out = True
        timing.total_s = time.perf_counter() - start
        return timing

    graph = build_graph(edges, len(vocab))
    roots = vocab.entity_tokens()
    t0 = time.perf_counter()
    corpus = extract_walks(graph, roots, config)
    timing.walk_s = time.perf_counter() - t0
    if expired():
        timing.timed_out = True
        timing.total_s = time.perf_counter() - start
        return timing

    from .w2v import train  # local import keeps module load light

    t0 = time.perf_counter()
    model, losses = train(corpus, len(vocab), config.train_config(), config.random_state)
    timing.train_s = time.perf_counter() - t0
    timing.total_s = time.perf_counter() - start
    if expired():
        timing.timed_out = True
        return timing
    table = EmbeddingTable(vocab, model.input_matrix, model.trained_mask, losses)
    timing.embedding_digest = _digest(table)
    return timing


def run_benchmark(generator_specs, pipeline_configs, repeats: int = 1,
                  timeout_s: float | None = None) -> BenchReport:
    """Time every generator x config cell, ``repeats`` times with fresh
    seeds, strictly sequentially to avoid timing interference."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    cells = []
    for spec in generator_specs:
        for config in pipeline_configs:
            cell = BenchCell(spec, config)
            for repeat in range(repeats):
                fresh_spec = GeneratorSpec(
                    spec.model, spec.n, spec.p, spec.m, spec.predicate_set_size,
                    seed=spec.seed + repeat,
                )
                fresh_config = _reseed(config, config.random_state + repeat)
                cell.runs.append(bench_one(fresh_spec, fresh_config, timeout_s))
            cells.append(cell)
    return BenchReport(cells, repeats, timeout_s)


def _reseed(config: PipelineConfig, seed: int) -> PipelineConfig:
    from dataclasses import replace

    return replace(config, random_state=seed)


def parse_spec_file(path) -> GeneratorSpec:
    """Read a generator spec from a simple ``key=value`` text file.

    Recognized keys: model, n, p, m, predicates, seed.  Lines starting with
    ``#`` and blank lines are ignored.
    """
    values: dict[str, str] = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"bad spec line (expected key=value): {line!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    if "model" not in values or "n" not in values:
        raise ValueError("spec file must define at least 'model' and 'n'")
    return GeneratorSpec(
        model=values["model"],
        n=int(values["n"]),
        p=float(values.get("p", 0.4)),
        m=int(values["m"]) if "m" in values else None,
        predicate_set_size=int(values.get("predicates", 10)),
        seed=int(values.get("seed", 0)),
    )
