"""Word2vec training on walk corpora: SGNS and CBOW with negative sampling.

Both models keep separate input and output embedding matrices initialized
from U(-1/d, 1/d).  Negative sampling is uniform over the vocabulary that
survives min_count filtering (deliberately no unigram^0.75 table).  Updates
are per-row adaptive moment estimation; in sparse mode only the rows a
batch touches move, so every untouched row stays bit-identical to its
initialization.

Multi-worker training shards each epoch's item order across workers.  Every
worker applies updates to a local replica and the accumulated sparse deltas
merge into the shared matrices, in worker order, at sync boundaries.  With
``reproducible=True`` the boundary is a fixed batch count, which makes runs
byte-identical for equal worker counts; otherwise the boundary approximates
``sync_interval_ms`` of wall clock and only single-worker runs are
bit-reproducible.
"""

from __future__ import annotations

import math
import os
import threading
import time
from dataclasses import dataclass

import numpy as np

SKIPGRAM = "skipgram"
CBOW = "cbow"

#: Fallback training memory budget when neither the config nor the
#: WALKVEC_MEMORY_BUDGET environment variable provides one.
DEFAULT_MEMORY_BUDGET = 1 << 30

MEMORY_BUDGET_ENV = "WALKVEC_MEMORY_BUDGET"

#: Batches between gradient merges under reproducible multi-worker training.
REPRODUCIBLE_SYNC_BATCHES = 64

_ADAM_BETA1 = 0.9
_ADAM_BETA2 = 0.999
_ADAM_EPS = 1e-8


class TrainingDiverged(RuntimeError):
    """Raised when a batch loss goes non-finite."""

    def __init__(self, epoch: int, batch: int):
        super().__init__(f"divergence at epoch {epoch}, batch {batch}")
        self.epoch = epoch
        self.batch = batch


@dataclass
class TrainConfig:
    model: str = SKIPGRAM
    epochs: int = 5
    window_size: int = 5
    negative_samples: int = 5
    learning_rate: float = 0.01
    min_count: int = 10
    vector_size: int = 100
    batch_size: int | None = None
    sync_interval_ms: int = 500
    memory_budget_bytes: int | None = None
    memory_cap_fraction: float = 0.9
    use_sparse: bool = True
    workers: int = 1
    reproducible: bool = False

    def __post_init__(self):
        if self.model not in (SKIPGRAM, CBOW):
            raise ValueError(f"unknown model: {self.model!r}")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.window_size < 1:
            raise ValueError("window_size must be >= 1")
        if self.negative_samples < 0:
            raise ValueError("negative_samples must be >= 0")
        if self.min_count < 0:
            raise ValueError("min_count must be >= 0")
        if self.vector_size < 1:
            raise ValueError("vector_size must be >= 1")
        if not 0 < self.memory_cap_fraction <= 1:
            raise ValueError("memory_cap_fraction must be in (0, 1]")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.batch_size is not None and self.batch_size < 1:
            raise ValueError("batch_size must be >= 1 or None")


@dataclass
class EmbeddingModel:
    """Paired |vocab| x d input/output matrices.

    ``trained_mask`` marks tokens that survived min_count filtering; rows
    with a False mask are bit-identical to their initialization after
    training.  ``touched_input``/``touched_output`` record which rows any
    batch actually updated.
    """

    input_matrix: np.ndarray
    output_matrix: np.ndarray
    dim: int
    trained_mask: np.ndarray
    touched_input: np.ndarray | None = None
    touched_output: np.ndarray | None = None

    @property
    def vocab_size(self) -> int:
        return self.input_matrix.shape[0]


class _Corpus:
    """Flat (tokens, offsets) pair, duck-compatible with WalkCorpus."""

    def __init__(self, tokens, offsets):
        self.tokens = tokens
        self.offsets = offsets


def init_embeddings(vocab_size: int, d: int, rng_seed: int) -> EmbeddingModel:
    """Fill both matrices i.i.d. uniform on (-1/d, 1/d), deterministic by seed."""
    if d < 1:
        raise ValueError("embedding dimension must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence([int(rng_seed), 1, 0]))
    bound = 1.0 / d
    input_matrix = rng.uniform(-bound, bound, size=(vocab_size, d))
    output_matrix = rng.uniform(-bound, bound, size=(vocab_size, d))
    return EmbeddingModel(input_matrix, output_matrix, d, np.zeros(vocab_size, dtype=bool))


def _flatten_corpus(corpus):
    """Accept a WalkCorpus-like object or any iterable of int sequences."""
    if hasattr(corpus, "tokens") and hasattr(corpus, "offsets"):
        return np.asarray(corpus.tokens, dtype=np.int64), np.asarray(corpus.offsets, dtype=np.int64)
    sequences = [np.asarray(s, dtype=np.int64) for s in corpus]
    lengths = np.array([len(s) for s in sequences], dtype=np.int64)
    offsets = np.zeros(len(sequences) + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])
    tokens = np.concatenate(sequences) if sequences else np.empty(0, dtype=np.int64)
    return tokens, offsets


def _filter_min_count(tokens, offsets, vocab_size, min_count):
    freq = np.bincount(tokens, minlength=vocab_size).astype(np.int64)
    keep = freq >= min_count
    token_keep = keep[tokens] if len(tokens) else np.zeros(0, dtype=bool)
    lengths = np.diff(offsets)
    if len(lengths):
        kept_lengths = np.add.reduceat(token_keep.astype(np.int64), offsets[:-1])
        kept_lengths = np.where(lengths == 0, 0, kept_lengths)
    else:
        kept_lengths = lengths
    new_offsets = np.zeros(len(lengths) + 1, dtype=np.int64)
    np.cumsum(kept_lengths, out=new_offsets[1:])
    return tokens[token_keep], new_offsets, freq, keep


def generate_pairs(corpus, window_size: int, min_count: int, vocab_size: int | None = None):
    """Center-context pairs plus the corpus frequency table.

    Frequencies are counted over the raw corpus; tokens below ``min_count``
    are removed from every sequence before windowing, so windows close over
    the gaps.  Returns ``(pairs, frequency)`` with ``pairs`` an (N, 2) array
    of (center, context) rows.
    """
    tokens, offsets = _flatten_corpus(corpus)
    if vocab_size is None:
        vocab_size = int(tokens.max()) + 1 if len(tokens) else 0
    tokens, offsets, freq, _ = _filter_min_count(tokens, offsets, vocab_size, min_count)
    if len(tokens) == 0:
        raise ValueError("empty training set")
    walk_of = np.repeat(np.arange(len(offsets) - 1, dtype=np.int64), np.diff(offsets))
    centers, contexts = [], []
    for shift in range(1, window_size + 1):
        if shift >= len(tokens):
            break
        same_walk = walk_of[:-shift] == walk_of[shift:]
        left = tokens[:-shift][same_walk]
        right = tokens[shift:][same_walk]
        centers.append(left)
        contexts.append(right)
        centers.append(right)
        contexts.append(left)
    total = sum(len(c) for c in centers)
    if total == 0:
        raise ValueError("empty training set")
    pairs = np.column_stack([np.concatenate(centers), np.concatenate(contexts)])
    return pairs, freq


def generate_cbow_instances(corpus, window_size: int, min_count: int, vocab_size: int | None = None):
    """(context matrix, context lengths, targets, frequency) for CBOW.

    The context matrix is (N, 2*window_size) padded with -1; positions with
    an empty realized window (length-1 sequences) are dropped.
    """
    tokens, offsets = _flatten_corpus(corpus)
    if vocab_size is None:
        vocab_size = int(tokens.max()) + 1 if len(tokens) else 0
    tokens, offsets, freq, _ = _filter_min_count(tokens, offsets, vocab_size, min_count)
    n = len(tokens)
    if n == 0:
        raise ValueError("empty training set")
    walk_of = np.repeat(np.arange(len(offsets) - 1, dtype=np.int64), np.diff(offsets))
    ctx = np.full((n, 2 * window_size), -1, dtype=np.int64)
    col = 0
    for shift in range(1, window_size + 1):
        if shift < n:
            valid = walk_of[:-shift] == walk_of[shift:]
            left_col = ctx[shift:, col]
            left_col[valid] = tokens[:-shift][valid]
            right_col = ctx[:-shift, col + 1]
            right_col[valid] = tokens[shift:][valid]
        col += 2
    lengths = (ctx >= 0).sum(axis=1).astype(np.int64)
    has_context = lengths > 0
    if not has_context.any():
        raise ValueError("empty training set")
    return ctx[has_context], lengths[has_context], tokens[has_context], freq


def sample_negatives(count: int, vocab_size: int, rng: np.random.Generator,
                     candidates: np.ndarray | None = None) -> np.ndarray:
    """``count`` i.i.d. tokens uniform over the surviving vocabulary.

    With ``candidates`` given, draws are uniform over that token array;
    otherwise uniform over ``range(vocab_size)``.
    """
    if candidates is not None:
        if len(candidates) == 0:
            raise ValueError("no negative-sample candidates")
        idx = rng.integers(0, len(candidates), size=count)
        return np.asarray(candidates, dtype=np.int64)[idx]
    if vocab_size < 1:
        raise ValueError("vocab_size must be >= 1")
    return rng.integers(0, vocab_size, size=count, dtype=np.int64)


def _sigmoid(x):
    with np.errstate(over="ignore"):  # saturation to 0/1 is the intended limit
        return 1.0 / (1.0 + np.exp(-x))


def _sgns_forward(model, centers, contexts, negatives):
    u = model.input_matrix[centers]
    v = model.output_matrix[contexts]
    with np.errstate(over="ignore", invalid="ignore"):  # divergence is detected on the loss
        pos = np.einsum("bd,bd->b", u, v)
        loss = np.logaddexp(0.0, -pos).sum()
        if negatives.size:
            nvec = model.output_matrix[negatives]
            neg = np.einsum("bd,bkd->bk", u, nvec)
            loss += np.logaddexp(0.0, neg).sum()
        else:
            nvec = neg = None
    return loss, u, v, pos, nvec, neg


def sgns_batch_loss(model: EmbeddingModel, centers, contexts, negatives) -> float:
    """Mean per-pair SGNS loss over the batch.

    Per pair: BCE of the positive logit <input[center], output[context]>
    against label 1, plus the sum over the k negatives of BCE of
    <input[center], output[negative]> against label 0.
    """
    centers = np.asarray(centers, dtype=np.int64)
    contexts = np.asarray(contexts, dtype=np.int64)
    negatives = np.asarray(negatives, dtype=np.int64).reshape(len(centers), -1)
    loss, *_ = _sgns_forward(model, centers, contexts, negatives)
    return float(loss / len(centers))


def sgns_batch_grads(model: EmbeddingModel, centers, contexts, negatives):
    """Loss plus row-indexed gradients of the mean batch loss.

    Returns ``(loss, input_rows, input_grads, output_rows, output_grads)``;
    rows may repeat and are coalesced by the optimizer step.
    """
    centers = np.asarray(centers, dtype=np.int64)
    contexts = np.asarray(contexts, dtype=np.int64)
    negatives = np.asarray(negatives, dtype=np.int64).reshape(len(centers), -1)
    batch = len(centers)
    loss, u, v, pos, nvec, neg = _sgns_forward(model, centers, contexts, negatives)
    gpos = (_sigmoid(pos) - 1.0) / batch
    grad_u = gpos[:, None] * v
    grad_v = gpos[:, None] * u
    if negatives.size:
        gneg = _sigmoid(neg) / batch
        grad_u = grad_u + np.einsum("bk,bkd->bd", gneg, nvec)
        grad_n = gneg[:, :, None] * u[:, None, :]
        output_rows = np.concatenate([contexts, negatives.ravel()])
        output_grads = np.vstack([grad_v, grad_n.reshape(-1, model.dim)])
    else:
        output_rows = contexts
        output_grads = grad_v
    return float(loss / batch), centers, grad_u, output_rows, output_grads


def _cbow_forward(model, contexts, lengths, targets, negatives):
    mask = contexts >= 0
    safe = np.where(mask, contexts, 0)
    crows = model.input_matrix[safe]
    with np.errstate(over="ignore", invalid="ignore"):  # divergence is detected on the loss
        c = (crows * mask[:, :, None]).sum(axis=1) / lengths[:, None]
        t = model.output_matrix[targets]
        pos = np.einsum("bd,bd->b", c, t)
        loss = np.logaddexp(0.0, -pos).sum()
        if negatives.size:
            nvec = model.output_matrix[negatives]
            neg = np.einsum("bd,bkd->bk", c, nvec)
            loss += np.logaddexp(0.0, neg).sum()
        else:
            nvec = neg = None
    return loss, mask, c, t, pos, nvec, neg


def cbow_batch_loss(model: EmbeddingModel, contexts, lengths, targets, negatives) -> float:
    """Mean per-instance CBOW loss over the batch.

    The context representation is the mean of the window's input rows; the
    positive logit is its dot with the target's output row, and each of the
    k negatives contributes a BCE term against label 0.
    """
    contexts = np.asarray(contexts, dtype=np.int64)
    lengths = np.asarray(lengths, dtype=np.int64)
    targets = np.asarray(targets, dtype=np.int64)
    negatives = np.asarray(negatives, dtype=np.int64).reshape(len(targets), -1)
    if (lengths < 1).any():
        raise ValueError("empty context window")
    loss, *_ = _cbow_forward(model, contexts, lengths, targets, negatives)
    return float(loss / len(targets))


def cbow_batch_grads(model: EmbeddingModel, contexts, lengths, targets, negatives):
    contexts = np.asarray(contexts, dtype=np.int64)
    lengths = np.asarray(lengths, dtype=np.int64)
    targets = np.asarray(targets, dtype=np.int64)
    negatives = np.asarray(negatives, dtype=np.int64).reshape(len(targets), -1)
    if (lengths < 1).any():
        raise ValueError("empty context window")
    batch = len(targets)
    loss, mask, c, t, pos, nvec, neg = _cbow_forward(model, contexts, lengths, targets, negatives)
    gpos = (_sigmoid(pos) - 1.0) / batch
    grad_c = gpos[:, None] * t
    grad_t = gpos[:, None] * c
    if negatives.size:
        gneg = _sigmoid(neg) / batch
        grad_c = grad_c + np.einsum("bk,bkd->bd", gneg, nvec)
        grad_n = gneg[:, :, None] * c[:, None, :]
        output_rows = np.concatenate([targets, negatives.ravel()])
        output_grads = np.vstack([grad_t, grad_n.reshape(-1, model.dim)])
    else:
        output_rows = targets
        output_grads = grad_t
    per_token = grad_c / lengths[:, None]
    grad_ctx = np.broadcast_to(per_token[:, None, :], (batch, contexts.shape[1], model.dim))[mask]
    input_rows = contexts[mask]
    return float(loss / batch), input_rows, grad_ctx, output_rows, output_grads


class RowAdam:
    """Per-row adaptive moment estimation.

    Sparse mode advances moments and bias-correction counts only for rows
    that received gradient, so untouched rows never move.  Dense mode keeps
    one global step and decays every row's moments each call.
    """

    def __init__(self, shape, learning_rate, beta1=_ADAM_BETA1, beta2=_ADAM_BETA2,
                 eps=_ADAM_EPS, sparse=True):
        self.lr = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.sparse = sparse
        self.m = np.zeros(shape)
        self.v = np.zeros(shape)
        self.row_steps = np.zeros(shape[0], dtype=np.int64)
        self.step = 0

    def update(self, matrix, rows, grads):
        """One optimizer step; ``rows`` must be unique (coalesce first)."""
        if self.sparse:
            if len(rows) == 0:
                return
            self.row_steps[rows] += 1
            t = self.row_steps[rows].astype(np.float64)[:, None]
            self.m[rows] = self.beta1 * self.m[rows] + (1 - self.beta1) * grads
            self.v[rows] = self.beta2 * self.v[rows] + (1 - self.beta2) * grads * grads
            m_hat = self.m[rows] / (1 - self.beta1**t)
            v_hat = self.v[rows] / (1 - self.beta2**t)
            matrix[rows] -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)
        else:
            self.step += 1
            dense = np.zeros_like(matrix)
            dense[rows] = grads
            self.m = self.beta1 * self.m + (1 - self.beta1) * dense
            self.v = self.beta2 * self.v + (1 - self.beta2) * dense * dense
            m_hat = self.m / (1 - self.beta1**self.step)
            v_hat = self.v / (1 - self.beta2**self.step)
            matrix -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def _coalesce(rows, grads):
    rows = np.asarray(rows, dtype=np.int64)
    grads = np.asarray(grads)
    uniq, inverse = np.unique(rows, return_inverse=True)
    if len(uniq) == len(rows):
        order = np.argsort(rows, kind="stable")
        return rows[order], grads[order]
    summed = np.zeros((len(uniq), grads.shape[1]))
    np.add.at(summed, inverse, grads)
    return uniq, summed


def apply_sparse_update(model: EmbeddingModel, input_rows, input_grads, output_rows, output_grads,
                        input_opt: RowAdam, output_opt: RowAdam):
    """Coalesce duplicate rows and apply one optimizer step to each matrix.

    Rows outside the batch stay bit-identical.  Returns the unique
    (input_rows, output_rows) that moved.
    """
    uin = np.empty(0, dtype=np.int64)
    uout = np.empty(0, dtype=np.int64)
    if len(input_rows):
        uin, gin = _coalesce(input_rows, input_grads)
        input_opt.update(model.input_matrix, uin, gin)
    if len(output_rows):
        uout, gout = _coalesce(output_rows, output_grads)
        output_opt.update(model.output_matrix, uout, gout)
    return uin, uout


def estimate_per_sample_bytes(model_kind: str, d: int, negative_samples: int, window_size: int) -> int:
    """Raw per-sample footprint: the float64 embedding rows one sample touches."""
    if model_kind == SKIPGRAM:
        rows = 2 + negative_samples
    else:
        rows = 2 * window_size + 1 + window_size
    return rows * d * 8 + 16


def suggest_batch_size(per_sample_bytes: int, memory_budget_bytes: int, corpus_pair_count: int) -> int:
    """min(memory rule, corpus rule), clamped to at least 1.

    Memory rule: divide the budget by four times the per-sample footprint.
    Corpus rule: one twentieth of the corpus, rounded up.
    """
    if per_sample_bytes <= 0:
        raise ValueError("per_sample_bytes must be positive")
    by_memory = int(memory_budget_bytes) // (4 * int(per_sample_bytes))
    by_corpus = -(-int(corpus_pair_count) // 20)
    return max(1, min(by_memory, by_corpus))


def resolve_memory_budget(config: TrainConfig) -> int:
    env = os.environ.get(MEMORY_BUDGET_ENV)
    if env:
        return int(env)
    if config.memory_budget_bytes is not None:
        return int(config.memory_budget_bytes)
    return DEFAULT_MEMORY_BUDGET


class _BatchData:
    """Item-indexed access to pairs (SGNS) or instances (CBOW)."""

    def __init__(self, kind, pairs=None, ctx=None, lengths=None, targets=None):
        self.kind = kind
        self.pairs = pairs
        self.ctx = ctx
        self.lengths = lengths
        self.targets = targets

    def __len__(self):
        return len(self.pairs) if self.kind == SKIPGRAM else len(self.targets)

    def negatives_per_item(self, config: TrainConfig) -> int:
        # CBOW draws window_size noise samples per instance; SGNS uses
        # the explicit negative_samples knob.
        return config.negative_samples if self.kind == SKIPGRAM else config.window_size

    def batch_grads(self, model, index, negatives):
        if self.kind == SKIPGRAM:
            sel = self.pairs[index]
            return sgns_batch_grads(model, sel[:, 0], sel[:, 1], negatives)
        return cbow_batch_grads(model, self.ctx[index], self.lengths[index], self.targets[index], negatives)


def _clamped_batch_size(batch_size, per_sample, budget, cap, events):
    while batch_size > 1 and batch_size * per_sample > cap * budget:
        batch_size //= 2
        events("batch_halved", batch_size=batch_size)
    return batch_size


def _draw_negatives(data, config, rng, candidates, n_rows, vocab_size):
    k = data.negatives_per_item(config)
    if k == 0:
        return np.empty((n_rows, 0), dtype=np.int64)
    return sample_negatives(n_rows * k, vocab_size, rng, candidates).reshape(n_rows, k)


def train(corpus, vocab_size: int, config: TrainConfig, rng_seed: int, on_event=None):
    """Run the configured model over the corpus.

    Returns ``(EmbeddingModel, per-epoch mean losses)``.  The input matrix
    is the embedding table.  Negative samples are drawn fresh per batch;
    the memory monitor halves the batch size instead of ever aborting.
    """
    events = on_event or (lambda kind, **info: None)
    tokens, offsets = _flatten_corpus(corpus)
    flat = _Corpus(tokens, offsets)
    if config.model == SKIPGRAM:
        pairs, freq = generate_pairs(flat, config.window_size, config.min_count, vocab_size)
        data = _BatchData(SKIPGRAM, pairs=pairs)
    else:
        ctx, lengths, targets, freq = generate_cbow_instances(flat, config.window_size,
                                                              config.min_count, vocab_size)
        data = _BatchData(CBOW, ctx=ctx, lengths=lengths, targets=targets)

    keep = freq >= config.min_count
    candidates = np.flatnonzero(keep)
    model = init_embeddings(vocab_size, config.vector_size, rng_seed)
    model.trained_mask = keep.copy()
    model.touched_input = np.zeros(vocab_size, dtype=bool)
    model.touched_output = np.zeros(vocab_size, dtype=bool)

    per_sample = estimate_per_sample_bytes(config.model, config.vector_size,
                                           config.negative_samples, config.window_size)
    budget = resolve_memory_budget(config)
    batch_size = config.batch_size if config.batch_size is not None else suggest_batch_size(
        per_sample, budget, len(data))
    batch_size = _clamped_batch_size(batch_size, per_sample, budget, config.memory_cap_fraction, events)

    if config.workers == 1:
        losses = _train_single(model, data, config, rng_seed, candidates, batch_size,
                               per_sample, budget, events)
    else:
        losses = _train_multi(model, data, config, rng_seed, candidates, batch_size)
    return model, losses


def _train_single(model, data, config, seed, candidates, batch_size, per_sample, budget, events):
    shuffle_rng = np.random.default_rng(np.random.SeedSequence([int(seed), 1, 1]))
    neg_rng = np.random.default_rng(np.random.SeedSequence([int(seed), 1, 2, 0]))
    opt_in = RowAdam(model.input_matrix.shape, config.learning_rate, sparse=config.use_sparse)
    opt_out = RowAdam(model.output_matrix.shape, config.learning_rate, sparse=config.use_sparse)
    n = len(data)
    losses = []
    for epoch in range(config.epochs):
        order = shuffle_rng.permutation(n)
        loss_sum = 0.0
        count = 0
        lo = 0
        batch_index = 0
        while lo < n:
            batch_size = _clamped_batch_size(batch_size, per_sample, budget,
                                             config.memory_cap_fraction, events)
            index = order[lo : lo + batch_size]
            negatives = _draw_negatives(data, config, neg_rng, candidates, len(index), model.vocab_size)
            loss, in_rows, in_grads, out_rows, out_grads = data.batch_grads(model, index, negatives)
            if not math.isfinite(loss):
                raise TrainingDiverged(epoch, batch_index)
            uin, uout = apply_sparse_update(model, in_rows, in_grads, out_rows, out_grads, opt_in, opt_out)
            model.touched_input[uin] = True
            model.touched_output[uout] = True
            loss_sum += loss * len(index)
            count += len(index)
            lo += len(index)
            batch_index += 1
        losses.append(loss_sum / count)
    return losses


class _Replica:
    """Worker-local model copy plus lazily captured per-round base rows."""

    def __init__(self, shared_in, shared_out, config):
        self.inp = shared_in.copy()
        self.out = shared_out.copy()
        self.opt_in = RowAdam(shared_in.shape, config.learning_rate, sparse=config.use_sparse)
        self.opt_out = RowAdam(shared_out.shape, config.learning_rate, sparse=config.use_sparse)
        self.rows_in: list[np.ndarray] = []
        self.base_in: list[np.ndarray] = []
        self.rows_out: list[np.ndarray] = []
        self.base_out: list[np.ndarray] = []
        self.seen_in = np.zeros(shared_in.shape[0], dtype=bool)
        self.seen_out = np.zeros(shared_out.shape[0], dtype=bool)

    def note(self, rows, matrix, store_rows, store_base, seen):
        new = rows[~seen[rows]]
        if len(new):
            store_rows.append(new)
            store_base.append(matrix[new].copy())
            seen[new] = True

    def apply(self, in_rows, in_grads, out_rows, out_grads):
        uin, gin = _coalesce(in_rows, in_grads)
        uout, gout = _coalesce(out_rows, out_grads)
        self.note(uin, self.inp, self.rows_in, self.base_in, self.seen_in)
        self.note(uout, self.out, self.rows_out, self.base_out, self.seen_out)
        self.opt_in.update(self.inp, uin, gin)
        self.opt_out.update(self.out, uout, gout)

    def delta(self):
        def pack(rows_list, base_list, matrix):
            if not rows_list:
                return np.empty(0, dtype=np.int64), np.empty((0, matrix.shape[1]))
            rows = np.concatenate(rows_list)
            base = np.vstack(base_list)
            return rows, matrix[rows] - base

        return pack(self.rows_in, self.base_in, self.inp), pack(self.rows_out, self.base_out, self.out)

    def reset_round(self):
        self.rows_in.clear()
        self.base_in.clear()
        self.rows_out.clear()
        self.base_out.clear()
        self.seen_in[:] = False
        self.seen_out[:] = False


def _probe_sync_batches(model, data, config, candidates, batch_size):
    """Estimate how many batches fit in sync_interval_ms by timing one batch
    on throwaway matrix copies (non-reproducible mode only)."""
    probe = EmbeddingModel(model.input_matrix.copy(), model.output_matrix.copy(),
                           model.dim, model.trained_mask)
    rng = np.random.default_rng(np.random.SeedSequence([99]))
    index = np.arange(min(batch_size, len(data)))
    negatives = _draw_negatives(data, config, rng, candidates, len(index), model.vocab_size)
    start = time.perf_counter()
    data.batch_grads(probe, index, negatives)
    elapsed_ms = max((time.perf_counter() - start) * 1000.0, 1e-3)
    return max(1, min(int(round(config.sync_interval_ms / elapsed_ms)), 1 << 14))


def _merge_bundles(bundles, matrix, touched, side):
    """Fold worker deltas into the shared matrix.

    Rows touched by several workers receive the *average* of their deltas
    (local-update exchange); summing optimizer trajectories would multiply
    the effective step size on rows shared across shards.
    """
    rows_list = [b[side][0] for b in bundles if len(b[side][0])]
    if not rows_list:
        return
    rows = np.concatenate(rows_list)
    deltas = np.vstack([b[side][1] for b in bundles if len(b[side][0])])
    urows, inverse = np.unique(rows, return_inverse=True)
    summed = np.zeros((len(urows), matrix.shape[1]))
    np.add.at(summed, inverse, deltas)
    counts = np.bincount(inverse).astype(np.float64)
    matrix[urows] += summed / counts[:, None]
    touched[urows] = True


def _train_multi(model, data, config, seed, candidates, batch_size):
    workers = config.workers
    n = len(data)
    shuffle_rng = np.random.default_rng(np.random.SeedSequence([int(seed), 1, 1]))
    if config.reproducible:
        sync_batches = REPRODUCIBLE_SYNC_BATCHES
    else:
        sync_batches = _probe_sync_batches(model, data, config, candidates, batch_size)

    shared_in = model.input_matrix
    shared_out = model.output_matrix
    barrier = threading.Barrier(workers)
    errors: list[BaseException] = []
    epoch_order: dict[int, np.ndarray] = {}
    bundles: list = [None] * workers
    loss_sums = np.zeros(workers)
    loss_counts = np.zeros(workers, dtype=np.int64)
    losses: list[float] = []

    span = -(-n // workers)
    batches_per_worker = -(-span // batch_size)
    rounds = max(1, -(-batches_per_worker // sync_batches))

    def worker(widx):
        replica = _Replica(shared_in, shared_out, config)
        neg_rng = np.random.default_rng(np.random.SeedSequence([int(seed), 1, 2, int(widx)]))
        try:
            for epoch in range(config.epochs):
                if widx == 0:
                    epoch_order[epoch] = shuffle_rng.permutation(n)
                barrier.wait()
                my = epoch_order[epoch][widx * span : (widx + 1) * span]
                my_batches = [my[lo : lo + batch_size] for lo in range(0, len(my), batch_size)]
                loss_sum = 0.0
                count = 0
                done = 0
                for _ in range(rounds):
                    for _ in range(sync_batches):
                        if done >= len(my_batches):
                            break
                        index = my_batches[done]
                        negatives = _draw_negatives(data, config, neg_rng, candidates,
                                                    len(index), shared_in.shape[0])
                        view = EmbeddingModel(replica.inp, replica.out, model.dim, model.trained_mask)
                        loss, in_rows, in_grads, out_rows, out_grads = data.batch_grads(view, index, negatives)
                        if not math.isfinite(loss):
                            raise TrainingDiverged(epoch, done)
                        replica.apply(in_rows, in_grads, out_rows, out_grads)
                        loss_sum += loss * len(index)
                        count += len(index)
                        done += 1
                    bundles[widx] = replica.delta()
                    barrier.wait()
                    if widx == 0:  # single merger, fixed worker order
                        _merge_bundles(bundles, shared_in, model.touched_input, 0)
                        _merge_bundles(bundles, shared_out, model.touched_output, 1)
                    barrier.wait()
                    union_in = np.unique(np.concatenate([bundles[w][0][0] for w in range(workers)]))
                    union_out = np.unique(np.concatenate([bundles[w][1][0] for w in range(workers)]))
                    if len(union_in):
                        replica.inp[union_in] = shared_in[union_in]
                    if len(union_out):
                        replica.out[union_out] = shared_out[union_out]
                    replica.reset_round()
                    barrier.wait()  # bundles stay readable until everyone re-synced
                loss_sums[widx] = loss_sum
                loss_counts[widx] = count
                barrier.wait()
                if widx == 0:
                    total = loss_counts.sum()
                    losses.append(float(loss_sums.sum() / total) if total else float("nan"))
        except threading.BrokenBarrierError:
            pass
        except BaseException as exc:  # noqa: BLE001 - surfaced to the caller below
            errors.append(exc)
            barrier.abort()

    threads = [threading.Thread(target=worker, args=(w,), name=f"w2v-worker-{w}") for w in range(workers)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    if errors:
        raise errors[0]
    return losses
