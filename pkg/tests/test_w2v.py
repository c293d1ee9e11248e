import math

import numpy as np
import pytest

from conftest import graph_from_rows, two_clique_rows
from oracles import (
    central_difference_grads,
    scalar_adam_steps,
    scalar_cbow_loss,
    scalar_sgns_loss,
)
from walkvec import (
    EmbeddingModel,
    RowAdam,
    TrainConfig,
    TrainingDiverged,
    apply_sparse_update,
    cbow_batch_loss,
    generate_pairs,
    init_embeddings,
    random_walks,
    sample_negatives,
    sgns_batch_loss,
    suggest_batch_size,
    train,
)
from walkvec.w2v import (
    cbow_batch_grads,
    estimate_per_sample_bytes,
    generate_cbow_instances,
    sgns_batch_grads,
)

LN2 = math.log(2.0)


def pair_multiset(pairs):
    return sorted(map(tuple, pairs.tolist()))


class TestGeneratePairs:
    def test_exhaustive_windowing(self):
        pairs, _ = generate_pairs([[0, 1, 2]], window_size=2, min_count=0)
        assert pair_multiset(pairs) == sorted(
            [(0, 1), (0, 2), (1, 0), (1, 2), (2, 1), (2, 0)]
        )

    def test_length_one_walk_contributes_nothing(self):
        pairs, _ = generate_pairs([[5], [0, 1]], window_size=4, min_count=0)
        assert pair_multiset(pairs) == [(0, 1), (1, 0)]

    def test_only_length_one_walks_is_empty(self):
        with pytest.raises(ValueError, match="empty training set"):
            generate_pairs([[5]], window_size=3, min_count=0)

    def test_windows_do_not_cross_walks(self):
        pairs, _ = generate_pairs([[0, 1], [2, 3]], window_size=4, min_count=0)
        assert (0, 2) not in pair_multiset(pairs)
        assert (1, 2) not in pair_multiset(pairs)

    def test_min_count_removes_rare_tokens(self):
        # Oracle: brute-force recount on a 10-walk fixture where token 9
        # appears three times and min_count is 4.
        walks = [[0, 1, 2]] * 7 + [[0, 9, 2], [9, 1, 2], [0, 1, 9]]
        flat = [t for w in walks for t in w]
        assert flat.count(9) == 3
        pairs, freq = generate_pairs(walks, window_size=2, min_count=4)
        assert freq[9] == 3
        assert all(9 not in row for row in pairs.tolist())

    def test_windows_tighten_after_filtering(self):
        # removing the middle token brings the outer tokens adjacent
        walks = [[0, 9, 1]] * 1 + [[0, 1]] * 9
        pairs, _ = generate_pairs(walks, window_size=1, min_count=2)
        assert (0, 1) in pair_multiset(pairs)

    def test_frequency_table_counts_raw_corpus(self):
        _, freq = generate_pairs([[0, 0, 1]], window_size=1, min_count=0)
        assert freq[0] == 2 and freq[1] == 1

    def test_all_tokens_filtered_errors(self):
        with pytest.raises(ValueError, match="empty training set"):
            generate_pairs([[0, 1, 2]], window_size=2, min_count=10)


class TestCbowInstances:
    def test_window_contents(self):
        ctx, lengths, targets, _ = generate_cbow_instances([[0, 1, 2]], window_size=2, min_count=0)
        assert targets.tolist() == [0, 1, 2]
        middle = ctx[1]
        assert sorted(t for t in middle.tolist() if t >= 0) == [0, 2]
        assert lengths.tolist() == [2, 2, 2]

    def test_singleton_walks_dropped(self):
        ctx, lengths, targets, _ = generate_cbow_instances([[7], [0, 1]], window_size=2, min_count=0)
        assert 7 not in targets.tolist()
        assert len(targets) == 2


class TestInitEmbeddings:
    def test_interval_bound_d100(self):
        model = init_embeddings(50, 100, rng_seed=0)
        for matrix in (model.input_matrix, model.output_matrix):
            assert matrix.shape == (50, 100)
            assert np.abs(matrix).max() < 0.01

    def test_interval_bound_d1(self):
        model = init_embeddings(10, 1, rng_seed=0)
        assert np.abs(model.input_matrix).max() < 1.0

    def test_deterministic(self):
        a = init_embeddings(20, 8, rng_seed=42)
        b = init_embeddings(20, 8, rng_seed=42)
        assert np.array_equal(a.input_matrix, b.input_matrix)
        assert np.array_equal(a.output_matrix, b.output_matrix)

    def test_matrices_differ_from_each_other(self):
        model = init_embeddings(20, 8, rng_seed=42)
        assert not np.array_equal(model.input_matrix, model.output_matrix)


class TestSampleNegatives:
    def test_single_token_vocab(self):
        rng = np.random.default_rng(0)
        assert sample_negatives(5, 1, rng).tolist() == [0, 0, 0, 0, 0]

    def test_count_zero(self):
        rng = np.random.default_rng(0)
        assert len(sample_negatives(0, 10, rng)) == 0

    def test_uniformity_chi_square(self):
        # Oracle: each of 100 tokens should land within 5 sigma of 10^4
        # over 10^6 draws; sigma = sqrt(n p (1-p)) ~ 99.5.
        rng = np.random.default_rng(1)
        draws = sample_negatives(10**6, 100, rng)
        counts = np.bincount(draws, minlength=100)
        assert np.all(np.abs(counts - 10_000) <= 5 * math.sqrt(10**6 * 0.01 * 0.99))

    def test_candidates_restrict_support(self):
        rng = np.random.default_rng(2)
        candidates = np.array([3, 5, 9])
        draws = sample_negatives(1000, 100, rng, candidates)
        assert set(draws.tolist()) <= {3, 5, 9}


def zero_model(vocab, d):
    return EmbeddingModel(np.zeros((vocab, d)), np.zeros((vocab, d)), d, np.ones(vocab, bool))


class TestSgnsLoss:
    def test_zero_state_is_six_ln2(self):
        model = zero_model(10, 4)
        negatives = np.zeros((3, 5), dtype=int)
        loss = sgns_batch_loss(model, [0, 1, 2], [3, 4, 5], negatives)
        assert loss == pytest.approx(6 * LN2, abs=1e-9)

    def test_closed_form_single_pair(self):
        model = zero_model(3, 2)
        model.input_matrix[0] = [1.0, 0.0]
        model.output_matrix[1] = [1.0, 0.0]
        model.output_matrix[2] = [-1.0, 0.0]
        loss = sgns_batch_loss(model, [0], [1], [[2]])
        expected = math.log1p(math.exp(-1)) + math.log1p(math.exp(-1))
        assert loss == pytest.approx(expected, rel=1e-12)
        assert loss == pytest.approx(0.626524, abs=1e-6)

    def test_k_zero_degenerate(self):
        model = zero_model(4, 3)
        loss = sgns_batch_loss(model, [0, 1], [2, 3], np.empty((2, 0), dtype=int))
        assert loss == pytest.approx(LN2, abs=1e-12)

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_scalar_oracle(self, seed):
        rng = np.random.default_rng(seed)
        vocab, d = 8, int(rng.integers(2, 5))
        batch = int(rng.integers(1, 8))
        k = int(rng.integers(1, 4))
        model = zero_model(vocab, d)
        model.input_matrix[:] = rng.normal(0, 0.8, size=(vocab, d))
        model.output_matrix[:] = rng.normal(0, 0.8, size=(vocab, d))
        centers = rng.integers(0, vocab, batch)
        contexts = rng.integers(0, vocab, batch)
        negatives = rng.integers(0, vocab, (batch, k))
        got = sgns_batch_loss(model, centers, contexts, negatives)
        expected = scalar_sgns_loss(model.input_matrix.tolist(), model.output_matrix.tolist(),
                                    centers.tolist(), contexts.tolist(), negatives.tolist())
        assert got == pytest.approx(expected, rel=1e-9)


class TestCbowLoss:
    def test_zero_state_window_five(self):
        model = zero_model(12, 4)
        ctx = np.tile(np.array([0, 1, 2, -1, -1, -1, -1, -1, -1, -1]), (2, 1))
        lengths = np.array([3, 3])
        negatives = np.zeros((2, 5), dtype=int)
        loss = cbow_batch_loss(model, ctx, lengths, [4, 5], negatives)
        assert loss == pytest.approx(6 * LN2, abs=1e-9)

    def test_closed_form_single_instance(self):
        model = zero_model(3, 2)
        model.input_matrix[0] = [1.0, 0.0]
        model.output_matrix[1] = [1.0, 0.0]
        loss = cbow_batch_loss(model, [[0]], [1], [1], [[2]])
        expected = math.log1p(math.exp(-1)) + LN2
        assert loss == pytest.approx(expected, rel=1e-12)
        assert loss == pytest.approx(1.006409, abs=1e-6)

    def test_batch_mean_invariance(self):
        rng = np.random.default_rng(4)
        model = zero_model(6, 3)
        model.input_matrix[:] = rng.normal(size=(6, 3))
        model.output_matrix[:] = rng.normal(size=(6, 3))
        single = cbow_batch_loss(model, [[0, 1]], [2], [3], [[4, 5]])
        double = cbow_batch_loss(model, [[0, 1], [0, 1]], [2, 2], [3, 3], [[4, 5], [4, 5]])
        assert double == pytest.approx(single, rel=1e-12)

    def test_empty_context_errors(self):
        model = zero_model(4, 2)
        with pytest.raises(ValueError):
            cbow_batch_loss(model, [[-1, -1]], [0], [1], [[2]])

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_scalar_oracle(self, seed):
        rng = np.random.default_rng(100 + seed)
        vocab, d = 9, int(rng.integers(2, 5))
        batch = int(rng.integers(1, 6))
        k = int(rng.integers(1, 4))
        window = int(rng.integers(1, 4))
        model = zero_model(vocab, d)
        model.input_matrix[:] = rng.normal(0, 0.7, size=(vocab, d))
        model.output_matrix[:] = rng.normal(0, 0.7, size=(vocab, d))
        ctx_lists = [rng.integers(0, vocab, int(rng.integers(1, 2 * window + 1))).tolist()
                     for _ in range(batch)]
        width = max(len(c) for c in ctx_lists)
        ctx = np.full((batch, width), -1, dtype=int)
        for i, c in enumerate(ctx_lists):
            ctx[i, : len(c)] = c
        lengths = np.array([len(c) for c in ctx_lists])
        targets = rng.integers(0, vocab, batch)
        negatives = rng.integers(0, vocab, (batch, k))
        got = cbow_batch_loss(model, ctx, lengths, targets, negatives)
        expected = scalar_cbow_loss(model.input_matrix.tolist(), model.output_matrix.tolist(),
                                    ctx_lists, targets.tolist(), negatives.tolist())
        assert got == pytest.approx(expected, rel=1e-9)


def rel_err(a, b):
    denom = np.maximum(np.abs(a) + np.abs(b), 1e-3)
    return np.max(np.abs(a - b) / denom)


class TestGradients:
    @pytest.mark.parametrize("seed", range(6))
    def test_sgns_matches_central_differences(self, seed):
        rng = np.random.default_rng(seed)
        vocab, d, batch, k = 6, 3, 4, 2
        model = zero_model(vocab, d)
        model.input_matrix[:] = rng.normal(0, 0.6, size=(vocab, d))
        model.output_matrix[:] = rng.normal(0, 0.6, size=(vocab, d))
        centers = rng.integers(0, vocab, batch)
        contexts = rng.integers(0, vocab, batch)
        negatives = rng.integers(0, vocab, (batch, k))

        _, in_rows, in_grads, out_rows, out_grads = sgns_batch_grads(model, centers, contexts, negatives)
        analytic_in = np.zeros_like(model.input_matrix)
        np.add.at(analytic_in, in_rows, in_grads)
        analytic_out = np.zeros_like(model.output_matrix)
        np.add.at(analytic_out, out_rows, out_grads)

        numeric_in = central_difference_grads(
            lambda: sgns_batch_loss(model, centers, contexts, negatives), model.input_matrix)
        numeric_out = central_difference_grads(
            lambda: sgns_batch_loss(model, centers, contexts, negatives), model.output_matrix)
        assert rel_err(analytic_in, numeric_in) < 1e-4
        assert rel_err(analytic_out, numeric_out) < 1e-4

    @pytest.mark.parametrize("seed", range(6))
    def test_cbow_matches_central_differences(self, seed):
        rng = np.random.default_rng(50 + seed)
        vocab, d, batch, k = 6, 3, 3, 2
        model = zero_model(vocab, d)
        model.input_matrix[:] = rng.normal(0, 0.6, size=(vocab, d))
        model.output_matrix[:] = rng.normal(0, 0.6, size=(vocab, d))
        ctx = rng.integers(0, vocab, (batch, 3))
        ctx[0, 2] = -1
        lengths = (ctx >= 0).sum(axis=1)
        targets = rng.integers(0, vocab, batch)
        negatives = rng.integers(0, vocab, (batch, k))

        _, in_rows, in_grads, out_rows, out_grads = cbow_batch_grads(model, ctx, lengths, targets, negatives)
        analytic_in = np.zeros_like(model.input_matrix)
        np.add.at(analytic_in, in_rows, in_grads)
        analytic_out = np.zeros_like(model.output_matrix)
        np.add.at(analytic_out, out_rows, out_grads)

        numeric_in = central_difference_grads(
            lambda: cbow_batch_loss(model, ctx, lengths, targets, negatives), model.input_matrix)
        numeric_out = central_difference_grads(
            lambda: cbow_batch_loss(model, ctx, lengths, targets, negatives), model.output_matrix)
        assert rel_err(analytic_in, numeric_in) < 1e-4
        assert rel_err(analytic_out, numeric_out) < 1e-4


class TestRowAdam:
    def test_untouched_rows_bit_identical(self):
        rng = np.random.default_rng(0)
        matrix = rng.normal(size=(10, 4))
        before = matrix.copy()
        opt = RowAdam(matrix.shape, learning_rate=0.05)
        opt.update(matrix, np.array([3, 7]), rng.normal(size=(2, 4)))
        untouched = [i for i in range(10) if i not in (3, 7)]
        assert np.array_equal(matrix[untouched], before[untouched])
        assert not np.array_equal(matrix[[3, 7]], before[[3, 7]])

    def test_zero_gradient_moves_nothing_initially(self):
        matrix = np.ones((4, 2))
        opt = RowAdam(matrix.shape, learning_rate=0.1)
        opt.update(matrix, np.array([1]), np.zeros((1, 2)))
        assert np.array_equal(matrix, np.ones((4, 2)))

    def test_two_steps_match_scalar_recurrence(self):
        # Oracle: scalar recomputation of the Adam recurrence, two steps.
        matrix = np.array([[0.5]])
        opt = RowAdam(matrix.shape, learning_rate=0.02)
        g = 0.3
        opt.update(matrix, np.array([0]), np.array([[g]]))
        opt.update(matrix, np.array([0]), np.array([[g]]))
        expected = scalar_adam_steps(0.5, [g, g], lr=0.02)
        assert matrix[0, 0] == pytest.approx(expected, rel=1e-12)

    def test_sparse_steps_are_per_row(self):
        matrix = np.zeros((3, 1))
        opt = RowAdam(matrix.shape, learning_rate=0.1)
        for _ in range(3):
            opt.update(matrix, np.array([0]), np.array([[1.0]]))
        opt.update(matrix, np.array([1]), np.array([[1.0]]))
        # row 1 saw step t=1, so its bias-corrected first step equals row 0's first step
        expected_first = scalar_adam_steps(0.0, [1.0], lr=0.1)
        assert matrix[1, 0] == pytest.approx(expected_first, rel=1e-12)

    def test_dense_mode_decays_all_moments(self):
        matrix = np.zeros((2, 1))
        opt = RowAdam(matrix.shape, learning_rate=0.1, sparse=False)
        opt.update(matrix, np.array([0]), np.array([[1.0]]))
        opt.update(matrix, np.array([1]), np.array([[1.0]]))
        # row 0's moments decayed during step 2 and keep moving it
        assert matrix[0, 0] != pytest.approx(scalar_adam_steps(0.0, [1.0], lr=0.1), rel=1e-12)

    def test_apply_sparse_update_coalesces_duplicates(self):
        model = zero_model(5, 2)
        opt_in = RowAdam((5, 2), 0.1)
        opt_out = RowAdam((5, 2), 0.1)
        rows = np.array([2, 2])
        grads = np.array([[1.0, 0.0], [1.0, 0.0]])
        apply_sparse_update(model, rows, grads, np.empty(0, int), np.empty((0, 2)), opt_in, opt_out)
        reference = zero_model(5, 2)
        ref_opt = RowAdam((5, 2), 0.1)
        ref_opt.update(reference.input_matrix, np.array([2]), np.array([[2.0, 0.0]]))
        assert np.array_equal(model.input_matrix, reference.input_matrix)


class TestSuggestBatchSize:
    def test_memory_rule(self):
        assert suggest_batch_size(1 << 20, 4096 << 20, 10**9) == 1024

    def test_corpus_rule(self):
        assert suggest_batch_size(100, 10**15, 10**6) == 50_000

    def test_floor_clamp(self):
        assert suggest_batch_size(1, 3, 100) == 1


def chain_corpus(n_walks=40, seed=0):
    vocab, g = graph_from_rows([("a", "p", "b"), ("b", "q", "c"), ("c", "r", "a")])
    corpus = random_walks(g, vocab.entity_tokens(), walk_depth=4, walk_number=n_walks, rng_seed=seed)
    return vocab, corpus


class TestTrain:
    def test_empty_training_set_errors(self):
        vocab, corpus = chain_corpus()
        config = TrainConfig(min_count=10**6, vector_size=4, epochs=1)
        with pytest.raises(ValueError, match="empty training set"):
            train(corpus, len(vocab), config, 0)

    def test_zero_learning_rate_keeps_initialization(self):
        vocab, corpus = chain_corpus()
        config = TrainConfig(min_count=0, vector_size=6, epochs=1, learning_rate=0.0,
                             window_size=2, negative_samples=2)
        model, _ = train(corpus, len(vocab), config, 7)
        fresh = init_embeddings(len(vocab), 6, 7)
        assert np.array_equal(model.input_matrix, fresh.input_matrix)
        assert np.array_equal(model.output_matrix, fresh.output_matrix)

    def test_divergence_raises(self):
        vocab, corpus = chain_corpus()
        config = TrainConfig(min_count=0, vector_size=4, epochs=5, learning_rate=1e200,
                             window_size=2, negative_samples=2)
        with pytest.raises(TrainingDiverged) as err:
            train(corpus, len(vocab), config, 0)
        assert "divergence at epoch" in str(err.value)

    def test_loss_trace_length_and_trend(self):
        vocab, corpus = chain_corpus(n_walks=60)
        config = TrainConfig(min_count=0, vector_size=16, epochs=10, learning_rate=0.01,
                             window_size=3, negative_samples=3)
        model, losses = train(corpus, len(vocab), config, 42)
        assert len(losses) == 10
        assert losses[9] < losses[0]

    def test_reproducible_same_seed(self):
        vocab, corpus = chain_corpus()
        config = TrainConfig(min_count=0, vector_size=8, epochs=2, window_size=2, negative_samples=2)
        a, la = train(corpus, len(vocab), config, 42)
        b, lb = train(corpus, len(vocab), config, 42)
        assert np.array_equal(a.input_matrix, b.input_matrix)
        assert la == lb

    def test_different_seed_differs(self):
        vocab, corpus = chain_corpus()
        config = TrainConfig(min_count=0, vector_size=8, epochs=2, window_size=2, negative_samples=2)
        a, _ = train(corpus, len(vocab), config, 42)
        b, _ = train(corpus, len(vocab), config, 43)
        assert not np.array_equal(a.input_matrix, b.input_matrix)

    def test_sparse_isolation_below_min_count(self):
        # tokens 3 and 4 appear twice, below min_count=5: rows must stay put
        corpus = [[0, 1, 2]] * 10 + [[0, 3, 4]] * 2
        config = TrainConfig(min_count=5, vector_size=8, epochs=3, window_size=2, negative_samples=2)
        model, _ = train(corpus, 5, config, 5)
        fresh = init_embeddings(5, 8, 5)
        assert model.trained_mask.tolist() == [True, True, True, False, False]
        for row in (3, 4):
            assert np.array_equal(model.input_matrix[row], fresh.input_matrix[row])
            assert np.array_equal(model.output_matrix[row], fresh.output_matrix[row])

    def test_untouched_rows_bit_identical_to_init(self):
        vocab, corpus = chain_corpus()
        config = TrainConfig(min_count=0, vector_size=8, epochs=2, window_size=2, negative_samples=2)
        model, _ = train(corpus, len(vocab), config, 11)
        fresh = init_embeddings(len(vocab), 8, 11)
        not_in = ~model.touched_input
        not_out = ~model.touched_output
        assert np.array_equal(model.input_matrix[not_in], fresh.input_matrix[not_in])
        assert np.array_equal(model.output_matrix[not_out], fresh.output_matrix[not_out])

    def test_cbow_trains(self):
        vocab, corpus = chain_corpus(n_walks=50)
        config = TrainConfig(model="cbow", min_count=0, vector_size=8, epochs=4,
                             window_size=2, learning_rate=0.02)
        model, losses = train(corpus, len(vocab), config, 3)
        assert len(losses) == 4
        assert losses[-1] < losses[0]

    def test_memory_monitor_halves_batch_and_completes(self):
        vocab, corpus = chain_corpus()
        events = []
        config = TrainConfig(min_count=0, vector_size=8, epochs=1, window_size=2,
                             negative_samples=2, batch_size=4096,
                             memory_budget_bytes=estimate_per_sample_bytes("skipgram", 8, 2, 2) * 64)
        model, losses = train(corpus, len(vocab), config, 1,
                              on_event=lambda kind, **info: events.append((kind, info)))
        assert any(kind == "batch_halved" for kind, _ in events)
        assert len(losses) == 1

    def test_two_cluster_separation(self):
        vocab, g = graph_from_rows(two_clique_rows())
        corpus = random_walks(g, vocab.entity_tokens(), walk_depth=4, walk_number=25, rng_seed=42)
        config = TrainConfig(min_count=1, vector_size=16, epochs=10, learning_rate=0.01,
                             window_size=5, negative_samples=5)
        model, losses = train(corpus, len(vocab), config, 42)
        vectors = model.input_matrix
        x = [vocab.token_of[f"x{i}"] for i in range(5)]
        y = [vocab.token_of[f"y{i}"] for i in range(5)]

        def cosine(u, v):
            return float(np.dot(vectors[u], vectors[v])
                         / (np.linalg.norm(vectors[u]) * np.linalg.norm(vectors[v])))

        intra = [cosine(u, v) for grp in (x, y) for u in grp for v in grp if u < v]
        inter = [cosine(u, v) for u in x for v in y]
        assert np.mean(intra) > np.mean(inter)
        assert losses[-1] < losses[0]


class TestMultiWorker:
    def test_reproducible_two_workers_identical_across_runs(self):
        vocab, corpus = chain_corpus(n_walks=80)
        config = TrainConfig(min_count=0, vector_size=8, epochs=2, window_size=2,
                             negative_samples=2, workers=2, reproducible=True, batch_size=16)
        a, la = train(corpus, len(vocab), config, 42)
        b, lb = train(corpus, len(vocab), config, 42)
        assert np.array_equal(a.input_matrix, b.input_matrix)
        assert np.array_equal(a.output_matrix, b.output_matrix)
        assert la == lb

    def test_multi_worker_loss_is_finite_and_decreases(self):
        vocab, corpus = chain_corpus(n_walks=80)
        config = TrainConfig(min_count=0, vector_size=8, epochs=6, window_size=2,
                             negative_samples=2, workers=3, reproducible=True, batch_size=8)
        model, losses = train(corpus, len(vocab), config, 1)
        assert all(math.isfinite(x) for x in losses)
        assert losses[-1] < losses[0]

    def test_wallclock_mode_completes(self):
        vocab, corpus = chain_corpus(n_walks=30)
        config = TrainConfig(min_count=0, vector_size=4, epochs=1, window_size=2,
                             negative_samples=1, workers=2, reproducible=False, batch_size=8)
        model, losses = train(corpus, len(vocab), config, 0)
        assert len(losses) == 1

    def test_sparse_isolation_with_workers(self):
        corpus = [[0, 1, 2]] * 12 + [[0, 3, 4]] * 2
        config = TrainConfig(min_count=5, vector_size=6, epochs=2, window_size=2,
                             negative_samples=2, workers=2, reproducible=True, batch_size=8)
        model, _ = train(corpus, 5, config, 9)
        fresh = init_embeddings(5, 6, 9)
        assert model.trained_mask.tolist() == [True, True, True, False, False]
        for row in (3, 4):
            assert np.array_equal(model.input_matrix[row], fresh.input_matrix[row])
            assert np.array_equal(model.output_matrix[row], fresh.output_matrix[row])

    def test_more_workers_than_batches(self):
        corpus = [[0, 1, 2], [2, 1, 0]]
        config = TrainConfig(min_count=0, vector_size=4, epochs=2, window_size=2,
                             negative_samples=1, workers=4, reproducible=True, batch_size=64)
        model, losses = train(corpus, 3, config, 0)
        assert len(losses) == 2
        assert all(math.isfinite(x) for x in losses)

    def test_divergence_aborts_cleanly(self):
        vocab, corpus = chain_corpus(n_walks=40)
        config = TrainConfig(min_count=0, vector_size=4, epochs=5, learning_rate=1e200,
                             window_size=2, negative_samples=2, workers=2,
                             reproducible=True, batch_size=8)
        with pytest.raises(TrainingDiverged):
            train(corpus, len(vocab), config, 0)
