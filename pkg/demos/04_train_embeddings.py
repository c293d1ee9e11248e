"""Skip-gram and CBOW training on a two-cluster toy graph.

Two 5-cliques joined by a single bridge edge: after training, vertices
inside a clique should be closer (cosine) to each other than to the other
clique.  Also shows the loss trace and the batch-size heuristic.
"""

import numpy as np

from walkvec import (
    Triple,
    TrainConfig,
    build_graph,
    build_vocabulary,
    random_walks,
    suggest_batch_size,
    train,
)
from walkvec.w2v import estimate_per_sample_bytes

rows = []
for base in ("x", "y"):
    members = [f"{base}{i}" for i in range(5)]
    for u in members:
        for v in members:
            if u != v:
                rows.append((u, "p", v))
rows.append(("x0", "p", "y0"))  # the bridge

vocab, edges = build_vocabulary([Triple(s, p, o) for s, p, o in rows])
graph = build_graph(edges, len(vocab))
corpus = random_walks(graph, vocab.entity_tokens(), walk_depth=4, walk_number=25, rng_seed=42)
print(f"corpus: {len(corpus)} walks, {corpus.total_tokens} tokens")

for kind in ("skipgram", "cbow"):
    config = TrainConfig(model=kind, min_count=1, vector_size=16, epochs=10,
                         learning_rate=0.01, window_size=5, negative_samples=5)
    model, losses = train(corpus, len(vocab), config, rng_seed=42)
    vectors = model.input_matrix

    def cosine(a, b):
        u, v = vectors[vocab.token_of[a]], vectors[vocab.token_of[b]]
        return float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))

    intra = np.mean([cosine(f"x{i}", f"x{j}") for i in range(5) for j in range(i + 1, 5)])
    inter = np.mean([cosine(f"x{i}", f"y{j}") for i in range(5) for j in range(5)])
    print(f"\n== {kind} ==")
    print(f"epoch losses: {' '.join(f'{x:.3f}' for x in losses)}")
    print(f"mean intra-cluster cosine {intra:+.3f} vs inter-cluster {inter:+.3f}")

# The auto batch size is min(memory rule, 1/20-of-corpus rule).
per_sample = estimate_per_sample_bytes("skipgram", 16, 5, 5)
print(f"\nauto batch size for this corpus: "
      f"{suggest_batch_size(per_sample, 1 << 30, 20_000)} "
      f"(per-sample footprint {per_sample} bytes)")
