"""Walk corpora: random walks, duplicate-free walks, BFS trees, projections.

Walks interleave entity and predicate tokens.  Random walks pick uniform
out-edges until the depth bound or a sink; BFS records one predecessor per
discovered vertex and materializes every leaf-to-root path.
"""

from walkvec import Triple, bfs_walks, build_graph, build_vocabulary, project_corpus, random_walks

rows = [
    ("root", "likes", "a"),
    ("root", "likes", "b"),
    ("a", "knows", "c"),
    ("b", "knows", "c"),
    ("c", "likes", "root"),
]
vocab, edges = build_vocabulary([Triple(s, p, o) for s, p, o in rows])
graph = build_graph(edges, len(vocab))
root = vocab.token_of["root"]


def show(corpus, title):
    print(f"== {title}: {len(corpus)} walks, {corpus.total_tokens} tokens ==")
    for walk in corpus:
        print("  " + " -> ".join(vocab.lexical(int(t)) for t in walk.tokens))


# Ten random walks from the root; identical sequences survive.
corpus = random_walks(graph, [root], walk_depth=3, walk_number=10, rng_seed=7)
show(corpus, "random walks (10 per root)")

# Duplicate-free collapses identical sequences per start vertex.
dedup = random_walks(graph, [root], walk_depth=3, walk_number=10, rng_seed=7, duplicate_free=True)
show(dedup, "duplicate-free")

# BFS: single-parent tree, one walk per leaf, plus the per-walk edge table.
bfs_corpus, path_table = bfs_walks(graph, [root], walk_depth=2)
show(bfs_corpus, "BFS predecessor-tree walks")
print("path table rows (source, target, walk_id):")
for src, dst, wid in path_table.rows():
    print(f"  ({vocab.lexical(src)}, {vocab.lexical(dst)}, w{wid})")

# Projections: entities only, or start entity + predicates.
show(project_corpus(bfs_corpus, "entity"), "entity projection")
show(project_corpus(bfs_corpus, "property"), "property projection")
