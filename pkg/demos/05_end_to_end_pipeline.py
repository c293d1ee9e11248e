"""The whole pipeline in one call, with artifacts and a replayable manifest.

Equivalent CLI:

    walkvec run --input graph.nt --walk-depth 4 --walk-number 10 \
        --min-count 1 --vector-size 32 --epochs 5 --reproducible \
        --generate-artifact --out-dir out/
"""

import tempfile
from pathlib import Path

from walkvec import PipelineConfig, load_embeddings_text, load_manifest, run

NT_LINES = []
people = [f"p{i}" for i in range(12)]
for i, person in enumerate(people):
    NT_LINES.append(f"<http://ex/{person}> <http://ex/knows> <http://ex/{people[(i + 1) % 12]}> .")
    NT_LINES.append(f"<http://ex/{person}> <http://ex/knows> <http://ex/{people[(i + 3) % 12]}> .")

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    source = tmp / "graph.nt"
    source.write_text("\n".join(NT_LINES) + "\n")

    config = PipelineConfig(
        walk_strategy="random",
        walk_depth=4,
        walk_number=10,
        embedding_model="skipgram",
        epochs=5,
        vector_size=32,
        window_size=3,
        min_count=1,
        negative_samples=5,
        random_state=42,
        reproducible=True,
        generate_artifact=True,
    )
    table, artifacts = run(source, config, out_dir=tmp / "out")

    print(f"embedded {len(table.vocab)} tokens into {table.vectors.shape[1]} dimensions")
    print("stage timings:", {k: f"{v:.3f}s" for k, v in table.timings.items()})
    print("epoch losses:", " ".join(f"{x:.3f}" for x in table.losses))
    print("artifacts:")
    for name in ("embeddings_path", "vocabulary_path", "loss_trace_path", "manifest_path"):
        print(f"  {name}: {getattr(artifacts, name).name}")

    # The word2vec text file round-trips, and the manifest replays the run.
    lexicals, matrix = load_embeddings_text(artifacts.embeddings_path)
    print(f"\nreloaded {len(lexicals)} vectors; first key {lexicals[0]!r}")
    replay_config = load_manifest(artifacts.manifest_path)
    table2, _ = run(source, replay_config, out_dir=tmp / "replay")
    print("replay reproduces the embedding matrix:",
          bool((table.vectors == table2.vectors).all()))
