"""The runtime benchmark harness on a desk-scale grid.

Each generator x config cell runs sequentially with fresh seeds per repeat
and reports per-stage wall clock.  Cells that exceed the timeout are marked
as timed out; that is data, not an error.  Full-size cells matching the
checked-in suite live in bench_specs/.
"""

import tempfile
from pathlib import Path

from walkvec import GeneratorSpec, PipelineConfig, run_benchmark

specs = [
    GeneratorSpec("barabasi", 100, m=1, seed=7),
    GeneratorSpec("erdos_renyi", 100, p=0.4, seed=7),
    GeneratorSpec("uniform_attachment", 100, m=10, seed=7),
]
config = PipelineConfig(
    walk_depth=4,
    walk_number=10,
    min_count=1,
    vector_size=32,
    epochs=3,
    window_size=3,
    negative_samples=3,
    random_state=42,
    reproducible=True,
)

report = run_benchmark(specs, [config], repeats=3, timeout_s=300)
print(report.format_table())

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "report.csv"
    report.to_csv(out)
    print(f"\nCSV report ({out.name}):")
    print(out.read_text())

# A zero timeout demonstrates the timed-out convention.
empty = run_benchmark(specs[:1], [config], repeats=1, timeout_s=0)
print("with timeout_s=0 every cell is marked:", empty.cells[0].timed_out)
