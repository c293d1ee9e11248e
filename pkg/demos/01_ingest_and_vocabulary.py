"""Parse N-Triples and tabular edge data into a tokenized graph.

Every entity and predicate lexical key receives a dense integer token in
first-occurrence order; entities and predicates share one token space.
"""

import io

from walkvec import build_vocabulary, parse_edge_table, parse_ntriples

NT = b"""\
# a tiny knowledge graph
<http://ex/alice> <http://ex/knows> <http://ex/bob> .
<http://ex/bob> <http://ex/knows> <http://ex/carol> .
<http://ex/alice> <http://ex/age> "34"^^<http://www.w3.org/2001/XMLSchema#integer> .
_:blank1 <http://ex/knows> <http://ex/alice> .
"""

print("== N-Triples ==")
triples = list(parse_ntriples(io.BytesIO(NT)))
for t in triples:
    print(f"  {t.subject!r} --{t.predicate!r}--> {t.object!r}  [{t.object_kind}]")

# Literal objects are dropped by default (structure-only embeddings);
# pass include_literals=True to tokenize their lexical forms as nodes.
vocab, edges = build_vocabulary(triples)
print(f"\nvocabulary: {len(vocab)} tokens "
      f"({vocab.entity_count} entities, {vocab.predicate_count} predicates)")
for lexical, token in vocab.token_of.items():
    print(f"  {token:2d} <- {lexical!r}")
print(f"edge rows (src, pred, dst):\n{edges}")

print("\n== CSV edge table ==")
import tempfile
from pathlib import Path

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "edges.csv"
    path.write_text("alice,knows,bob\nbob,knows,carol\n")
    table_triples = list(parse_edge_table(path, format="csv"))
    vocab2, edges2 = build_vocabulary(table_triples)
    print(f"rows: {len(table_triples)}, tokens: {len(vocab2)}, edges: {len(edges2)}")

# Malformed lines are recoverable: collect them instead of aborting.
print("\n== lenient parsing ==")
errors = []
broken = io.StringIO("<http://a> <http://p> <http://b> .\nnot a triple\n")
kept = list(parse_ntriples(broken, error_sink=errors))
print(f"kept {len(kept)} statements, skipped {len(errors)}: {errors[0]}")
