/** Reader for the core's word2vec text format. */

import { readFileSync } from "node:fs";

export type EmbeddingMap = Map<string, Float64Array>;

/**
 * Parse `<count> <dim>` followed by `<lexical> <d floats>` lines.
 *
 * The vector is always the last `dim` whitespace-separated fields, so
 * lexical keys containing spaces round-trip.
 */
export function readEmbeddingsText(path: string): { dim: number; vectors: EmbeddingMap } {
  const text = readFileSync(path, "utf8");
  const lines = text.split("\n");
  const header = lines[0].trim().split(" ");
  const count = Number(header[0]);
  const dim = Number(header[1]);
  if (!Number.isInteger(count) || !Number.isInteger(dim)) {
    throw new Error(`malformed embeddings header: ${lines[0]!}`);
  }
  const vectors: EmbeddingMap = new Map();
  for (let i = 1; i <= count; i += 1) {
    const line = lines[i];
    if (line === undefined) {
      throw new Error(`embeddings file truncated at row ${i}`);
    }
    const parts = line.split(" ");
    const key = parts.slice(0, parts.length - dim).join(" ");
    const vector = new Float64Array(dim);
    for (let j = 0; j < dim; j += 1) {
      vector[j] = Number(parts[parts.length - dim + j]);
    }
    vectors.set(key, vector);
  }
  if (vectors.size !== count) {
    throw new Error(`expected ${count} distinct keys, read ${vectors.size}`);
  }
  return { dim, vectors };
}
