/**
 * Constructor-style wrapper over the walkvec core.
 *
 * Mirrors the familiar three-step flow:
 *
 *     const model = new GPU_RDF2vec({ walk_strategy: "random", walk_depth: 5, ... });
 *     const edgeData = model.load_data("graph.nt");
 *     const embeddings = model.fit_transform({ edge_df: edgeData, walk_vertices: null });
 *
 * All computation happens in the core CLI; this side only validates
 * options, assembles flags, and reads the emitted artifacts back into a
 * native Map.
 */

import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import {
  ConfigValidationError,
  ModelOptions,
  ResolvedOptions,
  runFlags,
  validateOptions,
} from "./config.js";
import { EmbeddingMap, readEmbeddingsText } from "./embeddings.js";
import { CoreError, runCore } from "./runner.js";

export { ConfigValidationError } from "./config.js";
export type { ModelOptions, ResolvedOptions } from "./config.js";
export { CoreError } from "./runner.js";
export type { EmbeddingMap } from "./embeddings.js";

export interface EdgeData {
  /** Original input path; the core re-reads it during fit_transform. */
  readonly path: string;
  readonly format: string | null;
  readonly tokens: number;
  readonly entities: number;
  readonly predicates: number;
  readonly edges: number;
}

export interface FitInput {
  edge_df: EdgeData;
  walk_vertices?: string[] | null;
}

type LifecycleState = "configured" | "fitted";

export class GPU_RDF2vec {
  readonly options: ResolvedOptions;
  readonly warnings: string[];
  private state: LifecycleState = "configured";
  private fitted: EmbeddingMap | null = null;
  private artifactDir: string | null = null;

  constructor(options?: ModelOptions) {
    const outcome = validateOptions(options);
    this.options = outcome.options;
    this.warnings = outcome.warnings;
    for (const warning of this.warnings) {
      console.warn(`walkvec-bindings: ${warning}`);
    }
  }

  /** Tokenize the input once to validate it and report its shape. */
  load_data(path: string, format: string | null = null): EdgeData {
    const workspace = mkdtempSync(join(tmpdir(), "walkvec-ingest-"));
    try {
      const args = ["ingest", "--input", path, "--out-dir", workspace];
      if (format !== null) {
        args.push("--format", format);
      }
      if (this.options.include_literals) {
        args.push("--include-literals");
      }
      if (this.options.strict) {
        args.push("--strict");
      }
      const { stdout } = runCore(args);
      const tokenLine = /tokens: (\d+) \(entities (\d+), predicates (\d+)\)/.exec(stdout);
      const edgeLine = /edges: (\d+)/.exec(stdout);
      if (!tokenLine || !edgeLine) {
        throw new CoreError(`unexpected ingest output:\n${stdout}`, -1, "");
      }
      return {
        path,
        format,
        tokens: Number(tokenLine[1]),
        entities: Number(tokenLine[2]),
        predicates: Number(tokenLine[3]),
        edges: Number(edgeLine[1]),
      };
    } finally {
      rmSync(workspace, { recursive: true, force: true });
    }
  }

  /**
   * Run the full pipeline over the loaded edges; returns the embedding
   * table as a Map from lexical token to d-dimensional vector.
   */
  fit_transform(input: FitInput): EmbeddingMap {
    if (this.state !== "configured") {
      throw new Error("fit_transform may only be called once per model instance");
    }
    const outDir = mkdtempSync(join(tmpdir(), "walkvec-run-"));
    let keepArtifacts = false;
    try {
      const flags = runFlags(
        this.options,
        input.edge_df.path,
        outDir,
        input.edge_df.format,
        input.walk_vertices ?? null,
      );
      runCore(flags);
      const { dim, vectors } = readEmbeddingsText(join(outDir, "embeddings.w2v.txt"));
      if (dim !== this.options.vector_size) {
        throw new CoreError(`embedding dimension ${dim} does not match vector_size`, -1, "");
      }
      this.fitted = vectors;
      this.state = "fitted";
      if (this.options.generate_artifact) {
        this.artifactDir = outDir;
        keepArtifacts = true;
      }
      return vectors;
    } finally {
      if (!keepArtifacts) {
        rmSync(outDir, { recursive: true, force: true });
      }
    }
  }

  /** The fitted embedding table; available only after fit_transform. */
  get embeddings(): EmbeddingMap {
    if (this.state !== "fitted" || this.fitted === null) {
      throw new Error("embeddings are available only after fit_transform");
    }
    return this.fitted;
  }

  /** Artifact directory kept when generate_artifact is set. */
  get artifacts(): string | null {
    return this.artifactDir;
  }
}
