/**
 * Constructor-keyword schema and the mapping onto core CLI flags.
 *
 * Keyword names match the core's constructor surface one-to-one so tuned
 * values can be pasted across. `multi_gpu` and `cpu_count` are accepted for
 * drop-in familiarity and map onto the single `workers` knob (deprecated).
 */

import { z } from "zod";

export const ModelOptionsSchema = z
  .object({
    walk_strategy: z.enum(["random", "bfs"]).default("random"),
    walk_depth: z.number().int().min(1).default(5),
    walk_number: z.number().int().min(1).default(100),
    embedding_model: z.enum(["skipgram", "cbow"]).default("skipgram"),
    epochs: z.number().int().min(1).default(5),
    batch_size: z.number().int().min(1).nullable().default(null),
    vector_size: z.number().int().min(1).default(100),
    window_size: z.number().int().min(1).default(5),
    min_count: z.number().int().min(0).default(10),
    learning_rate: z.number().positive().default(0.01),
    negative_samples: z.number().int().min(0).default(5),
    random_state: z.number().int().min(0).default(42),
    reproducible: z.boolean().default(false),
    multi_gpu: z.boolean().default(false),
    cpu_count: z.number().int().min(1).optional(),
    workers: z.number().int().min(1).default(1),
    generate_artifact: z.boolean().default(false),
    projection: z.enum(["full", "entity", "property"]).default("full"),
    duplicate_free: z.boolean().default(false),
    include_literals: z.boolean().default(false),
    strict: z.boolean().default(false),
  })
  .strict();

export type ModelOptions = z.input<typeof ModelOptionsSchema>;
export type ResolvedOptions = z.output<typeof ModelOptionsSchema>;

export class ConfigValidationError extends Error {
  readonly fields: string[];

  constructor(issues: z.ZodIssue[]) {
    const parts = issues.map((issue) => {
      const field = issue.path.join(".") || "(options)";
      return `${field}: ${issue.message}`;
    });
    super(`invalid model options - ${parts.join("; ")}`);
    this.name = "ConfigValidationError";
    this.fields = issues.map((issue) => issue.path.join(".") || "(options)");
  }
}

export interface ValidationOutcome {
  options: ResolvedOptions;
  warnings: string[];
}

/** Validate raw keyword options; throws naming the offending fields. */
export function validateOptions(raw: ModelOptions | undefined): ValidationOutcome {
  const parsed = ModelOptionsSchema.safeParse(raw ?? {});
  if (!parsed.success) {
    throw new ConfigValidationError(parsed.error.issues);
  }
  const options = parsed.data;
  const warnings: string[] = [];
  if (options.multi_gpu) {
    warnings.push("multi_gpu is deprecated here; use workers to control parallelism");
  }
  if (options.cpu_count !== undefined) {
    warnings.push("cpu_count is deprecated here; mapped onto workers");
    if (options.workers === 1) {
      options.workers = options.cpu_count;
    }
  }
  return { options, warnings };
}

/** Flags for the core `run` subcommand (kebab-case, one per option). */
export function runFlags(
  options: ResolvedOptions,
  inputPath: string,
  outDir: string,
  format: string | null,
  walkVertices: string[] | null,
): string[] {
  const flags = [
    "run",
    "--input", inputPath,
    "--walk-strategy", options.walk_strategy,
    "--walk-depth", String(options.walk_depth),
    "--walk-number", String(options.walk_number),
    "--embedding-model", options.embedding_model,
    "--epochs", String(options.epochs),
    "--vector-size", String(options.vector_size),
    "--window-size", String(options.window_size),
    "--min-count", String(options.min_count),
    "--learning-rate", String(options.learning_rate),
    "--negative-samples", String(options.negative_samples),
    "--random-state", String(options.random_state),
    "--workers", String(options.workers),
    "--projection", options.projection,
    "--generate-artifact",
    "--out-dir", outDir,
  ];
  if (format !== null) {
    flags.push("--format", format);
  }
  if (options.batch_size !== null) {
    flags.push("--batch-size", String(options.batch_size));
  }
  if (options.reproducible) {
    flags.push("--reproducible");
  }
  if (options.duplicate_free) {
    flags.push("--duplicate-free");
  }
  if (options.include_literals) {
    flags.push("--include-literals");
  }
  if (options.strict) {
    flags.push("--strict");
  }
  for (const vertex of walkVertices ?? []) {
    flags.push("--walk-vertex", vertex);
  }
  return flags;
}
