/**
 * Child-process bridge to the core CLI.
 *
 * The core is consumed strictly through its public command line and file
 * formats; nothing is reimplemented on this side, so results are bit-equal
 * to direct CLI runs for identical seed and configuration (reproducible
 * mode).
 */

import { spawnSync } from "node:child_process";

export class CoreError extends Error {
  readonly exitCode: number;
  readonly stderr: string;

  constructor(message: string, exitCode: number, stderr: string) {
    super(message);
    this.name = "CoreError";
    this.exitCode = exitCode;
    this.stderr = stderr;
  }
}

export function pythonExecutable(): string {
  return process.env.WALKVEC_PYTHON ?? "python3";
}

/** Run `python -m walkvec <args>`; throws CoreError on non-zero exit. */
export function runCore(args: string[]): { stdout: string; stderr: string } {
  const proc = spawnSync(pythonExecutable(), ["-m", "walkvec", ...args], {
    encoding: "utf8",
    maxBuffer: 256 * 1024 * 1024,
  });
  if (proc.error) {
    throw new CoreError(`failed to launch core CLI: ${proc.error.message}`, -1, "");
  }
  if (proc.status !== 0) {
    const detail = (proc.stderr ?? "").trim().split("\n").slice(-3).join("\n");
    throw new CoreError(
      `core CLI exited with code ${proc.status}: ${detail}`,
      proc.status ?? -1,
      proc.stderr ?? "",
    );
  }
  return { stdout: proc.stdout ?? "", stderr: proc.stderr ?? "" };
}
