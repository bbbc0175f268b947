/**
 * Process-level bridge to the pipeline CLI.
 *
 * Algorithms execute out of process: inputs are written as JSON (or XYZ)
 * documents, `groundstate invoke` runs the named implementation, and the
 * serialized outputs are read back.  Set GROUNDSTATE_BIN to override the
 * executable (e.g. "python3 -m groundstate.cli").
 */

import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import type { ScalarSettings } from "./documents.js";

function binary(): string[] {
  const override = process.env.GROUNDSTATE_BIN;
  if (override) {
    return override.split(" ");
  }
  return ["groundstate"];
}

export class PipelineError extends Error {
  constructor(
    message: string,
    public readonly exitCode: number,
  ) {
    super(message);
    this.name = "PipelineError";
  }
}

export function runCli(args: string[]): string {
  const [command, ...prefix] = binary();
  try {
    return execFileSync(command, [...prefix, ...args], {
      encoding: "utf-8",
      stdio: ["ignore", "pipe", "pipe"],
    });
  } catch (error) {
    const failure = error as { status?: number; stderr?: Buffer | string };
    const stderr = failure.stderr?.toString().trim() ?? String(error);
    throw new PipelineError(stderr, failure.status ?? 1);
  }
}

export interface InvokeRequest {
  kind: string;
  impl?: string;
  settings?: ScalarSettings;
  /** Documents passed positionally to the implementation's run(). */
  inputs?: unknown[];
  /** Extra keyword arguments; values may be scalars, algorithm specs
      ({kind, impl, settings}) or documents (marshalled via files). */
  args?: Record<string, unknown>;
  /** Raw text inputs written with this extension (e.g. ".xyz"). */
  textInputs?: Array<{ text: string; extension: string }>;
}

export function invoke(request: InvokeRequest): unknown[] {
  const workdir = mkdtempSync(join(tmpdir(), "groundstate-frontend-"));
  try {
    const argv = ["invoke", "--kind", request.kind];
    if (request.impl) {
      argv.push("--impl", request.impl);
    }
    if (request.settings && Object.keys(request.settings).length > 0) {
      argv.push("--settings", JSON.stringify(request.settings));
    }
    (request.textInputs ?? []).forEach((input, index) => {
      const path = join(workdir, `text_${index}${input.extension}`);
      writeFileSync(path, input.text);
      argv.push("--input", path);
    });
    (request.inputs ?? []).forEach((document, index) => {
      const path = join(workdir, `input_${index}.json`);
      writeFileSync(path, JSON.stringify(document));
      argv.push("--input", path);
    });
    const args: Record<string, unknown> = {};
    for (const [key, value] of Object.entries(request.args ?? {})) {
      if (isDocument(value)) {
        const path = join(workdir, `arg_${key}.json`);
        writeFileSync(path, JSON.stringify(value));
        args[key] = { $input: path };
      } else {
        args[key] = value;
      }
    }
    if (Object.keys(args).length > 0) {
      argv.push("--args", JSON.stringify(args));
    }
    const outputPath = join(workdir, "output.json");
    argv.push("--output", outputPath);
    runCli(argv);
    const payload = JSON.parse(readFileSync(outputPath, "utf-8"));
    if (payload.kind !== "run_output") {
      throw new PipelineError(`unexpected output document '${payload.kind}'`, 1);
    }
    return payload.outputs as unknown[];
  } finally {
    rmSync(workdir, { recursive: true, force: true });
  }
}

function isDocument(value: unknown): boolean {
  return (
    typeof value === "object" &&
    value !== null &&
    typeof (value as { kind?: unknown }).kind === "string" &&
    (value as { version?: unknown }).version !== undefined
  );
}
