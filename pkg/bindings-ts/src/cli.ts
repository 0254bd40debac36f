/** Subprocess bridge to the jlmkit CLI.
 *
 * The binding never reimplements toolkit logic: every operation invokes
 * the CLI (`python3 -m jlmkit`) and exchanges data through its documented
 * stdin/stdout JSON and file formats, so results are bit-identical to a
 * direct CLI run by construction.
 */

import { execFileSync } from "node:child_process";

import { errorFromCategory, JlmkitError } from "./errors.js";

const DIAGNOSTIC = /^jlmkit: error: \[(\w+)\] (.*)$/m;

export interface CliOptions {
  /** Python interpreter; defaults to $JLMKIT_PYTHON or "python3". */
  python?: string;
  input?: string;
}

export function pythonExecutable(options?: CliOptions): string {
  return options?.python ?? process.env.JLMKIT_PYTHON ?? "python3";
}

/** Run a CLI subcommand, returning stdout; failures raise typed errors. */
export function runCli(args: string[], options?: CliOptions): string {
  try {
    return execFileSync(pythonExecutable(options), ["-m", "jlmkit", ...args], {
      input: options?.input,
      encoding: "utf-8",
      maxBuffer: 256 * 1024 * 1024,
    });
  } catch (raw) {
    const error = raw as NodeJS.ErrnoException & {
      status?: number | null;
      stderr?: string;
    };
    if (error.code === "ENOENT") {
      throw new JlmkitError(
        `python interpreter not found: ${pythonExecutable(options)}`,
      );
    }
    const stderr = error.stderr ?? "";
    const match = DIAGNOSTIC.exec(stderr);
    if (match) {
      throw errorFromCategory(match[1], match[2], error.status ?? 1);
    }
    throw new JlmkitError(
      `jlmkit exited with status ${error.status}: ${stderr.trim()}`,
    );
  }
}
