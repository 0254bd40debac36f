/** Corpus pipeline execution through the filter-corpus subcommand. */

import { existsSync, mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { runCli, type CliOptions } from "./cli.js";
import { FileAccessError } from "./errors.js";

export interface StageCounts {
  seen: number;
  kept: number;
  dropped: number;
  modified: number;
}

export interface PipelineReport {
  version: number;
  stages: Record<string, StageCounts>;
  total_documents_out: number;
  total_tokens_out: number | null;
  redactions: Record<string, number>;
}

export interface RunPipelineOptions extends CliOptions {
  tokenizerPath?: string;
  qualityModelPath?: string;
  annotate?: boolean;
  workers?: number;
}

/**
 * Run the curation pipeline on a JSONL corpus file, writing survivors to
 * `outputPath` and returning the parsed run report.
 */
export function runPipeline(
  inputPath: string,
  configPath: string | null,
  outputPath: string,
  options?: RunPipelineOptions,
): PipelineReport {
  if (!existsSync(inputPath)) {
    throw new FileAccessError(`corpus file not found: ${inputPath}`);
  }
  if (configPath !== null && !existsSync(configPath)) {
    throw new FileAccessError(`config file not found: ${configPath}`);
  }
  const scratch = mkdtempSync(join(tmpdir(), "jlmkit-pipeline-"));
  try {
    const reportPath = join(scratch, "report.json");
    const args = [
      "filter-corpus",
      "--input",
      inputPath,
      "--output",
      outputPath,
      "--report",
      reportPath,
    ];
    if (configPath !== null) {
      args.push("--config", configPath);
    }
    if (options?.tokenizerPath) {
      args.push("--tokenizer", options.tokenizerPath);
    }
    if (options?.qualityModelPath) {
      args.push("--quality-model", options.qualityModelPath);
    }
    if (options?.annotate) {
      args.push("--annotate");
    }
    if (options?.workers) {
      args.push("--workers", String(options.workers));
    }
    runCli(args, options);
    return JSON.parse(readFileSync(reportPath, "utf-8")) as PipelineReport;
  } finally {
    rmSync(scratch, { recursive: true, force: true });
  }
}
