export { BoundTokenizer, type CptReport } from "./tokenizer.js";
export {
  runPipeline,
  type PipelineReport,
  type RunPipelineOptions,
  type StageCounts,
} from "./pipeline.js";
export {
  ArtifactParseError,
  BackendError,
  ConfigurationError,
  ContractViolationError,
  FileAccessError,
  JlmkitError,
  UseAfterCloseError,
} from "./errors.js";
export { runCli, pythonExecutable, type CliOptions } from "./cli.js";

import { runCli } from "./cli.js";

/** Binding version; must equal the primary toolkit's version. */
export const VERSION = "0.1.0";

/** Version string reported by the installed primary toolkit. */
export function toolkitVersion(): string {
  return runCli(["--version"]).trim();
}
