/** Typed exceptions mirroring the primary toolkit's error taxonomy. */

export class JlmkitError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

/** A referenced file does not exist or cannot be read. */
export class FileAccessError extends JlmkitError {}

/** An artifact or data file exists but failed to parse or validate. */
export class ArtifactParseError extends JlmkitError {}

/** An operation violated a contract (unknown token id, bad arguments). */
export class ContractViolationError extends JlmkitError {}

/** Invalid pipeline or command configuration. */
export class ConfigurationError extends JlmkitError {}

/** The external scorer backend failed (CLI exit code 2). */
export class BackendError extends JlmkitError {}

/** Operation on a handle after close(). */
export class UseAfterCloseError extends JlmkitError {}

/** Map a CLI diagnostic category tag to the matching exception class. */
export function errorFromCategory(
  category: string,
  message: string,
  exitCode: number,
): JlmkitError {
  if (exitCode === 2 || category === "backend") {
    return new BackendError(message);
  }
  switch (category) {
    case "io":
      return new FileAccessError(message);
    case "format":
      return new ArtifactParseError(message);
    case "contract":
      return new ContractViolationError(message);
    case "config":
      return new ConfigurationError(message);
    default:
      return new JlmkitError(message);
  }
}
