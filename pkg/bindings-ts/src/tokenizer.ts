/** Tokenizer handle backed by a vocabulary artifact on disk. */

import { existsSync, mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { runCli, type CliOptions } from "./cli.js";
import { FileAccessError, UseAfterCloseError } from "./errors.js";

export interface CptReport {
  chars: number;
  tokens: number;
  rate: number;
}

export class BoundTokenizer {
  private closed = false;

  private constructor(
    readonly path: string,
    private readonly options?: CliOptions,
  ) {}

  /**
   * Load a vocabulary artifact. The artifact is validated by the primary
   * toolkit itself (a no-op decode), so schema errors surface exactly as
   * the toolkit reports them.
   */
  static load(path: string, options?: CliOptions): BoundTokenizer {
    if (!existsSync(path)) {
      throw new FileAccessError(`tokenizer artifact not found: ${path}`);
    }
    runCli(["decode", "--tokenizer", path, "--ids", ""], options);
    return new BoundTokenizer(path, options);
  }

  private guard(): void {
    if (this.closed) {
      throw new UseAfterCloseError(
        `tokenizer handle for ${this.path} is closed`,
      );
    }
  }

  /** Encode text to token ids. */
  encode(text: string): number[] {
    this.guard();
    const stdout = runCli(["encode", "--tokenizer", this.path], {
      ...this.options,
      input: text,
    });
    return JSON.parse(stdout).ids as number[];
  }

  /** Decode token ids back to text. */
  decode(ids: number[]): string {
    this.guard();
    const stdout = runCli(["decode", "--tokenizer", this.path], {
      ...this.options,
      input: JSON.stringify(ids),
    });
    return JSON.parse(stdout).text as string;
  }

  /** Character-per-token rate over the given texts. */
  measureCpt(texts: string[]): CptReport {
    this.guard();
    const scratch = mkdtempSync(join(tmpdir(), "jlmkit-cpt-"));
    try {
      const corpus = join(scratch, "corpus.jsonl");
      const lines = texts.map((text, index) =>
        JSON.stringify({ id: `t${index}`, text }),
      );
      writeFileSync(corpus, lines.join("\n") + "\n", "utf-8");
      const stdout = runCli(
        [
          "measure-cpt",
          "--tokenizer",
          this.path,
          "--corpus",
          corpus,
          "--format",
          "json",
        ],
        this.options,
      );
      const report = JSON.parse(stdout);
      return {
        chars: report.char_count,
        tokens: report.token_count,
        rate: report.rate,
      };
    } finally {
      rmSync(scratch, { recursive: true, force: true });
    }
  }

  /** Release the handle; all later operations throw UseAfterCloseError. */
  close(): void {
    this.closed = true;
  }

  get isClosed(): boolean {
    return this.closed;
  }
}
