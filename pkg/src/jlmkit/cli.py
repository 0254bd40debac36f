"""Command line interface.

Exit codes: 0 success, 1 input/config error, 2 external scorer backend
error. Diagnostics go to stderr and never include document text, only
paths, ids, and counts.
"""

from __future__ import annotations

import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from . import __version__
from .errors import ScorerBackendError, ToolkitError
from .evalharness import (
    HttpScorer,
    LookupScorer,
    MetricResult,
    UniformUnigramScorer,
    aggregate,
    builtin_suite_path,
    display_round,
    load_instances,
    load_suite,
    run_task,
    suite_report_json,
)
from .evalharness.scorers import SCORER_URL_ENV
from .pipeline import (
    PipelineConfig,
    QualityModel,
    annotate_meta,
    read_documents,
    run_pipeline,
    write_documents,
)
from .tokenizer import Tokenizer, build_tokenizer, char_per_token_rate, extend_vocabulary
from .tokenizer.core import CptReport


def _fail(message: str, code: int = 1) -> None:
    click.echo(f"jlmkit: error: {message}", err=True)
    sys.exit(code)


def _guarded(fn):
    """Map toolkit errors to exit codes; category tag aids scripting."""

    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ScorerBackendError as exc:
            _fail(f"[backend] {exc}", code=2)
        except ToolkitError as exc:
            _fail(f"[{exc.category}] {exc}", code=1)
        except FileNotFoundError as exc:
            _fail(f"[io] file not found: {exc.filename}", code=1)

    wrapper.__name__ = fn.__name__
    return wrapper


def _read_corpus_texts(path: str) -> list[str]:
    docs, errors = read_documents(path)
    if errors:
        line, message = errors[0]
        _fail(f"[format] {path}:{line}: {message}")
    return [d.text for d in docs]


def _load_tokenizer(path: str) -> Tokenizer:
    if not Path(path).exists():
        _fail(f"[io] tokenizer artifact not found: {path}")
    return Tokenizer.load(path)


def _print_cpt(report: CptReport, fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(report.as_dict(), sort_keys=True))
    else:
        click.echo(f"characters  {report.char_count}")
        click.echo(f"tokens      {report.token_count}")
        click.echo(f"rate        {report.rate:.4f}")


@click.group()
@click.version_option(__version__, message="%(version)s")
def main() -> None:
    """Tokenizer training, corpus curation, and LM evaluation tools."""


@main.command("train-tokenizer")
@click.option("--corpus", required=True, help="JSONL corpus file")
@click.option("--merges", type=int, required=True, help="merge rules to learn")
@click.option("--out", required=True, help="output vocabulary artifact")
@click.option("--normalization", type=click.Choice(["nfkc", "none"]),
              default="nfkc", show_default=True)
@click.option("--workers", type=int, default=1, show_default=True,
              help="worker threads (training itself is sequential)")
@_guarded
def cmd_train_tokenizer(corpus: str, merges: int, out: str,
                        normalization: str, workers: int) -> None:
    """Train a byte-fallback tokenizer from scratch."""
    if not Path(corpus).exists():
        _fail(f"[io] corpus file not found: {corpus}")
    texts = _read_corpus_texts(corpus)
    tokenizer = build_tokenizer(texts, num_merges=merges,
                                normalization=normalization)
    tokenizer.save(out)
    click.echo(f"pieces {tokenizer.vocabulary.total_size} "
               f"merges {len(tokenizer.merges)}")


@main.command("extend-vocab")
@click.option("--base", required=True, help="base vocabulary artifact")
@click.option("--corpus", required=True, help="JSONL corpus to learn from")
@click.option("--budget", type=int, required=True,
              help="maximum new pieces to add")
@click.option("--out", required=True, help="output vocabulary artifact")
@click.option("--sample", default=None,
              help="JSONL sample for before/after CPT measurement")
@click.option("--workers", type=int, default=1, show_default=True)
@_guarded
def cmd_extend_vocab(base: str, corpus: str, budget: int, out: str,
                     sample: str | None, workers: int) -> None:
    """Extend a frozen base vocabulary under a piece budget."""
    base_tok = _load_tokenizer(base)
    if not Path(corpus).exists():
        _fail(f"[io] corpus file not found: {corpus}")
    texts = _read_corpus_texts(corpus)
    extended = extend_vocabulary(base_tok, texts, budget=budget)
    extended.save(out)
    click.echo(f"size {base_tok.vocabulary.total_size} -> "
               f"{extended.vocabulary.total_size}")
    if sample:
        sample_texts = _read_corpus_texts(sample)
        before = char_per_token_rate(base_tok, sample_texts)
        after = char_per_token_rate(extended, sample_texts)
        click.echo(f"cpt {before.rate:.4f} -> {after.rate:.4f}")


@main.command("measure-cpt")
@click.option("--tokenizer", "tokenizer_path", required=True)
@click.option("--corpus", required=True)
@click.option("--format", "fmt", type=click.Choice(["json", "table"]),
              default="json", show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@_guarded
def cmd_measure_cpt(tokenizer_path: str, corpus: str, fmt: str,
                    workers: int) -> None:
    """Character-per-token rate of a tokenizer over a corpus."""
    tokenizer = _load_tokenizer(tokenizer_path)
    if not Path(corpus).exists():
        _fail(f"[io] corpus file not found: {corpus}")
    texts = _read_corpus_texts(corpus)
    if workers > 1 and len(texts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(
                lambda t: (len(tokenizer.normalize(t)),
                           len(tokenizer.encode(t).ids)), texts))
        chars = sum(c for c, _ in counts)
        tokens = sum(t for _, t in counts)
        if chars == 0:
            from .errors import EmptyCorpusError

            raise EmptyCorpusError("corpus yielded no non-empty text")
        report = CptReport(char_count=chars, token_count=tokens)
    else:
        report = char_per_token_rate(tokenizer, texts)
    _print_cpt(report, fmt)


@main.command("encode")
@click.option("--tokenizer", "tokenizer_path", required=True)
@click.option("--text", default=None, help="text to encode (default: stdin)")
@click.option("--workers", type=int, default=1, show_default=True)
@_guarded
def cmd_encode(tokenizer_path: str, text: str | None, workers: int) -> None:
    """Encode text to token ids (JSON on stdout)."""
    tokenizer = _load_tokenizer(tokenizer_path)
    if text is None:
        text = sys.stdin.read()
    encoding = tokenizer.encode(text)
    click.echo(json.dumps({
        "ids": list(encoding.ids),
        "offsets": [list(span) for span in encoding.offsets],
    }))


@main.command("decode")
@click.option("--tokenizer", "tokenizer_path", required=True)
@click.option("--ids", "ids_arg", default=None,
              help="comma-separated ids (default: JSON array on stdin)")
@click.option("--workers", type=int, default=1, show_default=True)
@_guarded
def cmd_decode(tokenizer_path: str, ids_arg: str | None,
               workers: int) -> None:
    """Decode token ids back to text."""
    tokenizer = _load_tokenizer(tokenizer_path)
    if ids_arg is not None:
        try:
            ids = [int(x) for x in ids_arg.split(",") if x.strip()]
        except ValueError:
            _fail(f"[format] ids must be integers: {ids_arg!r}")
    else:
        try:
            ids = json.loads(sys.stdin.read())
        except json.JSONDecodeError as exc:
            _fail(f"[format] stdin is not a JSON id array: {exc}")
    click.echo(json.dumps({"text": tokenizer.decode(ids)}, ensure_ascii=False))


@main.command("filter-corpus")
@click.option("--input", "input_path", required=True, help="JSONL corpus in")
@click.option("--output", "output_path", required=True, help="JSONL corpus out")
@click.option("--report", "report_path", default=None, help="report JSON out")
@click.option("--config", "config_path", default=None,
              help="pipeline config JSON")
@click.option("--stages", default=None,
              help="comma-separated stage subset to enable")
@click.option("--tokenizer", "tokenizer_path", default=None,
              help="vocabulary artifact for token accounting")
@click.option("--quality-model", "model_path", default=None,
              help="quality model artifact (enables the classifier stage)")
@click.option("--annotate", is_flag=True,
              help="write per-stage verdicts into meta.pipeline")
@click.option("--seed", type=int, default=None, help="overrides config seed")
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "table"]),
              default="table", show_default=True)
@_guarded
def cmd_filter_corpus(input_path: str, output_path: str,
                      report_path: str | None, config_path: str | None,
                      stages: str | None, tokenizer_path: str | None,
                      model_path: str | None, annotate: bool,
                      seed: int | None, workers: int, fmt: str) -> None:
    """Run the corpus curation pipeline."""
    from dataclasses import replace

    if not Path(input_path).exists():
        _fail(f"[io] input file not found: {input_path}")
    config = (PipelineConfig.load(config_path) if config_path
              else PipelineConfig())
    if stages is not None:
        names = [s.strip() for s in stages.split(",") if s.strip()]
        config = config.with_stages(names)
    if seed is not None:
        config = replace(config, seed=seed)

    quality_model = None
    if model_path is not None:
        quality_model = QualityModel.load(model_path)
        if stages is None and not config.classifier:
            config = replace(config, classifier=True)

    tokenizer = (_load_tokenizer(tokenizer_path)
                 if tokenizer_path is not None else None)

    docs, read_errors = read_documents(input_path)
    input_errors = [(f"line-{n}", msg) for n, msg in read_errors]
    result = run_pipeline(docs, config, tokenizer=tokenizer,
                          quality_model=quality_model, workers=workers,
                          input_errors=input_errors)

    out_docs = annotate_meta(result) if annotate else result.documents
    with open(output_path, "w", encoding="utf-8") as handle:
        write_documents(out_docs, handle)
    if report_path:
        Path(report_path).write_text(result.report.to_json(),
                                     encoding="utf-8")

    if fmt == "json":
        click.echo(result.report.to_json(), nl=False)
    else:
        for name, counts in result.report.stages.items():
            click.echo(f"{name:12s} seen {counts.seen:6d} kept "
                       f"{counts.kept:6d} dropped {counts.dropped:6d} "
                       f"modified {counts.modified:6d}")
        click.echo(f"documents out: {result.report.total_documents_out}")
        if result.report.total_tokens_out is not None:
            click.echo(f"tokens out: {result.report.total_tokens_out}")


def _build_scorer(backend: str, table_path: str | None,
                  url: str | None, timeout: float, retries: int):
    if backend == "mock":
        if table_path is None:
            _fail("[config] --scorer-table is required for the mock backend")
        return LookupScorer.from_file(table_path)
    if backend == "unigram":
        return UniformUnigramScorer()
    # the environment variable overrides the flag
    endpoint = os.environ.get(SCORER_URL_ENV) or url
    return HttpScorer(base_url=endpoint, timeout=timeout, retries=retries)


@main.command("eval")
@click.option("--suite", default=None,
              help="suite definition path or builtin name (japanese/english)")
@click.option("--data", "data_dir", default=None,
              help="directory with <task>.jsonl instance files")
@click.option("--scorer", "backend", type=click.Choice(["mock", "unigram", "http"]),
              default="mock", show_default=True)
@click.option("--scorer-table", default=None,
              help="lookup table JSON for the mock scorer")
@click.option("--scorer-url", default=None,
              help=f"likelihood endpoint (overridden by ${SCORER_URL_ENV})")
@click.option("--timeout", type=float, default=30.0, show_default=True)
@click.option("--retries", type=int, default=2, show_default=True)
@click.option("--out", "out_path", default=None, help="suite report JSON out")
@click.option("--aggregate-only", "values_path", default=None,
              help="skip scoring; aggregate per-task values from a JSON file")
@click.option("--lenient", is_flag=True,
              help="count scorer failures as incorrect instead of aborting")
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "table"]),
              default="table", show_default=True)
@_guarded
def cmd_eval(suite: str | None, data_dir: str | None, backend: str,
             scorer_table: str | None, scorer_url: str | None,
             timeout: float, retries: int, out_path: str | None,
             values_path: str | None, lenient: bool, workers: int,
             fmt: str) -> None:
    """Run an evaluation suite, or aggregate pre-computed values."""
    if values_path is not None:
        rows = json.loads(Path(values_path).read_text(encoding="utf-8"))
        results = [
            MetricResult(task_name=row["name"],
                         metric_name=row.get("metric", "acc"),
                         value=row["value"],
                         instance_count=row.get("instances", 1))
            for row in rows
        ]
        flags = [bool(row.get("excluded_from_7avg")) for row in rows]
        report = aggregate(results, flags)
        _emit_suite_report(report, [], out_path, fmt)
        return

    if suite is None or data_dir is None:
        _fail("[config] --suite and --data are required (or --aggregate-only)")
    suite_path = Path(suite)
    if not suite_path.exists():
        builtin = builtin_suite_path(suite)
        if builtin.exists():
            suite_path = builtin
        else:
            _fail(f"[io] suite not found: {suite}")
    tasks = load_suite(suite_path)
    scorer = _build_scorer(backend, scorer_table, scorer_url, timeout, retries)

    results = []
    for task in tasks:
        instance_file = Path(data_dir) / f"{task.name}.jsonl"
        if not instance_file.exists():
            _fail(f"[io] missing instance file: {instance_file}")
        instances = load_instances(instance_file, task.task_type)
        results.append(run_task(scorer, task, instances, workers=workers,
                                lenient=lenient))
    report = aggregate(results, [t.excluded_from_7avg for t in tasks])
    _emit_suite_report(report, tasks, out_path, fmt)


def _emit_suite_report(report, tasks, out_path: str | None, fmt: str) -> None:
    payload = suite_report_json(report, tasks)
    if out_path:
        Path(out_path).write_text(payload, encoding="utf-8")
    if fmt == "json":
        click.echo(payload, nl=False)
        return
    shots = {t.name: t.n_shots for t in tasks}
    for r in report.results:
        shot = shots.get(r.task_name)
        shot_text = f"{shot}-shot" if shot is not None else "-"
        click.echo(f"{r.task_name:14s} {r.metric_name:8s} {shot_text:8s} "
                   f"{display_round(r.value):6.2f}")
    click.echo(f"{'Avg':14s} {'':8s} {'':8s} {display_round(report.avg):6.2f}")
    if report.avg_excl is not None:
        click.echo(f"{'7-Avg':14s} {'':8s} {'':8s} "
                   f"{display_round(report.avg_excl):6.2f}")


if __name__ == "__main__":
    main()
