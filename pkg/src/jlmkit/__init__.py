"""jlmkit: data-side toolkit for Japanese-oriented language models.

Three subsystems, composable separately or through the ``jlmkit`` CLI:

- ``jlmkit.tokenizer``: byte-fallback subword tokenizer, merge training,
  budget-constrained vocabulary extension, character-per-token benchmarks.
- ``jlmkit.pipeline``: streaming corpus curation (normalize, PII redaction,
  exact/near dedup, heuristic and classifier quality filtering).
- ``jlmkit.evalharness``: likelihood-argmax multiple choice, normalized
  exact match, ROUGE-2, n-shot prompting, and suite aggregation.
"""

__version__ = "0.1.0"
