"""Exception taxonomy shared across the toolkit.

Every error raised by the public API derives from ToolkitError so callers
(and the CLI) can distinguish our failures from genuine bugs. Scorer
backend failures get their own branch because the CLI maps them to a
separate exit code.
"""


class ToolkitError(Exception):
    """Base class for all toolkit errors. CLI maps these to exit code 1."""

    category = "error"


class VocabularyFormatError(ToolkitError):
    """A vocabulary artifact is malformed, has an unknown version, or
    violates a structural invariant."""

    category = "format"


class UnknownTokenIdError(ToolkitError):
    """Decode received an id outside the vocabulary."""

    category = "contract"

    def __init__(self, token_id: int, total_size: int):
        self.token_id = token_id
        super().__init__(
            f"unknown token id {token_id} (vocabulary size {total_size})"
        )


class InvalidByteSequenceError(ToolkitError):
    """Byte tokens did not reassemble into valid UTF-8."""

    category = "contract"


class EmptyCorpusError(ToolkitError):
    """An operation that needs corpus text received none."""

    category = "contract"


class DocumentTooShortError(ToolkitError):
    """Document is shorter than the configured shingle size."""

    category = "contract"


class ConfigError(ToolkitError):
    """Invalid pipeline/CLI configuration. Carries the offending fields."""

    category = "config"

    def __init__(self, message: str, fields: list[str] | None = None):
        self.fields = fields or []
        if self.fields:
            message = f"{message}: {', '.join(self.fields)}"
        super().__init__(message)


class DataFormatError(ToolkitError):
    """Task/instance/corpus input file is malformed."""

    category = "format"


class InsufficientExemplarsError(ToolkitError):
    """A task requested more shots than it has exemplars."""

    category = "contract"


class TemplateSlotError(ToolkitError):
    """A prompt template is missing a required slot."""

    category = "contract"


class ScorerError(ToolkitError):
    """A model scorer failed while evaluating an instance or choice."""

    category = "backend"


class ScorerBackendError(ScorerError):
    """The external scorer endpoint is unreachable or returned garbage.
    CLI maps this to exit code 2."""

    category = "backend"
