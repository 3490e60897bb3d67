"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class SubguardError(Exception):
    """Base class for every error this package raises on purpose."""


class LimitExceeded(SubguardError):
    """A resource limit (line size, cue count) was breached.

    This is a defensive stop, not a malformed-input verdict: parsers
    recover from malformed input, but refuse to do unbounded work.
    """


class UnknownFormat(SubguardError):
    """The input did not match any supported subtitle format."""


class ConversionUnsupported(UnknownFormat):
    """The format was detected but has no parser (detect-only format)."""


class NotAZip(SubguardError):
    """No end-of-central-directory record found in the buffer."""


class CorruptCentralDirectory(SubguardError):
    """Central directory offsets or records are out of bounds."""


class TraversalRefused(SubguardError):
    """Strict extraction refused an archive with escaping entries."""


class IoFailure(SubguardError):
    """Filesystem operation failed during extraction."""


class EmptyMovieTags(SubguardError):
    """Movie filename yields no tags to compare against."""


class ManifestUnreadable(SubguardError):
    """Repository manifest could not be opened or decoded."""


class ManifestSyntax(SubguardError):
    """Repository manifest is not line-oriented text at all."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class EmptyCorpus(SubguardError):
    """An operation that needs a non-empty corpus got an empty one
    (no fuzz seeds, or a repository with nothing ingested)."""


class NotReproducible(SubguardError):
    """Input handed to the minimizer does not fail to begin with."""


class InvariantViolation(SubguardError):
    """A parser-internal safety assertion fired (e.g. cursor past end)."""
