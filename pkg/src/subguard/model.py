"""Shared domain types: timestamps, markup trees, cues, documents.

Everything here is immutable after construction and safe to share
between threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple, Union

# Comfortably beyond 99:59:59,999; no upper cap is enforced.
MAX_DISPLAY_MS = 99 * 3600_000 + 59 * 60_000 + 59 * 1000 + 999


class FormatId(enum.Enum):
    SRT = "srt"
    JACOSUB = "jacosub"
    MICRODVD = "microdvd"
    SAMI = "sami"
    SSA_ASS = "ssa/ass"  # detect-only
    SUBVIEWER = "subviewer"  # detect-only
    VTT = "vtt"  # detect-only
    UNKNOWN = "unknown"


#: Formats that have a full parser (the rest are detect-only).
PARSED_FORMATS = frozenset(
    {FormatId.SRT, FormatId.JACOSUB, FormatId.MICRODVD, FormatId.SAMI}
)


@dataclass(frozen=True)
class Location:
    """Position in the raw input: 1-based line, 0-based byte offset."""

    line: int
    byte_offset: int


@dataclass(frozen=True, order=True)
class TimeStamp:
    """Non-negative milliseconds since media start."""

    millis: int

    def __post_init__(self) -> None:
        if self.millis < 0:
            raise ValueError(f"negative timestamp: {self.millis}")

    def to_srt(self) -> str:
        ms = self.millis
        h, rem = divmod(ms, 3600_000)
        m, rem = divmod(rem, 60_000)
        s, frac = divmod(rem, 1000)
        return f"{h:02d}:{m:02d}:{s:02d},{frac:03d}"


@dataclass(frozen=True)
class Text:
    """Leaf node: literal visible text."""

    content: str


@dataclass(frozen=True)
class Element:
    """Markup node: lowercase tag, ordered unique attributes, children.

    Attribute names are lowercased and deduplicated (first occurrence
    wins) at construction, so the uniqueness invariant holds for every
    Element regardless of how it was built.
    """

    tag: str
    attributes: Tuple[Tuple[str, str], ...] = ()
    children: Tuple["SpanNode", ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "tag", self.tag.lower())
        seen = set()
        cleaned = []
        for name, value in self.attributes:
            low = name.lower()
            if low in seen:
                continue
            seen.add(low)
            cleaned.append((low, value))
        object.__setattr__(self, "attributes", tuple(cleaned))
        object.__setattr__(self, "children", tuple(self.children))

    def attribute(self, name: str) -> Optional[str]:
        low = name.lower()
        for attr, value in self.attributes:
            if attr == low:
                return value
        return None


SpanNode = Union[Text, Element]


# Warning codes.  Scanner hazard rules and the fuzzer's coverage check
# key off these exact strings, so they are constants rather than ad-hoc
# literals in the parsers.
W_ENCODING_REPLACEMENT = "EncodingReplacement"
W_TIMES_SWAPPED = "TimesSwapped"
W_MALFORMED_BLOCK = "MalformedBlock"
W_MALFORMED_LINE = "MalformedLine"
W_NO_SYNC_BLOCKS = "NoSyncBlocks"
W_UNTERMINATED_TAG = "UnterminatedTag"
W_UNKNOWN_TAG = "UnknownTag"
W_UNCLOSED_ELEMENT = "UnclosedElement"
W_NESTING_TOO_DEEP = "NestingTooDeep"
W_DIRECTIVE_UNTERMINATED = "DirectiveUnterminated"
W_TRUNCATED_ESCAPE = "TruncatedEscape"
W_SHIFT_OUT_OF_RANGE = "ShiftOutOfRange"
W_UNSUPPORTED_TIME_SYNTAX = "UnsupportedTimeSyntax"

PARSER_WARNING_CODES = frozenset(
    {
        W_ENCODING_REPLACEMENT,
        W_TIMES_SWAPPED,
        W_MALFORMED_BLOCK,
        W_MALFORMED_LINE,
        W_NO_SYNC_BLOCKS,
        W_UNTERMINATED_TAG,
        W_UNKNOWN_TAG,
        W_UNCLOSED_ELEMENT,
        W_NESTING_TOO_DEEP,
        W_DIRECTIVE_UNTERMINATED,
        W_TRUNCATED_ESCAPE,
        W_SHIFT_OUT_OF_RANGE,
        W_UNSUPPORTED_TIME_SYNTAX,
    }
)


@dataclass(frozen=True)
class WarningRecord:
    code: str
    message: str
    location: Optional[Location] = None


@dataclass(frozen=True)
class Cue:
    """One timed subtitle: times, markup tree, and its source span.

    ``raw_text`` is the lossily decoded exact byte span of the cue's
    text payload; ``span`` is that payload's (start, end) byte range in
    the source buffer.
    """

    start: TimeStamp
    end: TimeStamp
    content: Tuple[SpanNode, ...] = ()
    raw_text: str = ""
    index: Optional[int] = None
    span: Optional[Tuple[int, int]] = None
    line: Optional[int] = None

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError("cue start after end; the parser must repair first")
        object.__setattr__(self, "content", tuple(self.content))


@dataclass(frozen=True)
class SubtitleDocument:
    format: FormatId
    cues: Tuple[Cue, ...] = ()
    warnings: Tuple[WarningRecord, ...] = ()
    source_length: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "cues", tuple(self.cues))
        object.__setattr__(self, "warnings", tuple(self.warnings))


@dataclass(frozen=True)
class ParseLimits:
    """Resource ceilings enforced by every parser.

    The line-size default matches the limit media players apply to
    subtitle line reads; exceeding any field raises LimitExceeded
    instead of silently truncating (truncation could split a payload
    across cues and blind the scanner).
    """

    max_line_bytes: int = 204800
    max_cues: int = 100000
    max_span_depth: int = 32

    def __post_init__(self) -> None:
        if self.max_line_bytes <= 0 or self.max_cues <= 0 or self.max_span_depth <= 0:
            raise ValueError("all parse limits must be positive")


DEFAULT_LIMITS = ParseLimits()


def flatten(content: Iterable[SpanNode]) -> str:
    """Concatenate all Text leaves in document order.

    Total: never raises, never introduces markup characters.
    """
    out = []
    stack = list(reversed(list(content)))
    while stack:
        node = stack.pop()
        if isinstance(node, Text):
            out.append(node.content)
        else:
            stack.extend(reversed(node.children))
    return "".join(out)


class TreeBuilder:
    """Accumulates SpanNodes, merging adjacent Text leaves.

    Parsers funnel output through this so content tuples never contain
    two Text nodes in a row and never contain empty Text nodes; that
    canonical form is what makes structural round-trip comparison
    meaningful.
    """

    def __init__(self) -> None:
        self._nodes: list = []
        self._text: list = []

    def add_text(self, chunk: str) -> None:
        if chunk:
            self._text.append(chunk)

    def add_node(self, node: SpanNode) -> None:
        if isinstance(node, Text):
            self.add_text(node.content)
            return
        self._flush()
        self._nodes.append(node)

    def _flush(self) -> None:
        if self._text:
            self._nodes.append(Text("".join(self._text)))
            self._text = []

    def finish(self) -> Tuple[SpanNode, ...]:
        self._flush()
        return tuple(self._nodes)
