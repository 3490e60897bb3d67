"""Format-specific subtitle parsers.

Each parser is total over bytes: malformed input yields warnings in the
returned document, never an exception. Only resource-limit overruns
(ParseLimits) raise, and they raise LimitExceeded deliberately.
"""

from .srt import parse_srt, serialize_srt
from .jacosub import parse_jacosub
from .microdvd import parse_microdvd
from .sami import parse_sami
from .markup import parse_markup, serialize_markup, KNOWN_TAGS, FONT_ATTRIBUTES

__all__ = [
    "parse_srt",
    "serialize_srt",
    "parse_jacosub",
    "parse_microdvd",
    "parse_sami",
    "parse_markup",
    "serialize_markup",
    "KNOWN_TAGS",
    "FONT_ATTRIBUTES",
]
