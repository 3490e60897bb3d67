"""Detection-driven parsing and conversion to canonical SubRip."""

from __future__ import annotations

from typing import Tuple

from .detect import ProbeResult, detect_format
from .errors import ConversionUnsupported, UnknownFormat
from .model import DEFAULT_LIMITS, FormatId, PARSED_FORMATS, ParseLimits, SubtitleDocument
from .parsers import parse_jacosub, parse_microdvd, parse_sami, parse_srt, serialize_srt

_PARSERS = {
    FormatId.SRT: parse_srt,
    FormatId.JACOSUB: parse_jacosub,
    FormatId.MICRODVD: parse_microdvd,
    FormatId.SAMI: parse_sami,
}


def parse_any(
    data: bytes, limits: ParseLimits = DEFAULT_LIMITS
) -> Tuple[SubtitleDocument, ProbeResult]:
    """Detect the format and parse with the matching parser.

    Raises UnknownFormat when nothing matched, ConversionUnsupported
    when the format is recognized but only detected, not decoded.
    """
    probe = detect_format(data)
    if probe.format is FormatId.UNKNOWN:
        raise UnknownFormat("payload does not look like any known subtitle format")
    if probe.format not in PARSED_FORMATS:
        raise ConversionUnsupported(
            f"format {probe.format.value} is recognized but has no decoder"
        )
    parser = _PARSERS[probe.format]
    return parser(data, limits), probe


def convert_to_srt(data: bytes, limits: ParseLimits = DEFAULT_LIMITS) -> bytes:
    """Any decodable subtitle payload to canonical SubRip bytes."""
    document, _ = parse_any(data, limits)
    return serialize_srt(document)
