"""Content-based subtitle format detection.

Probes the first lines of the payload against a fixed rule ladder; the
first line that matches any rule decides, with earlier rules in the
ladder winning on a line that matches several. Detection never raises:
unrecognizable bytes give FormatId.UNKNOWN.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import FormatId

MAX_PROBE_LINES = 128
_PROBE_LINE_BYTES = 4096  # probing never needs more of one line

_JACOSUB_STAMPS = re.compile(r"^\d{1,2}:\d{2}:\d{2}\.\d{1,2}\s+\d{1,2}:\d{2}:\d{2}\.\d{1,2}(\s|$)")
_MICRODVD = re.compile(r"^\{\d+\}\{\d+\}")
_SRT_TIMING = re.compile(r"^\d{1,4}:\d{1,2}:\d{1,2}[,.]\d{1,3}\s*-->\s*\d{1,4}:\d{1,2}:\d{1,2}[,.]\d{1,3}")
_INTEGER = re.compile(r"^\d+$")


@dataclass(frozen=True)
class ProbeResult:
    """Outcome of detection: the format, the 1-based line that decided
    it, and a short evidence snippet (both zeroed for UNKNOWN)."""

    format: FormatId
    line: int
    evidence: str


def _hit(format_id: FormatId, number: int, text: str) -> ProbeResult:
    return ProbeResult(format_id, number, text[:80])


def detect_format(data: bytes, max_probe_lines: int = MAX_PROBE_LINES) -> ProbeResult:
    body = data[3:] if data.startswith(b"\xef\xbb\xbf") else data
    previous_is_integer = False
    for number, raw_line in enumerate(body.split(b"\n"), start=1):
        if number > max_probe_lines:
            break
        text = raw_line[:_PROBE_LINE_BYTES].decode("utf-8", "replace").strip()
        lowered = text.lower()
        if not text:
            previous_is_integer = False
            continue
        if "[script info]" in lowered:
            return _hit(FormatId.SSA_ASS, number, text)
        if text.startswith("WEBVTT"):
            return _hit(FormatId.VTT, number, text)
        if "<sami>" in lowered:
            return _hit(FormatId.SAMI, number, text)
        if _JACOSUB_STAMPS.match(text):
            return _hit(FormatId.JACOSUB, number, text)
        if _MICRODVD.match(text):
            return _hit(FormatId.MICRODVD, number, text)
        if "[information]" in lowered:
            return _hit(FormatId.SUBVIEWER, number, text)
        if previous_is_integer and _SRT_TIMING.match(text):
            return _hit(FormatId.SRT, number, text)
        previous_is_integer = bool(_INTEGER.match(text))
    return ProbeResult(FormatId.UNKNOWN, 0, "")
