"""Independent plain-text projections of raw cue text.

Each function recomputes, from a cue's raw_text and by a deliberately
different route than the tree parsers, the text a viewer would see.
``flatten(cue.content) == project(cue.raw_text)`` is the cross-check
invariant the fuzzer and the property tests enforce: if the structured
decode and this projection ever disagree, one of them mishandled the
input.

Only trivial constants (the known-tag set) are shared with the parsers;
the scanning logic here must not call into them.
"""

from __future__ import annotations

import html
import re
from typing import List

from .model import FormatId
from .parsers.markup import KNOWN_TAGS

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9-]*")
_MDVD_CODE_RE = re.compile(r"^\{[A-Za-z]:[^{}]*\}")
_JSS_TOKEN_RE = re.compile(r"\\(.)|\\$|\{[^}]*\}|\{[^}]*$|(.)", re.DOTALL)


def _token_end(raw: str, start: int) -> int:
    """End index (just past '>') of the tag token opening at raw[start],
    or -1 when end-of-input arrives first. Quote runs hide '>'."""
    i = start + 1
    n = len(raw)
    while i < n:
        ch = raw[i]
        if ch == ">":
            return i + 1
        if ch in ('"', "'"):
            close = raw.find(ch, i + 1)
            if close < 0:
                return -1
            i = close + 1
            continue
        i += 1
    return -1


def _markup_segments(raw: str) -> List[str]:
    """Split raw text into the same literal chunks the tree parser
    emits: text runs, kept unknown-tag tokens, lone '<', and an
    unterminated tail. Complete known-tag tokens produce no chunk."""
    segments: List[str] = []
    i = 0
    n = len(raw)
    while i < n:
        lt = raw.find("<", i)
        if lt < 0:
            segments.append(raw[i:])
            break
        if lt > i:
            segments.append(raw[i:lt])
        after = lt + 1
        if after < n and raw[after] == "/":
            after += 1
        name_match = _NAME_RE.match(raw, after)
        if name_match is None:
            segments.append("<")
            i = lt + 1
            continue
        end = _token_end(raw, lt)
        if end < 0:
            segments.append(raw[lt:])
            break
        if name_match.group(0).lower() in KNOWN_TAGS:
            i = end
            continue
        segments.append(raw[lt:end])
        i = end
    return segments


def project_markup(raw: str, decode_entities: bool = False) -> str:
    segments = _markup_segments(raw)
    if decode_entities:
        segments = [html.unescape(s) for s in segments]
    return "".join(segments)


def project_srt(raw: str) -> str:
    return project_markup(raw)


def project_sami(raw: str) -> str:
    return project_markup(raw, decode_entities=True)


def project_jacosub(raw: str) -> str:
    out: List[str] = []
    for match in _JSS_TOKEN_RE.finditer(raw):
        token = match.group(0)
        if match.group(1) is not None:
            follow = match.group(1)
            if follow == "n":
                out.append("\n")
            elif not follow.isalpha():
                out.append(follow)
        elif token == "\\":
            pass  # dangling escape at end of text
        elif token.startswith("{"):
            if not token.endswith("}"):
                break  # unterminated comment swallows the rest
        else:
            out.append(token)
    return "".join(out)


def project_microdvd(raw: str) -> str:
    kept: List[str] = []
    for segment in raw.split("|"):
        if segment == "":
            continue
        while True:
            code = _MDVD_CODE_RE.match(segment)
            if code is None:
                break
            segment = segment[code.end() :]
        kept.append(segment)
    return "\n".join(kept)


_PROJECTORS = {
    FormatId.SRT: project_srt,
    FormatId.SAMI: project_sami,
    FormatId.JACOSUB: project_jacosub,
    FormatId.MICRODVD: project_microdvd,
}


def project(format_id: FormatId, raw: str) -> str:
    """Dispatch to the per-format projection."""
    try:
        projector = _PROJECTORS[format_id]
    except KeyError:
        raise ValueError(f"no plain-text projection for format {format_id.value}")
    return projector(raw)
