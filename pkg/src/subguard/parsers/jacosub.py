"""JACOsub (.jss) parsing.

The format carries two historically dangerous constructs, both modeled
here with explicit bounds checks:

* ``#S``/``#SHIFT``/``#T``/``#TIMERES`` global directives locate their
  payload at a fixed offset chosen by looking at the third character.
  Decoders that read that character or the payload without a length
  check ran past the buffer (CVE-2017-8312). Here a short directive
  yields W_SHIFT_OUT_OF_RANGE and is ignored.
* Inline ``\\X`` escapes consume two characters. A lone backslash at
  end of text made double-increment decoders skip the terminator
  (CVE-2017-8311). Here it yields W_TRUNCATED_ESCAPE and is dropped.

A cue directive token with no following space (CVE-2017-8313 in older
decoders) yields W_DIRECTIVE_UNTERMINATED and an empty cue text.
"""

from __future__ import annotations

import re
from typing import List, Optional, Tuple

from ..model import (
    Cue,
    DEFAULT_LIMITS,
    FormatId,
    ParseLimits,
    SubtitleDocument,
    Text,
    TimeStamp,
    W_DIRECTIVE_UNTERMINATED,
    W_MALFORMED_LINE,
    W_SHIFT_OUT_OF_RANGE,
    W_TRUNCATED_ESCAPE,
    W_UNSUPPORTED_TIME_SYNTAX,
    WarningRecord,
)
from .common import (
    check_cue_budget,
    split_lines,
    strip_bom,
    swap_if_reversed,
)

DEFAULT_TIME_RESOLUTION = 30

_STAMP = r"(\d{1,2}):(\d{2}):(\d{2})\.(\d{1,2})"
_CUE_RE = re.compile(rf"^\s*{_STAMP}\s+{_STAMP}(?:\s(.*))?$")
_FRAME_CUE_RE = re.compile(r"^\s*@\d+\s+@\d+\s")
_SHIFT_STAMP_RE = re.compile(rf"^([+-]?){_STAMP}$")
_UPPER_TOKEN_RE = re.compile(r"^[A-Z]+$")


def _stamp_millis(h: str, m: str, s: str, frac: str, timeres: int) -> int:
    base = (int(h) * 3600 + int(m) * 60 + int(s)) * 1000
    return base + int(frac) * 1000 // timeres


def _directive_payload(
    body: str, location, warnings: List[WarningRecord]
) -> Optional[Tuple[str, str]]:
    """Decode a '#' global directive body ("S..." or "T...").

    Payload position mimics the classic decoder, which read from the
    line at offset 6 (#SHIFT) or 8 (#TIMERES) when the character after
    #S/#T was alphabetic, else at offset 2 (short form "#S2", "#T100").
    ``body`` excludes the '#', so everything lands one earlier here.
    The length checks the classic decoder lacked are what keep this
    total.
    """
    kind = body[0].upper()
    long_offset = 5 if kind == "S" else 7
    offset = long_offset if len(body) > 1 and body[1].isalpha() else 1
    if offset >= len(body):
        warnings.append(
            WarningRecord(
                W_SHIFT_OUT_OF_RANGE,
                f"directive #{body} too short for its payload offset {offset}",
                location,
            )
        )
        return None
    return kind, body[offset:].strip()


def decode_text(
    text: str, location, warnings: List[WarningRecord]
) -> str:
    """Apply JACOsub inline syntax: two-character escapes and {comments}.

    ``\\n`` becomes a line break, other alphabetic escapes (font, color)
    are styling controls and vanish, ``\\<other>`` yields the literal
    character. Consumes at most len(text) characters by construction.
    """
    out: List[str] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\\":
            if i + 1 >= n:
                warnings.append(
                    WarningRecord(
                        W_TRUNCATED_ESCAPE,
                        "backslash at end of text has no escape character",
                        location,
                    )
                )
                break
            follow = text[i + 1]
            if follow == "n":
                out.append("\n")
            elif not follow.isalpha():
                out.append(follow)
            i += 2
            continue
        if ch == "{":
            close = text.find("}", i + 1)
            if close < 0:
                warnings.append(
                    WarningRecord(
                        W_MALFORMED_LINE,
                        "inline comment '{' never closed; rest of text dropped",
                        location,
                    )
                )
                break
            i = close + 1
            continue
        out.append(ch)
        i += 1
    return "".join(out)


def _split_directive(
    rest: str, location, warnings: List[WarningRecord]
) -> str:
    """Strip the cue directive token, returning the text that follows."""
    if not rest:
        return ""
    is_candidate = rest.startswith("[")
    if not is_candidate:
        head = rest.split(" ", 1)[0]
        is_candidate = bool(_UPPER_TOKEN_RE.match(head))
    if not is_candidate:
        return rest
    space = rest.find(" ")
    if space < 0:
        warnings.append(
            WarningRecord(
                W_DIRECTIVE_UNTERMINATED,
                "cue directive has no space before the text",
                location,
            )
        )
        return ""
    return rest[space + 1 :]


def parse_jacosub(data: bytes, limits: ParseLimits = DEFAULT_LIMITS) -> SubtitleDocument:
    warnings: List[WarningRecord] = []
    body = strip_bom(data)
    lines = split_lines(body, limits, warnings)

    timeres = DEFAULT_TIME_RESOLUTION
    shift_ms = 0
    cues: List[Cue] = []

    for ln in lines:
        stripped = ln.text.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            directive_body = stripped[1:]
            if directive_body[:1].upper() in ("S", "T"):
                decoded = _directive_payload(directive_body, ln.location, warnings)
                if decoded is None:
                    continue
                kind, payload = decoded
                if kind == "T":
                    if payload.isdigit() and int(payload) > 0:
                        timeres = int(payload)
                    else:
                        warnings.append(
                            WarningRecord(
                                W_MALFORMED_LINE,
                                f"unusable time resolution {payload!r}",
                                ln.location,
                            )
                        )
                else:
                    shift = _parse_shift(payload, timeres)
                    if shift is None:
                        warnings.append(
                            WarningRecord(
                                W_MALFORMED_LINE,
                                f"unusable shift value {payload!r}",
                                ln.location,
                            )
                        )
                    else:
                        shift_ms = shift
            continue
        if _FRAME_CUE_RE.match(stripped):
            warnings.append(
                WarningRecord(
                    W_UNSUPPORTED_TIME_SYNTAX,
                    "frame-based '@' cue timing is not supported; line skipped",
                    ln.location,
                )
            )
            continue
        cue_match = _CUE_RE.match(ln.text)
        if cue_match is None:
            warnings.append(
                WarningRecord(
                    W_MALFORMED_LINE, "line is neither directive nor cue", ln.location
                )
            )
            continue
        g = cue_match.groups()
        start_ms = max(0, _stamp_millis(*g[0:4], timeres) + shift_ms)
        end_ms = max(0, _stamp_millis(*g[4:8], timeres) + shift_ms)
        start_ms, end_ms = swap_if_reversed(start_ms, end_ms, ln.location, warnings)
        raw_text = _split_directive((g[8] or "").lstrip(), ln.location, warnings)
        decoded_text = decode_text(raw_text, ln.location, warnings)
        content = (Text(decoded_text),) if decoded_text else ()
        check_cue_budget(len(cues), limits)
        cues.append(
            Cue(
                start=TimeStamp(start_ms),
                end=TimeStamp(end_ms),
                content=content,
                raw_text=raw_text,
                index=len(cues) + 1,
                span=(ln.start, ln.end),
                line=ln.number,
            )
        )

    return SubtitleDocument(
        format=FormatId.JACOSUB,
        cues=tuple(cues),
        warnings=tuple(warnings),
        source_length=len(data),
    )


def _parse_shift(payload: str, timeres: int) -> Optional[int]:
    """Shift value: signed integer seconds or a signed timestamp."""
    if re.fullmatch(r"[+-]?\d+", payload):
        return int(payload) * 1000
    stamp = _SHIFT_STAMP_RE.match(payload)
    if stamp is None:
        return None
    sign = -1 if stamp.group(1) == "-" else 1
    return sign * _stamp_millis(*stamp.groups()[1:], timeres)
