"""SAMI (.smi) parsing.

Cues are <SYNC Start=ms> blocks; a block whose visible text is empty
(the conventional &nbsp; clear) terminates the previous cue without
producing one. The last visible cue gets a fixed default duration.

Block text is HTML-ish: structural <P> wrappers vanish, <br> becomes a
line break, raw newline runs collapse to single spaces, and character
entities are decoded after tokenization so entity-encoded angle
brackets can never create elements.
"""

from __future__ import annotations

import html
import re
from bisect import bisect_right
from typing import List, Optional, Tuple

from ..model import (
    Cue,
    DEFAULT_LIMITS,
    Element,
    FormatId,
    ParseLimits,
    SpanNode,
    SubtitleDocument,
    Text,
    TimeStamp,
    W_MALFORMED_BLOCK,
    W_NO_SYNC_BLOCKS,
    WarningRecord,
    Location,
    flatten,
)
from .common import check_cue_budget, span_text, split_lines, strip_bom
from .markup import parse_markup

LAST_CUE_MS = 4000

_SYNC_RE = re.compile(rb"<sync\b[^>]*>", re.IGNORECASE)
_START_RE = re.compile(rb"""start\s*=\s*["']?(-?\d+)""", re.IGNORECASE)
_BODY_CLOSE_RE = re.compile(rb"</\s*(?:body|sami)\b", re.IGNORECASE)
_NEWLINE_RUN_RE = re.compile(r"[ \t\r\f]*\n[ \t\r\f\n]*")
_P_TAG_RE = re.compile(r"</?p\b[^>]*>", re.IGNORECASE)
_BR_TAG_RE = re.compile(r"<br\s*/?\s*>", re.IGNORECASE)


def normalize_block(text: str) -> str:
    """Shared block-to-text normalization (whitespace, <p>, <br>)."""
    text = _NEWLINE_RUN_RE.sub(" ", text)
    text = _P_TAG_RE.sub("", text)
    text = _BR_TAG_RE.sub("\n", text)
    return text.strip()


def visible_empty(text: str) -> bool:
    return not text.replace("\xa0", " ").strip()


def _unescape_attributes(nodes: Tuple[SpanNode, ...]) -> Tuple[SpanNode, ...]:
    """Entity-decode attribute values (text leaves were already decoded
    chunk-by-chunk during tokenization)."""
    out: List[SpanNode] = []
    for node in nodes:
        if isinstance(node, Text):
            out.append(node)
        else:
            out.append(
                Element(
                    node.tag,
                    tuple((n, html.unescape(v)) for n, v in node.attributes),
                    _unescape_attributes(node.children),
                )
            )
    return tuple(out)


def parse_sami(data: bytes, limits: ParseLimits = DEFAULT_LIMITS) -> SubtitleDocument:
    warnings: List[WarningRecord] = []
    body = strip_bom(data)
    lines = split_lines(body, limits, warnings)
    line_starts = [ln.start for ln in lines]

    def line_of(offset: int) -> int:
        return max(1, bisect_right(line_starts, offset))

    matches = list(_SYNC_RE.finditer(body))
    if not matches:
        warnings.append(
            WarningRecord(
                W_NO_SYNC_BLOCKS, "no <SYNC> blocks found", Location(1, 0)
            )
        )
        return SubtitleDocument(
            format=FormatId.SAMI,
            cues=(),
            warnings=tuple(warnings),
            source_length=len(data),
        )

    # one (start_ms, raw_text, content, sync byte offset) per valid sync
    blocks: List[Tuple[int, str, Tuple[SpanNode, ...], int]] = []
    for pos, match in enumerate(matches):
        sync_line = line_of(match.start())
        location = Location(sync_line, match.start())
        start_attr = _START_RE.search(match.group(0))
        chunk_end = matches[pos + 1].start() if pos + 1 < len(matches) else len(body)
        body_close = _BODY_CLOSE_RE.search(body, match.end(), chunk_end)
        if body_close is not None:
            chunk_end = body_close.start()
        if start_attr is None:
            warnings.append(
                WarningRecord(
                    W_MALFORMED_BLOCK, "sync block has no usable Start", location
                )
            )
            continue
        start_ms = int(start_attr.group(1))
        if start_ms < 0:
            warnings.append(
                WarningRecord(
                    W_MALFORMED_BLOCK, "sync Start is negative; clamped to 0", location
                )
            )
            start_ms = 0
        # split_lines already reported any replacement runs in this span
        chunk = span_text(body, match.end(), chunk_end)
        raw_text = normalize_block(chunk)
        content, markup_warnings = parse_markup(
            raw_text, limits, location, text_filter=html.unescape
        )
        warnings.extend(markup_warnings)
        blocks.append(
            (start_ms, raw_text, _unescape_attributes(content), match.start())
        )

    cues: List[Cue] = []
    for pos, (start_ms, raw_text, content, offset) in enumerate(blocks):
        if visible_empty(flatten(content)):
            continue
        next_start: Optional[int] = (
            blocks[pos + 1][0] if pos + 1 < len(blocks) else None
        )
        if next_start is None:
            end_ms = start_ms + LAST_CUE_MS
        elif next_start < start_ms:
            warnings.append(
                WarningRecord(
                    W_MALFORMED_BLOCK,
                    "sync Start goes backwards; cue truncated to zero length",
                    Location(line_of(offset), offset),
                )
            )
            end_ms = start_ms
        else:
            end_ms = next_start
        check_cue_budget(len(cues), limits)
        span_end = blocks[pos + 1][3] if pos + 1 < len(blocks) else len(body)
        cues.append(
            Cue(
                start=TimeStamp(start_ms),
                end=TimeStamp(end_ms),
                content=content,
                raw_text=raw_text,
                index=len(cues) + 1,
                span=(offset, span_end),
                line=line_of(offset),
            )
        )

    return SubtitleDocument(
        format=FormatId.SAMI,
        cues=tuple(cues),
        warnings=tuple(warnings),
        source_length=len(data),
    )
