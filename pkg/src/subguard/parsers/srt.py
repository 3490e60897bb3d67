"""SubRip (.srt) parsing and canonical serialization.

parse_srt is total over bytes: blocks that cannot be understood are
skipped with a warning, never raised. serialize_srt emits the canonical
form (sequence number, comma millisecond separator, single space around
the arrow, LF line endings, one blank line between blocks) and is a
fixpoint under re-parsing.
"""

from __future__ import annotations

import re
from typing import List, Optional

from ..model import (
    Cue,
    DEFAULT_LIMITS,
    FormatId,
    ParseLimits,
    SubtitleDocument,
    TimeStamp,
    W_MALFORMED_BLOCK,
    WarningRecord,
)
from .common import (
    SourceLine,
    check_cue_budget,
    split_lines,
    strip_bom,
    swap_if_reversed,
)
from .markup import parse_markup, serialize_markup

# Tolerant timing line: 1+ hour digits, comma or dot before the
# fractional part, any spacing around the arrow. Trailing text
# (display coordinates) is ignored.
_TIMING_RE = re.compile(
    r"^\s*(\d{1,4}):(\d{1,2}):(\d{1,2})[,.](\d{1,3})"
    r"\s*-->\s*"
    r"(\d{1,4}):(\d{1,2}):(\d{1,2})[,.](\d{1,3})"
)
_INDEX_RE = re.compile(r"^\s*(\d+)\s*$")


def _millis(h: str, m: str, s: str, frac: str) -> int:
    # The fractional field is decimal: ",5" means 500 ms.
    return ((int(h) * 60 + int(m)) * 60 + int(s)) * 1000 + int(frac.ljust(3, "0"))


def parse_srt(data: bytes, limits: ParseLimits = DEFAULT_LIMITS) -> SubtitleDocument:
    warnings: List[WarningRecord] = []
    body = strip_bom(data)
    decoded = split_lines(body, limits, warnings)

    cues: List[Cue] = []
    i = 0
    n = len(decoded)
    while i < n:
        while i < n and not decoded[i].text.strip():
            i += 1
        if i >= n:
            break
        block_start = i
        block: List[SourceLine] = []
        while i < n and decoded[i].text.strip():
            block.append(decoded[i])
            i += 1

        j = 0
        index: Optional[int] = None
        index_match = _INDEX_RE.match(block[j].text)
        if index_match and j + 1 < len(block) and _TIMING_RE.match(block[j + 1].text):
            index = int(index_match.group(1))
            j += 1
        timing = _TIMING_RE.match(block[j].text)
        if timing is None:
            warnings.append(
                WarningRecord(
                    W_MALFORMED_BLOCK,
                    "block has no valid timing line; skipped",
                    decoded[block_start].location,
                )
            )
            continue
        g = timing.groups()
        start_ms = _millis(*g[0:4])
        end_ms = _millis(*g[4:8])
        start_ms, end_ms = swap_if_reversed(
            start_ms, end_ms, block[j].location, warnings
        )
        body_lines = block[j + 1 :]
        raw_text = "\n".join(ln.text for ln in body_lines)
        loc = (body_lines[0] if body_lines else block[j]).location
        content, markup_warnings = parse_markup(raw_text, limits, loc)
        warnings.extend(markup_warnings)
        check_cue_budget(len(cues), limits)
        cues.append(
            Cue(
                start=TimeStamp(start_ms),
                end=TimeStamp(end_ms),
                content=content,
                raw_text=raw_text,
                index=index if index is not None else len(cues) + 1,
                span=(decoded[block_start].start, block[-1].end),
                line=decoded[block_start].number,
            )
        )

    return SubtitleDocument(
        format=FormatId.SRT,
        cues=tuple(cues),
        warnings=tuple(warnings),
        source_length=len(data),
    )


def serialize_srt(document: SubtitleDocument) -> bytes:
    """Canonical SubRip rendering of any parsed document."""
    chunks: List[str] = []
    for position, cue in enumerate(document.cues, start=1):
        index = cue.index if cue.index is not None else position
        text = serialize_markup(cue.content)
        chunks.append(f"{index}\n{cue.start.to_srt()} --> {cue.end.to_srt()}\n{text}\n")
    return "\n".join(chunks).encode("utf-8")
