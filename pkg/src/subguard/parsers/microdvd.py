"""MicroDVD (.sub) parsing.

Frame-based cues ``{start}{end}text``. A leading ``{0}{0}`` or
``{1}{1}`` line whose text parses as a number declares the frame rate.
``|`` separates visual lines; ``{key:value}`` control codes at the
start of a visual line carry styling. Codes map onto the same markup
model the HTML-ish formats use so downstream sanitizing and scanning
see one tree shape.
"""

from __future__ import annotations

import re
from typing import List, Tuple

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
    TreeBuilder,
    W_MALFORMED_LINE,
    W_NESTING_TOO_DEEP,
    WarningRecord,
)
from .common import (
    check_cue_budget,
    split_lines,
    strip_bom,
    swap_if_reversed,
)

DEFAULT_FPS = 23.976
MAX_FPS = 1000.0

# Frame counts beyond ten digits are garbage, not cinema; refusing
# them keeps the frame arithmetic in safe float range.
_CUE_RE = re.compile(r"^\{(\d{1,10})\}\{(\d{1,10})\}(.*)$")
_CODE_RE = re.compile(r"^\{([a-zA-Z]):([^{}]*)\}")


def _frame_millis(frame: int, fps: float) -> int:
    return round(frame * 1000.0 / fps)


def _color_value(raw: str) -> str:
    # MicroDVD colors are $BBGGRR; flip to the usual #RRGGBB.
    if re.fullmatch(r"\$[0-9a-fA-F]{6}", raw):
        b, g, r = raw[1:3], raw[3:5], raw[5:7]
        return f"#{r}{g}{b}".lower()
    return raw


def _wrap_segment(codes: List[Tuple[str, str]], text: str) -> SpanNode:
    node: SpanNode = Text(text)
    for key, value in reversed(codes):
        key = key.lower()
        if key == "y":
            for flag in reversed([f.strip().lower() for f in value.split(",")]):
                if flag in ("i", "b", "u"):
                    node = Element(flag, (), (node,))
        elif key == "c":
            node = Element("font", (("color", _color_value(value)),), (node,))
        elif key == "f":
            node = Element("font", (("face", value),), (node,))
        elif key == "s":
            node = Element("font", (("size", value),), (node,))
        else:
            node = Element("span", (("data-code", f"{key}:{value}"),), (node,))
    return node


def _segment_nodes(
    raw_text: str, limits: ParseLimits, location, warnings: List[WarningRecord]
) -> Tuple[SpanNode, ...]:
    builder = TreeBuilder()
    first = True
    for segment in raw_text.split("|"):
        codes: List[Tuple[str, str]] = []
        rest = segment
        while True:
            code = _CODE_RE.match(rest)
            if code is None:
                break
            codes.append((code.group(1), code.group(2)))
            rest = rest[code.end() :]
        if not rest and not codes:
            continue  # empty visual line carries nothing
        if len(codes) > limits.max_span_depth:
            # Each code nests one wrapper; respect the depth budget.
            warnings.append(
                WarningRecord(
                    W_NESTING_TOO_DEEP,
                    f"{len(codes)} control codes on one visual line; extras dropped",
                    location,
                )
            )
            codes = codes[: limits.max_span_depth]
        if not first:
            builder.add_text("\n")
        first = False
        builder.add_node(_wrap_segment(codes, rest))
    return builder.finish()


def parse_microdvd(data: bytes, limits: ParseLimits = DEFAULT_LIMITS) -> SubtitleDocument:
    warnings: List[WarningRecord] = []
    body = strip_bom(data)
    lines = split_lines(body, limits, warnings)

    fps = DEFAULT_FPS
    fps_decided = False
    cues: List[Cue] = []

    for ln in lines:
        text = ln.text
        if not text.strip():
            continue
        match = _CUE_RE.match(text.strip())
        if match is None:
            warnings.append(
                WarningRecord(
                    W_MALFORMED_LINE, "line is not a {start}{end} cue", ln.location
                )
            )
            continue
        start_frame = int(match.group(1))
        end_frame = int(match.group(2))
        payload = match.group(3)
        if not fps_decided:
            fps_decided = True
            if start_frame == end_frame and start_frame in (0, 1):
                declared = _parse_fps(payload)
                if declared is not None:
                    if 0.0 < declared <= MAX_FPS:
                        fps = declared
                    else:
                        warnings.append(
                            WarningRecord(
                                W_MALFORMED_LINE,
                                f"declared frame rate {declared} out of range; "
                                f"using {DEFAULT_FPS}",
                                ln.location,
                            )
                        )
                    continue
        start_ms = _frame_millis(start_frame, fps)
        end_ms = _frame_millis(end_frame, fps)
        start_ms, end_ms = swap_if_reversed(start_ms, end_ms, ln.location, warnings)
        check_cue_budget(len(cues), limits)
        cues.append(
            Cue(
                start=TimeStamp(start_ms),
                end=TimeStamp(end_ms),
                content=_segment_nodes(payload, limits, ln.location, warnings),
                raw_text=payload,
                index=len(cues) + 1,
                span=(ln.start, ln.end),
                line=ln.number,
            )
        )

    return SubtitleDocument(
        format=FormatId.MICRODVD,
        cues=tuple(cues),
        warnings=tuple(warnings),
        source_length=len(data),
    )


def _parse_fps(payload: str):
    candidate = payload.strip().replace(",", ".", 1)
    if not re.fullmatch(r"\d{1,6}(\.\d{1,6})?", candidate):
        return None
    return float(candidate)
