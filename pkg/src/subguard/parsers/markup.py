"""Tolerant HTML-like markup parsing for cue bodies.

The contract that matters: the scan for a tag token ends at the first
unquoted '>' or at end-of-input, whichever comes first — never beyond.
Historic subtitle decoders kept reading for '>' past the end of the
buffer (CVE-2017-8310); here every cursor move is bounds-asserted.

Constructs that do not complete stay in the output as literal Text so
the threat scanner sees the raw evidence; nothing is silently dropped
except recognized, complete markup tokens.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

from ..errors import InvariantViolation
from ..model import (
    DEFAULT_LIMITS,
    Element,
    Location,
    ParseLimits,
    SpanNode,
    Text,
    TreeBuilder,
    W_NESTING_TOO_DEEP,
    W_UNCLOSED_ELEMENT,
    W_UNKNOWN_TAG,
    W_UNTERMINATED_TAG,
    WarningRecord,
)

KNOWN_TAGS = frozenset({"b", "i", "u", "font", "img", "a", "span"})
VOID_TAGS = frozenset({"img"})

#: Styling attributes recognized on <font>, mirroring the set media
#: players scan for. Kept for reference by the sanitizer policies.
FONT_ATTRIBUTES = (
    "face",
    "family",
    "size",
    "color",
    "outline-color",
    "shadow-color",
    "outline-level",
    "shadow-level",
    "back-color",
    "alpha",
)

_NAME_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")
_NAME_CHARS = _NAME_START | frozenset("0123456789-")
_ATTR_CHARS = _NAME_START | frozenset("0123456789_:.-")
_WS = frozenset(" \t\r\n\f")


class _Cursor:
    """Monotone position tracker; any move outside [pos, len] is a bug."""

    __slots__ = ("length", "pos")

    def __init__(self, length: int) -> None:
        self.length = length
        self.pos = 0

    def seek(self, new: int) -> None:
        if new < self.pos or new > self.length:
            raise InvariantViolation(
                f"markup cursor moved to {new} (pos {self.pos}, len {self.length})"
            )
        self.pos = new


@dataclass(frozen=True)
class _TagToken:
    closing: bool
    name: str
    attributes: Tuple[Tuple[str, str], ...]
    self_closing: bool
    end: int  # index just past '>'
    terminated: bool


def _scan_token(text: str, start: int) -> Optional[_TagToken]:
    """Parse one '<...>' token starting at ``start`` ('<').

    Returns None when '<' does not open a tag at all (kept as literal).
    An unterminated token is returned with terminated=False and
    end == len(text).
    """
    n = len(text)
    i = start + 1
    closing = False
    if i < n and text[i] == "/":
        closing = True
        i += 1
    j = i
    if j < n and text[j] in _NAME_START:
        j += 1
        while j < n and text[j] in _NAME_CHARS:
            j += 1
    if j == i:
        return None
    name = text[i:j].lower()
    i = j
    attrs: List[Tuple[str, str]] = []
    self_closing = False
    while True:
        while i < n and text[i] in _WS:
            i += 1
        if i >= n:
            return _TagToken(closing, name, tuple(attrs), False, n, False)
        ch = text[i]
        if ch == ">":
            return _TagToken(closing, name, tuple(attrs), self_closing, i + 1, True)
        if ch == "/" and i + 1 < n and text[i + 1] == ">":
            self_closing = True
            i += 1
            continue
        if ch in ('"', "'"):
            # Stray quote outside a value: skip the whole quoted run so
            # the token boundary never depends on what is inside it.
            close = text.find(ch, i + 1)
            if close < 0:
                return _TagToken(closing, name, tuple(attrs), False, n, False)
            i = close + 1
            continue
        if ch not in _NAME_START:
            i += 1
            continue
        k = i + 1
        while k < n and text[k] in _ATTR_CHARS:
            k += 1
        attr_name = text[i:k]
        i = k
        while i < n and text[i] in _WS:
            i += 1
        value = ""
        if i < n and text[i] == "=":
            i += 1
            while i < n and text[i] in _WS:
                i += 1
            if i < n and text[i] in ('"', "'"):
                quote = text[i]
                close = text.find(quote, i + 1)
                if close < 0:
                    return _TagToken(closing, name, tuple(attrs), False, n, False)
                value = text[i + 1 : close]
                i = close + 1
            else:
                k = i
                while k < n and text[k] not in _WS and text[k] not in ('>', '"', "'"):
                    k += 1
                value = text[i:k]
                i = k
        attrs.append((attr_name, value))


class _Frame:
    __slots__ = ("tag", "attributes", "builder", "location")

    def __init__(self, tag, attributes, location) -> None:
        self.tag = tag
        self.attributes = attributes
        self.builder = TreeBuilder()
        self.location = location


def parse_markup(
    text: str,
    limits: ParseLimits = DEFAULT_LIMITS,
    location: Optional[Location] = None,
    text_filter: Optional[Callable[[str], str]] = None,
) -> Tuple[Tuple[SpanNode, ...], List[WarningRecord]]:
    """Best-effort markup tree over a cue body. Total: never raises on
    any input (cursor violations would signal a bug in this parser, not
    bad input).

    Known tags become Elements; unknown tags and tokens cut off by
    end-of-input stay as literal Text with a warning. ``text_filter``
    (entity decoding, for formats that need it) is applied to each
    literal chunk as tokenized, never across token boundaries.
    """
    warnings: List[WarningRecord] = []
    cursor = _Cursor(len(text))
    root = _Frame("", (), location)
    stack: List[_Frame] = [root]

    def emit_text(chunk: str) -> None:
        if text_filter is not None:
            chunk = text_filter(chunk)
        stack[-1].builder.add_text(chunk)

    def close_frame() -> None:
        frame = stack.pop()
        stack[-1].builder.add_node(
            Element(frame.tag, frame.attributes, frame.builder.finish())
        )

    n = len(text)
    while cursor.pos < n:
        lt = text.find("<", cursor.pos)
        if lt < 0:
            emit_text(text[cursor.pos :])
            cursor.seek(n)
            break
        if lt > cursor.pos:
            emit_text(text[cursor.pos : lt])
            cursor.seek(lt)
        token = _scan_token(text, lt)
        if token is None:
            emit_text("<")
            cursor.seek(lt + 1)
            continue
        if not token.terminated:
            warnings.append(
                WarningRecord(
                    W_UNTERMINATED_TAG,
                    f"tag <{token.name}> hit end of input before '>'",
                    location,
                )
            )
            emit_text(text[lt:])
            cursor.seek(n)
            break
        if token.name not in KNOWN_TAGS:
            warnings.append(
                WarningRecord(
                    W_UNKNOWN_TAG, f"unrecognized tag <{token.name}> kept as text", location
                )
            )
            emit_text(text[lt : token.end])
            cursor.seek(token.end)
            continue
        if token.closing:
            if token.name not in VOID_TAGS:
                for depth in range(len(stack) - 1, 0, -1):
                    if stack[depth].tag == token.name:
                        while len(stack) > depth:
                            close_frame()
                        break
                # No matching open element: the token is still markup;
                # drop it (both decode routes strip complete known tags).
            cursor.seek(token.end)
            continue
        if token.name in VOID_TAGS or token.self_closing:
            # A childless element still adds one level to the tree, so
            # it honors the same ceiling as an opening tag.
            if len(stack) - 1 >= limits.max_span_depth:
                warnings.append(
                    WarningRecord(
                        W_NESTING_TOO_DEEP,
                        f"element <{token.name}> beyond depth {limits.max_span_depth}; dropped",
                        location,
                    )
                )
            else:
                stack[-1].builder.add_node(Element(token.name, token.attributes, ()))
            cursor.seek(token.end)
            continue
        if len(stack) - 1 >= limits.max_span_depth:
            warnings.append(
                WarningRecord(
                    W_NESTING_TOO_DEEP,
                    f"element <{token.name}> beyond depth {limits.max_span_depth}; unwrapped",
                    location,
                )
            )
            cursor.seek(token.end)
            continue
        stack.append(_Frame(token.name, token.attributes, location))
        cursor.seek(token.end)

    while len(stack) > 1:
        warnings.append(
            WarningRecord(
                W_UNCLOSED_ELEMENT,
                f"element <{stack[-1].tag}> never closed; closed at end of input",
                stack[-1].location,
            )
        )
        close_frame()
    return root.builder.finish(), warnings


def serialize_markup(content: Tuple[SpanNode, ...]) -> str:
    """Re-emit a markup tree as tag text (inverse of parse_markup on
    parser-produced trees)."""
    out: List[str] = []
    _serialize_into(content, out)
    return "".join(out)


def _serialize_into(nodes, out: List[str]) -> None:
    for node in nodes:
        if isinstance(node, Text):
            out.append(node.content)
            continue
        out.append("<")
        out.append(node.tag)
        for name, value in node.attributes:
            out.append(" ")
            out.append(name)
            if value:
                quote = "'" if '"' in value else '"'
                out.append(f"={quote}{value}{quote}")
        out.append(">")
        if node.tag in VOID_TAGS:
            continue
        _serialize_into(node.children, out)
        out.append(f"</{node.tag}>")
