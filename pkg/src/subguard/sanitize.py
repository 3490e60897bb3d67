"""Policy-driven cleanup of parsed subtitle documents.

Three levels: NONE passes the document through, PARTIAL strips active
content (event handlers, script URLs, links, external images) while
keeping styling, STRICT keeps only b/i/u and font face/size/color.

Every removal is recorded. STRICT runs the PARTIAL attribute rules
first and only then its stricter ones, so the PARTIAL removal set is
always a subset of the STRICT removal set for the same document; tests
rely on that ordering.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Tuple

from .model import Element, SpanNode, SubtitleDocument, Text, TreeBuilder

R_ELEMENT_REMOVED = "element-removed"
R_ELEMENT_UNWRAPPED = "element-unwrapped"
R_ATTRIBUTE_REMOVED = "attribute-removed"
R_URL_NEUTRALIZED = "url-neutralized"

SCRIPT_URL_RE = re.compile(r"^[\s\x00-\x1f]*(javascript|vbscript|data)\s*:", re.IGNORECASE)

STRICT_KEEP_TAGS = frozenset({"b", "i", "u", "font"})
STRICT_FONT_ATTRIBUTES = frozenset({"face", "size", "color"})
PARTIAL_DROP_TAGS = frozenset({"img"})
PARTIAL_UNWRAP_TAGS = frozenset({"a"})


class SanitizePolicy(Enum):
    NONE = "none"
    PARTIAL = "partial"
    STRICT = "strict"


@dataclass(frozen=True)
class Removal:
    """One sanitization action: which cue (0-based position), what kind
    of action, and the element or element@attribute it hit."""

    cue: int
    kind: str
    detail: str


def sanitize(
    document: SubtitleDocument, policy: SanitizePolicy
) -> Tuple[SubtitleDocument, Tuple[Removal, ...]]:
    if policy is SanitizePolicy.NONE:
        return document, ()
    removals: List[Removal] = []
    strict = policy is SanitizePolicy.STRICT
    cues = []
    for position, cue in enumerate(document.cues):
        content = _clean_nodes(cue.content, position, strict, removals)
        cues.append(replace(cue, content=content))
    return replace(document, cues=tuple(cues)), tuple(removals)


def _clean_attributes(
    node: Element, position: int, strict: bool, removals: List[Removal]
) -> Tuple[Tuple[str, str], ...]:
    kept = []
    for name, value in node.attributes:
        if name.startswith("on"):
            removals.append(
                Removal(position, R_ATTRIBUTE_REMOVED, f"{node.tag}@{name}")
            )
            continue
        if SCRIPT_URL_RE.match(value):
            removals.append(
                Removal(position, R_URL_NEUTRALIZED, f"{node.tag}@{name}")
            )
            continue
        if strict and not (node.tag == "font" and name in STRICT_FONT_ATTRIBUTES):
            removals.append(
                Removal(position, R_ATTRIBUTE_REMOVED, f"{node.tag}@{name}")
            )
            continue
        kept.append((name, value))
    return tuple(kept)


def _clean_nodes(
    nodes: Tuple[SpanNode, ...], position: int, strict: bool, removals: List[Removal]
) -> Tuple[SpanNode, ...]:
    builder = TreeBuilder()
    for node in nodes:
        if isinstance(node, Text):
            builder.add_text(node.content)
            continue
        attributes = _clean_attributes(node, position, strict, removals)
        children = _clean_nodes(node.children, position, strict, removals)
        if node.tag in PARTIAL_DROP_TAGS:
            removals.append(Removal(position, R_ELEMENT_REMOVED, node.tag))
            continue
        unwrap = node.tag in PARTIAL_UNWRAP_TAGS or (
            strict and node.tag not in STRICT_KEEP_TAGS
        )
        if unwrap:
            removals.append(Removal(position, R_ELEMENT_UNWRAPPED, node.tag))
            for child in children:
                if isinstance(child, Text):
                    builder.add_text(child.content)
                else:
                    builder.add_node(child)
            continue
        builder.add_node(Element(node.tag, attributes, children))
    return builder.finish()
