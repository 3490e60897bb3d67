"""Threat scanning for subtitle documents, filenames, and archives.

Five rules:

* T-SCRIPT   Critical  scripting constructs (script tags, on* handlers,
                       javascript:/vbscript:/data: URLs)
* T-TRAVERSAL Critical path traversal in archive member names or
                       subtitle filenames (CVE-2017-8314 class)
* T-PARAMINJ High      shell or format-string injection payloads
* T-HAZARD   High      inputs exercising known decoder overread bugs,
                       or archive members that blow decode limits
* T-EXTRES   Medium    external resource references

Verdict: Malicious if any Critical finding, Suspicious if any finding
at all, Clean otherwise.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

from .archive import ArchiveEntrySummary, list_zip, read_member
from .errors import ConversionUnsupported, CorruptCentralDirectory, LimitExceeded, UnknownFormat
from .model import (
    Element,
    SubtitleDocument,
    Text,
    W_DIRECTIVE_UNTERMINATED,
    W_SHIFT_OUT_OF_RANGE,
    W_TRUNCATED_ESCAPE,
    W_UNTERMINATED_TAG,
    flatten,
)
from .sanitize import SCRIPT_URL_RE

RULE_SCRIPT = "T-SCRIPT"
RULE_TRAVERSAL = "T-TRAVERSAL"
RULE_PARAM_INJECTION = "T-PARAMINJ"
RULE_HAZARD = "T-HAZARD"
RULE_EXTERNAL_RESOURCE = "T-EXTRES"

CVE_TRAVERSAL = "CVE-2017-8314"

#: Parse warnings that reproduce known decoder overreads, and the CVE
#: each one models.
HAZARD_WARNING_CVES: Dict[str, str] = {
    W_UNTERMINATED_TAG: "CVE-2017-8310",
    W_TRUNCATED_ESCAPE: "CVE-2017-8311",
    W_SHIFT_OUT_OF_RANGE: "CVE-2017-8312",
    W_DIRECTIVE_UNTERMINATED: "CVE-2017-8313",
}

_SCRIPT_TAG_RE = re.compile(r"<\s*script\b", re.IGNORECASE)
_EXTERNAL_URL_RE = re.compile(r"^\s*(?:(?:https?|ftp)://|//)", re.IGNORECASE)
_PARAM_INJECTION_RES = (
    re.compile(r"%n"),
    re.compile(r"%s%s"),
    re.compile(r"\$\("),
    re.compile(r"`[^`]{1,64}`"),
)
_NAME_TRAVERSAL_RE = re.compile(r"(^|[/\\])\.\.([/\\]|$)|^[/\\]|^[A-Za-z]:")
_RESOURCE_ATTRIBUTES = frozenset({"src", "href"})

_MAX_SCANNED_MEMBERS = 64
_MAX_MEMBER_SCAN_BYTES = 8 * 1024 * 1024
_SUBTITLE_SUFFIXES = (".srt", ".sub", ".jss", ".js", ".smi", ".sami", ".txt")


class Severity(Enum):
    CRITICAL = "Critical"
    HIGH = "High"
    MEDIUM = "Medium"


class Verdict(Enum):
    CLEAN = "Clean"
    SUSPICIOUS = "Suspicious"
    MALICIOUS = "Malicious"


@dataclass(frozen=True)
class Finding:
    rule: str
    severity: Severity
    message: str
    cue: Optional[int] = None  # 0-based cue position when content-level
    line: Optional[int] = None
    cve: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "severity": self.severity.value,
            "message": self.message,
            "cue": self.cue,
            "line": self.line,
            "cve": self.cve,
        }


@dataclass(frozen=True)
class ThreatReport:
    verdict: Verdict
    findings: Tuple[Finding, ...]
    source: str = ""

    def to_json(self) -> str:
        return json.dumps(
            {
                "source": self.source,
                "verdict": self.verdict.value,
                "findings": [f.to_dict() for f in self.findings],
            },
            indent=2,
        )


def compute_verdict(findings: Tuple[Finding, ...]) -> Verdict:
    if any(f.severity is Severity.CRITICAL for f in findings):
        return Verdict.MALICIOUS
    if findings:
        return Verdict.SUSPICIOUS
    return Verdict.CLEAN


def _report(findings: List[Finding], source: str) -> ThreatReport:
    frozen = tuple(findings)
    return ThreatReport(compute_verdict(frozen), frozen, source)


def _walk_elements(nodes):
    for node in nodes:
        if isinstance(node, Text):
            continue
        yield node
        yield from _walk_elements(node.children)


def _scan_cue_tree(cue_pos: int, cue, findings: List[Finding]) -> None:
    line = cue.line
    for element in _walk_elements(cue.content):
        for name, value in element.attributes:
            if name.startswith("on") and len(name) > 2:
                findings.append(
                    Finding(
                        RULE_SCRIPT,
                        Severity.CRITICAL,
                        f"event handler {element.tag}@{name}",
                        cue_pos,
                        line,
                    )
                )
            elif SCRIPT_URL_RE.match(value):
                findings.append(
                    Finding(
                        RULE_SCRIPT,
                        Severity.CRITICAL,
                        f"script URL in {element.tag}@{name}",
                        cue_pos,
                        line,
                    )
                )
            elif name in _RESOURCE_ATTRIBUTES and _EXTERNAL_URL_RE.match(value):
                findings.append(
                    Finding(
                        RULE_EXTERNAL_RESOURCE,
                        Severity.MEDIUM,
                        f"external resource in {element.tag}@{name}",
                        cue_pos,
                        line,
                    )
                )


def _scan_cue_text(cue_pos: int, cue, findings: List[Finding]) -> None:
    combined = cue.raw_text + "\n" + flatten(cue.content)
    if _SCRIPT_TAG_RE.search(combined):
        findings.append(
            Finding(
                RULE_SCRIPT,
                Severity.CRITICAL,
                "script tag in cue text",
                cue_pos,
                cue.line,
            )
        )
    for pattern in _PARAM_INJECTION_RES:
        if pattern.search(combined):
            findings.append(
                Finding(
                    RULE_PARAM_INJECTION,
                    Severity.HIGH,
                    f"injection pattern {pattern.pattern!r} in cue text",
                    cue_pos,
                    cue.line,
                )
            )
            break


def scan_document(document: SubtitleDocument, source: str = "") -> ThreatReport:
    findings: List[Finding] = []
    seen_hazards = set()
    for warning in document.warnings:
        cve = HAZARD_WARNING_CVES.get(warning.code)
        if cve is None or warning.code in seen_hazards:
            continue
        seen_hazards.add(warning.code)
        findings.append(
            Finding(
                RULE_HAZARD,
                Severity.HIGH,
                f"decoder hazard {warning.code}: {warning.message}",
                None,
                warning.location.line if warning.location else None,
                cve,
            )
        )
    for cue_pos, cue in enumerate(document.cues):
        _scan_cue_tree(cue_pos, cue, findings)
        _scan_cue_text(cue_pos, cue, findings)
    return _report(findings, source)


def scan_filename(name: str, source: str = "") -> ThreatReport:
    findings: List[Finding] = []
    if _NAME_TRAVERSAL_RE.search(name):
        findings.append(
            Finding(
                RULE_TRAVERSAL,
                Severity.CRITICAL,
                f"path traversal in name {name!r}",
                cve=CVE_TRAVERSAL,
            )
        )
    for pattern in _PARAM_INJECTION_RES:
        if pattern.search(name):
            findings.append(
                Finding(
                    RULE_PARAM_INJECTION,
                    Severity.HIGH,
                    f"injection pattern {pattern.pattern!r} in name {name!r}",
                )
            )
            break
    return _report(findings, source or name)


def scan_bytes(data: bytes, source: str = "") -> ThreatReport:
    """Detect, parse, and scan one subtitle payload.

    Propagates UnknownFormat/ConversionUnsupported so callers can
    distinguish "cannot read" from "read and judged"."""
    from .convert import parse_any

    document, _ = parse_any(data)
    return scan_document(document, source)


def _member_is_subtitle(entry: ArchiveEntrySummary) -> bool:
    lowered = entry.normalized.lower()
    return lowered.endswith(_SUBTITLE_SUFFIXES)


def scan_archive(data: bytes, source: str = "") -> ThreatReport:
    """Scan a zip payload: member names always, member content when the
    member looks like a subtitle and fits the decode caps."""
    findings: List[Finding] = []
    entries = list_zip(data)
    for entry in entries:
        if entry.escapes:
            findings.append(
                Finding(
                    RULE_TRAVERSAL,
                    Severity.CRITICAL,
                    f"member {entry.name!r} escapes the extraction root",
                    cve=CVE_TRAVERSAL,
                )
            )
        else:
            name_report = scan_filename(entry.name)
            findings.extend(name_report.findings)

    scanned = 0
    for entry in entries:
        if scanned >= _MAX_SCANNED_MEMBERS:
            break
        if entry.is_dir or entry.is_symlink or not _member_is_subtitle(entry):
            continue
        scanned += 1
        try:
            blob = read_member(data, entry, _MAX_MEMBER_SCAN_BYTES)
        except LimitExceeded:
            findings.append(
                Finding(
                    RULE_HAZARD,
                    Severity.HIGH,
                    f"member {entry.name!r} exceeds decompression caps",
                )
            )
            continue
        except CorruptCentralDirectory:
            continue
        try:
            member_report = scan_bytes(blob, entry.name)
        except (UnknownFormat, ConversionUnsupported, LimitExceeded):
            continue
        for finding in member_report.findings:
            findings.append(
                Finding(
                    finding.rule,
                    finding.severity,
                    f"[{entry.name}] {finding.message}",
                    finding.cue,
                    finding.line,
                    finding.cve,
                )
            )
    return _report(findings, source)
