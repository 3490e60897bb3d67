"""Deterministic mutation fuzzing of the subtitle parsers.

Each case derives its own RNG from (run seed, case index), so any
failure replays from just those two numbers. A case fails when the
parser aborts with an unexpected exception, overruns its time budget,
breaks a resource promise (cue count, span depth), or breaks the
dual-decode invariant: the flattened content tree must equal the
independent plain-text projection of the raw cue text.

LimitExceeded is not a failure; refusing oversized input is the
documented defensive behavior.
"""

from __future__ import annotations

import random
import threading
import time
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

from .errors import EmptyCorpus, LimitExceeded, NotReproducible
from .model import (
    DEFAULT_LIMITS,
    Element,
    FormatId,
    PARSER_WARNING_CODES,
    ParseLimits,
    SubtitleDocument,
    Text,
    flatten,
)
from .parsers import parse_jacosub, parse_microdvd, parse_sami, parse_srt
from .plaintext import project

_PARSERS: Dict[FormatId, Callable[[bytes, ParseLimits], SubtitleDocument]] = {
    FormatId.SRT: parse_srt,
    FormatId.JACOSUB: parse_jacosub,
    FormatId.MICRODVD: parse_microdvd,
    FormatId.SAMI: parse_sami,
}

OPERATOR_NAMES = (
    "bit_flip",
    "byte_splice",
    "token_duplicate",
    "truncate",
    "directive_inject",
    "tag_unclose",
    "escape_dangle",
)

_INJECT_POOL = (
    b"#S",
    b"#SHIFT ",
    b"#T",
    b"#TIMERES 1",
    b"\\",
    b"{y:i}",
    b"{c:$zz}",
    b"{99999}{1}",
    b'<font color="',
    b"<SYNC Start=",
    b"-->",
    b"&nbsp;",
    b"</p>",
    b"<img src=//x ",
    b"00:00:01,000",
)


#: Small well-formed seeds per format, for fuzzing without a corpus.
DEFAULT_SEEDS: Dict[FormatId, Tuple[bytes, ...]] = {
    FormatId.SRT: (
        b"1\n00:00:01,000 --> 00:00:02,500\nHello <b>world</b>\n\n"
        b"2\n00:00:03,000 --> 00:00:04,000\n"
        b'Second <font color="#ff0000">line</font>\n',
    ),
    FormatId.JACOSUB: (
        b"#TIMERES 30\n#SHIFT 0\n"
        b"0:00:01.00 0:00:02.15 D Hello \\nthere\n"
        b"0:00:03.00 0:00:04.00 D Plain {note} text\n",
    ),
    FormatId.MICRODVD: (
        b"{1}{1}23.976\n"
        b"{10}{50}{y:i}Hello|world\n"
        b"{60}{90}{c:$0000ff}Blue text\n",
    ),
    FormatId.SAMI: (
        b"<SAMI>\n<BODY>\n"
        b"<SYNC Start=1000><P Class=ENCC>Hello <b>world</b>\n"
        b"<SYNC Start=2000><P Class=ENCC>&nbsp;\n"
        b"<SYNC Start=3000><P>Line one<br>Line two\n"
        b"<SYNC Start=6000><P>&nbsp;\n"
        b"</BODY>\n</SAMI>\n",
    ),
}


class FailureKind(Enum):
    ABORT = "abort"
    TIMEOUT = "timeout"
    LIMIT_VIOLATION = "limit-violation"
    INVARIANT_VIOLATION = "invariant-violation"


@dataclass(frozen=True)
class MutationConfig:
    seed: int = 0xC0FFEE
    operators: Tuple[str, ...] = OPERATOR_NAMES
    per_case_timeout: float = 1.0
    max_input_bytes: int = 1 << 16
    watchdog: bool = True  # False: run inline, flag slow cases after the fact


@dataclass(frozen=True)
class FuzzFailure:
    case_index: int
    operator: str
    kind: FailureKind
    detail: str
    data: bytes


@dataclass(frozen=True)
class FuzzReport:
    format: FormatId
    cases: int
    failures: Tuple[FuzzFailure, ...]
    elapsed: float
    warning_codes: frozenset

    @property
    def ok(self) -> bool:
        return not self.failures


def _case_rng(seed: int, case_index: int) -> random.Random:
    # String seeding is stable across platforms and Python runs.
    return random.Random(f"{seed:x}:{case_index}")


def _flip_bits(data: bytes, rng: random.Random) -> bytes:
    if not data:
        return bytes([rng.randrange(256)])
    out = bytearray(data)
    for _ in range(rng.randint(1, 8)):
        pos = rng.randrange(len(out))
        out[pos] ^= 1 << rng.randrange(8)
    return bytes(out)


def _splice_bytes(data: bytes, rng: random.Random) -> bytes:
    if len(data) < 2:
        return data + bytes([rng.randrange(256)])
    src = rng.randrange(len(data))
    length = rng.randint(1, min(64, len(data) - src))
    chunk = data[src : src + length]
    dest = rng.randrange(len(data) + 1)
    if rng.random() < 0.5:
        return data[:dest] + chunk + data[dest:]
    return data[:dest] + chunk + data[dest + length :]


def _duplicate_token(data: bytes, rng: random.Random) -> bytes:
    tokens = data.split(b" ")
    if len(tokens) < 2:
        return data + data[-32:] * rng.randint(1, 4) if data else data
    pos = rng.randrange(len(tokens))
    tokens[pos] = tokens[pos] * rng.randint(2, 8)
    return b" ".join(tokens)


def _truncate(data: bytes, rng: random.Random) -> bytes:
    if not data:
        return data
    return data[: rng.randrange(len(data))]


def _inject_directive(data: bytes, rng: random.Random) -> bytes:
    snippet = _INJECT_POOL[rng.randrange(len(_INJECT_POOL))]
    pos = rng.randrange(len(data) + 1)
    return data[:pos] + snippet + data[pos:]


def _unclose_tag(data: bytes, rng: random.Random) -> bytes:
    closers = [i for i, b in enumerate(data) if b == 0x3E]  # '>'
    if closers and rng.random() < 0.6:
        pos = closers[rng.randrange(len(closers))]
        return data[:pos] + data[pos + 1 :]
    pos = rng.randrange(len(data) + 1)
    return data[:pos] + b"<font " + data[pos:]


def _dangle_escape(data: bytes, rng: random.Random) -> bytes:
    newlines = [i for i, b in enumerate(data) if b == 0x0A]
    if newlines and rng.random() < 0.7:
        pos = newlines[rng.randrange(len(newlines))]
        return data[:pos] + b"\\" + data[pos:]
    return data + b"\\"


_OPERATORS: Dict[str, Callable[[bytes, random.Random], bytes]] = {
    "bit_flip": _flip_bits,
    "byte_splice": _splice_bytes,
    "token_duplicate": _duplicate_token,
    "truncate": _truncate,
    "directive_inject": _inject_directive,
    "tag_unclose": _unclose_tag,
    "escape_dangle": _dangle_escape,
}


def _tree_depth(nodes) -> int:
    depth = 0
    for node in nodes:
        if isinstance(node, Element):
            depth = max(depth, 1 + _tree_depth(node.children))
    return depth


def check_document(
    document: SubtitleDocument,
    format_id: FormatId,
    limits: ParseLimits,
) -> Optional[Tuple[FailureKind, str]]:
    """Post-parse promises: budgets respected, warnings in vocabulary,
    dual decode agrees."""
    if len(document.cues) > limits.max_cues:
        return FailureKind.LIMIT_VIOLATION, f"{len(document.cues)} cues"
    for warning in document.warnings:
        if warning.code not in PARSER_WARNING_CODES:
            return (
                FailureKind.INVARIANT_VIOLATION,
                f"unknown warning code {warning.code!r}",
            )
    for pos, cue in enumerate(document.cues):
        if cue.start.millis > cue.end.millis:
            return FailureKind.INVARIANT_VIOLATION, f"cue {pos} ends before it starts"
        if _tree_depth(cue.content) > limits.max_span_depth:
            return FailureKind.LIMIT_VIOLATION, f"cue {pos} span depth"
        flattened = flatten(cue.content)
        projected = project(format_id, cue.raw_text)
        if flattened != projected:
            return (
                FailureKind.INVARIANT_VIOLATION,
                f"cue {pos} dual decode mismatch: {flattened!r} != {projected!r}",
            )
    return None


def _run_case(
    parser: Callable[[bytes, ParseLimits], SubtitleDocument],
    format_id: FormatId,
    data: bytes,
    limits: ParseLimits,
    config: MutationConfig,
) -> Tuple[Optional[Tuple[FailureKind, str]], Optional[SubtitleDocument]]:
    box: dict = {}

    def work() -> None:
        try:
            box["doc"] = parser(data, limits)
        except LimitExceeded as exc:
            box["limit"] = exc
        except BaseException as exc:  # noqa: BLE001 (the whole point)
            box["error"] = exc

    if config.watchdog:
        worker = threading.Thread(target=work, daemon=True)
        worker.start()
        worker.join(config.per_case_timeout)
        if worker.is_alive():
            return (FailureKind.TIMEOUT, f"still parsing after {config.per_case_timeout}s"), None
    else:
        started = time.monotonic()
        work()
        if time.monotonic() - started > config.per_case_timeout:
            return (FailureKind.TIMEOUT, "case exceeded its time budget"), None

    if "error" in box:
        exc = box["error"]
        return (FailureKind.ABORT, f"{type(exc).__name__}: {exc}"), None
    if "limit" in box:
        return None, None  # legal defensive refusal
    document = box["doc"]
    return check_document(document, format_id, limits), document


def audit_seeds(
    format_id: FormatId,
    seeds: Sequence[bytes],
    limits: ParseLimits = DEFAULT_LIMITS,
    config: MutationConfig = MutationConfig(),
) -> Tuple[Tuple[FuzzFailure, ...], frozenset]:
    """Pristine pass: parse every seed unmutated. Returns failures and
    the set of warning codes the corpus exercises."""
    parser = _PARSERS[format_id]
    failures: List[FuzzFailure] = []
    observed: Set[str] = set()
    for pos, seed_data in enumerate(seeds):
        failure, document = _run_case(parser, format_id, seed_data, limits, config)
        if failure is not None:
            failures.append(
                FuzzFailure(pos, "pristine", failure[0], failure[1], seed_data)
            )
        if document is not None:
            observed.update(w.code for w in document.warnings)
    return tuple(failures), frozenset(observed)


def fuzz_parser(
    format_id: FormatId,
    seeds: Sequence[bytes],
    cases: int,
    config: MutationConfig = MutationConfig(),
    limits: ParseLimits = DEFAULT_LIMITS,
) -> FuzzReport:
    if format_id not in _PARSERS:
        raise ValueError(f"no parser to fuzz for format {format_id.value}")
    if not seeds:
        raise EmptyCorpus("at least one seed input is required")
    parser = _PARSERS[format_id]
    failures: List[FuzzFailure] = []
    observed: Set[str] = set()
    begun = time.monotonic()
    for case_index in range(cases):
        rng = _case_rng(config.seed, case_index)
        base = seeds[rng.randrange(len(seeds))]
        operator = config.operators[rng.randrange(len(config.operators))]
        mutated = _OPERATORS[operator](base, rng)[: config.max_input_bytes]
        failure, document = _run_case(parser, format_id, mutated, limits, config)
        if failure is not None:
            failures.append(
                FuzzFailure(case_index, operator, failure[0], failure[1], mutated)
            )
        if document is not None:
            observed.update(w.code for w in document.warnings)
    return FuzzReport(
        format=format_id,
        cases=cases,
        failures=tuple(failures),
        elapsed=time.monotonic() - begun,
        warning_codes=frozenset(observed),
    )


def replay_case(
    format_id: FormatId,
    seeds: Sequence[bytes],
    case_index: int,
    config: MutationConfig = MutationConfig(),
) -> bytes:
    """Regenerate the exact input of one fuzz case."""
    rng = _case_rng(config.seed, case_index)
    base = seeds[rng.randrange(len(seeds))]
    operator = config.operators[rng.randrange(len(config.operators))]
    return _OPERATORS[operator](base, rng)[: config.max_input_bytes]


def minimize(
    data: bytes,
    still_fails: Callable[[bytes], bool],
    max_probes: int = 2000,
) -> bytes:
    """Greedy ddmin-style shrink of a failing input.

    ``still_fails`` must hold for ``data`` itself (NotReproducible
    otherwise) and is treated as the oracle for every candidate.
    """
    if not still_fails(data):
        raise NotReproducible("the provided input does not fail its own oracle")
    current = data
    chunks = 2
    probes = 0
    while len(current) > 1 and probes < max_probes:
        size = max(1, len(current) // chunks)
        shrunk = False
        start = 0
        while start < len(current) and probes < max_probes:
            candidate = current[:start] + current[start + size :]
            probes += 1
            if candidate != current and still_fails(candidate):
                current = candidate
                shrunk = True
                # Keep the same granularity; positions shifted.
                continue
            start += size
        if shrunk:
            chunks = max(2, chunks - 1)
        elif size == 1:
            break
        else:
            chunks = min(len(current), chunks * 2)
    return current
