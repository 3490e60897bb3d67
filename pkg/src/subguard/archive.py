"""Hardened zip reading: explicit central-directory parsing, lexical
path normalization, and refusal-by-default extraction.

The point of doing this by hand instead of zipfile: member names are
handled as bytes until proven printable, every claimed offset and
length is bounds-checked against the actual payload, and extraction
decides what it will write before it writes anything.
"""

from __future__ import annotations

import os
import struct
import zlib
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import CorruptCentralDirectory, IoFailure, LimitExceeded, NotAZip, TraversalRefused

_EOCD_SIG = b"PK\x05\x06"
_CENTRAL_SIG = b"PK\x01\x02"
_LOCAL_SIG = b"PK\x03\x04"
_EOCD_STRUCT = struct.Struct("<4sHHHHIIH")
_CENTRAL_STRUCT = struct.Struct("<4sHHHHHHIIIHHHHHII")
_LOCAL_STRUCT = struct.Struct("<4sHHHHHIIIHH")

_MAX_COMMENT = 0xFFFF
_UNIX_SYMLINK = 0xA000

METHOD_STORE = 0
METHOD_DEFLATE = 8

DEFAULT_MAX_ENTRY_BYTES = 64 * 1024 * 1024
DEFAULT_MAX_TOTAL_BYTES = 256 * 1024 * 1024


@dataclass(frozen=True)
class ArchiveEntrySummary:
    """One central-directory record, normalized and judged."""

    raw_name: bytes
    name: str  # lossy-decoded raw_name, display only
    normalized: str  # lexically resolved relative path ('' if none survives)
    escapes: bool  # True when the name points outside the root
    is_dir: bool
    is_symlink: bool
    method: int
    compressed_size: int
    uncompressed_size: int
    header_offset: int


@dataclass(frozen=True)
class SkippedEntry:
    name: str
    reason: str


@dataclass(frozen=True)
class ExtractionResult:
    """What safe_extract actually did: absolute paths of everything it
    created, entries skipped and why."""

    written: Tuple[str, ...]
    skipped: Tuple[SkippedEntry, ...]


def normalize_member_path(raw_name: bytes) -> Tuple[str, bool]:
    """Lexically resolve a member name to a path relative to the
    extraction root. Returns (normalized, escapes)."""
    name = raw_name.decode("utf-8", errors="replace").replace("\\", "/")
    escapes = False
    if name.startswith("/"):
        escapes = True
    body = name.lstrip("/")
    # A DOS drive prefix is absolute no matter what follows it.
    if len(body) >= 2 and body[1] == ":" and body[0].isalpha():
        escapes = True
        body = body[2:].lstrip("/")
    parts: List[str] = []
    for piece in body.split("/"):
        if piece in ("", "."):
            continue
        if piece == "..":
            if parts:
                parts.pop()
            else:
                escapes = True  # tried to climb out of the root
            continue
        parts.append(piece)
    return "/".join(parts), escapes


def _find_eocd(data: bytes) -> Tuple[int, tuple]:
    window_start = max(0, len(data) - (_EOCD_STRUCT.size + _MAX_COMMENT))
    pos = data.rfind(_EOCD_SIG, window_start)
    while pos != -1:
        if pos + _EOCD_STRUCT.size <= len(data):
            fields = _EOCD_STRUCT.unpack_from(data, pos)
            comment_len = fields[7]
            if pos + _EOCD_STRUCT.size + comment_len <= len(data):
                return pos, fields
        pos = data.rfind(_EOCD_SIG, window_start, pos)
    raise NotAZip("no end-of-central-directory record found")


def list_zip(data: bytes) -> Tuple[ArchiveEntrySummary, ...]:
    """Parse the central directory. Raises NotAZip when the payload has
    no end record, CorruptCentralDirectory when records contradict the
    payload they sit in."""
    eocd_pos, fields = _find_eocd(data)
    (_, disk, cd_disk, disk_entries, total_entries, cd_size, cd_offset, _) = fields
    if disk != 0 or cd_disk != 0 or disk_entries != total_entries:
        raise CorruptCentralDirectory("multi-disk archives are not supported")
    if cd_offset + cd_size > eocd_pos:
        raise CorruptCentralDirectory("central directory overlaps the end record")
    if total_entries * _CENTRAL_STRUCT.size > cd_size:
        raise CorruptCentralDirectory("entry count does not fit the directory size")

    entries: List[ArchiveEntrySummary] = []
    pos = cd_offset
    for _ in range(total_entries):
        if pos + _CENTRAL_STRUCT.size > eocd_pos:
            raise CorruptCentralDirectory("central directory record truncated")
        record = _CENTRAL_STRUCT.unpack_from(data, pos)
        if record[0] != _CENTRAL_SIG:
            raise CorruptCentralDirectory(
                f"bad central record signature at offset {pos}"
            )
        (
            _,
            _made_by,
            _need,
            _flags,
            method,
            _mtime,
            _mdate,
            _crc,
            compressed_size,
            uncompressed_size,
            name_len,
            extra_len,
            comment_len,
            _disk_start,
            _internal_attrs,
            external_attrs,
            header_offset,
        ) = record
        name_start = pos + _CENTRAL_STRUCT.size
        name_end = name_start + name_len
        if name_end + extra_len + comment_len > eocd_pos:
            raise CorruptCentralDirectory("member name runs past the directory")
        raw_name = data[name_start:name_end]
        if header_offset >= len(data):
            raise CorruptCentralDirectory(
                f"member {raw_name!r} claims a header outside the file"
            )
        unix_mode = (external_attrs >> 16) & 0xFFFF
        normalized, escapes = normalize_member_path(raw_name)
        entries.append(
            ArchiveEntrySummary(
                raw_name=raw_name,
                name=raw_name.decode("utf-8", errors="replace"),
                normalized=normalized,
                escapes=escapes,
                is_dir=raw_name.endswith(b"/"),
                is_symlink=(unix_mode & 0xF000) == _UNIX_SYMLINK,
                method=method,
                compressed_size=compressed_size,
                uncompressed_size=uncompressed_size,
                header_offset=header_offset,
            )
        )
        pos = name_end + extra_len + comment_len
    return tuple(entries)


def read_member(
    data: bytes,
    entry: ArchiveEntrySummary,
    max_bytes: int = DEFAULT_MAX_ENTRY_BYTES,
) -> bytes:
    """Decompress one member fully in memory, capped at max_bytes."""
    if entry.method not in (METHOD_STORE, METHOD_DEFLATE):
        raise CorruptCentralDirectory(
            f"member {entry.name!r} uses unsupported method {entry.method}"
        )
    header_end = entry.header_offset + _LOCAL_STRUCT.size
    if header_end > len(data):
        raise CorruptCentralDirectory(f"local header of {entry.name!r} truncated")
    local = _LOCAL_STRUCT.unpack_from(data, entry.header_offset)
    if local[0] != _LOCAL_SIG:
        raise CorruptCentralDirectory(f"bad local header signature for {entry.name!r}")
    local_name_len, local_extra_len = local[9], local[10]
    payload_start = header_end + local_name_len + local_extra_len
    payload_end = payload_start + entry.compressed_size
    if payload_end > len(data):
        raise CorruptCentralDirectory(f"member data of {entry.name!r} truncated")
    payload = data[payload_start:payload_end]
    if entry.uncompressed_size > max_bytes:
        raise LimitExceeded(
            f"member {entry.name!r} declares {entry.uncompressed_size} bytes"
        )
    if entry.method == METHOD_STORE:
        if len(payload) > max_bytes:
            raise LimitExceeded(f"member {entry.name!r} exceeds {max_bytes} bytes")
        return payload
    decomp = zlib.decompressobj(-15)
    try:
        out = decomp.decompress(payload, max_bytes + 1)
        out += decomp.flush()
    except zlib.error as exc:
        raise CorruptCentralDirectory(
            f"member {entry.name!r} does not inflate: {exc}"
        ) from exc
    if len(out) > max_bytes or decomp.unconsumed_tail:
        raise LimitExceeded(f"member {entry.name!r} inflates past {max_bytes} bytes")
    return out


def safe_extract(
    data: bytes,
    dest: str,
    strict: bool = True,
    max_entry_bytes: int = DEFAULT_MAX_ENTRY_BYTES,
    max_total_bytes: int = DEFAULT_MAX_TOTAL_BYTES,
) -> ExtractionResult:
    """Extract into dest without ever writing outside it.

    strict=True refuses the whole archive (TraversalRefused, zero
    writes) if any member escapes; strict=False skips those members and
    extracts the rest. Symlink members are never materialized.
    """
    entries = list_zip(data)
    escaping = [e for e in entries if e.escapes]
    if strict and escaping:
        names = ", ".join(e.name for e in escaping[:5])
        raise TraversalRefused(
            f"{len(escaping)} member(s) escape the extraction root: {names}"
        )

    os.makedirs(dest, exist_ok=True)
    root = os.path.realpath(dest)
    written: List[str] = []
    skipped: List[SkippedEntry] = []
    total = 0
    for entry in entries:
        if entry.escapes:
            skipped.append(SkippedEntry(entry.name, "escapes extraction root"))
            continue
        if entry.is_symlink:
            skipped.append(SkippedEntry(entry.name, "symlink member"))
            continue
        if not entry.normalized:
            skipped.append(SkippedEntry(entry.name, "empty path after normalization"))
            continue
        if entry.method not in (METHOD_STORE, METHOD_DEFLATE):
            skipped.append(
                SkippedEntry(entry.name, f"unsupported method {entry.method}")
            )
            continue
        target = os.path.join(root, *entry.normalized.split("/"))
        # Belt and braces: the lexical check said it stays inside, now
        # confirm against the real filesystem (symlinked parents).
        parent = os.path.realpath(os.path.dirname(target))
        if parent != root and not parent.startswith(root + os.sep):
            skipped.append(SkippedEntry(entry.name, "resolved path leaves root"))
            continue
        if entry.is_dir:
            os.makedirs(target, exist_ok=True)
            written.append(target)
            continue
        try:
            blob = read_member(data, entry, max_entry_bytes)
        except (CorruptCentralDirectory, LimitExceeded) as exc:
            if strict:
                raise
            skipped.append(SkippedEntry(entry.name, str(exc)))
            continue
        total += len(blob)
        if total > max_total_bytes:
            raise LimitExceeded(
                f"archive inflates past {max_total_bytes} bytes in total"
            )
        try:
            os.makedirs(os.path.dirname(target), exist_ok=True)
            with open(target, "wb") as handle:
                handle.write(blob)
        except OSError as exc:
            raise IoFailure(f"cannot write {entry.normalized}: {exc}") from exc
        written.append(target)
    return ExtractionResult(tuple(written), tuple(skipped))
