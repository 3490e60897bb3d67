"""Command line interface.

Exit codes, uniform across subcommands:

0  success / verdict Clean
1  findings: non-Clean scan verdict, unsafe archive entries, fuzz failures
2  input unusable: unknown format, corrupt archive, unreadable manifest
3  usage errors
4  internal invariant failure (a bug in this package, not in the input)
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from .archive import list_zip, safe_extract
from .convert import parse_any
from .detect import detect_format
from .errors import (
    ConversionUnsupported,
    CorruptCentralDirectory,
    EmptyCorpus,
    EmptyMovieTags,
    InvariantViolation,
    IoFailure,
    LimitExceeded,
    ManifestSyntax,
    ManifestUnreadable,
    NotAZip,
    SubguardError,
    TraversalRefused,
    UnknownFormat,
)
from .fuzzing import DEFAULT_SEEDS, MutationConfig, fuzz_parser
from .model import FormatId
from .parsers import serialize_srt
from .ranking import Query, load_manifest
from .sanitize import SanitizePolicy, sanitize
from .server import serve_forever
from .threatscan import Verdict, scan_archive, scan_bytes

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_UNREADABLE = 2
EXIT_USAGE = 3
EXIT_INTERNAL = 4

_FUZZ_FORMATS = {
    "srt": FormatId.SRT,
    "jacosub": FormatId.JACOSUB,
    "jss": FormatId.JACOSUB,
    "microdvd": FormatId.MICRODVD,
    "sub": FormatId.MICRODVD,
    "sami": FormatId.SAMI,
    "smi": FormatId.SAMI,
}


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; this project reserves 2 for
    unreadable input, so route usage errors to 3."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_file(path: str) -> bytes:
    try:
        with open(path, "rb") as handle:
            return handle.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc


def _write_output(data: bytes, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    try:
        with open(out, "wb") as handle:
            handle.write(data)
    except OSError as exc:
        raise IoFailure(f"cannot write {out}: {exc}") from exc


def _cmd_detect(args: argparse.Namespace) -> int:
    data = _read_file(args.path)
    probe = detect_format(data)
    if args.json:
        print(
            json.dumps(
                {
                    "format": probe.format.value,
                    "line": probe.line,
                    "evidence": probe.evidence,
                },
                indent=2,
            )
        )
    elif probe.format is FormatId.UNKNOWN:
        print("unknown")
    else:
        print(f"{probe.format.value} (line {probe.line}: {probe.evidence})")
    return EXIT_UNREADABLE if probe.format is FormatId.UNKNOWN else EXIT_OK


def _cmd_convert(args: argparse.Namespace) -> int:
    data = _read_file(args.path)
    document, probe = parse_any(data)
    _write_output(serialize_srt(document), args.output)
    print(
        f"converted {probe.format.value} -> srt: {len(document.cues)} cues, "
        f"{len(document.warnings)} warnings",
        file=sys.stderr,
    )
    return EXIT_OK


def _looks_like_zip(path: str, data: bytes) -> bool:
    return data.startswith(b"PK\x03\x04") or path.lower().endswith(".zip")


def _cmd_scan(args: argparse.Namespace) -> int:
    data = _read_file(args.path)
    if _looks_like_zip(args.path, data):
        report = scan_archive(data, args.path)
        removals = None
    else:
        report = scan_bytes(data, args.path)
        removals = None
        if args.policy != "none":
            document, _ = parse_any(data)
            _, removals = sanitize(document, SanitizePolicy(args.policy))
    if args.json:
        payload = json.loads(report.to_json())
        if removals is not None:
            payload["sanitize_preview"] = {
                "policy": args.policy,
                "removals": [
                    {"cue": r.cue, "kind": r.kind, "detail": r.detail}
                    for r in removals
                ],
            }
        print(json.dumps(payload, indent=2))
    else:
        print(f"verdict: {report.verdict.value}")
        for finding in report.findings:
            place = []
            if finding.cue is not None:
                place.append(f"cue {finding.cue}")
            if finding.line is not None:
                place.append(f"line {finding.line}")
            suffix = f" ({', '.join(place)})" if place else ""
            cve = f" [{finding.cve}]" if finding.cve else ""
            print(
                f"  {finding.severity.value:8} {finding.rule}: "
                f"{finding.message}{suffix}{cve}"
            )
        if removals is not None:
            print(f"sanitize --policy {args.policy} would remove {len(removals)} construct(s)")
            for removal in removals:
                print(f"  cue {removal.cue}: {removal.kind} {removal.detail}")
    return EXIT_OK if report.verdict is Verdict.CLEAN else EXIT_FINDINGS


def _cmd_sanitize(args: argparse.Namespace) -> int:
    data = _read_file(args.path)
    document, _ = parse_any(data)
    cleaned, removals = sanitize(document, SanitizePolicy(args.policy))
    _write_output(serialize_srt(cleaned), args.output)
    print(f"removed {len(removals)} construct(s)", file=sys.stderr)
    for removal in removals:
        print(f"  cue {removal.cue}: {removal.kind} {removal.detail}", file=sys.stderr)
    return EXIT_OK


def _cmd_rank(args: argparse.Namespace) -> int:
    store = load_manifest(args.manifest)
    ranked = store.search(Query(args.query, args.imdb), top=args.top)
    if args.json:
        print(
            json.dumps(
                [
                    {
                        "filename": s.entry.filename,
                        "imdb": s.entry.imdb_id,
                        "rank": s.entry.rank.value,
                        "score": s.rendered,
                    }
                    for s in ranked
                ],
                indent=2,
            )
        )
    else:
        for scored in ranked:
            print(
                f"{scored.rendered:>8}  {scored.entry.rank.value:9}  "
                f"{scored.entry.filename}"
            )
    return EXIT_OK


def _cmd_zipcheck(args: argparse.Namespace) -> int:
    data = _read_file(args.path)
    if args.extract is None:
        entries = list_zip(data)
        unsafe = 0
        for entry in entries:
            flags = []
            if entry.escapes:
                flags.append("ESCAPES")
            if entry.is_symlink:
                flags.append("SYMLINK")
            if entry.is_dir:
                flags.append("dir")
            unsafe += bool(entry.escapes or entry.is_symlink)
            rendered = " ".join(flags) if flags else "ok"
            print(f"{entry.uncompressed_size:>10}  {rendered:16}  {entry.name}")
        print(f"{len(entries)} entries, {unsafe} unsafe")
        return EXIT_FINDINGS if unsafe else EXIT_OK
    try:
        result = safe_extract(data, args.extract, strict=not args.lenient)
    except TraversalRefused as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_FINDINGS
    for path in result.written:
        print(f"wrote {path}")
    for skipped in result.skipped:
        print(f"skipped {skipped.name}: {skipped.reason}")
    escaped = any("escape" in s.reason for s in result.skipped)
    return EXIT_FINDINGS if escaped else EXIT_OK


def _cmd_fuzz(args: argparse.Namespace) -> int:
    format_id = _FUZZ_FORMATS[args.format]
    if args.seed_dir:
        seeds = []
        try:
            for name in sorted(os.listdir(args.seed_dir)):
                full = os.path.join(args.seed_dir, name)
                if os.path.isfile(full):
                    seeds.append(_read_file(full))
        except OSError as exc:
            raise IoFailure(f"cannot list {args.seed_dir}: {exc}") from exc
        if not seeds:
            raise IoFailure(f"no seed files in {args.seed_dir}")
    else:
        seeds = list(DEFAULT_SEEDS[format_id])
    config = MutationConfig(
        seed=int(args.seed, 16) if isinstance(args.seed, str) else args.seed,
        per_case_timeout=args.timeout,
        watchdog=not args.no_watchdog,
    )
    report = fuzz_parser(format_id, seeds, args.cases, config)
    print(
        f"{report.cases} cases in {report.elapsed:.1f}s, "
        f"{len(report.failures)} failure(s), "
        f"warning codes seen: {len(report.warning_codes)}"
    )
    for failure in report.failures[:20]:
        print(
            f"  case {failure.case_index} [{failure.operator}] "
            f"{failure.kind.value}: {failure.detail}; input={failure.data[:60]!r}"
        )
    return EXIT_OK if report.ok else EXIT_FINDINGS


def _cmd_serve(args: argparse.Namespace) -> int:
    store = load_manifest(args.manifest)
    serve_forever(store, args.host, args.port)
    return EXIT_OK


def build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="subguard",
        description="Hardened subtitle parsing, scanning, and ranking tools.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="identify a subtitle format")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("convert", help="convert any supported format to SubRip")
    p.add_argument("path")
    p.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("scan", help="threat-scan a subtitle file or zip archive")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.add_argument(
        "--policy",
        choices=["none", "partial", "strict"],
        default="none",
        help="also preview what sanitize would remove at this policy",
    )
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("sanitize", help="strip unsafe constructs, emit SubRip")
    p.add_argument("path")
    p.add_argument("--policy", choices=["partial", "strict"], default="partial")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_sanitize)

    p = sub.add_parser("rank", help="rank a subtitle manifest against a query")
    p.add_argument("--manifest", required=True)
    p.add_argument("--query", required=True, help="movie filename to match")
    p.add_argument("--imdb", default="", help="movie id, if known")
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("zipcheck", help="inspect or safely extract a zip")
    p.add_argument("path")
    p.add_argument("--extract", default=None, metavar="DEST")
    p.add_argument(
        "--lenient",
        action="store_true",
        help="skip unsafe members instead of refusing the whole archive",
    )
    p.set_defaults(func=_cmd_zipcheck)

    p = sub.add_parser("fuzz", help="mutation-fuzz one parser")
    p.add_argument("--format", choices=sorted(_FUZZ_FORMATS), required=True)
    p.add_argument("--cases", type=int, default=1000)
    p.add_argument("--seed", default="c0ffee", help="run seed, hex")
    p.add_argument("--seed-dir", default=None, help="directory of seed inputs")
    p.add_argument("--timeout", type=float, default=1.0, help="per-case seconds")
    p.add_argument("--no-watchdog", action="store_true")
    p.set_defaults(func=_cmd_fuzz)

    p = sub.add_parser("serve", help="serve /search over a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8657)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EmptyMovieTags as exc:
        print(f"subguard: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"subguard: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (
        UnknownFormat,
        ConversionUnsupported,
        NotAZip,
        CorruptCentralDirectory,
        LimitExceeded,
        IoFailure,
        ManifestUnreadable,
        ManifestSyntax,
        EmptyCorpus,
    ) as exc:
        print(f"subguard: {exc}", file=sys.stderr)
        return EXIT_UNREADABLE
    except SubguardError as exc:
        print(f"subguard: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
