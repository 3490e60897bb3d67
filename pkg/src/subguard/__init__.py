"""subguard: hardened parsing, scanning, and scoring for subtitle files.

Layers, bottom to top:

- model / errors: immutable domain types, warning vocabulary, limits
- parsers: total decoders for SubRip, JACOsub, MicroDVD, SAMI
- plaintext: independent plain-text projections (dual-decode check)
- detect / convert: format probing and conversion to canonical SubRip
- sanitize / threatscan: policy cleanup and rule-based threat reports
- archive: hardened zip listing and refusal-by-default extraction
- ranking / server: repository scoring simulation and a search endpoint
- fuzzing: deterministic mutation fuzzing of every parser
- cli: the `subguard` command
"""

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
    NotReproducible,
    SubguardError,
    TraversalRefused,
    UnknownFormat,
)
from .model import (
    Cue,
    DEFAULT_LIMITS,
    Element,
    FormatId,
    Location,
    PARSED_FORMATS,
    PARSER_WARNING_CODES,
    ParseLimits,
    SpanNode,
    SubtitleDocument,
    Text,
    TimeStamp,
    WarningRecord,
    flatten,
)
from .detect import MAX_PROBE_LINES, ProbeResult, detect_format
from .parsers import (
    FONT_ATTRIBUTES,
    KNOWN_TAGS,
    parse_jacosub,
    parse_markup,
    parse_microdvd,
    parse_sami,
    parse_srt,
    serialize_markup,
    serialize_srt,
)
from .plaintext import project
from .convert import convert_to_srt, parse_any
from .sanitize import Removal, SanitizePolicy, sanitize
from .threatscan import (
    Finding,
    Severity,
    ThreatReport,
    Verdict,
    scan_archive,
    scan_bytes,
    scan_document,
    scan_filename,
)
from .archive import (
    ArchiveEntrySummary,
    ExtractionResult,
    SkippedEntry,
    list_zip,
    normalize_member_path,
    read_member,
    safe_extract,
)
from .ranking import (
    Query,
    RepoEntry,
    RepoStore,
    ScoredEntry,
    ScoringConfig,
    UploaderRank,
    derive_rank,
    load_manifest,
    match_tags,
    render_score,
    score,
    tokenize_tags,
)
from .fuzzing import (
    DEFAULT_SEEDS,
    FailureKind,
    FuzzFailure,
    FuzzReport,
    MutationConfig,
    audit_seeds,
    fuzz_parser,
    minimize,
    replay_case,
)

__version__ = "0.1.0"

__all__ = [
    "ArchiveEntrySummary",
    "ConversionUnsupported",
    "CorruptCentralDirectory",
    "Cue",
    "DEFAULT_LIMITS",
    "DEFAULT_SEEDS",
    "Element",
    "EmptyCorpus",
    "EmptyMovieTags",
    "ExtractionResult",
    "FailureKind",
    "Finding",
    "FONT_ATTRIBUTES",
    "FormatId",
    "FuzzFailure",
    "FuzzReport",
    "InvariantViolation",
    "IoFailure",
    "KNOWN_TAGS",
    "LimitExceeded",
    "Location",
    "ManifestSyntax",
    "ManifestUnreadable",
    "MAX_PROBE_LINES",
    "MutationConfig",
    "NotAZip",
    "NotReproducible",
    "PARSED_FORMATS",
    "PARSER_WARNING_CODES",
    "ParseLimits",
    "ProbeResult",
    "Query",
    "Removal",
    "RepoEntry",
    "RepoStore",
    "SanitizePolicy",
    "ScoredEntry",
    "ScoringConfig",
    "Severity",
    "SkippedEntry",
    "SpanNode",
    "SubguardError",
    "SubtitleDocument",
    "Text",
    "ThreatReport",
    "TimeStamp",
    "TraversalRefused",
    "UnknownFormat",
    "UploaderRank",
    "Verdict",
    "WarningRecord",
    "audit_seeds",
    "convert_to_srt",
    "derive_rank",
    "detect_format",
    "flatten",
    "fuzz_parser",
    "list_zip",
    "load_manifest",
    "match_tags",
    "minimize",
    "normalize_member_path",
    "parse_any",
    "parse_jacosub",
    "parse_markup",
    "parse_microdvd",
    "parse_sami",
    "parse_srt",
    "project",
    "read_member",
    "render_score",
    "replay_case",
    "safe_extract",
    "sanitize",
    "scan_archive",
    "scan_bytes",
    "scan_document",
    "scan_filename",
    "score",
    "serialize_markup",
    "serialize_srt",
    "tokenize_tags",
]
