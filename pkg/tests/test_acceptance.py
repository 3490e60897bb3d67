"""Acceptance gate: the end-to-end guarantees this package ships with.

Each test checks one release criterion and prints a single PASS/FAIL
line (live, bypassing capture) so a full run reads as a checklist.
"""

import os
from fractions import Fraction

import pytest

from subguard.archive import safe_extract
from subguard.errors import TraversalRefused
from subguard.fuzzing import MutationConfig, check_document, fuzz_parser
from subguard.model import (
    DEFAULT_LIMITS,
    FormatId,
    W_DIRECTIVE_UNTERMINATED,
    W_SHIFT_OUT_OF_RANGE,
    W_TRUNCATED_ESCAPE,
    W_UNTERMINATED_TAG,
)
from subguard.parsers import parse_jacosub, parse_srt, serialize_srt
from subguard.ranking import (
    Query,
    RepoEntry,
    UploaderRank,
    load_manifest,
    render_score,
    score,
    tokenize_tags,
)
from subguard.threatscan import Verdict, scan_archive, scan_bytes

MOVIE = "Trolls.2016.BDRip.x264-[YTS.AG].mp4"
MOVIE_IMDB = "tt1679335"
CRAFTED = "Trolls.2016.BDRip.x264-[YTS.AG].mp4.srt"


def _verdict(capsys, ok: bool, label: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}: {label}"
    with capsys.disabled():
        print(line, flush=True)
    assert ok, line


def test_acceptance_score_ladder(capsys):
    query = Query(MOVIE, MOVIE_IMDB)
    rungs = [
        RepoEntry("Unrelated.Feature.srt", MOVIE_IMDB, UploaderRank.ANONYMOUS),
        RepoEntry(CRAFTED, MOVIE_IMDB, UploaderRank.ANONYMOUS),
        RepoEntry(CRAFTED, MOVIE_IMDB, UploaderRank.GOLD),
    ]
    rendered = [render_score(score(entry, query)) for entry in rungs]
    _verdict(
        capsys,
        rendered == ["5.000", "12.000", "15.000"],
        f"score ladder renders 5.000 / 12.000 / 15.000 (got {rendered})",
    )


def test_acceptance_crafted_upload_tops_demo_corpus(capsys, ranking_manifest):
    store = load_manifest(ranking_manifest)
    ranked = store.search(Query(MOVIE, MOVIE_IMDB))
    best = ranked[0]
    organic = [s.score for s in ranked[1:]]
    ok = (
        best.entry.filename == CRAFTED
        and best.rendered == "15.000"
        and best.score > max(organic)
        and max(organic) <= Fraction(14)
        and Fraction(9) <= sum(organic) / len(organic) <= Fraction(11)
    )
    _verdict(
        capsys,
        ok,
        "demo manifest: crafted entry strictly first at 15.000, organic max "
        f"{render_score(max(organic))}, organic mean "
        f"{render_score(sum(organic) / len(organic))}",
    )


def test_acceptance_reference_tokenization(capsys):
    tokens = tokenize_tags(MOVIE)
    _verdict(
        capsys,
        tokens == ["Trolls", "2016", "BDRip", "x264", "YTS", "AG", "mp4"],
        f"release-name tokenizer splits the reference filename exactly (got {tokens})",
    )


EXPECTED_MALICIOUS = {
    "01_script_tag.srt": (Verdict.MALICIOUS, "T-SCRIPT", None),
    "02_event_handler.srt": (Verdict.MALICIOUS, "T-SCRIPT", None),
    "03_script_url.srt": (Verdict.MALICIOUS, "T-SCRIPT", None),
    "04_overread_font.srt": (Verdict.SUSPICIOUS, "T-HAZARD", "CVE-2017-8310"),
    "05_dangling_escape.jss": (Verdict.SUSPICIOUS, "T-HAZARD", "CVE-2017-8311"),
    "06_short_shift.jss": (Verdict.SUSPICIOUS, "T-HAZARD", "CVE-2017-8312"),
    "07_bare_directive.jss": (Verdict.SUSPICIOUS, "T-HAZARD", "CVE-2017-8313"),
    "08_traversal.zip": (Verdict.MALICIOUS, "T-TRAVERSAL", "CVE-2017-8314"),
}


def test_acceptance_threat_corpus(capsys, benign_dir, malicious_dir):
    problems = []
    for name, (verdict, rule, cve) in sorted(EXPECTED_MALICIOUS.items()):
        data = (malicious_dir / name).read_bytes()
        if name.endswith(".zip"):
            report = scan_archive(data, name)
        else:
            report = scan_bytes(data, name)
        if report.verdict is not verdict:
            problems.append(f"{name}: verdict {report.verdict.value}")
        if (rule, cve) not in {(f.rule, f.cve) for f in report.findings}:
            problems.append(f"{name}: missing {rule}/{cve}")
    for path in sorted(benign_dir.iterdir()):
        report = scan_bytes(path.read_bytes(), path.name)
        if report.verdict is not Verdict.CLEAN or report.findings:
            problems.append(f"{path.name}: not clean")
    _verdict(
        capsys,
        not problems,
        "threat corpus: 8 hostile files flagged with their designated rule, "
        f"10 benign files clean ({'; '.join(problems) or 'no mismatches'})",
    )


FUZZ_DIRS = {
    FormatId.SRT: "srt",
    FormatId.JACOSUB: "jss",
    FormatId.MICRODVD: "mdvd",
    FormatId.SAMI: "sami",
}


@pytest.mark.slow
def test_acceptance_fuzz_campaign(capsys, seeds_dir):
    config = MutationConfig(seed=0xC0FFEE, per_case_timeout=5.0, watchdog=False)
    failures = []
    elapsed = 0.0
    for format_id, sub in FUZZ_DIRS.items():
        seeds = [p.read_bytes() for p in sorted((seeds_dir / sub).iterdir())]
        report = fuzz_parser(format_id, seeds, 100_000, config)
        elapsed += report.elapsed
        failures.extend(
            f"{format_id.value}#{f.case_index}:{f.kind.value}"
            for f in report.failures[:3]
        )
    ok = not failures and elapsed <= 600.0
    _verdict(
        capsys,
        ok,
        f"fuzz campaign: 100000 cases x 4 parsers in {elapsed:.1f}s, "
        f"{len(failures)} failure(s){' ' + ';'.join(failures) if failures else ''}",
    )


def test_acceptance_hardening_regressions(capsys, malicious_dir):
    regressions = [
        ("04_overread_font.srt", parse_srt, FormatId.SRT, W_UNTERMINATED_TAG),
        ("05_dangling_escape.jss", parse_jacosub, FormatId.JACOSUB, W_TRUNCATED_ESCAPE),
        ("06_short_shift.jss", parse_jacosub, FormatId.JACOSUB, W_SHIFT_OUT_OF_RANGE),
        (
            "07_bare_directive.jss",
            parse_jacosub,
            FormatId.JACOSUB,
            W_DIRECTIVE_UNTERMINATED,
        ),
    ]
    problems = []
    for name, parser, format_id, code in regressions:
        document = parser((malicious_dir / name).read_bytes())
        if code not in {w.code for w in document.warnings}:
            problems.append(f"{name}: no {code}")
        if check_document(document, format_id, DEFAULT_LIMITS) is not None:
            problems.append(f"{name}: post-parse check failed")
    _verdict(
        capsys,
        not problems,
        "hardening regressions: 4 known crash inputs parse to warnings, "
        f"never faults ({'; '.join(problems) or 'all covered'})",
    )


def test_acceptance_traversal_containment(capsys, malicious_dir, tmp_path):
    data = (malicious_dir / "08_traversal.zip").read_bytes()
    strict_dir = tmp_path / "strict"
    refused = False
    try:
        safe_extract(data, strict_dir, strict=True)
    except TraversalRefused:
        refused = True
    strict_writes = list(strict_dir.rglob("*")) if strict_dir.exists() else []

    lenient_dir = tmp_path / "lenient"
    result = safe_extract(data, lenient_dir, strict=False)
    root = os.path.realpath(lenient_dir)
    contained = all(
        os.path.realpath(p).startswith(root + os.sep) for p in result.written
    )
    names = sorted(os.path.basename(p) for p in result.written)
    ok = refused and not strict_writes and contained and names == ["safe.srt"]
    _verdict(
        capsys,
        ok,
        "traversal archive: strict mode refuses before writing anything, "
        f"lenient mode writes only contained members (wrote {names})",
    )


def test_acceptance_srt_canonical_fixpoint(capsys, benign_dir, seeds_dir):
    golden = sorted(benign_dir.glob("*.srt")) + sorted(
        (seeds_dir / "srt").glob("canonical_*.srt")
    )
    assert golden
    stable = [
        path.name
        for path in golden
        if serialize_srt(parse_srt(path.read_bytes())) == path.read_bytes()
    ]
    _verdict(
        capsys,
        len(stable) == len(golden),
        f"SubRip serializer: byte-identical on {len(stable)}/{len(golden)} "
        "canonical corpus files",
    )
