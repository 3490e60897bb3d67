import json

from subguard.model import FormatId, SubtitleDocument
from subguard.parsers import parse_srt
from subguard.threatscan import (
    HAZARD_WARNING_CVES,
    RULE_EXTERNAL_RESOURCE,
    RULE_HAZARD,
    RULE_PARAM_INJECTION,
    RULE_SCRIPT,
    RULE_TRAVERSAL,
    Severity,
    Verdict,
    compute_verdict,
    scan_archive,
    scan_bytes,
    scan_document,
    scan_filename,
)


def scan_srt(payload: bytes):
    return scan_document(parse_srt(payload), "test.srt")


def rules(report):
    return [f.rule for f in report.findings]


def test_clean_document_is_clean():
    report = scan_srt(b"1\n00:00:01,000 --> 00:00:02,000\nJust words.\n")
    assert report.verdict is Verdict.CLEAN
    assert report.findings == ()


def test_script_tag_is_critical():
    report = scan_srt(b"1\n00:00:01,000 --> 00:00:02,000\n<script>x()</script>\n")
    assert report.verdict is Verdict.MALICIOUS
    finding = report.findings[0]
    assert finding.rule == RULE_SCRIPT
    assert finding.severity is Severity.CRITICAL
    assert finding.cue == 0


def test_event_handler_attribute_is_critical():
    report = scan_srt(
        b'1\n00:00:01,000 --> 00:00:02,000\n<img src="x.png" onerror="pwn()">hi\n'
    )
    assert RULE_SCRIPT in rules(report)
    assert report.verdict is Verdict.MALICIOUS


def test_script_url_is_critical():
    report = scan_srt(
        b'1\n00:00:01,000 --> 00:00:02,000\n<a href="javascript:x()">go</a>\n'
    )
    assert RULE_SCRIPT in rules(report)


def test_external_resource_is_medium_and_suspicious():
    report = scan_srt(
        b'1\n00:00:01,000 --> 00:00:02,000\n<img src="http://cdn.example/x.png">x\n'
    )
    assert rules(report) == [RULE_EXTERNAL_RESOURCE]
    assert report.findings[0].severity is Severity.MEDIUM
    assert report.verdict is Verdict.SUSPICIOUS


def test_protocol_relative_url_counts_as_external():
    report = scan_srt(
        b'1\n00:00:01,000 --> 00:00:02,000\n<img src="//cdn.example/x.png">x\n'
    )
    assert rules(report) == [RULE_EXTERNAL_RESOURCE]


def test_injection_patterns_flagged_once_per_cue():
    report = scan_srt(
        b"1\n00:00:01,000 --> 00:00:02,000\n%n and %s%s and $(id)\n"
    )
    assert rules(report) == [RULE_PARAM_INJECTION]
    assert report.findings[0].severity is Severity.HIGH


def test_backtick_pair_flagged():
    report = scan_srt(b"1\n00:00:01,000 --> 00:00:02,000\nrun `id` now\n")
    assert rules(report) == [RULE_PARAM_INJECTION]


def test_hazard_warnings_map_to_cves():
    report = scan_srt(
        b'1\n00:00:01,000 --> 00:00:02,000\nbad <font color="x\n'
    )
    (finding,) = report.findings
    assert finding.rule == RULE_HAZARD
    assert finding.cve == "CVE-2017-8310"
    assert report.verdict is Verdict.SUSPICIOUS


def test_hazard_findings_dedupe_per_code():
    payload = (
        b'1\n00:00:01,000 --> 00:00:02,000\n<font color="x\n\n'
        b'2\n00:00:03,000 --> 00:00:04,000\n<font color="y\n'
    )
    report = scan_srt(payload)
    assert rules(report) == [RULE_HAZARD]  # one finding for two warnings


def test_all_four_hazard_cves_are_distinct():
    assert len(set(HAZARD_WARNING_CVES.values())) == 4


def test_empty_document_scan():
    report = scan_document(SubtitleDocument(format=FormatId.SRT), "empty")
    assert report.verdict is Verdict.CLEAN


def test_scan_filename_traversal():
    for name in ("../../x.srt", "..\\..\\x.srt", "/etc/passwd", "C:\\boot.ini"):
        report = scan_filename(name)
        assert rules(report) == [RULE_TRAVERSAL], name
        assert report.findings[0].cve == "CVE-2017-8314"
        assert report.verdict is Verdict.MALICIOUS


def test_scan_filename_injection():
    report = scan_filename("movie.$(rm -rf).srt")
    assert RULE_PARAM_INJECTION in rules(report)


def test_scan_filename_benign():
    assert scan_filename("Movie.2024.BDRip.x264.srt").verdict is Verdict.CLEAN
    # dots inside a name component are not traversal
    assert scan_filename("archive..srt").verdict is Verdict.CLEAN


def test_verdict_rules():
    assert compute_verdict(()) is Verdict.CLEAN
    medium = scan_srt(
        b'1\n00:00:01,000 --> 00:00:02,000\n<img src="ftp://a/b">x\n'
    )
    assert medium.verdict is Verdict.SUSPICIOUS


def test_scan_bytes_detects_and_scans():
    report = scan_bytes(
        b"1\n00:00:01,000 --> 00:00:02,000\n<script>x</script>\n", "payload.srt"
    )
    assert report.verdict is Verdict.MALICIOUS
    assert report.source == "payload.srt"


def test_report_json_shape():
    report = scan_srt(b"1\n00:00:01,000 --> 00:00:02,000\n<script>x</script>\n")
    payload = json.loads(report.to_json())
    assert list(payload) == ["source", "verdict", "findings"]
    assert payload["verdict"] == "Malicious"
    finding = payload["findings"][0]
    assert list(finding) == ["rule", "severity", "message", "cue", "line", "cve"]


def test_archive_member_names_scanned(zips_dir, malicious_dir):
    report = scan_archive((malicious_dir / "08_traversal.zip").read_bytes())
    assert RULE_TRAVERSAL in rules(report)
    assert report.verdict is Verdict.MALICIOUS


def test_archive_member_content_scanned(zips_dir):
    report = scan_archive((zips_dir / "nested_threat.zip").read_bytes())
    script_findings = [f for f in report.findings if f.rule == RULE_SCRIPT]
    assert script_findings
    assert script_findings[0].message.startswith("[subs/evil.srt]")


def test_archive_clean(zips_dir):
    report = scan_archive((zips_dir / "benign_bundle.zip").read_bytes())
    assert report.verdict is Verdict.CLEAN


def test_malicious_corpus_verdicts(malicious_dir):
    expected = {
        "01_script_tag.srt": (Verdict.MALICIOUS, RULE_SCRIPT, None),
        "02_event_handler.srt": (Verdict.MALICIOUS, RULE_SCRIPT, None),
        "03_script_url.srt": (Verdict.MALICIOUS, RULE_SCRIPT, None),
        "04_overread_font.srt": (Verdict.SUSPICIOUS, RULE_HAZARD, "CVE-2017-8310"),
        "05_dangling_escape.jss": (Verdict.SUSPICIOUS, RULE_HAZARD, "CVE-2017-8311"),
        "06_short_shift.jss": (Verdict.SUSPICIOUS, RULE_HAZARD, "CVE-2017-8312"),
        "07_bare_directive.jss": (Verdict.SUSPICIOUS, RULE_HAZARD, "CVE-2017-8313"),
        "08_traversal.zip": (Verdict.MALICIOUS, RULE_TRAVERSAL, "CVE-2017-8314"),
    }
    for name, (verdict, rule, cve) in expected.items():
        data = (malicious_dir / name).read_bytes()
        if name.endswith(".zip"):
            report = scan_archive(data, name)
        else:
            report = scan_bytes(data, name)
        assert report.verdict is verdict, name
        hits = [f for f in report.findings if f.rule == rule]
        assert hits, name
        assert hits[0].cve == cve, name


def test_benign_corpus_all_clean(benign_dir):
    for path in sorted(benign_dir.iterdir()):
        report = scan_bytes(path.read_bytes(), path.name)
        assert report.verdict is Verdict.CLEAN, path.name
        assert report.findings == (), path.name
