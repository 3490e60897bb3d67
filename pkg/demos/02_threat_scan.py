"""Scan the hostile corpus and show how verdicts are assembled.

Each file models a real attack class: script smuggling through styling
markup, parser-crashing constructs that enabled remote code execution
in media players, and a zip that tries to plant files outside its
extraction directory.

Run from the repository root:   python3 demos/02_threat_scan.py
"""

import pathlib

from subguard import scan_archive, scan_bytes

MALICIOUS = pathlib.Path(__file__).resolve().parent.parent / "corpus" / "malicious"


def main() -> None:
    print("== corpus/malicious ==")
    for path in sorted(MALICIOUS.iterdir()):
        data = path.read_bytes()
        if path.suffix == ".zip":
            report = scan_archive(data, path.name)
        else:
            report = scan_bytes(data, path.name)
        print(f"\n{path.name}: {report.verdict.value}")
        for finding in report.findings:
            cve = f"  [{finding.cve}]" if finding.cve else ""
            print(f"  {finding.severity.value:8} {finding.rule:12} {finding.message}{cve}")

    print("\n== machine-readable form ==")
    report = scan_bytes((MALICIOUS / "02_event_handler.srt").read_bytes(), "02_event_handler.srt")
    print(report.to_json())


if __name__ == "__main__":
    main()
