#!/usr/bin/env python3
"""Regenerate the committed zip fixtures under corpus/.

Every entry gets a fixed timestamp and fixed ordering so reruns are
byte-identical. Run from anywhere; paths resolve relative to this file.
"""

from __future__ import annotations

import zipfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"

EPOCH = (1980, 1, 1, 0, 0, 0)

BENIGN_SRT = (CORPUS / "benign" / "plain_dialogue.srt").read_bytes()
EVIL_SRT = (CORPUS / "malicious" / "02_event_handler.srt").read_bytes()


def _info(name: str, *, symlink: bool = False) -> zipfile.ZipInfo:
    zi = zipfile.ZipInfo(name, date_time=EPOCH)
    if symlink:
        # unix S_IFLNK | 0777 in the high external_attr bits
        zi.external_attr = 0o120777 << 16
        zi.create_system = 3
    return zi


def build(path: Path, members: list[tuple[zipfile.ZipInfo, bytes]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with zipfile.ZipFile(path, "w", compression=zipfile.ZIP_DEFLATED) as zf:
        for zi, payload in members:
            zf.writestr(zi, payload)
    print(f"wrote {path.relative_to(ROOT)} ({path.stat().st_size} bytes)")


def main() -> None:
    build(
        CORPUS / "malicious" / "08_traversal.zip",
        [
            (_info("../../../home/victim/.profile.srt"), BENIGN_SRT),
            (_info("safe.srt"), BENIGN_SRT),
        ],
    )
    build(
        CORPUS / "zips" / "benign_bundle.zip",
        [
            (_info("movie/episode1.srt"), BENIGN_SRT),
            (
                _info("movie/readme.txt"),
                b"Subtitles for episode one. Enjoy the show.\n",
            ),
        ],
    )
    build(
        CORPUS / "zips" / "nested_threat.zip",
        [
            (_info("subs/evil.srt"), EVIL_SRT),
            (_info("subs/fine.srt"), BENIGN_SRT),
        ],
    )
    build(
        CORPUS / "zips" / "symlink_entry.zip",
        [
            (_info("link.srt", symlink=True), b"/etc/passwd"),
            (_info("real.srt"), BENIGN_SRT),
        ],
    )


if __name__ == "__main__":
    main()
