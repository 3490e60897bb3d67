"""Walk the bundled corpus: identify each file's format, parse it, and
convert one JACOsub and one MicroDVD file to canonical SubRip.

Run from the repository root:   python3 demos/01_parse_and_convert.py
"""

import pathlib

from subguard import convert_to_srt, detect_format, flatten, parse_any

BENIGN = pathlib.Path(__file__).resolve().parent.parent / "corpus" / "benign"


def main() -> None:
    print("== format detection over corpus/benign ==")
    for path in sorted(BENIGN.iterdir()):
        data = path.read_bytes()
        probe = detect_format(data)
        print(f"{path.name:24} -> {probe.format.value:10} (line {probe.line}: {probe.evidence})")

    print("\n== parsing ==")
    for path in sorted(BENIGN.iterdir()):
        document, probe = parse_any(path.read_bytes())
        first = flatten(document.cues[0].content).splitlines()[0] if document.cues else ""
        print(
            f"{path.name:24} {len(document.cues):3} cues, "
            f"{len(document.warnings)} warnings | {first[:44]}"
        )

    print("\n== JACOsub -> SubRip ==")
    # #TIMERES and #SHIFT change how the same stamps land in milliseconds;
    # the converter resolves them before emitting wall-clock times.
    srt = convert_to_srt((BENIGN / "announcement.jss").read_bytes())
    print(srt.decode("utf-8"))

    print("== MicroDVD -> SubRip ==")
    # Frame counts become times via the fps declared in the {1}{1} header.
    srt = convert_to_srt((BENIGN / "classic_movie.sub").read_bytes())
    print(srt.decode("utf-8"))


if __name__ == "__main__":
    main()
