"""Run a short mutation-fuzzing campaign against all four parsers and
demonstrate failure replay and test-case minimization.

Every case derives from (run seed, case index), so a failure report is
reproducible from two integers. The post-parse oracle checks resource
promises and the dual-decode invariant: the parsed tree flattened to
visible text must equal an independent plain-text projection of the
raw cue text.

Run from the repository root:   python3 demos/05_fuzz_campaign.py [cases]
"""

import pathlib
import sys

from subguard import (
    FormatId,
    MutationConfig,
    fuzz_parser,
    minimize,
    parse_srt,
    replay_case,
)
from subguard.model import W_UNTERMINATED_TAG

SEEDS = pathlib.Path(__file__).resolve().parent.parent / "corpus" / "seeds"
DIRS = {
    FormatId.SRT: "srt",
    FormatId.JACOSUB: "jss",
    FormatId.MICRODVD: "mdvd",
    FormatId.SAMI: "sami",
}


def main() -> None:
    cases = int(sys.argv[1]) if len(sys.argv) > 1 else 5000
    config = MutationConfig(seed=0xC0FFEE, per_case_timeout=5.0, watchdog=False)

    print(f"== {cases} mutated cases per format, seed 0xC0FFEE ==")
    for format_id, sub in DIRS.items():
        seeds = [p.read_bytes() for p in sorted((SEEDS / sub).iterdir())]
        report = fuzz_parser(format_id, seeds, cases, config)
        print(
            f"{format_id.value:10} {report.cases} cases in {report.elapsed:5.2f}s, "
            f"{len(report.failures)} failure(s), "
            f"{len(report.warning_codes)} distinct warning codes exercised"
        )
        for failure in report.failures[:3]:
            print(f"  case {failure.case_index} [{failure.operator}] {failure.kind.value}")

    print("\n== replay: case inputs regenerate from (seed, index) alone ==")
    seeds = [p.read_bytes() for p in sorted((SEEDS / "srt").iterdir())]
    blob = replay_case(FormatId.SRT, seeds, 4242, config)
    again = replay_case(FormatId.SRT, seeds, 4242, config)
    print(f"case 4242, first  60 bytes: {blob[:60]!r}")
    print(f"identical on second replay: {blob == again}")

    print("\n== minimization ==")
    # Oracle: input makes the parser flag a tag cut off by end of input.
    def trips(data: bytes) -> bool:
        doc = parse_srt(data)
        return any(w.code == W_UNTERMINATED_TAG for w in doc.warnings)

    noisy = (
        b"1\n00:00:01,000 --> 00:00:02,000\n"
        b"some perfectly fine dialogue <b>with style</b>\n\n"
        b"2\n00:00:03,000 --> 00:00:04,000\n"
        b'more text <font color="red and then the file just ends'
    )
    small = minimize(noisy, trips)
    print(f"noisy input: {len(noisy)} bytes")
    print(f"minimized:   {len(small)} bytes -> {small!r}")


if __name__ == "__main__":
    main()
