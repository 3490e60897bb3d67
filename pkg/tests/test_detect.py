import pytest

from subguard.detect import MAX_PROBE_LINES, detect_format
from subguard.model import FormatId


@pytest.mark.parametrize(
    "payload,expected",
    [
        (b"1\n00:00:01,000 --> 00:00:02,000\nx\n", FormatId.SRT),
        (b"0:00:01.00 0:00:02.00 text\n", FormatId.JACOSUB),
        (b"{10}{20}text\n", FormatId.MICRODVD),
        (b"<SAMI><HEAD></HEAD><BODY></BODY></SAMI>", FormatId.SAMI),
        (b"[Script Info]\nTitle: x\n", FormatId.SSA_ASS),
        (b"WEBVTT\n\n00:01.000 --> 00:02.000\nx\n", FormatId.VTT),
        (b"[INFORMATION]\n[TITLE]x\n", FormatId.SUBVIEWER),
        (b"", FormatId.UNKNOWN),
        (b"just some prose\nwith lines\n", FormatId.UNKNOWN),
    ],
)
def test_detection_ladder(payload, expected):
    assert detect_format(payload).format is expected


def test_detection_skips_bom_and_blank_lines():
    assert (
        detect_format(b"\xef\xbb\xbf\n\n1\n00:00:01,000 --> 00:00:02,000\nx\n").format
        is FormatId.SRT
    )


def test_srt_needs_integer_line_before_timing():
    # A timing line out of nowhere is not enough evidence.
    assert detect_format(b"00:00:01,000 --> 00:00:02,000\nx\n").format is FormatId.UNKNOWN


def test_probe_result_carries_evidence():
    probe = detect_format(b"{10}{20}hello\n")
    assert probe.format is FormatId.MICRODVD
    assert probe.line == 1
    assert probe.evidence.startswith("{10}{20}")


def test_unknown_probe_is_zeroed():
    probe = detect_format(b"\x00\x01\x02")
    assert (probe.format, probe.line, probe.evidence) == (FormatId.UNKNOWN, 0, "")


def test_probe_line_budget_is_respected():
    padding = b"prose line\n" * (MAX_PROBE_LINES + 10)
    late = padding + b"1\n00:00:01,000 --> 00:00:02,000\nx\n"
    assert detect_format(late).format is FormatId.UNKNOWN


def test_detection_never_raises_on_binary_noise():
    import random

    rng = random.Random(7)
    for _ in range(200):
        blob = bytes(rng.randrange(256) for _ in range(rng.randrange(400)))
        detect_format(blob)  # must not raise


def test_sami_beats_srt_when_both_present():
    payload = b"<SAMI>\n1\n00:00:01,000 --> 00:00:02,000\nx\n"
    assert detect_format(payload).format is FormatId.SAMI


def test_huge_single_line_probe_is_cheap():
    # One enormous line must not defeat the probe or blow memory.
    blob = b"x" * 10_000_000 + b"\n{10}{20}cue\n"
    probe = detect_format(blob)
    assert probe.format is FormatId.MICRODVD
