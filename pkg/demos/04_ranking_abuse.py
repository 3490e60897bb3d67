"""Reproduce how a filename-matching ranking algorithm can be gamed.

The scorer awards points for a matching catalogue id, for the fraction
of the movie's release-name tokens found in the subtitle's filename,
and for the uploader's standing. Every component is public, so an
attacker who uploads under the movie's exact filename (container
extension included) from a high-standing account hits the maximum
score and lands on top of every organic result.

Run from the repository root:   python3 demos/04_ranking_abuse.py
"""

import pathlib

from subguard import (
    Query,
    RepoEntry,
    UploaderRank,
    load_manifest,
    render_score,
    score,
    tokenize_tags,
)

MANIFEST = (
    pathlib.Path(__file__).resolve().parent.parent
    / "corpus"
    / "manifests"
    / "ranking_demo.jsonl"
)

MOVIE = "Trolls.2016.BDRip.x264-[YTS.AG].mp4"
IMDB = "tt1679335"


def main() -> None:
    print(f"movie file:   {MOVIE}")
    print(f"name tokens:  {tokenize_tags(MOVIE)}")

    print("\n== how the score is built ==")
    for label, entry in [
        ("id match only", RepoEntry("Unrelated.Feature.srt", IMDB)),
        ("id + every token", RepoEntry(MOVIE + ".srt", IMDB)),
        ("id + tokens + gold", RepoEntry(MOVIE + ".srt", IMDB, UploaderRank.GOLD)),
    ]:
        print(f"  {label:22} -> {render_score(score(entry, Query(MOVIE, IMDB)))}")

    print("\n== search over the demo manifest ==")
    store = load_manifest(MANIFEST)
    ranked = store.search(Query(MOVIE, IMDB), top=8)
    for pos, entry in enumerate(ranked, start=1):
        marker = "  <- crafted upload" if entry.rendered == "15.000" else ""
        print(
            f"  {pos}. {entry.rendered:>7}  {entry.entry.rank.value:9}  "
            f"{entry.entry.filename}{marker}"
        )

    organic_best = render_score(max(e.score for e in ranked[1:]))
    print(
        f"\nthe crafted name keeps the movie's own .mp4 token, so it matches "
        f"7/7 tokens\nwhile honest subtitle names top out at "
        f"{organic_best}; the gold standing (from bulk uploads)\n"
        f"adds the rest. Nothing here requires compromising the service itself."
    )


if __name__ == "__main__":
    main()
