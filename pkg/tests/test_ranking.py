from fractions import Fraction

import pytest

from subguard.errors import EmptyCorpus, EmptyMovieTags, ManifestSyntax, ManifestUnreadable
from subguard.ranking import (
    Query,
    RepoEntry,
    RepoStore,
    ScoringConfig,
    UploaderRank,
    derive_rank,
    load_manifest,
    match_tags,
    normalize_imdb,
    render_score,
    score,
    tokenize_tags,
)

MOVIE = "Trolls.2016.BDRip.x264-[YTS.AG].mp4"
IMDB = "tt1679335"


def make_query():
    return Query(movie_filename=MOVIE, imdb_id=IMDB)


def test_tokenizer_splits_on_release_separators():
    assert tokenize_tags(MOVIE) == [
        "Trolls",
        "2016",
        "BDRip",
        "x264",
        "YTS",
        "AG",
        "mp4",
    ]


def test_tokenizer_handles_mixed_separators():
    assert tokenize_tags("a.b-c_d [e](f)  g") == ["a", "b", "c", "d", "e", "f", "g"]
    assert tokenize_tags("") == []
    assert tokenize_tags("...") == []


def test_derive_rank_thresholds():
    assert derive_rank(0) is UploaderRank.ANONYMOUS
    assert derive_rank(1) is UploaderRank.MEMBER
    assert derive_rank(100) is UploaderRank.MEMBER
    assert derive_rank(101) is UploaderRank.GOLD


def test_normalize_imdb():
    assert normalize_imdb("tt0123456") == "123456"
    assert normalize_imdb("0123456") == "123456"
    assert normalize_imdb("TT1679335") == "1679335"
    assert normalize_imdb(" tt1679335 ") == "1679335"


def test_match_tags_is_exact_fraction():
    assert match_tags(MOVIE, "Trolls.2016.BDRip.x264-[YTS.AG].mp4.srt") == Fraction(7, 7)
    assert match_tags(MOVIE, "Trolls.2016.BDRip.x264-[YTS.AG].srt") == Fraction(6, 7)
    assert match_tags(MOVIE, "Trolls.2016.other.srt") == Fraction(2, 7)
    assert match_tags(MOVIE, "unrelated.srt") == Fraction(0, 7)


def test_match_tags_cuts_only_the_subtitle_extension():
    # ".srt" names the subtitle format, not the release; ".mp4" before
    # it is a release token and must count.
    full = match_tags(MOVIE, "Trolls.2016.BDRip.x264-[YTS.AG].mp4.srt")
    bare = match_tags(MOVIE, "Trolls.2016.BDRip.x264-[YTS.AG].srt")
    assert full - bare == Fraction(1, 7)


def test_match_tags_case_insensitive():
    assert match_tags(MOVIE, "trolls.2016.bdrip.X264-[yts.ag].MP4.srt") == Fraction(1)


def test_match_tags_rejects_empty_movie():
    with pytest.raises(EmptyMovieTags):
        match_tags("...", "x.srt")


def test_score_components_add_up():
    q = make_query()
    imdb_only = RepoEntry("nothing-in-common.srt", imdb_id=IMDB)
    assert score(imdb_only, q) == 5
    full_tags_anon = RepoEntry(f"{MOVIE}.srt", imdb_id=IMDB)
    assert score(full_tags_anon, q) == 12
    full_tags_gold = RepoEntry(
        f"{MOVIE}.srt", imdb_id=IMDB, rank=UploaderRank.GOLD, upload_count=150
    )
    assert score(full_tags_gold, q) == 15


def test_score_partial_tags_exact():
    q = make_query()
    entry = RepoEntry(
        "Trolls.2016.BDRip.x264-[YTS.AG].srt",
        imdb_id=IMDB,
        rank=UploaderRank.MEMBER,
        upload_count=10,
    )
    assert score(entry, q) == 5 + Fraction(6, 7) * 7 + 1 == 12


def test_score_without_imdb_match():
    q = make_query()
    assert score(RepoEntry(f"{MOVIE}.srt", imdb_id="tt999"), q) == 7
    assert score(RepoEntry(f"{MOVIE}.srt", imdb_id=""), q) == 7
    no_query_imdb = Query(movie_filename=MOVIE)
    assert score(RepoEntry(f"{MOVIE}.srt", imdb_id=IMDB), no_query_imdb) == 7


def test_render_score_three_decimals():
    assert render_score(Fraction(15)) == "15.000"
    assert render_score(Fraction(1, 3)) == "0.333"
    assert render_score(Fraction(2, 3)) == "0.667"
    assert render_score(Fraction(47, 7)) == "6.714"
    assert render_score(Fraction(1, 2000)) == "0.001"  # half rounds up
    assert render_score(Fraction(0)) == "0.000"


def test_rank_bonus_table():
    config = ScoringConfig()
    assert config.bonus(UploaderRank.ANONYMOUS) == 0
    assert config.bonus(UploaderRank.MEMBER) == 1
    assert config.bonus(UploaderRank.GOLD) == 3


def test_store_search_orders_by_score_stably():
    store = RepoStore()
    store.ingest_all(
        [
            RepoEntry("Trolls.2016.xvid.srt", imdb_id=IMDB),
            RepoEntry(f"{MOVIE}.srt", imdb_id=IMDB),
            RepoEntry("Trolls.2016.BDRip.srt", imdb_id=IMDB),
        ]
    )
    ranked = store.search(make_query())
    names = [s.entry.filename for s in ranked]
    assert names[0] == f"{MOVIE}.srt"
    scores = [s.score for s in ranked]
    assert scores == sorted(scores, reverse=True)


def test_store_search_ties_keep_ingest_order():
    store = RepoStore()
    store.ingest(RepoEntry("Trolls.first.srt", imdb_id=IMDB))
    store.ingest(RepoEntry("Trolls.second.srt", imdb_id=IMDB))
    ranked = store.search(make_query())
    assert [s.entry.filename for s in ranked] == [
        "Trolls.first.srt",
        "Trolls.second.srt",
    ]


def test_store_dedupes_keeping_strongest():
    store = RepoStore()
    store.ingest(RepoEntry("Same.srt", imdb_id=IMDB, upload_count=5, rank=UploaderRank.MEMBER))
    store.ingest(RepoEntry("same.srt", imdb_id=IMDB, upload_count=500, rank=UploaderRank.GOLD))
    store.ingest(RepoEntry("SAME.srt", imdb_id=IMDB, upload_count=1, rank=UploaderRank.MEMBER))
    assert len(store) == 1
    assert store.entries[0].rank is UploaderRank.GOLD


def test_store_empty_search_refused():
    with pytest.raises(EmptyCorpus):
        RepoStore().search(make_query())


def test_search_top_slices_after_sort():
    store = RepoStore()
    store.ingest_all(
        RepoEntry(f"Trolls.v{i}.srt", imdb_id=IMDB) for i in range(10)
    )
    assert len(store.search(make_query(), top=3)) == 3


def test_load_manifest_roundtrip(ranking_manifest):
    store = load_manifest(str(ranking_manifest))
    assert len(store) == 21
    gold = [e for e in store.entries if e.rank is UploaderRank.GOLD]
    assert len(gold) == 3  # two organic splits plus the engineered name


def test_load_manifest_reports_line_numbers(tmp_path):
    bad = tmp_path / "broken.jsonl"
    bad.write_text('{"filename": "a.srt"}\nnot json\n')
    with pytest.raises(ManifestSyntax) as info:
        load_manifest(str(bad))
    assert info.value.line == 2
    assert "line 2" in str(info.value)


def test_load_manifest_validates_fields(tmp_path):
    cases = [
        '{"imdb": "tt1"}',
        '{"filename": ""}',
        '{"filename": "a.srt", "uploads": -1}',
        '{"filename": "a.srt", "rank": "royalty"}',
        '["not", "an", "object"]',
    ]
    for line in cases:
        path = tmp_path / "case.jsonl"
        path.write_text(line + "\n")
        with pytest.raises(ManifestSyntax):
            load_manifest(str(path))


def test_load_manifest_missing_file():
    with pytest.raises(ManifestUnreadable):
        load_manifest("/nonexistent/manifest.jsonl")


def test_manifest_rank_derivation(tmp_path):
    path = tmp_path / "ranks.jsonl"
    path.write_text(
        '{"filename": "a.srt", "uploads": 0}\n'
        '{"filename": "b.srt", "uploads": 50}\n'
        '{"filename": "c.srt", "uploads": 101}\n'
        '{"filename": "d.srt", "uploads": 0, "rank": "gold"}\n'
    )
    store = load_manifest(str(path))
    ranks = {e.filename: e.rank for e in store.entries}
    assert ranks["a.srt"] is UploaderRank.ANONYMOUS
    assert ranks["b.srt"] is UploaderRank.MEMBER
    assert ranks["c.srt"] is UploaderRank.GOLD
    assert ranks["d.srt"] is UploaderRank.GOLD
