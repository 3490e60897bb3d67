"""Subtitle repository ranking simulation.

Score model: a correct movie id is worth imdb_points; filename tag
overlap is worth up to tag_max_points, scaled by the exactly-rational
fraction of movie tokens matched; uploader standing adds a flat bonus.
Scores are Fractions end to end so ordering and the documented score
ladder are exact, with three-decimal rendering only at the edges.

The model exists to study a known abuse: because tag overlap is scored
against the movie's own token list, an uploader who names a subtitle
after the target release (tokens included) and holds the top uploader
standing outranks every organic entry.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import EmptyCorpus, EmptyMovieTags, ManifestSyntax, ManifestUnreadable

_SEPARATORS_RE = re.compile(r"[.\-_\[\]()\s]+")


class UploaderRank(Enum):
    ANONYMOUS = "anonymous"
    MEMBER = "member"
    GOLD = "gold"


@dataclass(frozen=True)
class ScoringConfig:
    imdb_points: int = 5
    tag_max_points: int = 7
    rank_bonus: Tuple[Tuple[UploaderRank, int], ...] = (
        (UploaderRank.ANONYMOUS, 0),
        (UploaderRank.MEMBER, 1),
        (UploaderRank.GOLD, 3),
    )
    gold_upload_threshold: int = 101

    def bonus(self, rank: UploaderRank) -> int:
        for candidate, value in self.rank_bonus:
            if candidate is rank:
                return value
        return 0


DEFAULT_CONFIG = ScoringConfig()


@dataclass(frozen=True)
class RepoEntry:
    filename: str
    imdb_id: str = ""
    rank: UploaderRank = UploaderRank.ANONYMOUS
    upload_count: int = 0


@dataclass(frozen=True)
class Query:
    movie_filename: str
    imdb_id: str = ""


@dataclass(frozen=True)
class ScoredEntry:
    entry: RepoEntry
    score: Fraction

    @property
    def rendered(self) -> str:
        return render_score(self.score)


def tokenize_tags(filename: str) -> List[str]:
    """Release-name tokens: separator-delimited runs, order kept."""
    return [token for token in _SEPARATORS_RE.split(filename) if token]


def derive_rank(
    upload_count: int, config: ScoringConfig = DEFAULT_CONFIG
) -> UploaderRank:
    if upload_count >= config.gold_upload_threshold:
        return UploaderRank.GOLD
    if upload_count > 0:
        return UploaderRank.MEMBER
    return UploaderRank.ANONYMOUS


def normalize_imdb(value: str) -> str:
    value = value.strip().lower()
    if value.startswith("tt"):
        value = value[2:]
    return value.lstrip("0")


def match_tags(movie_filename: str, subtitle_filename: str) -> Fraction:
    """Matched fraction of the movie's tokens.

    The movie keeps every token including its container extension; the
    subtitle's own extension is cut before tokenizing, since it names
    the subtitle format rather than the release.
    """
    movie_tokens = [t.lower() for t in tokenize_tags(movie_filename)]
    if not movie_tokens:
        raise EmptyMovieTags(f"movie name {movie_filename!r} has no tokens")
    subtitle_base = os.path.splitext(subtitle_filename)[0]
    subtitle_tokens = {t.lower() for t in tokenize_tags(subtitle_base)}
    movie_set = set(movie_tokens)
    return Fraction(len(movie_set & subtitle_tokens), len(movie_set))


def score(
    entry: RepoEntry, query: Query, config: ScoringConfig = DEFAULT_CONFIG
) -> Fraction:
    total = Fraction(0)
    if (
        query.imdb_id
        and entry.imdb_id
        and normalize_imdb(query.imdb_id) == normalize_imdb(entry.imdb_id)
    ):
        total += config.imdb_points
    total += match_tags(query.movie_filename, entry.filename) * config.tag_max_points
    total += config.bonus(entry.rank)
    return total


def render_score(value: Fraction) -> str:
    # Three decimals, round half away from zero on the thousandths.
    scaled = value * 1000
    whole = (scaled.numerator * 2 + scaled.denominator) // (scaled.denominator * 2)
    return f"{whole // 1000}.{whole % 1000:03d}"


class RepoStore:
    """In-memory subtitle corpus with dedup-by-best on ingest.

    Entries sharing (filename, imdb) collapse to the strongest variant:
    the one with the higher rank bonus, then the higher upload count.
    """

    def __init__(self, config: ScoringConfig = DEFAULT_CONFIG) -> None:
        self.config = config
        self._order: List[RepoEntry] = []
        self._index: Dict[Tuple[str, str], int] = {}

    def __len__(self) -> int:
        return len(self._order)

    @property
    def entries(self) -> Tuple[RepoEntry, ...]:
        return tuple(self._order)

    def ingest(self, entry: RepoEntry) -> None:
        key = (entry.filename.lower(), normalize_imdb(entry.imdb_id))
        slot = self._index.get(key)
        if slot is None:
            self._index[key] = len(self._order)
            self._order.append(entry)
            return
        current = self._order[slot]
        if (self.config.bonus(entry.rank), entry.upload_count) > (
            self.config.bonus(current.rank),
            current.upload_count,
        ):
            self._order[slot] = entry

    def ingest_all(self, entries: Iterable[RepoEntry]) -> None:
        for entry in entries:
            self.ingest(entry)

    def search(self, query: Query, top: Optional[int] = None) -> List[ScoredEntry]:
        """Entries ranked by exact score, stable on ingest order."""
        if not self._order:
            raise EmptyCorpus("no entries ingested")
        ranked = sorted(
            (ScoredEntry(e, score(e, query, self.config)) for e in self._order),
            key=lambda s: s.score,
            reverse=True,
        )
        return ranked if top is None else ranked[:top]


def entry_from_mapping(raw: dict, config: ScoringConfig = DEFAULT_CONFIG) -> RepoEntry:
    filename = raw.get("filename")
    if not isinstance(filename, str) or not filename:
        raise ValueError("entry needs a non-empty 'filename'")
    imdb = raw.get("imdb", "")
    if not isinstance(imdb, str):
        raise ValueError("'imdb' must be a string")
    uploads = raw.get("uploads", 0)
    if not isinstance(uploads, int) or uploads < 0:
        raise ValueError("'uploads' must be a non-negative integer")
    rank_name = raw.get("rank")
    if rank_name is not None:
        try:
            rank = UploaderRank(str(rank_name).lower())
        except ValueError:
            raise ValueError(f"unknown rank {rank_name!r}")
    else:
        rank = derive_rank(uploads, config)
    return RepoEntry(filename=filename, imdb_id=imdb, rank=rank, upload_count=uploads)


def load_manifest(path: str, config: ScoringConfig = DEFAULT_CONFIG) -> RepoStore:
    """Build a store from a JSON-lines manifest.

    One JSON object per line; blank lines and '#' comments are fine.
    Raises ManifestUnreadable for IO problems, ManifestSyntax (with the
    offending line number) for anything that does not decode.
    """
    try:
        with open(path, "r", encoding="utf-8", errors="strict") as handle:
            lines = handle.read().splitlines()
    except OSError as exc:
        raise ManifestUnreadable(f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise ManifestUnreadable(f"{path} is not UTF-8: {exc}") from exc

    store = RepoStore(config)
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            raw = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ManifestSyntax(number, f"invalid JSON: {exc.msg}") from exc
        if not isinstance(raw, dict):
            raise ManifestSyntax(number, "each line must be a JSON object")
        try:
            store.ingest(entry_from_mapping(raw, config))
        except ValueError as exc:
            raise ManifestSyntax(number, str(exc)) from exc
    return store
