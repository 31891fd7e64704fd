"""Seeded MovieLens-format dataset with planted user archetypes.

Writes ``movies.csv`` and ``ratings.csv`` describing seven user
populations with distinct genre habits:

* two look-alike pairs that watch the same movie pools with identically
  distributed histories but follow different next-movie rules, told apart
  only by how high they rate (so clustering on rating profiles separates
  what pooled training cannot);
* a horror-leaning group and a westerns group with strongly patterned,
  easily predicted next movies;
* one diffuse group whose next movie is independent of its history and
  sprinkled with rare genres, which makes it the weakest cluster and the
  natural target for sub-genre trimming.

Histories are coverage-forced (each user touches their whole genre pool)
so that rating profiles form tight, well-separated blobs.  Every user
carries six rating events (the 5-most-recent window drops the oldest),
some users carry an extra event on a genre-less movie, and a few casual
users fall below the eligibility threshold on purpose.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .ingest import NO_GENRES_TOKEN

N_ARCHETYPES = 7

_POOL_ONE = ("Action", "Thriller", "Crime", "Sci-Fi")
_POOL_TWO = ("Romance", "Comedy", "Drama", "Musical")

_TWIN_HI_RATINGS = (4.5, 5.0)
_TWIN_LO_RATINGS = (2.0, 2.5, 3.0)
_SHARP_RATINGS = (3.5, 4.0, 4.5)
_CLASSICS_RATINGS = (4.5, 5.0)
_DIFFUSE_RATINGS = (0.5, 1.0)

_DIFFUSE_POOL_SIZE = 500
_DIFFUSE_MIDS = ("Animation", "Children", "IMAX", "Musical")
_DIFFUSE_RARES = ("War", "Western", "Documentary", "Film-Noir")
_MID_SLOTS = 210  # per mid genre, out of 1000 co-genre slots
_RARE_SLOTS = 40  # per rare genre; keeps each under 10% of movie events

_IDS_PER_BUCKET = 30


def _ring_templates(pool: tuple[str, ...]) -> list[tuple[str, ...]]:
    """Four 2-genre movie templates where neighbors share one genre."""
    return [(pool[i], pool[(i + 1) % 4]) for i in range(4)]


class _Catalog:
    """Movie-id buckets keyed by template, plus the CSV rows to write."""

    def __init__(self):
        self.rows: list[tuple[int, str, str]] = []
        self.buckets: dict[str, list[int]] = {}
        self._next_id = 1

    def _title(self, movie_id: int) -> str:
        if movie_id % 13 == 0:
            return f"Feature, The (Part {movie_id}) (2020)"
        return f"Synthetic Feature #{movie_id} (2020)"

    def add_bucket(self, key: str, genres: tuple[str, ...], count: int) -> None:
        ids = []
        for _ in range(count):
            movie_id = self._next_id
            self._next_id += 1
            self.rows.append((movie_id, self._title(movie_id), "|".join(genres)))
            ids.append(movie_id)
        self.buckets[key] = ids

    def add_single(self, key: str, genres: tuple[str, ...]) -> None:
        self.add_bucket(key, genres, 1)

    def add_genreless(self, count: int) -> list[int]:
        ids = []
        for _ in range(count):
            movie_id = self._next_id
            self._next_id += 1
            self.rows.append((movie_id, self._title(movie_id), NO_GENRES_TOKEN))
            ids.append(movie_id)
        return ids


def _build_diffuse_sets(rng: np.random.Generator) -> list[tuple[str, ...]]:
    """Genre sets for the diffuse pool: probabilistic anchors, wide co-genres."""
    n = _DIFFUSE_POOL_SIZE
    anchors: list[tuple[str, ...]] = (
        [("Adventure", "Fantasy")] * 175
        + [("Adventure",)] * 135
        + [("Fantasy",)] * 115
        + [()] * 75
    )
    rng.shuffle(anchors)

    slots: list[str] = []
    for genre in _DIFFUSE_MIDS:
        slots.extend([genre] * _MID_SLOTS)
    for genre in _DIFFUSE_RARES:
        slots.extend([genre] * _RARE_SLOTS)
    slots_arr = np.array(slots)
    rng.shuffle(slots_arr)

    sets = []
    for i in range(n):
        cogenres = {str(slots_arr[2 * i]), str(slots_arr[2 * i + 1])}
        sets.append(tuple(sorted(set(anchors[i]) | cogenres)))
    return sets


def _build_catalog(rng: np.random.Generator) -> tuple[_Catalog, list[int]]:
    catalog = _Catalog()
    for pool_name, pool in (("p1", _POOL_ONE), ("p2", _POOL_TWO)):
        for i, template in enumerate(_ring_templates(pool)):
            catalog.add_bucket(f"{pool_name}_t{i}", template, _IDS_PER_BUCKET)
    catalog.add_bucket("sharp_base", ("Horror", "Mystery"), _IDS_PER_BUCKET)
    catalog.add_bucket("sharp_solo", ("Horror",), _IDS_PER_BUCKET)
    catalog.add_bucket("sharp_full", ("Horror", "Mystery", "Thriller"), _IDS_PER_BUCKET)
    catalog.add_bucket("cls_base", ("War", "Western"), _IDS_PER_BUCKET)
    catalog.add_bucket("cls_solo", ("War",), _IDS_PER_BUCKET)
    catalog.add_bucket("cls_full", ("Documentary", "War", "Western"), _IDS_PER_BUCKET)
    for i, genres in enumerate(_build_diffuse_sets(rng)):
        catalog.add_single(f"dif_{i}", genres)
    genreless = catalog.add_genreless(5)
    return catalog, genreless


def _twin_buckets(rng: np.random.Generator, pool_name: str, shift: int) -> list[str]:
    """Coverage-forced history; the sixth movie follows a ring shift rule.

    The first four movies are a permutation of all four templates, so the
    kept window always spans the whole pool even after the oldest event
    drops out; the fifth is uniform and the sixth applies the rule to it.
    """
    history = list(rng.permutation(4)) + [int(rng.integers(0, 4))]
    if rng.random() < 0.9:
        target = (history[4] + shift) % 4
    else:
        target = int(rng.integers(0, 4))
    return [f"{pool_name}_t{int(i)}" for i in history] + [f"{pool_name}_t{target}"]


def _patterned_buckets(rng: np.random.Generator, prefix: str) -> list[str]:
    """History = 3 base + 2 full-pool movies shuffled; noisy ruled target.

    Two full-pool movies guarantee the third genre survives the window
    drop.  The target is the base pair most of the time, sometimes the
    solo movie (a false positive for the pair model) and sometimes the
    full triple (an unpredictable extra genre).
    """
    history = [f"{prefix}_base"] * 3 + [f"{prefix}_full"] * 2
    rng.shuffle(history)
    target = str(
        rng.choice([f"{prefix}_base", f"{prefix}_solo", f"{prefix}_full"], p=[0.72, 0.12, 0.16])
    )
    return history + [target]


def _diffuse_buckets(rng: np.random.Generator) -> list[str]:
    idx = rng.integers(0, _DIFFUSE_POOL_SIZE, size=6)
    return [f"dif_{i}" for i in idx]


def write_archetype_dataset(
    out_dir: str | Path,
    users_per_archetype: int = 1500,
    seed: int = 0,
) -> tuple[Path, Path]:
    """Write movies.csv and ratings.csv; returns their paths.

    The twin pairs split 60/40 so pooled training cannot sit exactly on
    the decision boundary between their two next-movie rules.  Total
    eligible users = 7 * users_per_archetype.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    catalog, genreless_ids = _build_catalog(rng)

    heavy = int(round(users_per_archetype * 1.2))
    light = 2 * users_per_archetype - heavy
    roster: list[tuple[str, int, tuple[float, ...]]] = [
        ("twin_a1", heavy, _TWIN_HI_RATINGS),
        ("twin_a2", light, _TWIN_LO_RATINGS),
        ("twin_b1", heavy, _TWIN_HI_RATINGS),
        ("twin_b2", light, _TWIN_LO_RATINGS),
        ("sharp", users_per_archetype, _SHARP_RATINGS),
        ("classics", users_per_archetype, _CLASSICS_RATINGS),
        ("diffuse", users_per_archetype, _DIFFUSE_RATINGS),
    ]

    ratings_rows: list[tuple[int, int, float, int]] = []
    user_id = 0
    for kind, count, grid in roster:
        for _ in range(count):
            user_id += 1
            if kind == "twin_a1":
                buckets = _twin_buckets(rng, "p1", 1)
            elif kind == "twin_a2":
                buckets = _twin_buckets(rng, "p1", 2)
            elif kind == "twin_b1":
                buckets = _twin_buckets(rng, "p2", 1)
            elif kind == "twin_b2":
                buckets = _twin_buckets(rng, "p2", 2)
            elif kind == "sharp":
                buckets = _patterned_buckets(rng, "sharp")
            elif kind == "classics":
                buckets = _patterned_buckets(rng, "cls")
            else:
                buckets = _diffuse_buckets(rng)
            base = 1_000_000_000 + user_id * 100
            for j, bucket in enumerate(buckets):
                ids = catalog.buckets[bucket]
                movie_id = int(ids[rng.integers(0, len(ids))])
                rating = float(rng.choice(grid))
                ratings_rows.append((user_id, movie_id, rating, base + 10 * j))
            if user_id % 50 == 0:
                # An event on a genre-less movie; filtered out by ingestion.
                movie_id = int(genreless_ids[rng.integers(0, len(genreless_ids))])
                ratings_rows.append((user_id, movie_id, float(rng.choice(grid)), base + 25))

    # A few casual users below the five-movie eligibility threshold.
    any_bucket = catalog.buckets["p1_t0"]
    for _ in range(25):
        user_id += 1
        base = 1_000_000_000 + user_id * 100
        for j in range(3):
            movie_id = int(any_bucket[rng.integers(0, len(any_bucket))])
            ratings_rows.append((user_id, movie_id, 3.0, base + 10 * j))

    movies_path = out / "movies.csv"
    with open(movies_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["movieId", "title", "genres"])
        writer.writerows(catalog.rows)

    ratings_path = out / "ratings.csv"
    with open(ratings_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["userId", "movieId", "rating", "timestamp"])
        writer.writerows(ratings_rows)

    return movies_path, ratings_path
