"""Genre-to-genre transition estimation and training feature encodings.

Transitions are counted over consecutive movie pairs: every genre of the
earlier movie contributes one count toward every genre of the later one.
Row-normalizing the counts gives the per-cluster transition matrix; the
average of its rows over a movie's genres is that movie's predicted
next-genre distribution (the "average transition vector", ATV).

Training inputs combine a movie's multi-hot genre vector with its ATV in
one of four ways: element-wise sum, element-wise product, concatenation,
or the genre vector alone.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyGenreSupport
from .genres import GENRES, N_GENRES, is_row_stochastic
from .ingest import UserSequence


class FeatureMode(enum.Enum):
    """How a movie's genre vector and its ATV are merged into one input."""

    SUM = "Sum"
    PRODUCT = "Product"
    CONCAT = "Concat"
    GENRE_ONLY = "GenreOnly"


def feature_dim(mode: FeatureMode) -> int:
    return 2 * N_GENRES if mode is FeatureMode.CONCAT else N_GENRES


@dataclass(frozen=True)
class TransitionModel:
    """Raw pair counts and the row-stochastic matrix they normalize to."""

    cluster: int
    counts: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        if self.counts.shape != (N_GENRES, N_GENRES):
            raise ValueError(f"counts shape {self.counts.shape}")
        if not is_row_stochastic(self.probs):
            raise ValueError("probs must be row-stochastic")
        if not np.allclose(self.probs, normalize_transitions(self.counts)):
            raise ValueError("probs do not match normalized counts")

    @classmethod
    def from_sequences(cls, cluster: int, sequences: Iterable[UserSequence]) -> "TransitionModel":
        counts = count_transitions(sequences)
        return cls(cluster, counts, normalize_transitions(counts))


def count_transitions(sequences: Iterable[UserSequence]) -> np.ndarray:
    """Count genre co-transitions over every consecutive movie pair.

    For movies at steps t-1 and t, counts[i, j] gains 1 for every genre i
    of the earlier movie and every genre j of the later one.
    """
    counts = np.zeros((N_GENRES, N_GENRES), dtype=np.float64)
    for seq in sequences:
        genres = seq.genres
        counts += genres[:-1].T @ genres[1:]
    return counts.astype(np.int64)


def normalize_transitions(counts: np.ndarray) -> np.ndarray:
    """Row-normalize counts; rows with no observations become uniform."""
    counts = np.asarray(counts, dtype=np.float64)
    sums = counts.sum(axis=1, keepdims=True)
    probs = np.full_like(counts, 1.0 / N_GENRES)
    np.divide(counts, sums, out=probs, where=sums > 0)
    return probs


def atv(prev_genres: np.ndarray, probs: np.ndarray) -> np.ndarray:
    """Mean of the transition rows indexed by the movie's genres."""
    sup = np.flatnonzero(prev_genres)
    if sup.size == 0:
        raise EmptyGenreSupport("no genres set; transition vector undefined")
    return probs[sup].mean(axis=0)


def combine(genre: np.ndarray, atv_vec: np.ndarray, mode: FeatureMode) -> np.ndarray:
    """Merge a genre vector with its ATV according to ``mode``."""
    if mode is FeatureMode.SUM:
        return genre + atv_vec
    if mode is FeatureMode.PRODUCT:
        return genre * atv_vec
    if mode is FeatureMode.CONCAT:
        return np.concatenate([genre, atv_vec])
    return genre.copy()


@dataclass(frozen=True)
class GenreSample:
    """One user's raw training example: 4 input genre rows and a target."""

    steps: np.ndarray  # (4, 19) multi-hot
    target: np.ndarray  # (19,) multi-hot


@dataclass(frozen=True)
class Dataset:
    """Featurized samples: inputs (N, 4, d) and multi-hot targets (N, 19)."""

    inputs: np.ndarray
    targets: np.ndarray

    def __len__(self) -> int:
        return self.inputs.shape[0]


def genre_samples(sequences: Iterable[UserSequence]) -> list[GenreSample]:
    """Split each sequence into its 4 input movies and 5th-movie target."""
    return [GenreSample(seq.genres[:4].copy(), seq.genres[4].copy()) for seq in sequences]


def featurize(samples: Sequence[GenreSample], probs: np.ndarray, mode: FeatureMode) -> Dataset:
    """Attach each input movie's ATV and combine per ``mode``."""
    n = len(samples)
    inputs = np.zeros((n, 4, feature_dim(mode)))
    targets = np.zeros((n, N_GENRES))
    for i, sample in enumerate(samples):
        for t in range(4):
            step = sample.steps[t]
            inputs[i, t] = combine(step, atv(step, probs), mode)
        targets[i] = sample.target
    return Dataset(inputs, targets)


def build_dataset(
    sequences: Iterable[UserSequence], probs: np.ndarray, mode: FeatureMode
) -> Dataset:
    """Featurized dataset for a group of sequences (one sample per user)."""
    return featurize(genre_samples(sequences), probs, mode)


def write_probability_csv(probs: np.ndarray, path: str | Path) -> None:
    """Dump a transition matrix as CSV with a genre-name header row."""
    lines = [",".join(GENRES)]
    for row in np.asarray(probs):
        lines.append(",".join(f"{v:.6f}" for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
