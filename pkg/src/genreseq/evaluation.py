"""Multi-label confusion counting, the four metrics, and sub-genre trimming.

Counting is micro-style: one yes/no cell per (sample, genre), pooled into
a single TP/FP/FN/TN quadruple.  A genre is predicted "yes" when its
probability strictly exceeds the threshold, so ties count as negatives.

Trimming targets clusters whose weakest configured metric falls below a
threshold: genre columns that occur in fewer than a fixed fraction of the
cluster's movie events are zeroed (kept as dimensions, not removed), and
the cluster's model is retrained on the masked data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import LengthMismatch
from .genres import N_GENRES
from .ingest import SEQUENCE_LENGTH, UserSequence
from .transitions import GenreSample

DEFAULT_THRESHOLD = 0.5
DEFAULT_TRIM_METRICS = ("precision", "recall")

METRIC_NAMES = ("recall", "precision", "accuracy", "f1")


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class Metrics:
    recall: float
    precision: float
    accuracy: float
    f1: float


@dataclass(frozen=True)
class ClusterMetrics:
    """One cluster's metrics plus the minimum over the configured set."""

    cluster: int
    recall: float
    precision: float
    accuracy: float
    f1: float
    p_min: float
    n_samples: int = 0


def confusion_counts(
    predictions: Sequence[np.ndarray] | np.ndarray,
    targets: Sequence[np.ndarray] | np.ndarray,
    threshold: float = DEFAULT_THRESHOLD,
) -> ConfusionCounts:
    """Pool per-(sample, genre) decisions into one confusion quadruple."""
    preds = np.asarray(predictions, dtype=np.float64)
    targs = np.asarray(targets, dtype=np.float64)
    if preds.shape != targs.shape:
        raise LengthMismatch(f"predictions {preds.shape} vs targets {targs.shape}")
    yes = preds > threshold
    actual = targs > 0.5
    tp = int(np.sum(yes & actual))
    fp = int(np.sum(yes & ~actual))
    fn = int(np.sum(~yes & actual))
    tn = int(np.sum(~yes & ~actual))
    return ConfusionCounts(tp, fp, fn, tn)


def metrics(c: ConfusionCounts) -> Metrics:
    """Precision, recall, accuracy, F1; degenerate denominators give 0."""
    precision = c.tp / (c.tp + c.fp) if c.tp + c.fp > 0 else 0.0
    recall = c.tp / (c.tp + c.fn) if c.tp + c.fn > 0 else 0.0
    accuracy = (c.tp + c.tn) / c.total if c.total > 0 else 0.0
    f1 = (
        2.0 * recall * precision / (recall + precision)
        if recall + precision > 0
        else 0.0
    )
    return Metrics(recall, precision, accuracy, f1)


def cluster_metrics(
    cluster: int,
    counts: ConfusionCounts,
    metric_set: Sequence[str] = DEFAULT_TRIM_METRICS,
) -> ClusterMetrics:
    """Metrics for one cluster, with p_min over ``metric_set``."""
    for name in metric_set:
        if name not in METRIC_NAMES:
            raise ValueError(f"unknown metric {name!r}")
    m = metrics(counts)
    p_min = min(getattr(m, name) for name in metric_set)
    return ClusterMetrics(
        cluster,
        m.recall,
        m.precision,
        m.accuracy,
        m.f1,
        p_min,
        n_samples=counts.total // N_GENRES,
    )


def select_trim_clusters(all_metrics: Iterable[ClusterMetrics], eta: float) -> set[int]:
    """Clusters whose weakest configured metric falls below ``eta``."""
    if not 0.0 < eta < 1.0:
        raise ValueError("eta must be in (0, 1)")
    return {m.cluster for m in all_metrics if m.p_min < eta}


@dataclass(frozen=True)
class MovieGenreMatrix:
    """Per-user genre occurrence counts over a cluster's movie events.

    counts[u, j] is how many of user u's 5 movies carry genre j;
    ``length`` is the cluster's total movie events (5 per member).
    """

    cluster: int
    counts: np.ndarray
    length: int

    @classmethod
    def from_sequences(cls, cluster: int, sequences: Sequence[UserSequence]) -> "MovieGenreMatrix":
        counts = np.stack([seq.genres.sum(axis=0) for seq in sequences]).astype(np.int64)
        return cls(cluster, counts, SEQUENCE_LENGTH * len(sequences))


def trim_genres(m: MovieGenreMatrix, theta: float) -> tuple[MovieGenreMatrix, frozenset[int]]:
    """Zero the columns of genres occurring in under theta of the events.

    A genre column j is zeroed when its total count is strictly below
    theta * length.  Returns the trimmed matrix and the zeroed indices;
    applying the operation twice equals applying it once.
    """
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must be in (0, 1)")
    totals = m.counts.sum(axis=0)
    cutoff = theta * m.length
    zeroed = frozenset(int(j) for j in np.flatnonzero(totals < cutoff))
    trimmed = m.counts.copy()
    trimmed[:, sorted(zeroed)] = 0
    return MovieGenreMatrix(m.cluster, trimmed, m.length), zeroed


def apply_trim_to_dataset(
    samples: Sequence[GenreSample], zeroed: Iterable[int]
) -> tuple[list[GenreSample], int]:
    """Mask zeroed genre dimensions out of every input step and target.

    Dimensions are kept (set to 0), not removed.  A sample is dropped and
    tallied when any of its movies loses its whole genre set, since its
    transition vector would be undefined.  Returns (samples, dropped).
    """
    mask = np.ones(N_GENRES)
    mask[list(zeroed)] = 0.0
    kept: list[GenreSample] = []
    dropped = 0
    for sample in samples:
        steps = sample.steps * mask
        target = sample.target * mask
        if np.any(steps.sum(axis=1) == 0) or target.sum() == 0:
            dropped += 1
            continue
        kept.append(GenreSample(steps, target))
    return kept, dropped


def mean_cluster_metrics(
    values: Sequence[ClusterMetrics], weighted: bool = False
) -> Metrics:
    """Mean per metric over clusters; optionally weighted by sample count."""
    if not values:
        return Metrics(0.0, 0.0, 0.0, 0.0)
    if weighted:
        weights = np.array([max(v.n_samples, 0) for v in values], dtype=np.float64)
        if weights.sum() == 0:
            weights = np.ones(len(values))
    else:
        weights = np.ones(len(values))
    weights = weights / weights.sum()
    return Metrics(
        float(sum(w * v.recall for w, v in zip(weights, values))),
        float(sum(w * v.precision for w, v in zip(weights, values))),
        float(sum(w * v.accuracy for w, v in zip(weights, values))),
        float(sum(w * v.f1 for w, v in zip(weights, values))),
    )
