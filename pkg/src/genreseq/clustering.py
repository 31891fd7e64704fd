"""Per-user genre rating profiles and seeded k-means over them.

A rating profile is the user's average rating per genre over their
5-movie window (0 where a genre never occurs).  Users are partitioned
with Lloyd's algorithm from k-means++ starts; everything is driven by an
explicit seed so runs reproduce exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import TooFewUsers
from .ingest import UserSequence

DEFAULT_K = 7
DEFAULT_MAX_ITER = 300
DEFAULT_TOL = 1e-6


@dataclass(frozen=True)
class RatingProfile:
    """Average rating per genre for one user (0 = genre unseen)."""

    user_id: int
    values: np.ndarray


@dataclass(frozen=True)
class ClusterModel:
    """k centroids plus the user -> cluster assignment they induce."""

    k: int
    centroids: np.ndarray
    assignment: dict[int, int]
    inertia: float
    inertia_history: tuple[float, ...]


def rating_profile(seq: UserSequence) -> RatingProfile:
    """Mean rating over the user's movies containing each genre."""
    counts = seq.genres.sum(axis=0)
    sums = seq.genres.T @ seq.ratings
    values = np.divide(sums, counts, out=np.zeros_like(sums), where=counts > 0)
    return RatingProfile(seq.user_id, values)


def _nearest(points: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Labels and squared distances to the nearest centroid (ties: lowest index)."""
    d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    labels = np.argmin(d2, axis=1)
    return labels, d2[np.arange(points.shape[0]), labels]


def _plus_plus_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: spread starts proportionally to squared distance."""
    n = points.shape[0]
    centroids = np.empty((k, points.shape[1]))
    centroids[0] = points[rng.integers(n)]
    d2 = ((points - centroids[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = rng.choice(n, p=d2 / total)
        else:
            idx = rng.integers(n)
        centroids[j] = points[idx]
        d2 = np.minimum(d2, ((points - centroids[j]) ** 2).sum(axis=1))
    return centroids


def kmeans(
    profiles: Sequence[RatingProfile],
    k: int = DEFAULT_K,
    seed: int = 0,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
) -> ClusterModel:
    """Lloyd iterations from seeded k-means++ starts.

    Stops when the largest centroid shift falls below ``tol`` or after
    ``max_iter`` iterations.  An empty cluster is reseeded to the point
    farthest from its assigned centroid, keeping k fixed.  The recorded
    inertia history is non-increasing.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > len(profiles):
        raise TooFewUsers(f"k={k} exceeds {len(profiles)} profiles")
    points = np.stack([p.values for p in profiles]).astype(np.float64)
    rng = np.random.default_rng(seed)
    centroids = _plus_plus_init(points, k, rng)

    history: list[float] = []
    labels = np.zeros(points.shape[0], dtype=np.intp)
    for _ in range(max_iter):
        labels, d2 = _nearest(points, centroids)
        history.append(float(d2.sum()))
        new_centroids = centroids.copy()
        empty: list[int] = []
        for j in range(k):
            members = points[labels == j]
            if members.shape[0] > 0:
                new_centroids[j] = members.mean(axis=0)
            else:
                empty.append(j)
        if empty:
            point_d2 = ((points - new_centroids[labels]) ** 2).sum(axis=1)
            for j in empty:
                far = int(np.argmax(point_d2))
                new_centroids[j] = points[far]
                point_d2[far] = -1.0  # a point can seed at most one empty cluster
        shift = float(np.max(np.linalg.norm(new_centroids - centroids, axis=1)))
        centroids = new_centroids
        if shift < tol:
            break

    labels, d2 = _nearest(points, centroids)
    inertia = float(d2.sum())
    history.append(inertia)
    assignment = {p.user_id: int(labels[i]) for i, p in enumerate(profiles)}
    return ClusterModel(k, centroids, assignment, inertia, tuple(history))


def assign_cluster(profile: RatingProfile, model: ClusterModel) -> int:
    """Index of the nearest centroid (ties go to the lowest index)."""
    d2 = ((model.centroids - profile.values) ** 2).sum(axis=1)
    return int(np.argmin(d2))
