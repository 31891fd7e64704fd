import numpy as np
import pytest

from genreseq.clustering import (
    ClusterModel,
    RatingProfile,
    assign_cluster,
    kmeans,
    rating_profile,
)
from genreseq.errors import TooFewUsers
from genreseq.genres import genre_index

from .helpers import make_sequence, random_sequence


class TestRatingProfile:
    def test_two_movie_example(self):
        seq = make_sequence(
            [["Action", "Comedy"], ["Comedy"], ["Drama"], ["Drama"], ["Drama"]],
            ratings=[4.0, 2.0, 1.0, 1.0, 1.0],
        )
        profile = rating_profile(seq).values
        assert profile[genre_index("Action")] == pytest.approx(4.0)
        assert profile[genre_index("Comedy")] == pytest.approx(3.0)
        assert profile[genre_index("Drama")] == pytest.approx(1.0)
        assert profile[genre_index("War")] == 0.0

    def test_constant_case(self):
        seq = make_sequence([["Horror", "Mystery"]] * 5, ratings=[5.0] * 5)
        profile = rating_profile(seq).values
        assert profile[genre_index("Horror")] == 5.0
        assert profile[genre_index("Mystery")] == 5.0
        assert profile.sum() == 10.0

    def test_matches_bruteforce_mean(self):
        rng = np.random.default_rng(17)
        for trial in range(20):
            seq = random_sequence(rng, user_id=trial)
            profile = rating_profile(seq).values
            for j in range(19):
                ratings = [
                    seq.events[t].rating for t in range(5) if seq.genres[t, j] == 1.0
                ]
                expected = sum(ratings) / len(ratings) if ratings else 0.0
                assert profile[j] == pytest.approx(expected)


def profiles_from(points):
    return [RatingProfile(i + 1, np.asarray(p, dtype=float)) for i, p in enumerate(points)]


def pad(*values):
    vec = np.zeros(19)
    vec[: len(values)] = values
    return vec


class TestKMeans:
    def test_well_separated_pairs(self):
        points = [pad(0.0), pad(0.1), pad(5.0, 5.0), pad(5.1, 5.0)]
        model = kmeans(profiles_from(points), k=2, seed=0)
        groups = [model.assignment[1], model.assignment[2], model.assignment[3], model.assignment[4]]
        assert groups[0] == groups[1]
        assert groups[2] == groups[3]
        assert groups[0] != groups[2]

    def test_k1_centroid_is_mean(self):
        rng = np.random.default_rng(2)
        points = rng.uniform(0, 5, size=(12, 19))
        model = kmeans(profiles_from(points), k=1, seed=0)
        assert np.max(np.abs(model.centroids[0] - points.mean(axis=0))) < 1e-9

    def test_k_equals_points_zero_inertia(self):
        rng = np.random.default_rng(3)
        points = rng.uniform(0, 5, size=(6, 19))
        model = kmeans(profiles_from(points), k=6, seed=1)
        assert model.inertia == pytest.approx(0.0, abs=1e-12)

    def test_too_few_users(self):
        with pytest.raises(TooFewUsers):
            kmeans(profiles_from([pad(1.0)]), k=2)

    def test_k_below_one(self):
        with pytest.raises(ValueError):
            kmeans(profiles_from([pad(1.0)]), k=0)

    def test_deterministic_under_seed(self):
        rng = np.random.default_rng(4)
        points = rng.uniform(0, 5, size=(40, 19))
        a = kmeans(profiles_from(points), k=5, seed=9)
        b = kmeans(profiles_from(points), k=5, seed=9)
        assert a.assignment == b.assignment
        assert np.array_equal(a.centroids, b.centroids)
        assert a.inertia_history == b.inertia_history

    def test_inertia_history_non_increasing(self):
        rng = np.random.default_rng(5)
        for trial in range(20):
            points = rng.uniform(0, 5, size=(rng.integers(10, 60), 19))
            model = kmeans(profiles_from(points), k=int(rng.integers(2, 6)), seed=trial)
            history = np.array(model.inertia_history)
            assert np.all(np.diff(history) <= 1e-9)

    def test_every_cluster_non_empty(self):
        rng = np.random.default_rng(6)
        points = rng.uniform(0, 5, size=(50, 19))
        model = kmeans(profiles_from(points), k=7, seed=2)
        assert set(model.assignment.values()) == set(range(7))

    def test_assignment_matches_nearest_scan(self):
        rng = np.random.default_rng(7)
        points = rng.uniform(0, 5, size=(30, 19))
        profs = profiles_from(points)
        model = kmeans(profs, k=4, seed=3)
        for prof in profs:
            dists = [np.sum((prof.values - c) ** 2) for c in model.centroids]
            assert model.assignment[prof.user_id] == int(np.argmin(dists))


class TestAssignCluster:
    def make_model(self, centroids):
        return ClusterModel(
            k=len(centroids),
            centroids=np.asarray(centroids, dtype=float),
            assignment={},
            inertia=0.0,
            inertia_history=(),
        )

    def test_exact_centroid(self):
        model = self.make_model([pad(0.0), pad(1.0), pad(2.0)])
        assert assign_cluster(RatingProfile(1, pad(2.0)), model) == 2

    def test_tie_goes_to_lowest_index(self):
        model = self.make_model([pad(0.0), pad(2.0)])
        assert assign_cluster(RatingProfile(1, pad(1.0)), model) == 0

    def test_matches_linear_scan(self):
        rng = np.random.default_rng(8)
        centroids = rng.uniform(0, 5, size=(6, 19))
        model = self.make_model(centroids)
        for _ in range(25):
            values = rng.uniform(0, 5, size=19)
            expected = int(np.argmin([np.sum((values - c) ** 2) for c in centroids]))
            assert assign_cluster(RatingProfile(1, values), model) == expected
