"""Tests for the planted graph and feature model."""

import numpy as np
import pytest

from src.domain.models import PlantedConfig
from src.infrastructure.planted.planted_models import (
    expected_matrices,
    generate_dataset,
    make_latent_labels,
    sample_adjacency,
    sample_features,
    sample_mean_vector,
    sample_train_indices,
)
from tests.builders import PlantedConfigBuilder


class TestMakeLatentLabels:
    """Tests for make_latent_labels."""

    @pytest.mark.parametrize("gamma", [0, 4, 20, 36, 40])
    def test_labels_are_balanced_with_requested_alignment(self, gamma):
        """Test that both vectors are balanced and |y^T z| hits achievable targets."""
        labels = make_latent_labels(40, gamma, seed=1)

        assert labels.z.sum() == 0
        assert labels.y.sum() == 0
        assert labels.gamma_actual == abs(int(labels.y @ labels.z)) == gamma

    def test_unachievable_gamma_rounds_to_nearest(self):
        """Test that gamma 6 on n=40 rounds to an achievable value n - 4t."""
        labels = make_latent_labels(40, 6, seed=0)
        assert labels.gamma_actual in (4, 8)

    def test_same_seed_same_labels(self):
        """Test determinism per seed."""
        first = make_latent_labels(20, 8, seed=3)
        second = make_latent_labels(20, 8, seed=3)
        np.testing.assert_array_equal(first.z, second.z)
        np.testing.assert_array_equal(first.y, second.y)

    def test_no_permutation_keeps_blocks(self):
        """Test that permute=False keeps z as ones followed by minus ones."""
        labels = make_latent_labels(8, 8, seed=0, permute=False)
        np.testing.assert_array_equal(labels.z, [1, 1, 1, 1, -1, -1, -1, -1])

    @pytest.mark.parametrize("n,gamma", [(7, 0), (0, 0), (10, 11), (10, -1)])
    def test_invalid_arguments_raise(self, n, gamma):
        """Test that odd n and out-of-range gamma raise ValueError."""
        with pytest.raises(ValueError):
            make_latent_labels(n, gamma, seed=0)


class TestSampling:
    """Tests for the feature, adjacency and split samplers."""

    def test_mean_vector_in_range(self):
        """Test that mu is drawn from [low, high)."""
        mu = sample_mean_vector(50, seed=2, low=0.5, high=1.5)
        assert mu.shape == (50,)
        assert np.all((mu >= 0.5) & (mu < 1.5))

    def test_features_without_noise_equal_mean(self):
        """Test that sigma = 0 gives X = z mu^T exactly."""
        labels = make_latent_labels(6, 6, seed=0)
        features = sample_features(labels, [1.0, -2.0], sigma=0.0, seed=0)
        np.testing.assert_array_equal(features, np.outer(labels.z, [1.0, -2.0]))

    def test_negative_sigma_raises(self):
        """Test that a negative noise level is rejected."""
        labels = make_latent_labels(4, 4, seed=0)
        with pytest.raises(ValueError, match="sigma"):
            sample_features(labels, [1.0], sigma=-1.0, seed=0)

    def test_adjacency_is_symmetric_binary_with_zero_diagonal(self):
        """Test the structural properties of a sampled graph."""
        labels = make_latent_labels(30, 30, seed=0)
        adjacency = sample_adjacency(labels, 0.6, 0.1, seed=5)

        np.testing.assert_array_equal(adjacency, adjacency.T)
        assert set(np.unique(adjacency)) <= {0.0, 1.0}
        assert np.all(np.diag(adjacency) == 0)

    def test_complete_and_empty_extremes(self):
        """Test p = q = 1 gives the complete graph and p = q = 0 the empty one."""
        labels = make_latent_labels(10, 10, seed=0)
        np.testing.assert_array_equal(
            sample_adjacency(labels, 1.0, 1.0, seed=0), np.ones((10, 10)) - np.eye(10)
        )
        assert sample_adjacency(labels, 0.0, 0.0, seed=0).sum() == 0

    def test_only_intra_community_edges_when_q_zero(self):
        """Test that q = 0 never connects nodes of different communities."""
        labels = make_latent_labels(20, 12, seed=4)
        adjacency = sample_adjacency(labels, 1.0, 0.0, seed=4)
        different = np.not_equal.outer(labels.y, labels.y)
        assert adjacency[different].sum() == 0

    @pytest.mark.parametrize("p,q", [(0.3, 0.1), (0.5, 0.05), (0.2, 0.2)])
    def test_edge_frequency_over_seeds_matches_block_probability(self, p, q):
        """Test that a fixed pair is linked with frequency p inside a community and q across.

        Over N = 400 seeds the frequency must lie within five binomial standard
        deviations sqrt(r(1-r)/N) of its probability r.
        """
        labels = make_latent_labels(20, 12, seed=9)
        y = labels.y
        same = [(i, j) for i in range(20) for j in range(i + 1, 20) if y[i] == y[j]]
        across = [(i, j) for i in range(20) for j in range(i + 1, 20) if y[i] != y[j]]
        pairs = {"intra": (same[0], p), "inter": (across[-1], q)}
        num_seeds = 400
        samples = [sample_adjacency(labels, p, q, seed=seed) for seed in range(num_seeds)]

        for name, ((i, j), rate) in pairs.items():
            frequency = np.mean([adjacency[i, j] for adjacency in samples])
            band = 5.0 * np.sqrt(rate * (1.0 - rate) / num_seeds)
            assert abs(frequency - rate) <= band, f"{name} pair ({i}, {j})"

    def test_q_above_p_raises(self):
        """Test that q > p is rejected."""
        labels = make_latent_labels(4, 4, seed=0)
        with pytest.raises(ValueError, match="exceeds"):
            sample_adjacency(labels, 0.1, 0.5, seed=0)

    def test_expected_matrices(self):
        """Test the population adjacency and features."""
        labels = make_latent_labels(4, 0, seed=0)
        script_x, script_a = expected_matrices(labels, [2.0], 0.5, 0.25)

        np.testing.assert_array_equal(script_x[:, 0], 2.0 * labels.z)
        assert np.all(np.diag(script_a) == 0)
        same = np.equal.outer(labels.y, labels.y) & ~np.eye(4, dtype=bool)
        assert np.all(script_a[same] == 0.5)
        assert np.all(script_a[~np.equal.outer(labels.y, labels.y)] == 0.25)

    def test_train_indices_sorted_distinct(self):
        """Test the labeled split is sorted, distinct and of size m."""
        idx = sample_train_indices(50, 12, seed=9)
        assert len(idx) == 12
        assert np.all(np.diff(idx) > 0)

    def test_train_indices_out_of_range(self):
        """Test that m > n raises."""
        with pytest.raises(ValueError):
            sample_train_indices(5, 6, seed=0)


class TestGenerateDataset:
    """Tests for generate_dataset."""

    def test_dataset_fields(self, small_planted):
        """Test the generated dataset carries sizes, labels and the planted config."""
        dataset = generate_dataset(small_planted, m=10)

        assert (dataset.n, dataset.d, dataset.m) == (40, 4, 10)
        assert dataset.num_classes == 2
        assert dataset.planted == small_planted
        np.testing.assert_array_equal(dataset.binary_targets(), dataset.labels.z)

    def test_target_y(self, small_planted):
        """Test that target y switches the binary targets to the communities."""
        dataset = generate_dataset(small_planted, m=10, target="y")
        np.testing.assert_array_equal(dataset.binary_targets(), dataset.labels.y)

    def test_deterministic(self, small_planted):
        """Test that the same config gives identical datasets."""
        first = generate_dataset(small_planted, m=10)
        second = generate_dataset(small_planted, m=10)
        np.testing.assert_array_equal(first.adjacency, second.adjacency)
        np.testing.assert_array_equal(first.features, second.features)
        np.testing.assert_array_equal(first.train_idx, second.train_idx)

    def test_seed_changes_graph(self):
        """Test that a different seed gives a different graph."""
        first = generate_dataset(PlantedConfigBuilder().with_seed(0).build(), m=10)
        second = generate_dataset(PlantedConfigBuilder().with_seed(1).build(), m=10)
        assert not np.array_equal(first.adjacency, second.adjacency)


class TestPlantedConfig:
    """Tests for PlantedConfig validation and serialization."""

    def test_round_trip_dict(self, small_planted):
        """Test to_dict / from_dict."""
        assert PlantedConfig.from_dict(small_planted.to_dict()) == small_planted

    def test_mu_inf(self):
        """Test the maximum absolute mean entry."""
        assert PlantedConfigBuilder().with_mu([0.5, -3.0, 1.0]).build().mu_inf == 3.0

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n=5),
            dict(p=0.1, q=0.2),
            dict(gamma_target=50),
            dict(sigma=-0.1),
            dict(mu=(1.0,)),
        ],
    )
    def test_invalid_configs_raise(self, small_planted, kwargs):
        """Test validation of every field."""
        values = small_planted.to_dict()
        values.update(kwargs)
        values["mu"] = tuple(values["mu"])
        with pytest.raises(ValueError):
            PlantedConfig(**values)
