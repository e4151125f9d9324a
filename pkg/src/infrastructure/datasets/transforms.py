"""Dataset transforms used by the real-data sweeps."""

import numpy as np

from src.domain.models import Dataset, LatentLabels
from src.infrastructure.utils.rng import make_rng


def resplit(dataset: Dataset, m: int, seed: int) -> Dataset:
    """Same graph and features with a fresh seeded labeled set of size m."""
    if not 0 < m < dataset.n:
        raise ValueError(f"Labeled count must lie in (0, {dataset.n}), got {m}")
    train_idx = np.sort(make_rng(seed, "resplit").permutation(dataset.n)[:m])
    return Dataset(
        adjacency=dataset.adjacency,
        features=dataset.features,
        train_idx=train_idx,
        num_classes=dataset.num_classes,
        labels=dataset.labels,
        class_indices=dataset.class_indices,
        planted=dataset.planted,
        target=dataset.target,
    )


def add_feature_noise(dataset: Dataset, sigma: float, seed: int) -> Dataset:
    """Add i.i.d. N(0, sigma^2) noise to every feature entry."""
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    noise = make_rng(seed, "feature_noise").normal(0.0, sigma, size=dataset.features.shape)
    return Dataset(
        adjacency=dataset.adjacency,
        features=dataset.features + noise,
        train_idx=dataset.train_idx,
        num_classes=dataset.num_classes,
        labels=dataset.labels,
        class_indices=dataset.class_indices,
        planted=dataset.planted,
        target=dataset.target,
    )


def subsample_nodes(dataset: Dataset, n_sub: int, seed: int) -> Dataset:
    """Induced subgraph on n_sub random nodes, keeping the labeled fraction m/n."""
    if not 1 < n_sub <= dataset.n:
        raise ValueError(f"n_sub must lie in (1, {dataset.n}], got {n_sub}")
    nodes = np.sort(make_rng(seed, "subsample").choice(dataset.n, size=n_sub, replace=False))
    labels = None
    if dataset.labels is not None:
        z, y = dataset.labels.z[nodes], dataset.labels.y[nodes]
        labels = LatentLabels(z=z, y=y, gamma_actual=abs(int(np.dot(y, z))))
    m = min(max(1, round(dataset.m * n_sub / dataset.n)), n_sub - 1)
    sub = Dataset(
        adjacency=dataset.adjacency[np.ix_(nodes, nodes)],
        features=dataset.features[nodes],
        train_idx=np.arange(m),
        num_classes=dataset.num_classes,
        labels=labels,
        class_indices=None if dataset.class_indices is None else dataset.class_indices[nodes],
        target=dataset.target,
    )
    return resplit(sub, m, seed)
