"""Test builders for creating test objects."""

from dataclasses import replace
from typing import List, Optional, Sequence

import numpy as np

from src.domain.kinds import ActivationKind, DiffusionKind, LossKind
from src.domain.models import BoundInputs, Dataset, GnnConfig, LatentLabels, PlantedConfig
from src.domain.run_config import RunConfig


class PlantedConfigBuilder:
    """Builder for PlantedConfig instances (small and fast by default)."""

    def __init__(self):
        """Initialize builder."""
        self._n = 40
        self._d = 4
        self._p = 0.5
        self._q = 0.1
        self._gamma = 40
        self._mu: Optional[Sequence[float]] = None
        self._sigma = 0.5
        self._seed = 0

    def with_n(self, n: int):
        self._n = n
        return self

    def with_d(self, d: int):
        self._d = d
        return self

    def with_probabilities(self, p: float, q: float):
        self._p, self._q = p, q
        return self

    def with_gamma(self, gamma: int):
        self._gamma = gamma
        return self

    def with_mu(self, mu: Sequence[float]):
        self._mu = mu
        self._d = len(mu)
        return self

    def with_sigma(self, sigma: float):
        self._sigma = sigma
        return self

    def with_seed(self, seed: int):
        self._seed = seed
        return self

    def build(self) -> PlantedConfig:
        mu = self._mu if self._mu is not None else [1.0] * self._d
        return PlantedConfig(
            n=self._n,
            d=self._d,
            p=self._p,
            q=self._q,
            gamma_target=min(self._gamma, self._n),
            mu=tuple(float(v) for v in mu),
            sigma=self._sigma,
            seed=self._seed,
        )


class GnnConfigBuilder:
    """Builder for GnnConfig instances."""

    def __init__(self):
        """Initialize builder."""
        self._dims: List[int] = [4, 8, 1]
        self._activation = ActivationKind.RELU
        self._alpha: Optional[float] = None
        self._loss = LossKind.SQUARED_BINARY
        self._init_scale = 1.0
        self._seed = 0
        self._linear_last: Optional[bool] = None

    def with_dims(self, *dims: int):
        self._dims = list(dims)
        return self

    def with_activation(self, activation: ActivationKind):
        self._activation = activation
        return self

    def with_residual(self, alpha: float):
        self._alpha = alpha
        return self

    def with_loss(self, loss: LossKind):
        self._loss = loss
        return self

    def with_init_scale(self, scale: float):
        self._init_scale = scale
        return self

    def with_seed(self, seed: int):
        self._seed = seed
        return self

    def with_linear_last_layer(self, value: bool):
        self._linear_last = value
        return self

    def build(self) -> GnnConfig:
        return GnnConfig(
            layer_dims=tuple(self._dims),
            activation=self._activation,
            residual_alpha=self._alpha,
            loss_kind=self._loss,
            init_scale=self._init_scale,
            seed=self._seed,
            linear_last_layer=self._linear_last,
        )


class BoundInputsBuilder:
    """Builder for BoundInputs instances; defaults give c1 = c2 = 2, c3 = sqrt(2)."""

    def __init__(self):
        """Initialize builder."""
        self._values = dict(
            n=4, m=2, K=1, d=1, lipschitz=1.0, omega=1.0, beta=1.0, s_inf=1.0, sx_2inf=1.0
        )

    def with_sizes(self, n: int, m: int):
        self._values.update(n=n, m=m)
        return self

    def with_depth(self, K: int):
        self._values["K"] = K
        return self

    def with_d(self, d: int):
        self._values["d"] = d
        return self

    def with_norms(self, omega: float, beta: float):
        self._values.update(omega=omega, beta=beta)
        return self

    def with_graph(self, s_inf: float, sx_2inf: float):
        self._values.update(s_inf=s_inf, sx_2inf=sx_2inf)
        return self

    def with_x_inf(self, x_inf: float):
        self._values["x_inf"] = x_inf
        return self

    def with_lipschitz(self, lipschitz: float):
        self._values["lipschitz"] = lipschitz
        return self

    def build(self) -> BoundInputs:
        return BoundInputs(**self._values)


class RunConfigBuilder:
    """Builder for small RunConfig instances that train in well under a second."""

    def __init__(self):
        """Initialize builder."""
        config = RunConfig()
        self._config = replace(
            config,
            planted=replace(config.planted, n=40, d=4, p=0.5, q=0.1, sigma=0.5),
            train=replace(config.train, epochs=20, eval_every=10, labeled_count=10, lr=0.01),
            sweep=replace(config.sweep, seeds=[0, 1], epochs_grid=[10, 20], jobs=1),
        )

    def with_planted(self, **values):
        self._config = replace(self._config, planted=replace(self._config.planted, **values))
        return self

    def with_gnn(self, **values):
        self._config = replace(self._config, gnn=replace(self._config.gnn, **values))
        return self

    def with_train(self, **values):
        self._config = replace(self._config, train=replace(self._config.train, **values))
        return self

    def with_bounds(self, **values):
        self._config = replace(self._config, bounds=replace(self._config.bounds, **values))
        return self

    def with_sweep(self, **values):
        self._config = replace(self._config, sweep=replace(self._config.sweep, **values))
        return self

    def build(self) -> RunConfig:
        return self._config


def make_dataset(
    adjacency: np.ndarray,
    features: np.ndarray,
    train_idx: Sequence[int],
    classes: Optional[Sequence[int]] = None,
) -> Dataset:
    """Dataset from explicit arrays; without ``classes`` the nodes alternate +1/-1."""
    n = adjacency.shape[0]
    if classes is not None:
        return Dataset(
            adjacency=np.asarray(adjacency, dtype=np.float64),
            features=np.asarray(features, dtype=np.float64),
            train_idx=np.asarray(train_idx, dtype=np.int64),
            num_classes=int(max(classes)) + 1,
            class_indices=np.asarray(classes, dtype=np.int64),
        )
    z = np.where(np.arange(n) % 2 == 0, 1, -1)
    return Dataset(
        adjacency=np.asarray(adjacency, dtype=np.float64),
        features=np.asarray(features, dtype=np.float64),
        train_idx=np.asarray(train_idx, dtype=np.int64),
        num_classes=2,
        labels=LatentLabels(z=z, y=z.copy(), gamma_actual=n),
    )


def random_graph(n: int, density: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((n, n)) < density, k=1)
    return (upper | upper.T).astype(np.float64)


DIFFUSION_KINDS = (DiffusionKind.SELF_LOOP, DiffusionKind.DEGREE_NORMALIZED, DiffusionKind.IDENTITY)


def path_adjacency(n: int) -> np.ndarray:
    """Path 0 - 1 - ... - (n-1)."""
    adjacency = np.zeros((n, n))
    index = np.arange(n - 1)
    adjacency[index, index + 1] = 1.0
    adjacency[index + 1, index] = 1.0
    return adjacency


def circulant_adjacency(n: int, offsets: Sequence[int]) -> np.ndarray:
    """Each node i linked to i +- k (mod n) for every k in ``offsets``; 2*len(offsets)-regular."""
    adjacency = np.zeros((n, n))
    nodes = np.arange(n)
    for offset in offsets:
        adjacency[nodes, (nodes + offset) % n] = 1.0
        adjacency[(nodes + offset) % n, nodes] = 1.0
    return adjacency


def hypercube_adjacency(dim: int) -> np.ndarray:
    """Hypercube on 2**dim nodes; dim-regular."""
    nodes = np.arange(2**dim)
    differing = np.bitwise_xor.outer(nodes, nodes)
    return np.isin(differing, [1 << bit for bit in range(dim)]).astype(np.float64)
