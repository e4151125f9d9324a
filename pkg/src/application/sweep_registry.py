"""Registry of the per-kind changes a sweep applies at each grid value."""

from dataclasses import replace
from typing import Callable, Dict, Optional, Union

from ..domain.kinds import SweepKind
from ..domain.models import Dataset
from ..domain.run_config import RunConfig
from ..infrastructure.datasets.transforms import add_feature_noise, resplit, subsample_nodes

ConfigApplier = Callable[[RunConfig, float], RunConfig]
DatasetTransform = Callable[[Dataset, float, int], Dataset]

DEFAULT_HIDDEN_WIDTH = 16


class SweepRegistry:
    """Registry for managing and retrieving sweep appliers.

    A config applier rewrites the run configuration for one grid value. A dataset
    transform rewrites an already loaded dataset, which is how sweeps over a fixed
    real graph vary graph size, labeled count or feature noise.
    """

    def __init__(self):
        """Initialize sweep registry."""
        self._config_appliers: Dict[SweepKind, ConfigApplier] = {}
        self._dataset_transforms: Dict[SweepKind, DatasetTransform] = {}

    def register_config_applier(self, kind: SweepKind, applier: ConfigApplier) -> None:
        """Register a config applier.

        Args:
            kind: Sweep kind the applier serves.
            applier: Function of (config, value) returning the cell configuration.
        """
        self._config_appliers[SweepKind(kind)] = applier

    def register_dataset_transform(self, kind: SweepKind, transform: DatasetTransform) -> None:
        """Register a dataset transform.

        Args:
            kind: Sweep kind the transform serves.
            transform: Function of (dataset, value, seed) returning the cell dataset.
        """
        self._dataset_transforms[SweepKind(kind)] = transform

    def apply_config(
        self, kind: Union[SweepKind, str], config: RunConfig, value: float
    ) -> RunConfig:
        """Configuration of the cell at ``value``.

        Raises:
            ValueError: If no applier is registered for ``kind``.
        """
        kind = SweepKind(kind)
        if kind not in self._config_appliers:
            raise ValueError(f"Sweep kind '{kind.value}' has no config applier")
        return self._config_appliers[kind](config, value)

    def has_dataset_transform(self, kind: Union[SweepKind, str]) -> bool:
        return SweepKind(kind) in self._dataset_transforms

    def apply_dataset(
        self, kind: Union[SweepKind, str], dataset: Dataset, value: float, seed: int
    ) -> Dataset:
        """Dataset of the cell at ``value`` derived from a loaded base dataset.

        Raises:
            ValueError: If no transform is registered for ``kind``.
        """
        kind = SweepKind(kind)
        if kind not in self._dataset_transforms:
            raise ValueError(f"Sweep kind '{kind.value}' cannot transform a loaded dataset")
        return self._dataset_transforms[kind](dataset, value, seed)


def _alignment(config: RunConfig, value: float) -> RunConfig:
    return replace(config, planted=replace(config.planted, gamma_ratio=float(value)))


def _graph_size(config: RunConfig, value: float) -> RunConfig:
    ratio = config.train.labeled_ratio
    if ratio is None:
        ratio = config.train.labeled_count / config.planted.n
    return replace(
        config,
        planted=replace(config.planted, n=int(value)),
        train=replace(config.train, labeled_ratio=ratio),
    )


def _labeled_count(config: RunConfig, value: float) -> RunConfig:
    return replace(config, train=replace(config.train, labeled_ratio=float(value)))


def _depth(config: RunConfig, value: float) -> RunConfig:
    num_layers = int(value)
    if num_layers < 1:
        raise ValueError(f"Depth must be at least 1, got {value}")
    hidden = config.gnn.hidden_dims
    width = hidden[0] if hidden else DEFAULT_HIDDEN_WIDTH
    return replace(config, gnn=replace(config.gnn, hidden_dims=[width] * (num_layers - 1)))


def _residual_alpha(config: RunConfig, value: float) -> RunConfig:
    return replace(config, gnn=replace(config.gnn, residual_alpha=float(value)))


def _feature_noise(config: RunConfig, value: float) -> RunConfig:
    return replace(config, planted=replace(config.planted, sigma=float(value)))


def _unchanged(config: RunConfig, value: float) -> RunConfig:
    return config


def _subsample(dataset: Dataset, value: float, seed: int) -> Dataset:
    return subsample_nodes(dataset, int(value), seed)


def _resplit(dataset: Dataset, value: float, seed: int) -> Dataset:
    m = max(1, min(dataset.n - 1, int(round(value * dataset.n))))
    return resplit(dataset, m, seed)


def _noise(dataset: Dataset, value: float, seed: int) -> Dataset:
    return add_feature_noise(dataset, float(value), seed)


def initialize_appliers(registry: SweepRegistry, source: Optional[str] = None) -> None:
    """Register the built-in appliers.

    Args:
        registry: Registry to fill.
        source: ``"cora"`` registers dataset transforms for graph size, labeled count
            and feature noise instead of the planted config appliers.
    """
    registry.register_config_applier(SweepKind.DEPTH, _depth)
    registry.register_config_applier(SweepKind.RESIDUAL_ALPHA, _residual_alpha)
    if source == "cora":
        for kind in (SweepKind.GRAPH_SIZE, SweepKind.LABELED_COUNT, SweepKind.FEATURE_NOISE):
            registry.register_config_applier(kind, _unchanged)
        registry.register_dataset_transform(SweepKind.GRAPH_SIZE, _subsample)
        registry.register_dataset_transform(SweepKind.LABELED_COUNT, _resplit)
        registry.register_dataset_transform(SweepKind.FEATURE_NOISE, _noise)
        return
    registry.register_config_applier(SweepKind.ALIGNMENT, _alignment)
    registry.register_config_applier(SweepKind.GRAPH_SIZE, _graph_size)
    registry.register_config_applier(SweepKind.LABELED_COUNT, _labeled_count)
    registry.register_config_applier(SweepKind.FEATURE_NOISE, _feature_noise)


def create_sweep_registry(source: Optional[str] = None) -> SweepRegistry:
    """Create and initialize a sweep registry.

    Returns:
        SweepRegistry with the built-in appliers registered.
    """
    registry = SweepRegistry()
    initialize_appliers(registry, source)
    return registry
