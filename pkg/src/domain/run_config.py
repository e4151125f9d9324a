"""Typed run configuration: one dataclass per config file section."""

from dataclasses import dataclass, field, fields
from typing import Any, Dict, List, Optional, Tuple, Union

from src.domain.kinds import (
    ActivationKind,
    DataSource,
    DiffusionKind,
    LossKind,
    NormSource,
    OptimizerKind,
    SweepKind,
    VcKind,
)


@dataclass
class PlantedSection:
    n: int = 500
    d: int = 100
    p: float = 0.2
    q: float = 0.01
    gamma_ratio: float = 1.0
    sigma: float = 1.0
    mu: Union[str, List[float]] = "uniform"
    mu_low: float = 0.0
    mu_high: float = 1.0
    target: str = "z"
    permute: bool = True
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.gamma_ratio <= 1.0:
            raise ValueError(f"planted.gamma_ratio must lie in [0, 1], got {self.gamma_ratio}")
        if isinstance(self.mu, str) and self.mu != "uniform":
            raise ValueError(f"planted.mu must be 'uniform' or a list, got {self.mu!r}")
        if self.target not in ("z", "y"):
            raise ValueError(f"planted.target must be 'z' or 'y', got {self.target!r}")


@dataclass
class GnnSection:
    hidden_dims: List[int] = field(default_factory=lambda: [16])
    activation: str = ActivationKind.RELU.value
    residual_alpha: Optional[float] = None
    loss: str = LossKind.SQUARED_BINARY.value
    init_scale: float = 1.0
    linear_last_layer: Optional[bool] = None

    def __post_init__(self) -> None:
        ActivationKind(self.activation)
        LossKind(self.loss)


@dataclass
class TrainSection:
    diffusion: str = DiffusionKind.DEGREE_NORMALIZED.value
    optimizer: str = OptimizerKind.SGD.value
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    epochs: int = 1000
    eval_every: int = 50
    labeled_count: int = 100
    labeled_ratio: Optional[float] = None

    def __post_init__(self) -> None:
        DiffusionKind(self.diffusion)
        OptimizerKind(self.optimizer)
        if self.labeled_ratio is not None and not 0.0 < self.labeled_ratio < 1.0:
            raise ValueError(f"train.labeled_ratio must lie in (0, 1), got {self.labeled_ratio}")

    def labeled_for(self, n: int) -> int:
        """Labeled count for a graph of n nodes (the ratio wins when set)."""
        if self.labeled_ratio is not None:
            return max(1, min(n - 1, int(round(self.labeled_ratio * n))))
        return self.labeled_count


@dataclass
class BoundsSection:
    mode: str = NormSource.FIXED.value
    omega: float = 0.1
    beta: float = 0.1
    delta: float = 0.05
    lipschitz: float = 1.0
    c6: float = 1.0
    c7: float = 1.0
    c8: float = 1.0
    vc_kind: str = VcKind.LINEAR.value
    expected_kind: str = DiffusionKind.SELF_LOOP.value
    check_trc_estimate: bool = False
    num_sigma: int = 500
    num_models: int = 8

    def __post_init__(self) -> None:
        NormSource(self.mode)
        VcKind(self.vc_kind)
        if DiffusionKind(self.expected_kind) == DiffusionKind.IDENTITY:
            raise ValueError("bounds.expected_kind must be self_loop or degree_normalized")


@dataclass
class SweepSection:
    kind: Optional[str] = None
    grid: List[float] = field(default_factory=list)
    seeds: List[int] = field(default_factory=lambda: [0, 1, 2, 3, 4])
    epochs_grid: Optional[List[int]] = None
    scale_factor: float = 25.0
    jobs: Optional[int] = None
    source: str = DataSource.PLANTED.value

    def __post_init__(self) -> None:
        if self.kind is not None:
            SweepKind(self.kind)
        DataSource(self.source)
        if not self.seeds or any(s < 0 for s in self.seeds):
            raise ValueError("sweep.seeds must be a non-empty list of non-negative ints")
        if self.scale_factor <= 0:
            raise ValueError(f"sweep.scale_factor must be positive, got {self.scale_factor}")


@dataclass
class CoraSection:
    content_path: str = "data/cora/cora.content"
    cites_path: str = "data/cora/cora.cites"
    train_fraction: float = 0.1
    feature_width: int = 1433


@dataclass
class RunConfig:
    """Effective configuration of one command invocation."""

    planted: PlantedSection = field(default_factory=PlantedSection)
    gnn: GnnSection = field(default_factory=GnnSection)
    train: TrainSection = field(default_factory=TrainSection)
    bounds: BoundsSection = field(default_factory=BoundsSection)
    sweep: SweepSection = field(default_factory=SweepSection)
    cora: CoraSection = field(default_factory=CoraSection)

    def to_flat(self) -> Dict[str, Any]:
        """``section.key -> value`` mapping used for provenance lines."""
        flat: Dict[str, Any] = {}
        for section_field in fields(self):
            section = getattr(self, section_field.name)
            for key_field in fields(section):
                flat[f"{section_field.name}.{key_field.name}"] = getattr(section, key_field.name)
        return flat


SECTION_TYPES = {
    "planted": PlantedSection,
    "gnn": GnnSection,
    "train": TrainSection,
    "bounds": BoundsSection,
    "sweep": SweepSection,
    "cora": CoraSection,
}


DEFAULT_EPOCHS_GRID: Tuple[int, ...] = tuple(range(50, 1001, 50))


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: a kind, its grid values and the base configuration of every cell.

    ``kind`` is None for a single-point run (empty sweep section).
    """

    kind: Optional[SweepKind]
    grid: Tuple[float, ...]
    config: RunConfig
    seeds: Tuple[int, ...] = (0, 1, 2, 3, 4)
    epochs_grid: Tuple[int, ...] = DEFAULT_EPOCHS_GRID
    scale_factor: float = 25.0
    source: DataSource = DataSource.PLANTED
    experiment: str = "sweep"

    def __post_init__(self) -> None:
        if not self.grid:
            raise ValueError("Sweep grid must not be empty")
        if not self.seeds or any(s < 0 for s in self.seeds):
            raise ValueError(f"Sweep seeds must be non-negative and non-empty, got {self.seeds}")
        if not self.epochs_grid or any(e < 0 for e in self.epochs_grid):
            raise ValueError(
                f"epochs_grid must be non-negative and non-empty, got {self.epochs_grid}"
            )
        if self.scale_factor <= 0:
            raise ValueError(f"scale_factor must be positive, got {self.scale_factor}")

    @property
    def param_name(self) -> str:
        return self.kind.value if self.kind is not None else "none"

    @classmethod
    def from_run_config(cls, config: RunConfig, experiment: str = "sweep") -> "SweepSpec":
        """Build the SweepSpec of ``config.sweep``; an empty grid gives a single-point run."""
        section = config.sweep
        kind = SweepKind(section.kind) if section.kind is not None else None
        grid = tuple(float(v) for v in section.grid)
        if kind is None or not grid:
            kind, grid = None, (0.0,)
        if section.epochs_grid is not None:
            epochs_grid = tuple(int(e) for e in section.epochs_grid)
        else:
            epochs_grid = tuple(
                range(config.train.eval_every, config.train.epochs + 1, config.train.eval_every)
            ) or (config.train.epochs,)
        return cls(
            kind=kind,
            grid=grid,
            config=config,
            seeds=tuple(section.seeds),
            epochs_grid=epochs_grid,
            scale_factor=section.scale_factor,
            source=DataSource(section.source),
            experiment=experiment,
        )
