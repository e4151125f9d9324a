"""Domain entities shared by every layer."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.domain.kinds import (
    ActivationKind,
    DiffusionKind,
    LossKind,
    NormSource,
    NormTableRow,
    OptimizerKind,
    VcKind,
)


@dataclass(frozen=True)
class PlantedConfig:
    """Parameters of the two-community SBM + two-component GMM planted model.

    Attributes:
        n: Node count, positive and even so both label vectors can be balanced.
        d: Feature dimension.
        p: Intra-community edge probability.
        q: Inter-community edge probability, ``q <= p``.
        gamma_target: Requested alignment |y^T z| in [0, n].
        mu: Class mean vector of length d.
        sigma: Feature noise standard deviation.
        seed: Root seed for every random stream of the model.
    """

    n: int
    d: int
    p: float
    q: float
    gamma_target: int
    mu: Tuple[float, ...]
    sigma: float
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n <= 0 or self.n % 2 != 0:
            raise ValueError(f"n must be a positive even integer, got {self.n}")
        if self.d <= 0:
            raise ValueError(f"d must be positive, got {self.d}")
        if len(self.mu) != self.d:
            raise ValueError(f"mu has length {len(self.mu)}, expected d={self.d}")
        if not 0.0 <= self.q <= self.p <= 1.0:
            raise ValueError(f"Need 0 <= q <= p <= 1, got p={self.p}, q={self.q}")
        if not 0 <= self.gamma_target <= self.n:
            raise ValueError(f"gamma_target must lie in [0, {self.n}], got {self.gamma_target}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be non-negative, got {self.sigma}")

    @property
    def mu_vector(self) -> np.ndarray:
        """Mean vector as a float64 array."""
        return np.asarray(self.mu, dtype=np.float64)

    @property
    def mu_inf(self) -> float:
        """Maximum absolute entry of mu."""
        return float(np.max(np.abs(self.mu_vector))) if self.d else 0.0

    def to_dict(self) -> Dict[str, Any]:
        """Plain-python representation used by dataset persistence."""
        return {
            "n": self.n,
            "d": self.d,
            "p": self.p,
            "q": self.q,
            "gamma_target": self.gamma_target,
            "mu": list(self.mu),
            "sigma": self.sigma,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PlantedConfig":
        """Inverse of :meth:`to_dict`."""
        return cls(
            n=int(data["n"]),
            d=int(data["d"]),
            p=float(data["p"]),
            q=float(data["q"]),
            gamma_target=int(data["gamma_target"]),
            mu=tuple(float(v) for v in data["mu"]),
            sigma=float(data["sigma"]),
            seed=int(data["seed"]),
        )


@dataclass(eq=False)
class LatentLabels:
    """Feature classes z, graph communities y and their realised alignment."""

    z: np.ndarray
    y: np.ndarray
    gamma_actual: int


@dataclass(eq=False)
class Dataset:
    """A transductive node-classification instance.

    Planted datasets carry :class:`LatentLabels` (binary targets come from z or y);
    real datasets carry integer ``class_indices`` instead.
    """

    adjacency: np.ndarray
    features: np.ndarray
    train_idx: np.ndarray
    num_classes: int
    labels: Optional[LatentLabels] = None
    class_indices: Optional[np.ndarray] = None
    planted: Optional[PlantedConfig] = None
    target: str = "z"

    def __post_init__(self) -> None:
        n = self.adjacency.shape[0]
        if self.adjacency.shape != (n, n):
            raise ValueError(f"adjacency must be square, got shape {self.adjacency.shape}")
        if self.features.ndim != 2 or self.features.shape[0] != n:
            raise ValueError(
                f"features must have {n} rows, got shape {self.features.shape}"
            )
        if not np.array_equal(self.adjacency, self.adjacency.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(self.adjacency) != 0):
            raise ValueError("adjacency must have a zero diagonal")
        if not np.all((self.adjacency == 0) | (self.adjacency == 1)):
            raise ValueError("adjacency entries must be 0 or 1")
        self.train_idx = np.asarray(self.train_idx, dtype=np.int64)
        if len(np.unique(self.train_idx)) != len(self.train_idx):
            raise ValueError("train_idx contains duplicates")
        if len(self.train_idx) and (self.train_idx.min() < 0 or self.train_idx.max() >= n):
            raise ValueError(f"train_idx entries must lie in [0, {n})")
        if self.labels is None and self.class_indices is None:
            raise ValueError("Dataset needs latent labels or class indices")
        if self.target not in ("z", "y"):
            raise ValueError(f"target must be 'z' or 'y', got {self.target!r}")

    @property
    def n(self) -> int:
        return int(self.adjacency.shape[0])

    @property
    def d(self) -> int:
        return int(self.features.shape[1])

    @property
    def m(self) -> int:
        return int(len(self.train_idx))

    @property
    def unlabeled_idx(self) -> np.ndarray:
        """Indices of the nodes outside the labeled set, ascending."""
        mask = np.ones(self.n, dtype=bool)
        mask[self.train_idx] = False
        return np.flatnonzero(mask)

    def binary_targets(self) -> np.ndarray:
        """Targets in {-1, +1} for the squared binary loss."""
        if self.labels is not None:
            vector = self.labels.z if self.target == "z" else self.labels.y
            return vector.astype(np.float64)
        if self.num_classes != 2:
            raise ValueError("Binary targets need a two-class dataset")
        return np.where(self.class_indices == 1, 1.0, -1.0)

    def class_targets(self) -> np.ndarray:
        """Targets as class indices for the multiclass NLL loss."""
        if self.class_indices is not None:
            return self.class_indices.astype(np.int64)
        return (self.binary_targets() > 0).astype(np.int64)

    def targets_for(self, loss_kind: LossKind) -> np.ndarray:
        if loss_kind == LossKind.SQUARED_BINARY:
            return self.binary_targets()
        return self.class_targets()


@dataclass(eq=False)
class DiffusionOperator:
    """Graph diffusion matrix S together with the formula that produced it."""

    kind: DiffusionKind
    matrix: np.ndarray

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])


@dataclass(frozen=True)
class GnnConfig:
    """Architecture and initialisation of a K-layer (optionally residual) GNN.

    ``linear_last_layer`` left as None resolves to True for the squared binary loss
    and False for the multiclass NLL loss.
    """

    layer_dims: Tuple[int, ...]
    activation: ActivationKind = ActivationKind.RELU
    residual_alpha: Optional[float] = None
    loss_kind: LossKind = LossKind.SQUARED_BINARY
    init_scale: float = 1.0
    seed: int = 0
    linear_last_layer: Optional[bool] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "layer_dims", tuple(int(v) for v in self.layer_dims))
        if len(self.layer_dims) < 2:
            raise ValueError("layer_dims needs at least [d_0, d_1] (K >= 1)")
        if any(v <= 0 for v in self.layer_dims):
            raise ValueError(f"layer_dims must be positive, got {self.layer_dims}")
        if self.loss_kind == LossKind.SQUARED_BINARY and self.layer_dims[-1] != 1:
            raise ValueError("squared_binary loss requires an output width of 1")
        if self.residual_alpha is not None and not 0.0 <= self.residual_alpha <= 1.0:
            raise ValueError(f"residual_alpha must lie in [0, 1], got {self.residual_alpha}")
        if self.init_scale < 0:
            raise ValueError(f"init_scale must be non-negative, got {self.init_scale}")

    @property
    def num_layers(self) -> int:
        return len(self.layer_dims) - 1

    @property
    def input_dim(self) -> int:
        return self.layer_dims[0]

    @property
    def output_dim(self) -> int:
        return self.layer_dims[-1]

    @property
    def hidden_dims(self) -> Tuple[int, ...]:
        """Widths d_1..d_{K-1}."""
        return self.layer_dims[1:-1]

    @property
    def lipschitz(self) -> float:
        # identity and ReLU are both 1-Lipschitz
        return 1.0

    @property
    def is_residual(self) -> bool:
        return self.residual_alpha is not None

    @property
    def uses_linear_last_layer(self) -> bool:
        if self.linear_last_layer is None:
            return self.loss_kind == LossKind.SQUARED_BINARY
        return self.linear_last_layer

    def is_residual_layer(self, k: int) -> bool:
        """Whether layer k (1-based) takes the residual path to the first hidden layer."""
        return self.is_residual and k >= 2 and self.layer_dims[k] == self.layer_dims[1]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "layer_dims": list(self.layer_dims),
            "activation": self.activation.value,
            "residual_alpha": self.residual_alpha,
            "loss_kind": self.loss_kind.value,
            "init_scale": self.init_scale,
            "seed": self.seed,
            "linear_last_layer": self.linear_last_layer,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GnnConfig":
        return cls(
            layer_dims=tuple(data["layer_dims"]),
            activation=ActivationKind(data["activation"]),
            residual_alpha=data.get("residual_alpha"),
            loss_kind=LossKind(data["loss_kind"]),
            init_scale=float(data["init_scale"]),
            seed=int(data["seed"]),
            linear_last_layer=data.get("linear_last_layer"),
        )


@dataclass(eq=False)
class GnnModel:
    """Trainable parameters W_k (d_{k-1} x d_k) and b_k (d_k) of a GNN."""

    weights: List[np.ndarray]
    biases: List[np.ndarray]
    config: GnnConfig

    def __post_init__(self) -> None:
        dims = self.config.layer_dims
        if len(self.weights) != self.config.num_layers or len(self.biases) != len(self.weights):
            raise ValueError(
                f"Expected {self.config.num_layers} weight/bias pairs, "
                f"got {len(self.weights)}/{len(self.biases)}"
            )
        for k, (weight, bias) in enumerate(zip(self.weights, self.biases)):
            if weight.shape != (dims[k], dims[k + 1]):
                raise ValueError(
                    f"W_{k + 1} has shape {weight.shape}, expected {(dims[k], dims[k + 1])}"
                )
            if bias.shape != (dims[k + 1],):
                raise ValueError(f"b_{k + 1} has shape {bias.shape}, expected {(dims[k + 1],)}")

    def parameters(self) -> List[np.ndarray]:
        """Parameters in the fixed order W_1, b_1, ..., W_K, b_K."""
        params: List[np.ndarray] = []
        for weight, bias in zip(self.weights, self.biases):
            params.extend([weight, bias])
        return params

    def with_parameters(self, params: List[np.ndarray]) -> "GnnModel":
        """New model with parameters given in :meth:`parameters` order."""
        return GnnModel(weights=list(params[0::2]), biases=list(params[1::2]), config=self.config)

    def copy(self) -> "GnnModel":
        return self.with_parameters([p.copy() for p in self.parameters()])


@dataclass(frozen=True)
class Metrics:
    """Transductive error triple plus 0-1 error rates and gaps."""

    train_loss: float
    unlabeled_loss: float
    full_loss: float
    train_err01: float
    unlabeled_err01: float
    gap_loss: float
    gap_err01: float

    @classmethod
    def create(
        cls,
        train_loss: float,
        unlabeled_loss: float,
        train_err01: float,
        unlabeled_err01: float,
        m: int,
        n: int,
    ) -> "Metrics":
        full_loss = (m * train_loss + (n - m) * unlabeled_loss) / n
        return cls(
            train_loss=train_loss,
            unlabeled_loss=unlabeled_loss,
            full_loss=full_loss,
            train_err01=train_err01,
            unlabeled_err01=unlabeled_err01,
            gap_loss=unlabeled_loss - train_loss,
            gap_err01=unlabeled_err01 - train_err01,
        )


@dataclass(eq=False)
class OptimizerState:
    """Optimizer hyperparameters plus step counter and Adam moments."""

    kind: OptimizerKind
    lr: float
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step_count: int = 0
    first_moments: Optional[List[np.ndarray]] = None
    second_moments: Optional[List[np.ndarray]] = None

    def __post_init__(self) -> None:
        if self.lr < 0:
            raise ValueError(f"lr must be non-negative, got {self.lr}")


@dataclass(frozen=True)
class TrainConfig:
    """Optimisation schedule for one training run."""

    optimizer: OptimizerKind = OptimizerKind.SGD
    lr: float = 0.001
    epochs: int = 1000
    eval_every: int = 50
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self) -> None:
        if self.epochs < 0:
            raise ValueError(f"epochs must be non-negative, got {self.epochs}")
        if self.eval_every <= 0:
            raise ValueError(f"eval_every must be positive, got {self.eval_every}")


@dataclass(eq=False)
class TrainingResult:
    """Trained model with its evaluation trajectory."""

    model: GnnModel
    trajectory: List[Tuple[int, Metrics]]

    @property
    def final_metrics(self) -> Optional[Metrics]:
        return self.trajectory[-1][1] if self.trajectory else None


@dataclass(frozen=True)
class BoundInputs:
    """Quantities entering the TRC bound of a (residual) GNN class."""

    n: int
    m: int
    K: int
    d: int
    lipschitz: float
    omega: float
    beta: float
    s_inf: float
    sx_2inf: float
    x_inf: float = 0.0
    delta: float = 0.05

    def __post_init__(self) -> None:
        if not 0 < self.m < self.n:
            raise ValueError(f"Need 0 < m < n, got m={self.m}, n={self.n}")
        if self.K < 1 or self.d < 1:
            raise ValueError(f"K and d must be positive, got K={self.K}, d={self.d}")
        for name in ("lipschitz", "omega", "beta", "s_inf", "sx_2inf", "x_inf"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")

    @property
    def c1(self) -> float:
        return 2.0 * self.lipschitz * self.beta

    @property
    def c2(self) -> float:
        return 2.0 * self.lipschitz * self.omega

    @property
    def c3(self) -> float:
        return self.lipschitz * self.omega * float(np.sqrt(2.0 / self.d))


@dataclass(frozen=True)
class ExpectedTrcConfig:
    """Planted-model view used by the expected TRC bounds.

    c6, c7 and c8 stand in for the (1 + o(1)) corrections and default to 1.
    """

    n: int
    p: float
    q: float
    gamma: float
    mu_inf: float
    sigma: float
    d: int
    K: int
    omega: float
    beta: float
    lipschitz: float = 1.0
    c6: float = 1.0
    c7: float = 1.0
    c8: float = 1.0

    @property
    def regime_warning(self) -> bool:
        """True when p or q is not well above (ln n)^2 / n."""
        threshold = np.log(self.n) ** 2 / self.n
        return self.p <= threshold or self.q <= threshold

    @classmethod
    def from_planted(
        cls,
        planted: PlantedConfig,
        K: int,
        omega: float,
        beta: float,
        gamma: Optional[float] = None,
        lipschitz: float = 1.0,
        c6: float = 1.0,
        c7: float = 1.0,
        c8: float = 1.0,
    ) -> "ExpectedTrcConfig":
        return cls(
            n=planted.n,
            p=planted.p,
            q=planted.q,
            gamma=float(planted.gamma_target if gamma is None else gamma),
            mu_inf=planted.mu_inf,
            sigma=planted.sigma,
            d=planted.d,
            K=K,
            omega=omega,
            beta=beta,
            lipschitz=lipschitz,
            c6=c6,
            c7=c7,
            c8=c8,
        )


@dataclass
class BoundReport:
    """Every computed bound for one dataset / diffusion / parameter-norm setting."""

    n: int
    m: int
    K: int
    d: int
    diffusion: str
    norm_source: NormSource
    omega: float
    beta: float
    delta: float
    s_inf: float
    sx_2inf: float
    x_inf: float
    s_spectral: float
    sx_spectral_upper: float
    rank_s: int
    c1: float
    c2: float
    c3: float
    vc_kind: VcKind
    vc_cap: int
    vc_is_upper_bound: bool
    vc_gap_bound: float
    trc_upper: float
    slack_c4_term: float
    slack_c5_term: float
    total_gap_bound: float
    c4: float = 5.05
    c5: float = 0.8
    residual_alpha: Optional[float] = None
    residual_trc_upper: Optional[float] = None
    expected_trc_sbm: Optional[float] = None
    expected_kind: Optional[str] = None
    s_spectral_converged: bool = True

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {}
        for name, value in self.__dict__.items():
            if hasattr(value, "value"):
                value = value.value
            result[name] = value
        return result


@dataclass(frozen=True)
class DiffusionComparison:
    """Deterministic TRC bound with S = I versus S = S_nor."""

    identity_bound: float
    normalized_bound: float
    graph_helps: bool
    threshold_annotation: float


@dataclass(frozen=True)
class TrcEstimate:
    """Monte Carlo lower estimate of a transductive Rademacher complexity."""

    mean: float
    standard_error: float
    num_sigma_draws: int
    num_hypothesis_samples: int
    p_sigma: float


@dataclass(frozen=True)
class FiniteSetCheck:
    """Empirical TRC of a finite set against the finite-set lemma bound."""

    empirical_value: float
    lemma_bound: float
    ratio: float


@dataclass(frozen=True)
class NormCheck:
    """One expected-norm table entry compared with its Monte Carlo mean."""

    row: NormTableRow
    kind: DiffusionKind
    moment: int
    empirical_mean: float
    table_value: float
    passed: bool


RESULTS_COLUMNS: Tuple[str, ...] = (
    "experiment",
    "sweep_param",
    "sweep_value",
    "seed",
    "epoch",
    "train_loss",
    "unlabeled_loss",
    "gap_loss",
    "train_err01",
    "unlabeled_err01",
    "gap_err01",
    "bound_trc",
    "bound_vc",
    "bound_expected_sbm",
    "omega_used",
    "beta_used",
    "scale_factor",
)


@dataclass(frozen=True)
class ResultsRow:
    """One (grid point, seed, epoch) record of a sweep; None marks an empty cell."""

    experiment: str
    sweep_param: str
    sweep_value: float
    seed: int
    epoch: int
    train_loss: Optional[float]
    unlabeled_loss: Optional[float]
    gap_loss: Optional[float]
    train_err01: Optional[float]
    unlabeled_err01: Optional[float]
    gap_err01: Optional[float]
    bound_trc: Optional[float]
    bound_vc: Optional[float]
    bound_expected_sbm: Optional[float]
    omega_used: Optional[float]
    beta_used: Optional[float]
    scale_factor: float


@dataclass
class TrendReport:
    """Per-grid-point aggregates of a sweep and their rank correlation."""

    kind: str
    grid: List[float]
    mean_gap: List[float]
    bound_trend: List[float]
    spearman_rho: float
    flags: List[str] = field(default_factory=list)

    @property
    def bound_monotone_increasing(self) -> bool:
        return all(b > a for a, b in zip(self.bound_trend, self.bound_trend[1:]))

    @property
    def gap_ratio(self) -> float:
        """max/min of the mean gaps (inf when the smallest is not positive)."""
        finite = [g for g in self.mean_gap if np.isfinite(g)]
        if not finite or min(finite) <= 0:
            return float("inf")
        return max(finite) / min(finite)
