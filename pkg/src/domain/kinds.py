"""Enumerations for the configurable kinds used across the lab."""

from enum import Enum


class DiffusionKind(str, Enum):
    """Graph diffusion operator kinds."""

    SELF_LOOP = "self_loop"
    DEGREE_NORMALIZED = "degree_normalized"
    IDENTITY = "identity"


class ActivationKind(str, Enum):
    """Pointwise activation kinds (both 1-Lipschitz)."""

    IDENTITY = "identity"
    RELU = "relu"


class LossKind(str, Enum):
    """Training loss kinds."""

    SQUARED_BINARY = "squared_binary"
    MULTICLASS_NLL = "multiclass_nll"


class OptimizerKind(str, Enum):
    """Optimizer implementation kinds."""

    SGD = "sgd"
    ADAM = "adam"


class VcKind(str, Enum):
    """VC dimension formulas for linear and ReLU GNNs."""

    LINEAR = "linear"
    RELU_UPPER = "relu_upper"


class NormTableRow(str, Enum):
    """Rows of the expected-norm concentration table."""

    SX_DET = "sx_det"
    SMS_X = "sms_x"
    XMX_S = "xmx_s"
    S_INF_POW = "s_inf_pow"


class NormSource(str, Enum):
    """Where the parameter norms (omega, beta) of a bound come from."""

    FIXED = "fixed"
    MEASURED = "measured"


class SweepKind(str, Enum):
    """Parameters a sweep can vary."""

    ALIGNMENT = "alignment"
    GRAPH_SIZE = "graph_size"
    LABELED_COUNT = "labeled_count"
    DEPTH = "depth"
    RESIDUAL_ALPHA = "residual_alpha"
    FEATURE_NOISE = "feature_noise"


class DataSource(str, Enum):
    """Dataset families a sweep can run on."""

    PLANTED = "planted"
    CORA = "cora"
