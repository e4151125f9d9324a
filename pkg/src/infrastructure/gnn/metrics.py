"""Transductive error triple and parameter norms."""

from typing import Tuple

import numpy as np

from src.domain.models import GnnModel, Metrics
from src.infrastructure.gnn.engine import forward_cache
from src.infrastructure.gnn.losses import subset_loss, zero_one_error
from src.infrastructure.graph.graph_ops import inf_norm


def evaluate(
    model: GnnModel,
    diffusion,
    features: np.ndarray,
    targets: np.ndarray,
    train_idx: np.ndarray,
) -> Metrics:
    """Losses and 0-1 errors on the labeled and unlabeled nodes.

    Args:
        model: Network to evaluate.
        diffusion: DiffusionOperator or raw S matrix.
        features: Node features X.
        targets: Targets for every node (only labeled ones are trained on).
        train_idx: Labeled node indices.

    Returns:
        Metrics with L_n = (m L_m + (n - m) L_u) / n.

    Raises:
        ValueError: If the labeled or unlabeled set is empty.
    """
    n = features.shape[0]
    train_idx = np.asarray(train_idx, dtype=np.int64)
    m = len(train_idx)
    if m == 0:
        raise ValueError("Labeled set is empty; the training loss is undefined")
    if m >= n:
        raise ValueError("Unlabeled set is empty (m = n); the unlabeled loss is undefined")
    mask = np.ones(n, dtype=bool)
    mask[train_idx] = False
    unlabeled_idx = np.flatnonzero(mask)

    outputs = forward_cache(model, diffusion, features).output
    loss_kind = model.config.loss_kind
    return Metrics.create(
        train_loss=subset_loss(loss_kind, outputs, targets, train_idx),
        unlabeled_loss=subset_loss(loss_kind, outputs, targets, unlabeled_idx),
        train_err01=zero_one_error(loss_kind, outputs, targets, train_idx),
        unlabeled_err01=zero_one_error(loss_kind, outputs, targets, unlabeled_idx),
        m=m,
        n=n,
    )


def measure_param_norms(model: GnnModel) -> Tuple[float, float]:
    """(omega, beta) = (max_k ||W_k||_inf, max_k ||b_k||_1)."""
    omega = max(inf_norm(weight) for weight in model.weights)
    beta = max(float(np.abs(bias).sum()) for bias in model.biases)
    return omega, beta
