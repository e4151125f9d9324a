"""Training losses and 0-1 errors on a subset of nodes."""

from typing import Optional, Tuple

import numpy as np
from scipy.special import logsumexp, softmax

from src.domain.kinds import LossKind


def _check_width(loss_kind: LossKind, outputs: np.ndarray, num_classes: Optional[int]) -> None:
    if outputs.ndim != 2:
        raise ValueError(f"Outputs must be an n x d_K matrix, got shape {outputs.shape}")
    width = outputs.shape[1]
    if loss_kind == LossKind.SQUARED_BINARY:
        if width != 1:
            raise ValueError(f"squared_binary needs output width 1, got {width}")
        return
    if num_classes is not None and width != num_classes:
        raise ValueError(
            f"multiclass_nll needs output width d_K = num_classes = {num_classes}, got {width}"
        )
    if width < 2:
        raise ValueError(f"multiclass_nll needs at least 2 output columns, got {width}")


def _check_targets(loss_kind: LossKind, outputs: np.ndarray, targets: np.ndarray) -> None:
    if loss_kind == LossKind.SQUARED_BINARY:
        if not np.all(np.isin(targets, (-1, 1))):
            raise ValueError("squared_binary targets must be -1 or +1")
    else:
        num_classes = outputs.shape[1]
        if not np.all(np.equal(np.mod(targets, 1), 0)) or np.any(
            (targets < 0) | (targets >= num_classes)
        ):
            raise ValueError(f"multiclass_nll targets must be class indices in [0, {num_classes})")


def loss_and_output_grad(
    loss_kind: LossKind,
    outputs: np.ndarray,
    targets: np.ndarray,
    idx: np.ndarray,
    num_classes: Optional[int] = None,
) -> Tuple[float, np.ndarray]:
    """Mean loss over rows ``idx`` and its gradient w.r.t. the full output matrix.

    Args:
        loss_kind: Which loss to evaluate.
        outputs: Network output g_K, one row per node.
        targets: +-1 labels or class indices, one per node.
        idx: Rows entering the mean.
        num_classes: When given, multiclass_nll requires exactly this output width.

    Raises:
        ValueError: If ``idx`` is empty, the output width does not fit the loss, or
            targets are out of domain.
    """
    outputs = np.asarray(outputs)
    _check_width(loss_kind, outputs, num_classes)
    idx = np.asarray(idx, dtype=np.int64)
    if len(idx) == 0:
        raise ValueError("Loss needs at least one node")
    subset_targets = np.asarray(targets)[idx]
    _check_targets(loss_kind, outputs, subset_targets)
    grad = np.zeros_like(outputs)
    m = len(idx)

    if loss_kind == LossKind.SQUARED_BINARY:
        diff = outputs[idx, 0] - subset_targets
        grad[idx, 0] = 2.0 * diff / m
        return float(np.mean(diff**2)), grad

    logits = outputs[idx]
    labels = subset_targets.astype(np.int64)
    log_partition = logsumexp(logits, axis=1)
    loss = float(np.mean(log_partition - logits[np.arange(m), labels]))
    probabilities = softmax(logits, axis=1)
    probabilities[np.arange(m), labels] -= 1.0
    grad[idx] = probabilities / m
    return loss, grad


def subset_loss(
    loss_kind: LossKind,
    outputs: np.ndarray,
    targets: np.ndarray,
    idx: np.ndarray,
    num_classes: Optional[int] = None,
) -> float:
    return loss_and_output_grad(loss_kind, outputs, targets, idx, num_classes)[0]


def predict(loss_kind: LossKind, outputs: np.ndarray) -> np.ndarray:
    """Sign readout (ties to +1) for binary outputs, argmax for multiclass."""
    if loss_kind == LossKind.SQUARED_BINARY:
        return np.where(outputs[:, 0] >= 0, 1, -1)
    return np.argmax(outputs, axis=1)


def zero_one_error(
    loss_kind: LossKind, outputs: np.ndarray, targets: np.ndarray, idx: np.ndarray
) -> float:
    idx = np.asarray(idx, dtype=np.int64)
    predictions = predict(loss_kind, outputs[idx])
    return float(np.mean(predictions != np.asarray(targets)[idx]))
