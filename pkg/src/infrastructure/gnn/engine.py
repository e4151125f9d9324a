"""Forward and backward passes of vanilla and residual GNNs.

Layer k computes ``z_k = b_k + S g_{k-1} W_k``; residual layers mix in the first
hidden layer, ``z_k = (1 - alpha) (b_k + S g_{k-1} W_k) + alpha g_1``, and
``g_k = phi(z_k)``. The product is evaluated as ``S (g_{k-1} W_k)``.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from src.domain.kinds import ActivationKind
from src.domain.models import DiffusionOperator, GnnConfig, GnnModel
from src.infrastructure.gnn.losses import loss_and_output_grad
from src.infrastructure.utils.rng import make_rng

logger = logging.getLogger(__name__)


@dataclass
class ForwardCache:
    """Activations g_0..g_K and pre-activations z_1..z_K of one forward pass."""

    activations: List[np.ndarray]
    pre_activations: List[np.ndarray]

    @property
    def output(self) -> np.ndarray:
        return self.activations[-1]


def init_params(config: GnnConfig) -> GnnModel:
    """Uniform weights on [-s/sqrt(d_{k-1}), s/sqrt(d_{k-1})] and zero biases."""
    rng = make_rng(config.seed, "init")
    weights = []
    biases = []
    dims = config.layer_dims
    for k in range(config.num_layers):
        bound = config.init_scale / np.sqrt(dims[k])
        weights.append(rng.uniform(-bound, bound, size=(dims[k], dims[k + 1])))
        biases.append(np.zeros(dims[k + 1]))
    return GnnModel(weights=weights, biases=biases, config=config)


def _layer_activation(config: GnnConfig, k: int) -> ActivationKind:
    if k == config.num_layers and config.uses_linear_last_layer:
        return ActivationKind.IDENTITY
    return config.activation


def _activate(z: np.ndarray, kind: ActivationKind) -> np.ndarray:
    if kind == ActivationKind.RELU:
        return np.maximum(z, 0.0)
    return z


def _activation_grad(z: np.ndarray, kind: ActivationKind) -> np.ndarray:
    # ReLU'(0) = 0
    if kind == ActivationKind.RELU:
        return (z > 0).astype(np.float64)
    return np.ones_like(z)


def _matrix(diffusion) -> np.ndarray:
    return diffusion.matrix if isinstance(diffusion, DiffusionOperator) else np.asarray(diffusion)


def forward_cache(model: GnnModel, diffusion, features: np.ndarray) -> ForwardCache:
    """Run the network and keep everything the backward pass needs.

    Raises:
        ValueError: If S or X does not conform with the model.
    """
    s_matrix = _matrix(diffusion)
    config = model.config
    n = features.shape[0]
    if s_matrix.shape != (n, n):
        raise ValueError(f"S has shape {s_matrix.shape}, expected {(n, n)}")
    if features.shape[1] != config.input_dim:
        raise ValueError(
            f"X has {features.shape[1]} columns, model expects d_0={config.input_dim}"
        )

    activations = [features]
    pre_activations = []
    for k in range(1, config.num_layers + 1):
        weight, bias = model.weights[k - 1], model.biases[k - 1]
        z = bias + s_matrix @ (activations[-1] @ weight)
        if config.is_residual_layer(k):
            alpha = config.residual_alpha
            z = (1.0 - alpha) * z + alpha * activations[1]
        pre_activations.append(z)
        activations.append(_activate(z, _layer_activation(config, k)))
    return ForwardCache(activations=activations, pre_activations=pre_activations)


def forward(model: GnnModel, diffusion, features: np.ndarray) -> List[np.ndarray]:
    """Layer activations [g_0 = X, g_1, ..., g_K]."""
    return forward_cache(model, diffusion, features).activations


def backward(
    model: GnnModel, diffusion, cache: ForwardCache, output_grad: np.ndarray
) -> List[np.ndarray]:
    """Reverse-mode gradients given dL/dg_K.

    Returns:
        Gradients in ``model.parameters()`` order (W_1, b_1, ..., W_K, b_K).
    """
    s_matrix = _matrix(diffusion)
    config = model.config
    num_layers = config.num_layers
    grad_weights: List[np.ndarray] = [np.empty(0)] * num_layers
    grad_biases: List[np.ndarray] = [np.empty(0)] * num_layers

    delta = output_grad
    residual_delta = np.zeros_like(cache.activations[1])
    for k in range(num_layers, 0, -1):
        if k == 1:
            delta = delta + residual_delta
        dz = delta * _activation_grad(cache.pre_activations[k - 1], _layer_activation(config, k))
        if config.is_residual_layer(k):
            alpha = config.residual_alpha
            residual_delta = residual_delta + alpha * dz
            dz = (1.0 - alpha) * dz
        propagated = s_matrix.T @ dz
        grad_weights[k - 1] = cache.activations[k - 1].T @ propagated
        grad_biases[k - 1] = dz.sum(axis=0)
        delta = propagated @ model.weights[k - 1].T

    grads: List[np.ndarray] = []
    for grad_weight, grad_bias in zip(grad_weights, grad_biases):
        grads.extend([grad_weight, grad_bias])
    return grads


def loss_and_grad(
    model: GnnModel,
    diffusion,
    features: np.ndarray,
    targets: np.ndarray,
    train_idx: np.ndarray,
    num_classes: Optional[int] = None,
) -> Tuple[float, List[np.ndarray]]:
    """Training loss on ``train_idx`` and its exact gradient.

    ``num_classes``, when given, pins the multiclass_nll output width.

    Returns:
        Tuple of (loss, gradients in ``model.parameters()`` order).
    """
    cache = forward_cache(model, diffusion, features)
    loss, output_grad = loss_and_output_grad(
        model.config.loss_kind, cache.output, targets, train_idx, num_classes
    )
    return loss, backward(model, diffusion, cache, output_grad)
