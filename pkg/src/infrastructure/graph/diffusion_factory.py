"""Factory for diffusion operators."""

import logging
from typing import Union

import numpy as np

from src.domain.kinds import DiffusionKind
from src.domain.models import DiffusionOperator
from src.infrastructure.graph.graph_ops import validate_adjacency

logger = logging.getLogger(__name__)


def _normalized(weighted: np.ndarray) -> np.ndarray:
    # (D + I)^{-1/2} (A + I) (D + I)^{-1/2} with D from A alone
    scale = 1.0 / np.sqrt(weighted.sum(axis=1) + 1.0)
    return scale[:, None] * (weighted + np.eye(weighted.shape[0])) * scale[None, :]


def _apply(weighted: np.ndarray, kind: DiffusionKind) -> np.ndarray:
    n = weighted.shape[0]
    if kind == DiffusionKind.SELF_LOOP:
        return weighted + np.eye(n)
    if kind == DiffusionKind.DEGREE_NORMALIZED:
        return _normalized(weighted)
    if kind == DiffusionKind.IDENTITY:
        return np.eye(n)
    raise ValueError(f"Unhandled diffusion kind: {kind}")  # pragma: no cover


class DiffusionFactory:
    """Creates DiffusionOperator instances from an adjacency matrix and a kind."""

    @staticmethod
    def create(
        adjacency: np.ndarray, kind: Union[DiffusionKind, str]
    ) -> DiffusionOperator:
        """Build S for a sampled (binary) adjacency.

        Args:
            adjacency: Symmetric 0/1 matrix with zero diagonal.
            kind: ``self_loop``, ``degree_normalized`` or ``identity``.

        Returns:
            DiffusionOperator with the requested formula applied.

        Raises:
            ValueError: If the kind is unknown or the adjacency is invalid.
        """
        try:
            kind = DiffusionKind(kind)
        except ValueError as exc:
            raise ValueError(f"Unknown diffusion kind: {kind}") from exc
        adjacency = np.asarray(adjacency, dtype=np.float64)
        validate_adjacency(adjacency)
        logger.debug("Building %s diffusion for n=%d", kind.value, adjacency.shape[0])
        return DiffusionOperator(kind=kind, matrix=_apply(adjacency, kind))

    @staticmethod
    def create_expected(
        script_a: np.ndarray, kind: Union[DiffusionKind, str]
    ) -> DiffusionOperator:
        """Build the population operator from a weighted expected adjacency."""
        kind = DiffusionKind(kind)
        script_a = np.asarray(script_a, dtype=np.float64)
        if script_a.ndim != 2 or script_a.shape[0] != script_a.shape[1]:
            raise ValueError(f"Expected adjacency must be square, got shape {script_a.shape}")
        if not np.allclose(script_a, script_a.T) or np.any(script_a < 0):
            raise ValueError("Expected adjacency must be symmetric and non-negative")
        return DiffusionOperator(kind=kind, matrix=_apply(script_a, kind))


def build_diffusion(adjacency: np.ndarray, kind: Union[DiffusionKind, str]) -> DiffusionOperator:
    return DiffusionFactory.create(adjacency, kind)


def build_expected_diffusion(
    script_a: np.ndarray, kind: Union[DiffusionKind, str]
) -> DiffusionOperator:
    return DiffusionFactory.create_expected(script_a, kind)
