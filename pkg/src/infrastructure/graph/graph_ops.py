"""Matrix quantities entering the generalization bounds.

Note on conventions: ``max_col_two_norm`` is the maximum Euclidean norm over
COLUMNS. The bounds write it as the 2->inf norm, which elsewhere usually means the
maximum row norm. Do not swap it for a row-norm helper.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.domain.exceptions import ConvergenceError

logger = logging.getLogger(__name__)


def validate_adjacency(adjacency: np.ndarray) -> None:
    """Check that ``adjacency`` is square, symmetric, binary and has a zero diagonal.

    Raises:
        ValueError: On the first violated property.
    """
    if adjacency.ndim != 2 or adjacency.shape[0] != adjacency.shape[1]:
        raise ValueError(f"Adjacency must be square, got shape {adjacency.shape}")
    if not np.all((adjacency == 0) | (adjacency == 1)):
        raise ValueError("Adjacency entries must be 0 or 1")
    if not np.array_equal(adjacency, adjacency.T):
        raise ValueError("Adjacency must be symmetric")
    if np.any(np.diag(adjacency) != 0):
        raise ValueError("Adjacency must have a zero diagonal")


def inf_norm(matrix: np.ndarray) -> float:
    """Maximum absolute row sum."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(matrix), axis=1)))


def max_col_two_norm(matrix: np.ndarray) -> float:
    """Maximum Euclidean norm over the columns of ``matrix``."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.linalg.norm(matrix, axis=0)))


def frobenius_norm(matrix: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(matrix, dtype=np.float64), "fro"))


def spectral_norm(
    matrix: np.ndarray, tol: float = 1e-10, max_iter: int = 100000, seed: int = 0
) -> float:
    """Largest singular value by power iteration on M^T M.

    Iteration stops once sigma = sqrt(x^T M^T M x) changes by at most ``tol * sigma``
    between two iterations, or once the eigen-residual ||M^T M x - lam x|| drops below
    ``tol * lam``.

    Args:
        matrix: Finite real matrix.
        tol: Relative tolerance on sigma.
        max_iter: Iteration cap.
        seed: Seed of the random start vector.

    Returns:
        The spectral norm of ``matrix``.

    Raises:
        ValueError: If the matrix contains non-finite entries.
        ConvergenceError: If sigma has not settled within ``max_iter`` iterations.
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    if not np.all(np.isfinite(matrix)):
        raise ValueError("spectral_norm requires a finite matrix")
    if matrix.size == 0 or not np.any(matrix):
        return 0.0

    gram = matrix.T @ matrix
    rng = np.random.default_rng(seed)
    x = rng.normal(size=gram.shape[0])
    x /= np.linalg.norm(x)
    y = gram @ x

    lam = 0.0
    sigma_prev = None
    for iteration in range(1, max_iter + 1):
        y_norm = np.linalg.norm(y)
        if y_norm == 0:
            # start vector fell into the null space
            x = rng.normal(size=gram.shape[0])
            x /= np.linalg.norm(x)
            y = gram @ x
            continue
        x = y / y_norm
        y = gram @ x
        lam = float(x @ y)
        sigma = float(np.sqrt(max(lam, 0.0)))
        settled = sigma_prev is not None and abs(sigma - sigma_prev) <= tol * sigma
        if settled or np.linalg.norm(y - lam * x) <= tol * lam:
            logger.debug("Power iteration converged after %d iterations", iteration)
            return sigma
        sigma_prev = sigma

    raise ConvergenceError(
        f"Power iteration did not converge in {max_iter} iterations",
        last_iterate=float(np.sqrt(max(lam, 0.0))),
        iterations=max_iter,
    )


def numerical_rank(matrix: np.ndarray, rel_tol: float = 1e-10) -> int:
    """Number of singular values above ``rel_tol`` times the largest one."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    if matrix.size == 0:
        return 0
    singular_values = np.linalg.svd(matrix, compute_uv=False)
    if singular_values[0] == 0:
        return 0
    return int(np.sum(singular_values > rel_tol * singular_values[0]))


def degree_stats(adjacency: np.ndarray) -> Tuple[float, float, float]:
    """(minimum, maximum, mean) node degree."""
    degrees = np.asarray(adjacency, dtype=np.float64).sum(axis=1)
    if degrees.size == 0:
        return 0.0, 0.0, 0.0
    return float(degrees.min()), float(degrees.max()), float(degrees.mean())


@dataclass(frozen=True)
class NormChain:
    """Norms relating ||S||_inf, ||S||_2 and the SX column term.

    ``converged`` is False when ``s_spectral`` is the last power-iteration iterate
    rather than a settled value.
    """

    s_spectral: float
    s_inf: float
    sx_2inf: float
    sx_spectral_upper: float
    s_inf_over_sqrt_n: float
    converged: bool = True


def norm_chain(diffusion: np.ndarray, features: np.ndarray) -> NormChain:
    """Spectral view of the SX term used when discussing depth and oversmoothing.

    A power iteration that does not settle is logged and its last iterate is used.
    """
    converged = True
    try:
        s_spectral = spectral_norm(diffusion)
    except ConvergenceError as exc:
        logger.warning(
            "Spectral norm not converged after %d iterations, using last iterate %.10g",
            exc.iterations,
            exc.last_iterate,
        )
        s_spectral = exc.last_iterate
        converged = False
    s_inf = inf_norm(diffusion)
    return NormChain(
        s_spectral=s_spectral,
        s_inf=s_inf,
        sx_2inf=max_col_two_norm(diffusion @ features),
        sx_spectral_upper=s_spectral * max_col_two_norm(features),
        s_inf_over_sqrt_n=s_inf / np.sqrt(diffusion.shape[0]),
        converged=converged,
    )
