"""Monte Carlo check of the expected-norm concentration table."""

import logging
from typing import Dict, List, Union

import numpy as np

from src.domain.kinds import DiffusionKind, NormTableRow
from src.domain.models import ExpectedTrcConfig, NormCheck, PlantedConfig
from src.infrastructure.bounds.expected_bounds import expected_norm_table, table_moment
from src.infrastructure.graph.diffusion_factory import build_diffusion, build_expected_diffusion
from src.infrastructure.graph.graph_ops import inf_norm, max_col_two_norm
from src.infrastructure.planted.planted_models import (
    expected_matrices,
    make_latent_labels,
    sample_adjacency,
    sample_features,
)

logger = logging.getLogger(__name__)

MIN_SAMPLES = 30


class NormValidationUseCase:
    """Compares empirical norm moments of sampled planted graphs with the table values."""

    def __init__(self, planted: PlantedConfig, kind: Union[DiffusionKind, str]):
        """Initialize norm validation use case.

        Args:
            planted: Planted model; its seed fixes the labels, sample i uses seed + i.
            kind: ``self_loop`` or ``degree_normalized``.
        """
        self._planted = planted
        self._kind = DiffusionKind(kind)
        if self._kind == DiffusionKind.IDENTITY:
            raise ValueError("Norm validation needs a graph diffusion kind")

    def _sample_norms(
        self, k: int, sample_index: int, labels, expected
    ) -> Dict[NormTableRow, float]:
        planted = self._planted
        script_x, script_s = expected
        seed = planted.seed + sample_index
        adjacency = sample_adjacency(labels, planted.p, planted.q, seed)
        features = sample_features(labels, planted.mu, planted.sigma, seed)
        diffusion = build_diffusion(adjacency, self._kind).matrix
        return {
            NormTableRow.S_INF_POW: inf_norm(diffusion) ** k,
            NormTableRow.SMS_X: max_col_two_norm((diffusion - script_s) @ script_x),
            NormTableRow.XMX_S: max_col_two_norm(diffusion @ (features - script_x)),
        }

    def execute(self, k: int = 1, num_samples: int = 50, slack: float = 0.1) -> List[NormCheck]:
        """Sample (A, X) pairs and compare E[norm^moment] with each table entry.

        The deterministic row is evaluated once on the population matrices.

        Args:
            k: Power of ||S||_inf.
            num_samples: Monte Carlo sample count, at least 30.
            slack: Relative tolerance of the pass test.

        Returns:
            One NormCheck per table row.

        Raises:
            ValueError: If num_samples < 30, k < 1 or slack < 0.
        """
        if num_samples < MIN_SAMPLES:
            raise ValueError(f"num_samples must be at least {MIN_SAMPLES}, got {num_samples}")
        if k < 1:
            raise ValueError(f"k must be at least 1, got {k}")
        if slack < 0:
            raise ValueError(f"slack must be non-negative, got {slack}")

        planted = self._planted
        labels = make_latent_labels(planted.n, planted.gamma_target, planted.seed)
        script_x, script_a = expected_matrices(labels, planted.mu, planted.p, planted.q)
        script_s = build_expected_diffusion(script_a, self._kind).matrix
        params = ExpectedTrcConfig.from_planted(
            planted, K=k, omega=1.0, beta=1.0, gamma=labels.gamma_actual
        )

        samples: Dict[NormTableRow, List[float]] = {}
        for i in range(num_samples):
            for row, value in self._sample_norms(k, i, labels, (script_x, script_s)).items():
                samples.setdefault(row, []).append(value ** table_moment(row, self._kind))

        empirical = {row: float(np.mean(values)) for row, values in samples.items()}
        empirical[NormTableRow.SX_DET] = max_col_two_norm(script_s @ script_x)

        checks = []
        for row in NormTableRow:
            table_value = expected_norm_table(row, self._kind, params, k)
            passed = empirical[row] <= table_value * (1.0 + slack)
            checks.append(
                NormCheck(
                    row=row,
                    kind=self._kind,
                    moment=table_moment(row, self._kind),
                    empirical_mean=empirical[row],
                    table_value=table_value,
                    passed=passed,
                )
            )
            log = logger.info if passed else logger.warning
            log(
                "Norm check %s/%s: empirical=%.6g table=%.6g passed=%s",
                row.value,
                self._kind.value,
                empirical[row],
                table_value,
                passed,
            )
        return checks


def validate_expected_norms(
    planted: PlantedConfig,
    kind: Union[DiffusionKind, str],
    k: int = 1,
    num_samples: int = 50,
    slack: float = 0.1,
) -> List[NormCheck]:
    return NormValidationUseCase(planted, kind).execute(k, num_samples, slack)
