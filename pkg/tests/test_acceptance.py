"""Full-size runs of the shipped experiments (deselect with ``-m "not slow"``)."""

from pathlib import Path

import numpy as np
import pytest

from src.application.bound_report_use_case import BoundReportUseCase
from src.application.norm_validation_use_case import validate_expected_norms
from src.application.run_factory import RunFactory
from src.application.sweep_use_case import run_sweep
from src.application.training_use_case import TrainingUseCase
from src.domain.kinds import NormTableRow
from src.domain.run_config import SweepSpec
from src.infrastructure.bounds.trc_bounds import trc_upper
from src.infrastructure.config_loader import parse_config
from src.infrastructure.estimators.trc_estimator import empirical_trc_lower
from src.infrastructure.gnn.metrics import measure_param_norms
from src.infrastructure.graph.graph_ops import numerical_rank

pytestmark = pytest.mark.slow

ROOT = Path(__file__).resolve().parent.parent
CONFIG_DIR = str(ROOT / "config/experiments")


def _sweep(name: str, *overrides: str):
    config = parse_config(name, overrides, config_dir=CONFIG_DIR)
    return run_sweep(SweepSpec.from_run_config(config, experiment=name))


def _gaps_by(rows, seed):
    values = sorted({row.sweep_value for row in rows})
    return [
        np.mean(
            [
                r.gap_loss
                for r in rows
                if r.sweep_value == v and r.seed == seed and r.gap_loss is not None
            ]
        )
        for v in values
    ]


class TestTrends:
    """Sweep-level trend checks."""

    def test_alignment_trend(self):
        """Test that the expected bound and the gap rise together with alignment."""
        _, report = _sweep("alignment")
        assert report.bound_monotone_increasing
        assert report.spearman_rho >= 0.5

    def test_graph_size_stability(self):
        """Test that the gap stays flat while the self-loop bound grows with n."""
        _, report = _sweep("graph_size")
        assert report.bound_monotone_increasing
        assert report.gap_ratio < 2.0

    def test_labeled_count_trend(self):
        """Test that more labeled nodes give a smaller gap."""
        _, report = _sweep("labeled_count")
        assert report.mean_gap[-1] < report.mean_gap[0]

    def test_depth_and_residual_ordering(self):
        """Test the bound ordering in depth and residual weight."""
        depth_rows, depth = _sweep("depth")
        assert all(b > a for a, b in zip(depth.bound_trend, depth.bound_trend[1:]))
        seeds = sorted({row.seed for row in depth_rows})
        gaps = {seed: _gaps_by(depth_rows, seed) for seed in seeds}
        rising = sum(1 for seed in seeds if gaps[seed][2] > gaps[seed][0])
        assert rising >= 3

        residual_rows, residual = _sweep("residual")
        assert residual.bound_trend[0] > residual.bound_trend[1] > residual.bound_trend[2]
        ordered = sum(
            1
            for seed in sorted({row.seed for row in residual_rows})
            if _gaps_by(residual_rows, seed)[0] > _gaps_by(residual_rows, seed)[2]
        )
        assert ordered >= 3


class TestPlantedInstance:
    """Checks on the default planted instance."""

    def test_vc_bound_is_vacuous(self):
        """Test that S has full rank and the VC bound exceeds one."""
        config = parse_config("default", config_dir=CONFIG_DIR)
        dataset = RunFactory.planted_dataset(config)
        diffusion = RunFactory.diffusion(config, dataset)

        assert numerical_rank(diffusion.matrix) == dataset.n
        layer_dims = RunFactory.gnn_config(config, dataset).layer_dims
        report = BoundReportUseCase(dataset, diffusion).execute(layer_dims)
        assert report.vc_gap_bound > 1.0

    def test_norm_table(self):
        """Test the table entries named in the concentration check."""
        planted = RunFactory.planted_config(parse_config("default", config_dir=CONFIG_DIR))
        loop = {c.row: c for c in validate_expected_norms(planted, "self_loop", num_samples=50)}
        nor = {
            c.row: c for c in validate_expected_norms(planted, "degree_normalized", num_samples=50)
        }
        assert loop[NormTableRow.S_INF_POW].empirical_mean <= planted.n * planted.p
        assert nor[NormTableRow.S_INF_POW].empirical_mean <= np.sqrt(planted.p / planted.q)
        assert nor[NormTableRow.XMX_S].passed

    def test_trc_estimate_never_exceeds_bound(self):
        """Test the Monte Carlo lower estimate against the analytic bound on 50 instances."""
        base = parse_config(
            "default",
            ["planted.n=60", "planted.d=5", "train.labeled_count=15", "train.epochs=50"],
            config_dir=CONFIG_DIR,
        )
        violations = 0
        for seed in range(50):
            dataset = RunFactory.planted_dataset(base, seed)
            diffusion = RunFactory.diffusion(base, dataset)
            gnn_config = RunFactory.gnn_config(base, dataset, seed)
            model = TrainingUseCase(dataset, diffusion).execute(
                gnn_config, RunFactory.train_config(base)
            ).model
            omega, beta = measure_param_norms(model)
            estimate = empirical_trc_lower(
                diffusion,
                dataset.features,
                omega,
                beta,
                gnn_config,
                num_sigma=200,
                num_models=4,
                seed=seed,
                m=dataset.m,
            )
            inputs = BoundReportUseCase(dataset, diffusion).bound_inputs(
                gnn_config.num_layers, omega, beta
            )
            violations += estimate.mean > trc_upper(inputs)
        assert violations == 0


CORA_CONTENT = ROOT / "data/cora/cora.content"


@pytest.mark.skipif(not CORA_CONTENT.exists(), reason="Cora files not downloaded")
class TestCora:
    """Pipeline health on the real citation graph."""

    def test_cora_trains(self):
        """Test that a two-layer GCN reaches a reasonable unlabeled error."""
        config = parse_config("cora", config_dir=CONFIG_DIR)
        config.cora.content_path = str(CORA_CONTENT)
        config.cora.cites_path = str(ROOT / "data/cora/cora.cites")
        dataset = RunFactory.cora_dataset(config)
        assert (dataset.n, dataset.d, dataset.num_classes) == (2708, 1433, 7)

        diffusion = RunFactory.diffusion(config, dataset)
        result = TrainingUseCase(dataset, diffusion).execute(
            RunFactory.gnn_config(config, dataset), RunFactory.train_config(config)
        )
        assert result.trajectory[-1][1].unlabeled_err01 < 0.35
