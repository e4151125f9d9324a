"""Tests for BoundReportUseCase."""

from unittest.mock import patch

import pytest

from src.application.bound_report_use_case import BoundReportUseCase, build_bound_report
from src.domain.exceptions import ConvergenceError
from src.domain.kinds import NormSource, VcKind
from src.infrastructure.bounds.trc_bounds import residual_trc_upper, trc_upper
from src.infrastructure.gnn.engine import init_params
from src.infrastructure.gnn.metrics import measure_param_norms
from src.infrastructure.graph.diffusion_factory import build_diffusion
from tests.builders import GnnConfigBuilder

LAYER_DIMS = (4, 8, 1)


class TestBoundReportUseCase:
    """Test cases for BoundReportUseCase."""

    def test_fixed_norm_report(self, small_dataset, small_diffusion):
        """Test the fixed-norm report against the bound functions it wraps."""
        use_case = BoundReportUseCase(small_dataset, small_diffusion)

        report = use_case.execute(LAYER_DIMS, omega=0.2, beta=0.3)

        inputs = use_case.bound_inputs(2, 0.2, 0.3)
        assert report.norm_source == NormSource.FIXED
        assert report.n == 40 and report.m == 10 and report.K == 2
        assert report.omega == 0.2 and report.beta == 0.3
        assert report.trc_upper == pytest.approx(trc_upper(inputs))
        assert report.total_gap_bound == pytest.approx(
            report.trc_upper + report.slack_c4_term + report.slack_c5_term
        )
        assert report.diffusion == "degree_normalized"
        assert report.residual_trc_upper is None
        assert report.expected_trc_sbm is None

    def test_measured_norms_come_from_model(self, small_dataset, small_diffusion):
        """Test that a given model overrides omega and beta with its own norms."""
        model = init_params(GnnConfigBuilder().with_dims(*LAYER_DIMS).build())

        report = BoundReportUseCase(small_dataset, small_diffusion).execute(
            LAYER_DIMS, omega=123.0, beta=456.0, model=model
        )

        omega, beta = measure_param_norms(model)
        assert report.norm_source == NormSource.MEASURED
        assert (report.omega, report.beta) == (omega, beta)

    def test_residual_and_expected_fields(self, small_dataset, small_diffusion):
        """Test the optional residual and expected planted bounds."""
        use_case = BoundReportUseCase(small_dataset, small_diffusion)

        report = use_case.execute(
            (4, 4, 4, 1), omega=1.0, beta=0.1, residual_alpha=0.5, expected_kind="self_loop"
        )

        inputs = use_case.bound_inputs(3, 1.0, 0.1)
        assert report.residual_alpha == 0.5
        assert report.residual_trc_upper == pytest.approx(residual_trc_upper(inputs, 0.5))
        assert report.residual_trc_upper < report.trc_upper
        assert report.expected_kind == "self_loop"
        assert report.expected_trc_sbm > 0

    def test_expected_bound_needs_planted_dataset(self, random_dataset):
        """Test that a dataset without planted parameters gets no expected bound."""
        diffusion = build_diffusion(random_dataset.adjacency, "self_loop")
        report = build_bound_report(
            random_dataset, diffusion, (3, 4, 1), expected_kind="self_loop"
        )
        assert report.expected_trc_sbm is None

    def test_vc_kind(self, small_dataset, small_diffusion):
        """Test that the ReLU VC formula is flagged as a non-bound."""
        report = BoundReportUseCase(small_dataset, small_diffusion).execute(
            LAYER_DIMS, vc_kind=VcKind.RELU_UPPER
        )
        assert report.vc_kind == VcKind.RELU_UPPER
        assert report.vc_is_upper_bound is False
        assert report.vc_gap_bound > 0

    def test_size_mismatch(self, small_dataset, path_graph):
        """Test that the diffusion must have the dataset's node count."""
        with pytest.raises(ValueError, match="Diffusion has n=3"):
            BoundReportUseCase(small_dataset, build_diffusion(path_graph, "self_loop"))

    def test_layer_dims_too_short(self, small_dataset, small_diffusion):
        """Test that a single-entry architecture is rejected."""
        with pytest.raises(ValueError, match="at least two entries"):
            BoundReportUseCase(small_dataset, small_diffusion).execute((4,))

    def test_unsettled_spectral_norm_does_not_abort(self, small_dataset, small_diffusion):
        """Test that the report carries the last power iterate and marks it unsettled."""
        error = ConvergenceError("not settled", last_iterate=0.75, iterations=100000)
        with patch("src.infrastructure.graph.graph_ops.spectral_norm", side_effect=error):
            use_case = BoundReportUseCase(small_dataset, small_diffusion)

        report = use_case.execute(LAYER_DIMS)

        assert use_case.spectral_converged is False
        assert report.s_spectral == 0.75
        assert report.s_spectral_converged is False
        assert report.trc_upper > 0

    def test_settled_spectral_norm_is_marked(self, small_dataset, small_diffusion):
        """Test that a normal run reports a settled spectral norm."""
        report = BoundReportUseCase(small_dataset, small_diffusion).execute(LAYER_DIMS)
        assert report.s_spectral_converged is True
        assert report.s_spectral == pytest.approx(1.0, rel=1e-6)
