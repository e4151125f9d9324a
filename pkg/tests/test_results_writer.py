"""Tests for results CSV persistence and trend plots."""

import pytest

from src.domain.models import RESULTS_COLUMNS, ResultsRow, TrendReport
from src.infrastructure.storage.results_writer import CsvResultsSink, read_results, write_results
from src.infrastructure.storage.svg_plotter import plot_trend


def _row(seed: int, gap, bound=1.25) -> ResultsRow:
    return ResultsRow(
        experiment="alignment",
        sweep_param="alignment",
        sweep_value=0.5,
        seed=seed,
        epoch=100,
        train_loss=0.1,
        unlabeled_loss=None if gap is None else 0.1 + gap,
        gap_loss=gap,
        train_err01=0.0,
        unlabeled_err01=0.25,
        gap_err01=0.25,
        bound_trc=bound,
        bound_vc=2.743,
        bound_expected_sbm=None,
        omega_used=0.1,
        beta_used=0.1,
        scale_factor=25.0,
    )


class TestCsvResultsSink:
    """Test cases for CsvResultsSink."""

    def test_header_and_provenance(self, tmp_path):
        """Test sorted provenance comments followed by the fixed column header."""
        path = tmp_path / "out" / "results.csv"
        write_results([_row(0, 0.2)], path, {"seed": 0, "experiment": "alignment"})

        lines = path.read_text(encoding="utf-8").splitlines()

        assert lines[0] == "# experiment: alignment"
        assert lines[1] == "# seed: 0"
        assert lines[2] == ",".join(RESULTS_COLUMNS)

    def test_round_trip_with_empty_cells(self, tmp_path):
        """Test that None cells are written empty and read back as None."""
        path = tmp_path / "results.csv"
        rows = [_row(0, 0.123456789012345), _row(1, None, bound=None)]
        CsvResultsSink().write(rows, path, {})

        restored = read_results(path)

        assert restored == rows
        assert ",," in path.read_text(encoding="utf-8")

    def test_missing_columns(self, tmp_path):
        """Test that a foreign CSV is rejected."""
        path = tmp_path / "foreign.csv"
        path.write_text("a,b\n1,2\n", encoding="utf-8")
        with pytest.raises(ValueError, match="missing columns"):
            read_results(path)

    def test_identical_rows_give_identical_bytes(self, tmp_path):
        """Test byte-level determinism of the writer."""
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        rows = [_row(0, 0.2), _row(1, 0.3)]
        write_results(rows, first, {"k": "v"})
        write_results(rows, second, {"k": "v"})
        assert first.read_bytes() == second.read_bytes()


class TestPlotTrend:
    """Test cases for plot_trend."""

    @pytest.fixture
    def report(self):
        """Three-point trend report."""
        return TrendReport(
            kind="alignment",
            grid=[0.1, 0.5, 1.0],
            mean_gap=[0.1, 0.2, 0.4],
            bound_trend=[2.0, 5.0, 9.0],
            spearman_rho=1.0,
        )

    def test_writes_svg(self, report, tmp_path):
        """Test that a standalone SVG file is produced."""
        path = tmp_path / "plots" / "trend.svg"
        plot_trend(report, path)
        text = path.read_text(encoding="utf-8")
        assert "<svg" in text
        assert "alignment sweep" in text

    def test_deterministic_output(self, report, tmp_path):
        """Test that two plots of the same report are byte-identical."""
        plot_trend(report, tmp_path / "a.svg")
        plot_trend(report, tmp_path / "b.svg")
        assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()

    def test_scale_factor_must_be_positive(self, report, tmp_path):
        """Test scale factor validation."""
        with pytest.raises(ValueError, match="scale_factor"):
            plot_trend(report, tmp_path / "x.svg", scale_factor=0.0)
