"""Self-contained SVG line plots of sweep trends."""

import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from src.domain.interfaces import PathLike  # noqa: E402
from src.domain.models import TrendReport  # noqa: E402

logger = logging.getLogger(__name__)


def plot_trend(report: TrendReport, path: PathLike, scale_factor: float = 25.0) -> None:
    """Plot mean gap and bound / scale_factor against the sweep values.

    Args:
        report: Aggregated sweep trend.
        path: Output ``.svg`` file.
        scale_factor: Divisor applied to the bound trend for display.
    """
    if scale_factor <= 0:
        raise ValueError(f"scale_factor must be positive, got {scale_factor}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    with plt.rc_context({"svg.hashsalt": "gnn-trc", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        ax.plot(report.grid, report.mean_gap, marker="o", label="mean gap (loss)")
        ax.plot(
            report.grid,
            [b / scale_factor for b in report.bound_trend],
            marker="s",
            linestyle="--",
            label=f"bound / {scale_factor:g}",
        )
        ax.set_xlabel(report.kind)
        ax.set_ylabel("value")
        ax.set_title(f"{report.kind} sweep (spearman rho = {report.spearman_rho:.3f})")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    logger.info("Wrote trend plot to %s", path)
