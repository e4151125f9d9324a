"""Sweep use case: train one model per (grid value, seed) cell and aggregate trends."""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field, replace
from functools import reduce
from typing import List, Optional, Tuple

import numpy as np

from src.application.bound_report_use_case import BoundReportUseCase
from src.application.run_factory import RunFactory
from src.application.sweep_registry import SweepRegistry, create_sweep_registry
from src.application.training_use_case import TrainingUseCase
from src.domain.exceptions import TrainingDivergedError
from src.domain.kinds import DataSource, NormSource, SweepKind
from src.domain.models import BoundReport, Dataset, Metrics, ResultsRow, TrendReport
from src.domain.run_config import RunConfig, SweepSpec
from src.infrastructure.estimators.trc_estimator import empirical_trc_lower
from src.infrastructure.utils.stats import trend_correlation

logger = logging.getLogger(__name__)


@dataclass
class CellOutcome:
    """Rows and aggregates of one (grid value, seed) cell."""

    grid_index: int
    seed_index: int
    value: float
    seed: int
    rows: List[ResultsRow] = field(default_factory=list)
    trend_bound: Optional[float] = None
    gaps: List[float] = field(default_factory=list)
    flags: List[str] = field(default_factory=list)


def _optional(value: Optional[float]) -> Optional[float]:
    return None if value is None or not math.isfinite(value) else float(value)


class SweepUseCase:
    """Runs every cell of a SweepSpec and builds its TrendReport."""

    def __init__(
        self,
        spec: SweepSpec,
        registry: Optional[SweepRegistry] = None,
        base_dataset: Optional[Dataset] = None,
        jobs: Optional[int] = None,
    ):
        """Initialize sweep use case.

        Args:
            spec: Sweep to run.
            registry: Appliers per sweep kind; defaults to the built-in registry.
            base_dataset: Pre-loaded dataset for real-data sweeps.
            jobs: Worker threads; defaults to the available cores.
        """
        self._spec = spec
        self._registry = registry or create_sweep_registry(spec.source.value)
        self._base_dataset = base_dataset
        self._jobs = max(1, jobs or os.cpu_count() or 1)

    def _cell_config(self, value: float) -> RunConfig:
        config = self._spec.config
        if self._spec.kind is not None:
            config = self._registry.apply_config(self._spec.kind, config, value)
        epochs_grid = self._spec.epochs_grid
        positive = [e for e in epochs_grid if e > 0]
        eval_every = reduce(math.gcd, positive) if positive else config.train.eval_every
        return replace(
            config, train=replace(config.train, epochs=max(epochs_grid), eval_every=eval_every)
        )

    def _cell_dataset(self, config: RunConfig, value: float, seed: int) -> Dataset:
        if self._spec.source == DataSource.PLANTED:
            return RunFactory.planted_dataset(config, seed)
        if self._base_dataset is None:
            self._base_dataset = RunFactory.cora_dataset(config)
        kind = self._spec.kind
        if kind is not None and self._registry.has_dataset_transform(kind):
            return self._registry.apply_dataset(kind, self._base_dataset, value, seed)
        return self._base_dataset

    def _trend_bound(self, report: BoundReport) -> Optional[float]:
        if self._spec.kind == SweepKind.RESIDUAL_ALPHA:
            return report.residual_trc_upper
        if self._spec.source == DataSource.CORA:
            return report.trc_upper
        return report.expected_trc_sbm

    def _row(
        self,
        outcome: CellOutcome,
        epoch: int,
        metrics: Optional[Metrics],
        report: Optional[BoundReport],
    ) -> ResultsRow:
        bound_trc = None
        if report is not None:
            bound_trc = (
                report.residual_trc_upper if report.residual_alpha is not None else report.trc_upper
            )
        return ResultsRow(
            experiment=self._spec.experiment,
            sweep_param=self._spec.param_name,
            sweep_value=outcome.value,
            seed=outcome.seed,
            epoch=epoch,
            train_loss=_optional(metrics.train_loss) if metrics else None,
            unlabeled_loss=_optional(metrics.unlabeled_loss) if metrics else None,
            gap_loss=_optional(metrics.gap_loss) if metrics else None,
            train_err01=_optional(metrics.train_err01) if metrics else None,
            unlabeled_err01=_optional(metrics.unlabeled_err01) if metrics else None,
            gap_err01=_optional(metrics.gap_err01) if metrics else None,
            bound_trc=_optional(bound_trc),
            bound_vc=_optional(report.vc_gap_bound) if report else None,
            bound_expected_sbm=_optional(report.expected_trc_sbm) if report else None,
            omega_used=report.omega if report else None,
            beta_used=report.beta if report else None,
            scale_factor=self._spec.scale_factor,
        )

    def run_cell(self, grid_index: int, seed_index: int) -> CellOutcome:
        """Train and bound one cell. Divergence is recorded as a flag, never raised."""
        spec = self._spec
        value = spec.grid[grid_index]
        seed = spec.config.planted.seed + spec.seeds[seed_index]
        outcome = CellOutcome(grid_index=grid_index, seed_index=seed_index, value=value, seed=seed)

        config = self._cell_config(value)
        dataset = self._cell_dataset(config, value, seed)
        diffusion = RunFactory.diffusion(config, dataset)
        gnn_config = RunFactory.gnn_config(config, dataset, seed)
        bounds = config.bounds
        reporter = BoundReportUseCase(dataset, diffusion)
        if not reporter.spectral_converged:
            outcome.flags.append(
                f"spectral_norm_not_converged: {spec.param_name}={value:g} seed={seed} "
                f"last_iterate={reporter.s_spectral:.10g}"
            )

        def _report(model=None) -> BoundReport:
            return reporter.execute(
                gnn_config.layer_dims,
                omega=bounds.omega,
                beta=bounds.beta,
                delta=bounds.delta,
                lipschitz=bounds.lipschitz,
                vc_kind=bounds.vc_kind,
                model=model,
                residual_alpha=gnn_config.residual_alpha,
                expected_kind=bounds.expected_kind if dataset.planted is not None else None,
                c6=bounds.c6,
                c7=bounds.c7,
                c8=bounds.c8,
            )

        measured = NormSource(bounds.mode) == NormSource.MEASURED
        try:
            result = TrainingUseCase(dataset, diffusion).execute(
                gnn_config, RunFactory.train_config(config)
            )
        except TrainingDivergedError as exc:
            report = None if measured else _report()
            outcome.flags.append(
                f"diverged: {spec.param_name}={value:g} seed={seed} epoch={exc.epoch}"
            )
            outcome.rows.append(self._row(outcome, exc.epoch, None, report))
            logger.warning(
                "Cell %s=%g seed=%d diverged at epoch %d", spec.param_name, value, seed, exc.epoch
            )
            return outcome

        report = _report(result.model if measured else None)
        outcome.trend_bound = _optional(self._trend_bound(report))
        wanted = set(spec.epochs_grid)
        for epoch, metrics in result.trajectory:
            if epoch not in wanted:
                continue
            outcome.rows.append(self._row(outcome, epoch, metrics, report))
            if math.isfinite(metrics.gap_loss):
                outcome.gaps.append(metrics.gap_loss)

        if bounds.check_trc_estimate and gnn_config.output_dim == 1:
            estimate = empirical_trc_lower(
                diffusion,
                dataset.features,
                report.omega,
                report.beta,
                gnn_config,
                num_sigma=bounds.num_sigma,
                num_models=bounds.num_models,
                seed=seed,
                m=dataset.m,
            )
            if estimate.mean > report.trc_upper:
                outcome.flags.append(
                    f"trc_estimate_exceeds_bound: {spec.param_name}={value:g} seed={seed} "
                    f"estimate={estimate.mean:.6g} bound={report.trc_upper:.6g}"
                )
                logger.warning(
                    "TRC estimate %.6f exceeds bound %.6f at %s=%g seed=%d",
                    estimate.mean,
                    report.trc_upper,
                    spec.param_name,
                    value,
                    seed,
                )
        return outcome

    def _aggregate(self, outcomes: List[CellOutcome]) -> TrendReport:
        spec = self._spec
        flags: List[str] = []
        mean_gap: List[float] = []
        bound_trend: List[float] = []
        for grid_index in range(len(spec.grid)):
            cells = [o for o in outcomes if o.grid_index == grid_index]
            for cell in cells:
                flags.extend(cell.flags)
            gaps = [g for cell in cells for g in cell.gaps]
            bounds = [cell.trend_bound for cell in cells if cell.trend_bound is not None]
            mean_gap.append(float(np.mean(gaps)) if gaps else float("nan"))
            bound_trend.append(float(np.mean(bounds)) if bounds else float("nan"))

        pairs = [
            (b, g) for b, g in zip(bound_trend, mean_gap) if math.isfinite(b) and math.isfinite(g)
        ]
        rho = float("nan")
        if len(pairs) >= 2:
            rho = trend_correlation([b for b, _ in pairs], [g for _, g in pairs])
        if not math.isfinite(rho):
            flags.append("spearman_undefined: fewer than two usable grid points or constant input")
            rho = 0.0
        return TrendReport(
            kind=spec.param_name,
            grid=list(spec.grid),
            mean_gap=mean_gap,
            bound_trend=bound_trend,
            spearman_rho=rho,
            flags=flags,
        )

    def execute(self) -> Tuple[List[ResultsRow], TrendReport]:
        """Run all cells in parallel; row order is (grid value, seed, epoch) regardless of jobs."""
        spec = self._spec
        cells = [(g, s) for g in range(len(spec.grid)) for s in range(len(spec.seeds))]
        if spec.source == DataSource.CORA and self._base_dataset is None:
            self._base_dataset = RunFactory.cora_dataset(spec.config)

        outcomes: List[CellOutcome] = []
        with ThreadPoolExecutor(max_workers=self._jobs) as executor:
            futures = {executor.submit(self.run_cell, g, s): (g, s) for g, s in cells}
            for future in as_completed(futures):
                outcome = future.result()
                outcomes.append(outcome)
                gap = float(np.mean(outcome.gaps)) if outcome.gaps else float("nan")
                logger.info(
                    "Cell %d/%d done: kind=%s value=%s seed=%d gap=%.4f",
                    len(outcomes),
                    len(cells),
                    spec.param_name,
                    outcome.value,
                    outcome.seed,
                    gap,
                )

        outcomes.sort(key=lambda o: (o.grid_index, o.seed_index))
        rows = [row for outcome in outcomes for row in outcome.rows]
        report = self._aggregate(outcomes)
        logger.info(
            "Sweep %s finished: %d rows, spearman_rho=%.4f, %d flags",
            spec.param_name,
            len(rows),
            report.spearman_rho,
            len(report.flags),
        )
        return rows, report


def run_sweep(
    spec: SweepSpec, jobs: Optional[int] = None, base_dataset: Optional[Dataset] = None
) -> Tuple[List[ResultsRow], TrendReport]:
    return SweepUseCase(spec, base_dataset=base_dataset, jobs=jobs).execute()
