"""Training use case."""

import logging
from typing import List, Optional, Tuple

import numpy as np

from src.domain.exceptions import TrainingDivergedError
from src.domain.kinds import LossKind
from src.domain.models import (
    Dataset,
    DiffusionOperator,
    GnnConfig,
    GnnModel,
    Metrics,
    TrainConfig,
    TrainingResult,
)
from src.infrastructure.gnn.engine import init_params, loss_and_grad
from src.infrastructure.gnn.metrics import evaluate
from src.infrastructure.gnn.optimizers import initial_state, optimizer_step

logger = logging.getLogger(__name__)


class TrainingUseCase:
    """Full-batch training of one GNN on one transductive dataset."""

    def __init__(self, dataset: Dataset, diffusion: DiffusionOperator):
        """Initialize training use case.

        Args:
            dataset: Dataset providing features, targets and the labeled split.
            diffusion: Diffusion operator built from the dataset's adjacency.
        """
        if diffusion.n != dataset.n:
            raise ValueError(f"Diffusion has n={diffusion.n}, dataset has n={dataset.n}")
        self._dataset = dataset
        self._diffusion = diffusion

    @property
    def dataset(self) -> Dataset:
        return self._dataset

    def _check_config(self, config: GnnConfig) -> None:
        if config.input_dim != self._dataset.d:
            raise ValueError(
                f"layer_dims[0]={config.input_dim} does not match feature dimension "
                f"{self._dataset.d}"
            )
        if (
            config.loss_kind == LossKind.MULTICLASS_NLL
            and config.output_dim != self._dataset.num_classes
        ):
            raise ValueError(
                f"multiclass_nll needs output width {self._dataset.num_classes}, "
                f"got {config.output_dim}"
            )

    def evaluate(self, model: GnnModel) -> Metrics:
        targets = self._dataset.targets_for(model.config.loss_kind)
        return evaluate(
            model, self._diffusion, self._dataset.features, targets, self._dataset.train_idx
        )

    def execute(
        self,
        gnn_config: GnnConfig,
        train_config: TrainConfig,
        model: Optional[GnnModel] = None,
    ) -> TrainingResult:
        """Train and record Metrics every ``eval_every`` epochs and at the last epoch.

        Args:
            gnn_config: Architecture; its seed drives initialisation.
            train_config: Optimizer and schedule.
            model: Optional starting model (defaults to ``init_params(gnn_config)``).

        Returns:
            TrainingResult with the final model and the (epoch, Metrics) trajectory.

        Raises:
            ValueError: If the configuration does not fit the dataset.
            TrainingDivergedError: If the loss becomes non-finite.
        """
        self._check_config(gnn_config)
        model = model if model is not None else init_params(gnn_config)
        state = initial_state(train_config)
        targets = self._dataset.targets_for(gnn_config.loss_kind)
        features = self._dataset.features
        train_idx = self._dataset.train_idx

        trajectory: List[Tuple[int, Metrics]] = []
        if train_config.epochs == 0:
            trajectory.append((0, self.evaluate(model)))

        for epoch in range(1, train_config.epochs + 1):
            loss, grads = loss_and_grad(
                model, self._diffusion, features, targets, train_idx, self._dataset.num_classes
            )
            if not np.isfinite(loss) or not all(np.all(np.isfinite(g)) for g in grads):
                raise TrainingDivergedError(epoch=epoch, loss=loss)
            model, state = optimizer_step(state, model, grads)

            if epoch % train_config.eval_every == 0 or epoch == train_config.epochs:
                metrics = self.evaluate(model)
                if not np.isfinite(metrics.train_loss):
                    raise TrainingDivergedError(epoch=epoch, loss=metrics.train_loss)
                trajectory.append((epoch, metrics))
                logger.debug(
                    "Epoch %d: train_loss=%.6f unlabeled_loss=%.6f gap=%.6f",
                    epoch,
                    metrics.train_loss,
                    metrics.unlabeled_loss,
                    metrics.gap_loss,
                )

        return TrainingResult(model=model, trajectory=trajectory)


def train(
    dataset: Dataset,
    diffusion: DiffusionOperator,
    gnn_config: GnnConfig,
    train_config: TrainConfig,
) -> TrainingResult:
    return TrainingUseCase(dataset, diffusion).execute(gnn_config, train_config)
