"""SGD and Adam update rules."""

import dataclasses
from typing import List, Tuple, Union

import numpy as np

from src.domain.interfaces import Optimizer
from src.domain.kinds import OptimizerKind
from src.domain.models import GnnModel, OptimizerState, TrainConfig


class SgdOptimizer(Optimizer):
    """theta <- theta - lr * g."""

    def step(
        self, state: OptimizerState, model: GnnModel, grads: List[np.ndarray]
    ) -> Tuple[GnnModel, OptimizerState]:
        params = [p - state.lr * g for p, g in zip(model.parameters(), grads)]
        return model.with_parameters(params), dataclasses.replace(
            state, step_count=state.step_count + 1
        )


class AdamOptimizer(Optimizer):
    """Bias-corrected first/second moment update."""

    def step(
        self, state: OptimizerState, model: GnnModel, grads: List[np.ndarray]
    ) -> Tuple[GnnModel, OptimizerState]:
        params = model.parameters()
        first = state.first_moments or [np.zeros_like(p) for p in params]
        second = state.second_moments or [np.zeros_like(p) for p in params]
        t = state.step_count + 1

        new_first = [state.beta1 * mo + (1.0 - state.beta1) * g for mo, g in zip(first, grads)]
        new_second = [
            state.beta2 * v + (1.0 - state.beta2) * g**2 for v, g in zip(second, grads)
        ]
        first_correction = 1.0 - state.beta1**t
        second_correction = 1.0 - state.beta2**t
        new_params = [
            p - state.lr * (mo / first_correction) / (np.sqrt(v / second_correction) + state.eps)
            for p, mo, v in zip(params, new_first, new_second)
        ]
        new_state = dataclasses.replace(
            state, step_count=t, first_moments=new_first, second_moments=new_second
        )
        return model.with_parameters(new_params), new_state


class OptimizerFactory:
    """Factory for optimizer update rules."""

    @staticmethod
    def create(kind: Union[OptimizerKind, str]) -> Optimizer:
        try:
            kind = OptimizerKind(kind)
        except ValueError as exc:
            raise ValueError(f"Unknown optimizer kind: {kind}") from exc
        if kind == OptimizerKind.SGD:
            return SgdOptimizer()
        return AdamOptimizer()


def initial_state(train_config: TrainConfig) -> OptimizerState:
    return OptimizerState(
        kind=train_config.optimizer,
        lr=train_config.lr,
        beta1=train_config.beta1,
        beta2=train_config.beta2,
        eps=train_config.eps,
    )


def optimizer_step(
    state: OptimizerState, model: GnnModel, grads: List[np.ndarray]
) -> Tuple[GnnModel, OptimizerState]:
    """Apply one update with the rule named by ``state.kind``.

    Raises:
        ValueError: If gradient shapes do not match the model parameters.
    """
    params = model.parameters()
    if len(grads) != len(params) or any(p.shape != g.shape for p, g in zip(params, grads)):
        raise ValueError("Gradient shapes do not match model parameters")
    return OptimizerFactory.create(state.kind).step(state, model, grads)
