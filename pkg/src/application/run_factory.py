"""Turns a RunConfig into the domain objects of a single run."""

from typing import Optional

from src.domain.kinds import ActivationKind, DiffusionKind, LossKind, OptimizerKind
from src.domain.models import Dataset, DiffusionOperator, GnnConfig, PlantedConfig, TrainConfig
from src.domain.run_config import RunConfig
from src.infrastructure.datasets.cora_loader import load_cora
from src.infrastructure.graph.diffusion_factory import build_diffusion
from src.infrastructure.planted.planted_models import generate_dataset, sample_mean_vector


class RunFactory:
    """Factory methods shared by the CLI commands and the sweep cells."""

    @staticmethod
    def planted_config(config: RunConfig, seed: Optional[int] = None) -> PlantedConfig:
        """Planted model for ``config``; ``seed`` replaces ``planted.seed`` when given."""
        section = config.planted
        seed = section.seed if seed is None else seed
        if isinstance(section.mu, str):
            sampled = sample_mean_vector(section.d, seed, section.mu_low, section.mu_high)
            mu = tuple(float(v) for v in sampled)
        else:
            if len(section.mu) != section.d:
                raise ValueError(
                    f"planted.mu has {len(section.mu)} entries, expected d={section.d}"
                )
            mu = tuple(float(v) for v in section.mu)
        return PlantedConfig(
            n=section.n,
            d=section.d,
            p=section.p,
            q=section.q,
            gamma_target=int(round(section.gamma_ratio * section.n)),
            mu=mu,
            sigma=section.sigma,
            seed=seed,
        )

    @staticmethod
    def planted_dataset(config: RunConfig, seed: Optional[int] = None) -> Dataset:
        planted = RunFactory.planted_config(config, seed)
        return generate_dataset(
            planted,
            m=config.train.labeled_for(planted.n),
            target=config.planted.target,
            permute=config.planted.permute,
        )

    @staticmethod
    def cora_dataset(config: RunConfig, seed: Optional[int] = None) -> Dataset:
        return load_cora(
            config.cora.content_path,
            config.cora.cites_path,
            seed=config.planted.seed if seed is None else seed,
            train_fraction=config.cora.train_fraction,
            feature_width=config.cora.feature_width,
        )

    @staticmethod
    def diffusion(config: RunConfig, dataset: Dataset) -> DiffusionOperator:
        return build_diffusion(dataset.adjacency, DiffusionKind(config.train.diffusion))

    @staticmethod
    def gnn_config(config: RunConfig, dataset: Dataset, seed: int = 0) -> GnnConfig:
        """Layer dims are (d, *hidden_dims, output) with output 1 or num_classes."""
        loss_kind = LossKind(config.gnn.loss)
        output = 1 if loss_kind == LossKind.SQUARED_BINARY else dataset.num_classes
        return GnnConfig(
            layer_dims=(dataset.d, *config.gnn.hidden_dims, output),
            activation=ActivationKind(config.gnn.activation),
            residual_alpha=config.gnn.residual_alpha,
            loss_kind=loss_kind,
            init_scale=config.gnn.init_scale,
            seed=seed,
            linear_last_layer=config.gnn.linear_last_layer,
        )

    @staticmethod
    def train_config(config: RunConfig) -> TrainConfig:
        section = config.train
        return TrainConfig(
            optimizer=OptimizerKind(section.optimizer),
            lr=section.lr,
            epochs=section.epochs,
            eval_every=section.eval_every,
            beta1=section.beta1,
            beta2=section.beta2,
            eps=section.eps,
        )
