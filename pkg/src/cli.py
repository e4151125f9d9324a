"""Command-line interface for the transductive generalization lab."""

import argparse
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import yaml

from src.application.bound_report_use_case import BoundReportUseCase
from src.application.norm_validation_use_case import validate_expected_norms
from src.application.run_factory import RunFactory
from src.application.sweep_use_case import run_sweep
from src.application.training_use_case import TrainingUseCase
from src.domain.exceptions import UsageError
from src.domain.kinds import DataSource
from src.domain.models import Dataset
from src.domain.run_config import RunConfig, SweepSpec
from src.infrastructure.config_loader import parse_config
from src.infrastructure.estimators.trc_estimator import empirical_trc_lower
from src.infrastructure.storage.checkpoint_store import BinaryCheckpointStore
from src.infrastructure.storage.dataset_store import load_dataset, save_dataset
from src.infrastructure.storage.results_writer import write_results
from src.infrastructure.storage.svg_plotter import plot_trend

logger = logging.getLogger(__name__)

# Flags that mirror a config key: (dest, section.key).
_FLAG_KEYS = (
    ("seed", "planted.seed"),
    ("jobs", "sweep.jobs"),
    ("omega", "bounds.omega"),
    ("beta", "bounds.beta"),
    ("lr", "train.lr"),
    ("epochs", "train.epochs"),
    ("sweep_kind", "sweep.kind"),
    ("content", "cora.content_path"),
    ("cites", "cora.cites_path"),
)


class _ArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting on bad arguments."""

    def error(self, message: str):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _plain(value: Any) -> Any:
    if isinstance(value, dict):
        return {key: _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def _print_yaml(data: Dict[str, Any]) -> None:
    print(yaml.safe_dump(_plain(data), sort_keys=False, default_flow_style=False), end="")


def _load_config(args: argparse.Namespace) -> RunConfig:
    """Config file, then ``--set`` overrides, then dedicated flags."""
    overrides: List[str] = list(args.set or [])
    for dest, key in _FLAG_KEYS:
        value = getattr(args, dest, None)
        if value is not None:
            overrides.append(f"{key}={value}")
    return parse_config(args.config, overrides, config_dir=args.config_dir)


def _dataset(args: argparse.Namespace, config: RunConfig) -> Dataset:
    path = getattr(args, "dataset", None)
    if path:
        return load_dataset(path)
    return RunFactory.planted_dataset(config)


def _command_gen(args: argparse.Namespace, config: RunConfig) -> int:
    dataset = RunFactory.planted_dataset(config)
    save_dataset(dataset, args.out)
    print(f"✓ Wrote dataset n={dataset.n} d={dataset.d} m={dataset.m} to {args.out}")
    return 0


def _train(config: RunConfig, dataset: Dataset, checkpoint: Optional[str]) -> int:
    diffusion = RunFactory.diffusion(config, dataset)
    gnn_config = RunFactory.gnn_config(config, dataset, config.planted.seed)
    result = TrainingUseCase(dataset, diffusion).execute(
        gnn_config, RunFactory.train_config(config)
    )
    if checkpoint:
        BinaryCheckpointStore().save(result.model, checkpoint)
    epoch, metrics = result.trajectory[-1]
    _print_yaml({"epoch": epoch, **asdict(metrics)})
    return 0


def _command_train(args: argparse.Namespace, config: RunConfig) -> int:
    return _train(config, _dataset(args, config), args.checkpoint)


def _command_cora(args: argparse.Namespace, config: RunConfig) -> int:
    return _train(config, RunFactory.cora_dataset(config), args.checkpoint)


def _command_bounds(args: argparse.Namespace, config: RunConfig) -> int:
    dataset = _dataset(args, config)
    diffusion = RunFactory.diffusion(config, dataset)
    model = None
    layer_dims = RunFactory.gnn_config(config, dataset).layer_dims
    if args.checkpoint:
        model = BinaryCheckpointStore().load(args.checkpoint)
        layer_dims = model.config.layer_dims
    bounds = config.bounds
    report = BoundReportUseCase(dataset, diffusion).execute(
        layer_dims,
        omega=bounds.omega,
        beta=bounds.beta,
        delta=bounds.delta,
        lipschitz=bounds.lipschitz,
        vc_kind=bounds.vc_kind,
        model=model,
        residual_alpha=config.gnn.residual_alpha,
        expected_kind=bounds.expected_kind if dataset.planted is not None else None,
        c6=bounds.c6,
        c7=bounds.c7,
        c8=bounds.c8,
    )
    _print_yaml(report.to_dict())
    return 0


def _command_estimate_trc(args: argparse.Namespace, config: RunConfig) -> int:
    dataset = _dataset(args, config)
    diffusion = RunFactory.diffusion(config, dataset)
    gnn_config = RunFactory.gnn_config(config, dataset, config.planted.seed)
    bounds = config.bounds
    estimate = empirical_trc_lower(
        diffusion,
        dataset.features,
        bounds.omega,
        bounds.beta,
        gnn_config,
        num_sigma=bounds.num_sigma,
        num_models=bounds.num_models,
        seed=config.planted.seed,
        m=dataset.m,
        jobs=config.sweep.jobs or 1,
    )
    upper = BoundReportUseCase(dataset, diffusion).execute(
        gnn_config.layer_dims,
        omega=bounds.omega,
        beta=bounds.beta,
        delta=bounds.delta,
        lipschitz=bounds.lipschitz,
    ).trc_upper
    _print_yaml({**asdict(estimate), "trc_upper": upper, "below_bound": estimate.mean <= upper})
    return 0


def _command_validate_norms(args: argparse.Namespace, config: RunConfig) -> int:
    planted = RunFactory.planted_config(config)
    checks = validate_expected_norms(
        planted, args.diffusion, k=args.power, num_samples=args.samples, slack=args.slack
    )
    _print_yaml(
        {
            check.row.value: {
                "moment": check.moment,
                "empirical_mean": check.empirical_mean,
                "table_value": check.table_value,
                "passed": check.passed,
            }
            for check in checks
        }
    )
    failed = [check.row.value for check in checks if not check.passed]
    if failed:
        print(f"✗ Norm checks failed: {', '.join(failed)}", file=sys.stderr)
        return 2
    print(f"✓ All {len(checks)} norm checks passed")
    return 0


def _command_sweep(args: argparse.Namespace, config: RunConfig) -> int:
    experiment = Path(args.config).stem if args.config else "default"
    spec = SweepSpec.from_run_config(config, experiment=experiment)
    rows, report = run_sweep(spec, jobs=config.sweep.jobs)
    provenance = {k: v for k, v in config.to_flat().items() if k != "sweep.jobs"}
    provenance["experiment"] = experiment
    write_results(rows, args.out, provenance)
    if args.svg:
        plot_trend(report, args.svg, scale_factor=spec.scale_factor)
    _print_yaml(
        {
            "kind": report.kind,
            "grid": report.grid,
            "mean_gap": report.mean_gap,
            "bound_trend": report.bound_trend,
            "spearman_rho": report.spearman_rho,
            "flags": report.flags,
        }
    )
    print(f"✓ Wrote {len(rows)} rows to {args.out}")
    return 0


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="gnn-trc",
        description="Generalization bounds and experiments for transductive GNNs",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable DEBUG logging")
    subparsers = parser.add_subparsers(dest="command", parser_class=_ArgumentParser)
    subparsers.required = True

    def _add(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--config", default=None, help="Experiment name or YAML path")
        sub.add_argument("--config-dir", default="config/experiments")
        sub.add_argument(
            "--set", action="append", metavar="SECTION.KEY=VALUE", help="Override a config key"
        )
        sub.add_argument("--seed", type=int, help="Root seed (planted.seed)")
        return sub

    gen = _add("gen", "Sample a planted dataset and write it to a file")
    gen.add_argument("--out", required=True)
    gen.set_defaults(handler=_command_gen)

    train = _add("train", "Train one GNN and print its final metrics")
    train.add_argument("--dataset", help="Dataset file (default: sample from the config)")
    train.add_argument("--checkpoint", help="Write the trained model here")
    train.add_argument("--lr", type=float)
    train.add_argument("--epochs", type=int)
    train.set_defaults(handler=_command_train)

    bounds = _add("bounds", "Print every bound for a dataset and optional checkpoint")
    bounds.add_argument("--dataset")
    bounds.add_argument("--checkpoint", help="Measure omega and beta from this model")
    bounds.add_argument("--omega", type=float)
    bounds.add_argument("--beta", type=float)
    bounds.set_defaults(handler=_command_bounds)

    sweep = _add("sweep", "Run a sweep and write the results CSV")
    sweep.add_argument("--kind", dest="sweep_kind")
    sweep.add_argument("--out", default="results/sweep.csv")
    sweep.add_argument("--svg", help="Also write a trend plot")
    sweep.add_argument("--jobs", type=int)
    sweep.add_argument("--omega", type=float)
    sweep.add_argument("--beta", type=float)
    sweep.add_argument("--lr", type=float)
    sweep.add_argument("--epochs", type=int)
    sweep.set_defaults(handler=_command_sweep)

    norms = _add("validate-norms", "Monte Carlo check of the expected-norm table")
    norms.add_argument(
        "--kind", dest="diffusion", default="self_loop", choices=["self_loop", "degree_normalized"]
    )
    norms.add_argument("--power", type=int, default=1, help="Power k of ||S||_inf")
    norms.add_argument("--samples", type=int, default=50)
    norms.add_argument("--slack", type=float, default=0.1)
    norms.set_defaults(handler=_command_validate_norms)

    estimate = _add("estimate-trc", "Monte Carlo lower estimate of the TRC")
    estimate.add_argument("--dataset")
    estimate.add_argument("--omega", type=float)
    estimate.add_argument("--beta", type=float)
    estimate.add_argument("--jobs", type=int)
    estimate.set_defaults(handler=_command_estimate_trc)

    cora = _add("cora", "Load Cora and train on it")
    cora.add_argument("--content")
    cora.add_argument("--cites")
    cora.add_argument("--checkpoint")
    cora.add_argument("--lr", type=float)
    cora.add_argument("--epochs", type=int)
    cora.set_defaults(handler=_command_cora)
    return parser


def _handle_error(error: BaseException) -> int:
    """Handle errors and return appropriate exit code.

    Args:
        error: Exception or BaseException that was raised.

    Returns:
        Exit code (1 for usage errors, 2 for runtime failures, 130 for KeyboardInterrupt).
    """
    if isinstance(error, UsageError):
        print(f"✗ {error}", file=sys.stderr)
        return 1
    if isinstance(error, KeyboardInterrupt):
        print("\n✗ Operation cancelled by user", file=sys.stderr)
        return 130
    if isinstance(error, FileNotFoundError):
        print(f"✗ File not found: {error}", file=sys.stderr)
        return 2
    if isinstance(error, yaml.YAMLError):
        print(f"✗ Invalid YAML configuration: {error}", file=sys.stderr)
        return 2
    if isinstance(error, ValueError):
        print(f"✗ Invalid input: {error}", file=sys.stderr)
        return 2
    if isinstance(error, RuntimeError):
        print(f"✗ Runtime error: {error}", file=sys.stderr)
        return 2
    if isinstance(error, OSError):
        print(f"✗ I/O error: {error}", file=sys.stderr)
        return 2
    print(f"✗ Unexpected error: {error}", file=sys.stderr)
    return 2


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for CLI."""
    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
    logging.getLogger("matplotlib").setLevel(logging.WARNING)

    try:
        args = _build_parser().parse_args(argv)
        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
            logger.debug("Verbose logging enabled")
        config = _load_config(args)
        if args.command == "sweep" and config.sweep.source == DataSource.CORA.value:
            logger.info("Sweep runs on Cora from %s", config.cora.content_path)
        return args.handler(args, config)
    except KeyboardInterrupt as error:
        return _handle_error(error)
    except (UsageError, yaml.YAMLError, ValueError, RuntimeError, OSError) as error:
        return _handle_error(error)


if __name__ == "__main__":
    sys.exit(main())
