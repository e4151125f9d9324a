"""Domain interfaces (ports)."""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

from src.domain.models import Dataset, GnnModel, OptimizerState, ResultsRow

PathLike = Union[str, Path]


class ConfigLoader(ABC):
    """Interface for loading run configurations."""

    @abstractmethod
    def load_run_config(self, name_or_path: str) -> Dict[str, Any]:
        """Load the raw sectioned configuration mapping.

        Args:
            name_or_path: Experiment name under the config directory, or a file path.

        Returns:
            Mapping of section name to a mapping of key/value pairs.
        """


class DatasetStore(ABC):
    """Interface for dataset persistence."""

    @abstractmethod
    def save(self, dataset: Dataset, path: PathLike) -> None:
        """Write a dataset to ``path``."""

    @abstractmethod
    def load(self, path: PathLike) -> Dataset:
        """Read a dataset previously written by :meth:`save`."""


class CheckpointStore(ABC):
    """Interface for model checkpoint persistence."""

    @abstractmethod
    def save(self, model: GnnModel, path: PathLike) -> None:
        """Write model parameters and config to ``path``."""

    @abstractmethod
    def load(self, path: PathLike) -> GnnModel:
        """Read a model previously written by :meth:`save`."""


class ResultsSink(ABC):
    """Interface for sweep result emission."""

    @abstractmethod
    def write(
        self, rows: Sequence[ResultsRow], path: PathLike, provenance: Dict[str, Any]
    ) -> None:
        """Write rows with provenance comment lines.

        Args:
            rows: Result rows in emission order.
            path: Output file.
            provenance: Flat ``section.key -> value`` mapping echoed before the header.
        """

    @abstractmethod
    def read(self, path: PathLike) -> List[ResultsRow]:
        """Parse rows back from a file written by :meth:`write`."""


class Optimizer(ABC):
    """Interface for parameter update rules."""

    @abstractmethod
    def step(
        self, state: OptimizerState, model: GnnModel, grads: List[Any]
    ) -> Tuple[GnnModel, OptimizerState]:
        """Apply one update.

        Args:
            state: Current optimizer state.
            model: Model whose parameters are updated.
            grads: Gradients in ``model.parameters()`` order.

        Returns:
            Tuple of (updated model, updated state).
        """
