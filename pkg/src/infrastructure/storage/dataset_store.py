"""Versioned plain-text dataset persistence.

Layout::

    GTRC-DATASET v1
    <n> <d> <m> <num_classes>
    <json meta: planted config, target, label kind, gamma_actual>
    [edges] <count>
    i j            (one line per edge, i < j)
    [features]
    x_1,...,x_d    (one row per node, shortest round-trip float repr)
    [labels]
    z y  | c       (latent pair or class index per node)
    [train]
    idx            (one per labeled node, in split order)
    [end]
"""

import json
import logging
from pathlib import Path
from typing import Iterator, List

import numpy as np

from src.domain.exceptions import FormatVersionError
from src.domain.interfaces import DatasetStore, PathLike
from src.domain.models import Dataset, LatentLabels, PlantedConfig

logger = logging.getLogger(__name__)

MAGIC = "GTRC-DATASET"
VERSION = "v1"


class _Lines:
    """Line cursor that reports truncation with the line number."""

    def __init__(self, lines: List[str], path: Path):
        self._lines = lines
        self._index = 0
        self._path = path

    @property
    def line_number(self) -> int:
        return self._index

    def next(self) -> str:
        if self._index >= len(self._lines):
            raise ValueError(f"Truncated dataset file {self._path} after line {self._index}")
        line = self._lines[self._index]
        self._index += 1
        return line

    def expect(self, marker: str) -> str:
        line = self.next()
        if not line.startswith(marker):
            raise ValueError(
                f"{self._path}:{self._index}: expected {marker!r}, found {line[:40]!r}"
            )
        return line

    def take(self, count: int) -> Iterator[str]:
        for _ in range(count):
            yield self.next()


class TextDatasetStore(DatasetStore):
    """Reads and writes datasets in the versioned text format."""

    def save(self, dataset: Dataset, path: PathLike) -> None:
        """Write ``dataset`` to ``path`` (parent directories are created)."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        rows, cols = np.nonzero(np.triu(dataset.adjacency, k=1))
        meta = {
            "planted": dataset.planted.to_dict() if dataset.planted else None,
            "target": dataset.target,
            "labels": "latent" if dataset.labels is not None else "class",
            "gamma_actual": dataset.labels.gamma_actual if dataset.labels is not None else None,
        }

        with open(path, "w", encoding="utf-8") as f:
            f.write(f"{MAGIC} {VERSION}\n")
            f.write(f"{dataset.n} {dataset.d} {dataset.m} {dataset.num_classes}\n")
            f.write(json.dumps(meta, sort_keys=True) + "\n")
            f.write(f"[edges] {len(rows)}\n")
            for i, j in zip(rows.tolist(), cols.tolist()):
                f.write(f"{i} {j}\n")
            f.write("[features]\n")
            for row in dataset.features.tolist():
                f.write(",".join(repr(float(v)) for v in row) + "\n")
            f.write("[labels]\n")
            if dataset.labels is not None:
                for z_i, y_i in zip(dataset.labels.z.tolist(), dataset.labels.y.tolist()):
                    f.write(f"{z_i} {y_i}\n")
            else:
                for c in dataset.class_indices.tolist():
                    f.write(f"{c}\n")
            f.write("[train]\n")
            for idx in dataset.train_idx.tolist():
                f.write(f"{idx}\n")
            f.write("[end]\n")
        logger.info("Saved dataset (n=%d, edges=%d) to %s", dataset.n, len(rows), path)

    def load(self, path: PathLike) -> Dataset:
        """Read a dataset written by :meth:`save`.

        Raises:
            FormatVersionError: If the header is not ``GTRC-DATASET v1``.
            ValueError: If the file is truncated or malformed.
        """
        path = Path(path)
        with open(path, encoding="utf-8") as f:
            lines = _Lines(f.read().splitlines(), path)

        header = lines.next().strip()
        if header != f"{MAGIC} {VERSION}":
            raise FormatVersionError(found=header[:40], expected=f"{MAGIC} {VERSION}")
        try:
            n, d, m, num_classes = (int(v) for v in lines.next().split())
            meta = json.loads(lines.next())
        except ValueError as exc:
            raise ValueError(f"{path}:{lines.line_number}: malformed header ({exc})") from exc

        edge_count = int(lines.expect("[edges]").split()[1])
        adjacency = np.zeros((n, n), dtype=np.float64)
        for line in lines.take(edge_count):
            i, j = (int(v) for v in line.split())
            adjacency[i, j] = adjacency[j, i] = 1.0

        lines.expect("[features]")
        features = np.array(
            [[float(v) for v in line.split(",")] for line in lines.take(n)],
            dtype=np.float64,
        ).reshape(n, d)

        lines.expect("[labels]")
        labels = None
        class_indices = None
        if meta["labels"] == "latent":
            pairs = np.array([[int(v) for v in line.split()] for line in lines.take(n)])
            pairs = pairs.reshape(n, 2)
            labels = LatentLabels(
                z=pairs[:, 0].astype(np.int64),
                y=pairs[:, 1].astype(np.int64),
                gamma_actual=int(meta["gamma_actual"]),
            )
        else:
            class_indices = np.array([int(line) for line in lines.take(n)], dtype=np.int64)

        lines.expect("[train]")
        train_idx = np.array([int(line) for line in lines.take(m)], dtype=np.int64)
        lines.expect("[end]")

        planted = PlantedConfig.from_dict(meta["planted"]) if meta.get("planted") else None
        return Dataset(
            adjacency=adjacency,
            features=features,
            train_idx=train_idx,
            num_classes=num_classes,
            labels=labels,
            class_indices=class_indices,
            planted=planted,
            target=meta.get("target", "z"),
        )


def save_dataset(dataset: Dataset, path: PathLike) -> None:
    TextDatasetStore().save(dataset, path)


def load_dataset(path: PathLike) -> Dataset:
    return TextDatasetStore().load(path)
