"""Loader for the Cora citation network (content + cites files)."""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
import pandas as pd

from src.domain.models import Dataset
from src.infrastructure.utils.rng import make_rng

logger = logging.getLogger(__name__)

CORA_FEATURE_WIDTH = 1433


@dataclass(eq=False)
class CoraRaw:
    """Parsed content rows and citation pairs, before any preprocessing."""

    paper_ids: List[str]
    features: np.ndarray
    labels: List[str]
    edges: List[Tuple[str, str]]


def _read_table(path: Union[str, Path]) -> pd.DataFrame:
    try:
        return pd.read_csv(path, sep=r"\s+", header=None, dtype=str)
    except pd.errors.EmptyDataError as exc:
        raise ValueError(f"{path} is empty") from exc
    except pd.errors.ParserError as exc:
        raise ValueError(f"{path}: unparseable line ({exc})") from exc


def read_cora_raw(
    content_path: Union[str, Path],
    cites_path: Union[str, Path],
    feature_width: int = CORA_FEATURE_WIDTH,
) -> CoraRaw:
    """Parse both files without transforming them.

    Raises:
        ValueError: On an empty file, an unparseable line (with its line number) or a
            content width other than ``1 + feature_width + 1``.
    """
    content = _read_table(content_path)
    if content.shape[1] != feature_width + 2:
        raise ValueError(
            f"{content_path}: expected {feature_width} features per row, "
            f"found {content.shape[1] - 2}"
        )
    incomplete = content.isna().any(axis=1).to_numpy()
    if incomplete.any():
        line = int(np.argmax(incomplete)) + 1
        raise ValueError(f"{content_path}:{line}: row has fewer than {feature_width} features")

    features = content.iloc[:, 1:-1].apply(pd.to_numeric, errors="coerce")
    bad_rows = features.isna().any(axis=1).to_numpy()
    if bad_rows.any():
        line = int(np.argmax(bad_rows)) + 1
        raise ValueError(f"{content_path}:{line}: non-numeric feature value")

    cites = _read_table(cites_path)
    if cites.shape[1] != 2 or cites.isna().any(axis=None):
        raise ValueError(f"{cites_path}: every line must hold exactly two paper ids")

    return CoraRaw(
        paper_ids=content.iloc[:, 0].tolist(),
        features=features.to_numpy(dtype=np.float64),
        labels=content.iloc[:, -1].tolist(),
        edges=list(zip(cites.iloc[:, 0].tolist(), cites.iloc[:, 1].tolist())),
    )


def row_normalize(features: np.ndarray) -> np.ndarray:
    """Divide each row by its sum; all-zero rows stay zero."""
    sums = features.sum(axis=1, keepdims=True)
    safe = np.where(sums == 0, 1.0, sums)
    return features / safe


def build_cora_dataset(raw: CoraRaw, seed: int = 0, train_fraction: float = 0.1) -> Dataset:
    """Undirected adjacency, row-normalised features and a seeded labeled split."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    index = {paper_id: i for i, paper_id in enumerate(raw.paper_ids)}
    if len(index) != len(raw.paper_ids):
        raise ValueError("Duplicate paper ids in content file")
    n = len(raw.paper_ids)

    adjacency = np.zeros((n, n), dtype=np.float64)
    dropped = 0
    for cited, citing in raw.edges:
        i, j = index.get(cited), index.get(citing)
        if i is None or j is None:
            dropped += 1
            continue
        if i != j:
            adjacency[i, j] = adjacency[j, i] = 1.0
    if dropped:
        logger.warning("Dropped %d citations referencing unknown paper ids", dropped)

    codes, uniques = pd.factorize(pd.Series(raw.labels))
    m = math.ceil(train_fraction * n)
    train_idx = np.sort(make_rng(seed, "cora_split").permutation(n)[:m])
    logger.info(
        "Loaded Cora: n=%d d=%d classes=%d edges=%d m=%d",
        n,
        raw.features.shape[1],
        len(uniques),
        int(adjacency.sum() // 2),
        m,
    )
    return Dataset(
        adjacency=adjacency,
        features=row_normalize(raw.features),
        train_idx=train_idx,
        num_classes=len(uniques),
        class_indices=codes.astype(np.int64),
    )


def load_cora(
    content_path: Union[str, Path],
    cites_path: Union[str, Path],
    seed: int = 0,
    train_fraction: float = 0.1,
    feature_width: int = CORA_FEATURE_WIDTH,
) -> Dataset:
    """Read and preprocess Cora; node order follows the content file."""
    raw = read_cora_raw(content_path, cites_path, feature_width=feature_width)
    return build_cora_dataset(raw, seed=seed, train_fraction=train_fraction)
