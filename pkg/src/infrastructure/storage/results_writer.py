"""Results CSV with a fixed column order and provenance comment lines."""

import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Sequence

import pandas as pd

from src.domain.interfaces import PathLike, ResultsSink
from src.domain.models import RESULTS_COLUMNS, ResultsRow

logger = logging.getLogger(__name__)

_STRING_COLUMNS = ("experiment", "sweep_param")
_INT_COLUMNS = ("seed", "epoch")


def _cell(value: Any) -> Any:
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


class CsvResultsSink(ResultsSink):
    """Writes and reads sweep results with pandas."""

    def write(
        self, rows: Sequence[ResultsRow], path: PathLike, provenance: Dict[str, Any]
    ) -> None:
        """Write ``# key: value`` provenance lines followed by the CSV table."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame = pd.DataFrame(
            [[getattr(row, column) for column in RESULTS_COLUMNS] for row in rows],
            columns=list(RESULTS_COLUMNS),
        )
        with open(path, "w", encoding="utf-8", newline="") as f:
            for key in sorted(provenance):
                f.write(f"# {key}: {provenance[key]}\n")
            frame.to_csv(f, index=False, na_rep="", lineterminator="\n")
        logger.info("Wrote %d result rows to %s", len(rows), path)

    def read(self, path: PathLike) -> List[ResultsRow]:
        """Parse a results CSV back into rows; empty cells become None."""
        frame = pd.read_csv(
            path,
            comment="#",
            dtype={column: str for column in _STRING_COLUMNS},
            float_precision="round_trip",
        )
        missing = [c for c in RESULTS_COLUMNS if c not in frame.columns]
        if missing:
            raise ValueError(f"Results file {path} is missing columns: {missing}")

        rows = []
        for record in frame[list(RESULTS_COLUMNS)].to_dict(orient="records"):
            values = {column: _cell(record[column]) for column in RESULTS_COLUMNS}
            for column in _INT_COLUMNS:
                values[column] = int(values[column])
            for column in RESULTS_COLUMNS:
                if column not in _STRING_COLUMNS + _INT_COLUMNS and values[column] is not None:
                    values[column] = float(values[column])
            rows.append(ResultsRow(**values))
        return rows


def write_results(
    rows: Sequence[ResultsRow], path: PathLike, provenance: Dict[str, Any]
) -> None:
    CsvResultsSink().write(rows, path, provenance)


def read_results(path: PathLike) -> List[ResultsRow]:
    return CsvResultsSink().read(path)
