#!/usr/bin/env python3
"""
Writers for photocurrent samples and run summaries.

Samples go to CSV (header, LF endings, integer counts, shortest round-trip
doubles), JSON, or Parquet. The Parquet path streams chunks into row groups
through a context-managed batch writer.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pyarrow as pa
import pyarrow.parquet as pq

from schemas.photocurrent import SampleBatch
from utils.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

SAMPLE_FORMATS = ("csv", "json", "parquet")
SCHEME_METADATA_KEY = b"scheme"


def _to_table(batch: SampleBatch) -> pa.Table:
    columns: Dict[str, pa.Array] = {
        f"i{k + 1}": pa.array(batch.counts[:, k], type=pa.int64()) for k in range(batch.num_detectors)
    }
    columns["z1"] = pa.array(batch.z1, type=pa.float64())
    columns["z2"] = pa.array(batch.z2, type=pa.float64())
    table = pa.table(columns)
    return table.replace_schema_metadata({SCHEME_METADATA_KEY: batch.scheme.encode()})


class BatchWriter:
    """Streams SampleBatch chunks into one Parquet file, one row group per flush."""

    def __init__(self, file_path: Union[str, Path], batch_size: int = 65536):
        """
        Args:
            file_path: Path to write Parquet file
            batch_size: Rows to accumulate before writing a row group
        """
        self.file_path = Path(file_path)
        self.batch_size = batch_size
        self.pending: List[SampleBatch] = []
        self.pending_rows = 0
        self._writer: Optional[pq.ParquetWriter] = None
        self.file_path.parent.mkdir(parents=True, exist_ok=True)

    def add_batch(self, batch: SampleBatch) -> None:
        self.pending.append(batch)
        self.pending_rows += len(batch)
        if self.pending_rows >= self.batch_size:
            self.flush()

    def flush(self) -> None:
        """Write accumulated rows as one row group."""
        if not self.pending:
            return
        table = _to_table(SampleBatch.concatenate(self.pending))
        if self._writer is None:
            self._writer = pq.ParquetWriter(self.file_path, table.schema)
        self._writer.write_table(table)
        logger.debug(f"Wrote {table.num_rows} rows to {self.file_path}")
        self.pending.clear()
        self.pending_rows = 0

    def close(self) -> None:
        self.flush()
        if self._writer is not None:
            self._writer.close()
            self._writer = None

    def __enter__(self) -> "BatchWriter":
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        self.close()


def _json_payload(batch: SampleBatch) -> Dict[str, Any]:
    rows = [
        [int(c) for c in counts] + [float(a), float(b)]
        for counts, a, b in zip(batch.counts, batch.z1, batch.z2)
    ]
    return {"scheme": batch.scheme, "columns": batch.column_names(), "rows": rows}


def write_samples(batch: SampleBatch, file_path: Union[str, Path], fmt: str = "csv") -> Path:
    """
    Write a sample batch in one of SAMPLE_FORMATS.

    Returns:
        The written path
    """
    if fmt not in SAMPLE_FORMATS:
        raise InvalidArgumentError(f"Unknown sample format '{fmt}'. Available: {', '.join(SAMPLE_FORMATS)}")
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)

    if fmt == "csv":
        batch.to_frame().to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    elif fmt == "json":
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(_json_payload(batch), f)
            f.write("\n")
    else:
        with BatchWriter(path) as writer:
            writer.add_batch(batch)
    logger.info(f"Wrote {len(batch)} samples to {path}")
    return path


def _json_default(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def write_json(payload: Dict[str, Any], file_path: Union[str, Path]) -> Path:
    """Deterministic JSON report (sorted keys, LF, trailing newline)."""
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(payload, f, indent=2, sort_keys=True, default=_json_default)
        f.write("\n")
    logger.info(f"Wrote {path}")
    return path


def sample_summary(batch: SampleBatch, seed: int, eta: float, lo_amplitude: float) -> Dict[str, Any]:
    """means, covariance, n, seed, scheme, η, |z| of a run."""
    stats = batch.stats()
    return {
        "scheme": batch.scheme,
        "n": stats["n"],
        "seed": seed,
        "eta": eta,
        "lo_amplitude": lo_amplitude,
        "mean": [float(v) for v in stats["mean"]],
        "covariance": [[float(v) for v in row] for row in stats["covariance"]],
    }
