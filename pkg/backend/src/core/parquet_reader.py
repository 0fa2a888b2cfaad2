#!/usr/bin/env python3
"""
Readers for sample files written by core.sample_writer.
Row records rebuild themselves through their own from_parquet_dict.
"""

import json
from pathlib import Path
from typing import List, Optional, Type, TypeVar, Union

import numpy as np
import pandas as pd
import pyarrow.parquet as pq

from core.sample_writer import SCHEME_METADATA_KEY
from schemas.photocurrent import PhotocurrentSample, SampleBatch
from utils.errors import InvalidArgumentError

T = TypeVar("T")


def read_records(file_path: Union[str, Path], dataclass_type: Type[T]) -> List[T]:
    """
    Read a Parquet file and reconstruct one record per row.

    Raises:
        FileNotFoundError: If file doesn't exist
        InvalidArgumentError: If a row can't be converted
    """
    path = Path(file_path)
    if not path.exists():
        raise FileNotFoundError(f"Parquet file not found: {file_path}")
    rows = pq.read_table(path).to_pylist()
    try:
        return [dataclass_type.from_parquet_dict(row) for row in rows]  # type: ignore[attr-defined]
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidArgumentError(f"Failed to read records from {file_path}: {e}")


def _batch_from_frame(frame: pd.DataFrame, scheme: str) -> SampleBatch:
    count_columns = sorted((c for c in frame.columns if c.startswith("i")), key=lambda c: int(c[1:]))
    counts = frame[count_columns].to_numpy(dtype=np.int64) if count_columns else np.zeros((len(frame), 0), np.int64)
    return SampleBatch(
        scheme=scheme,
        counts=counts,
        z1=frame["z1"].to_numpy(dtype=np.float64),
        z2=frame["z2"].to_numpy(dtype=np.float64),
    )


def read_samples(file_path: Union[str, Path], scheme: Optional[str] = None) -> SampleBatch:
    """Load a samples file (format from the suffix) back into a SampleBatch."""
    path = Path(file_path)
    if not path.exists():
        raise FileNotFoundError(f"Samples file not found: {file_path}")
    suffix = path.suffix.lower()

    if suffix == ".csv":
        return _batch_from_frame(pd.read_csv(path, float_precision="round_trip"), scheme or path.stem)
    if suffix == ".json":
        with open(path, encoding="utf-8") as f:
            payload = json.load(f)
        frame = pd.DataFrame(payload["rows"], columns=payload["columns"])
        return _batch_from_frame(frame, scheme or payload.get("scheme", path.stem))
    if suffix == ".parquet":
        metadata = pq.read_schema(path).metadata or {}
        stored = metadata.get(SCHEME_METADATA_KEY, path.stem.encode()).decode()
        records = read_records(path, PhotocurrentSample)
        if not records:
            return _batch_from_frame(pq.read_table(path).to_pandas(), scheme or stored)
        return SampleBatch.from_samples(scheme or stored, records)
    raise InvalidArgumentError(f"Unsupported samples file suffix '{suffix}'")
