#!/usr/bin/env python3
"""
Pydantic schemas for experiment config files.
Validated before any computation and converted to the internal frozen records.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from schemas.phase_space import GridGeometry
from schemas.scheme_config import (
    BackendKind,
    FockCutoffs,
    SchemeConfig,
    SchemeKind,
    StateKind,
    StateSpec,
)
from utils.errors import ConfigValidationError, InvalidArgumentError


class StateModel(BaseModel):
    """Single-mode input state."""
    model_config = ConfigDict(extra="forbid")

    kind: Literal["vacuum", "coherent", "fock", "thermal", "density"] = "vacuum"
    amplitude: Tuple[float, float] = (0.0, 0.0)     # [re, im], coherent only
    n: int = Field(default=0, ge=0)
    mean: float = Field(default=0.0, ge=0.0)
    path: Optional[str] = None
    cutoff: Optional[int] = Field(default=None, ge=1)

    def to_spec(self) -> StateSpec:
        return StateSpec(
            kind=StateKind(self.kind),
            amplitude=complex(*self.amplitude),
            n=self.n,
            mean=self.mean,
            path=self.path,
            cutoff=self.cutoff,
        )


class CutoffsModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    signal: Optional[int] = Field(default=None, ge=1)
    idler: Optional[int] = Field(default=None, ge=1)
    output: Optional[int] = Field(default=None, ge=1)
    lo: Optional[int] = Field(default=None, ge=1)


class SchemeModel(BaseModel):
    """One detector run."""
    model_config = ConfigDict(extra="forbid")

    scheme: Literal["eight-port", "six-port", "heterodyne"]
    signal: StateModel = Field(default_factory=StateModel)
    idler: StateModel = Field(default_factory=StateModel)
    lo_amplitude: float = Field(default=1e4, gt=0)
    lo_phase: float = 0.0
    eta: float = Field(default=1.0, gt=0, le=1)
    heterodyne_mixing: float = Field(default=10.0, gt=0)
    backend: Literal["coherent-exact", "fock-truncated"] = "coherent-exact"
    cutoffs: CutoffsModel = Field(default_factory=CutoffsModel)
    sample_count: int = Field(default=1000, ge=0)

    def physics(self) -> Tuple[Any, ...]:
        return (self.signal, self.idler, self.eta)

    def to_config(self, seed: int) -> SchemeConfig:
        return SchemeConfig(
            scheme=SchemeKind(self.scheme),
            signal=self.signal.to_spec(),
            idler=self.idler.to_spec(),
            lo_amplitude=self.lo_amplitude,
            lo_phase=self.lo_phase,
            eta=self.eta,  # type: ignore[arg-type]
            heterodyne_mixing=self.heterodyne_mixing,
            backend=BackendKind(self.backend),
            cutoffs=FockCutoffs(**self.cutoffs.model_dump()),
            sample_count=self.sample_count,
            seed=seed,
        )


class GridModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    half_extent: Optional[float] = Field(default=None, gt=0)    # None = max(6, |centroid| + 5)
    points_per_axis: int = 256

    @field_validator("points_per_axis")
    @classmethod
    def power_of_two(cls, value: int) -> int:
        if value < 4 or value & (value - 1):
            raise ValueError("must be a power of two >= 4")
        return value


class LossCheckModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    states: List[StateModel] = Field(default_factory=lambda: [
        StateModel(kind="vacuum"),
        StateModel(kind="fock", n=1),
        StateModel(kind="fock", n=2),
        StateModel(kind="coherent", amplitude=(0.5, 0.0)),
        StateModel(kind="coherent", amplitude=(1.0, 0.0)),
        StateModel(kind="coherent", amplitude=(2.0, 0.0)),
        StateModel(kind="thermal", mean=1.0),
    ])
    etas: List[float] = Field(default_factory=lambda: [0.3, 0.6, 0.9])
    cutoff: int = Field(default=16, ge=2)
    tolerance: float = Field(default=1e-10, gt=0)

    @field_validator("etas")
    @classmethod
    def efficiencies_in_range(cls, values: List[float]) -> List[float]:
        for value in values:
            if not 0 < value <= 1:
                raise ValueError(f"eta {value} outside (0, 1]")
        return values


class ExperimentConfig(BaseModel):
    """Top-level experiment document (see docs/CONFIG_SCHEMA.md)."""
    model_config = ConfigDict(extra="forbid")

    scheme: Optional[SchemeModel] = None
    schemes: Optional[List[SchemeModel]] = Field(default=None, min_length=2, max_length=2)
    grid: GridModel = Field(default_factory=GridModel)
    output_dir: str = "out"
    formats: List[Literal["csv", "json", "parquet"]] = Field(default_factory=lambda: ["csv"])
    significance: float = Field(default=0.01, gt=0, lt=1)
    seed: int = Field(default=0, ge=0)
    compare_operators: bool = True
    loss_check: LossCheckModel = Field(default_factory=LossCheckModel)

    def require_scheme(self) -> SchemeModel:
        if self.scheme is None:
            raise ConfigValidationError("This command needs a single 'scheme' entry", field_path="scheme")
        return self.scheme

    def require_pair(self) -> Tuple[SchemeModel, SchemeModel]:
        if self.schemes is None:
            raise ConfigValidationError("This command needs a 'schemes' pair", field_path="schemes")
        a, b = self.schemes
        for name, left, right in zip(("signal", "idler", "eta"), a.physics(), b.physics()):
            if left != right:
                raise ConfigValidationError(
                    f"schemes differ in {name}; equivalence needs matched physics",
                    field_path=f"schemes.1.{name}",
                )
        return a, b

    def geometry(self, default_half_extent: float) -> GridGeometry:
        half_extent = self.grid.half_extent or default_half_extent
        return GridGeometry(half_extent, self.grid.points_per_axis)


def _field_path(error: Dict[str, Any]) -> str:
    return ".".join(str(part) for part in error.get("loc", ()))


def parse_experiment_config(data: Dict[str, Any]) -> ExperimentConfig:
    """
    Validate a raw config dict.

    Raises:
        ConfigValidationError: first failing field, with its dotted path
    """
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        errors = e.errors()
        first = errors[0] if errors else {}
        raise ConfigValidationError(
            f"Invalid config: {first.get('msg', str(e))}",
            field_path=_field_path(first),
            context={"errors": [{"field": _field_path(err), "message": err.get("msg")} for err in errors]},
        )


def load_experiment_config(path: Optional[str], overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """Read a JSON config file (or start empty) and apply CLI overrides."""
    data: Dict[str, Any] = {}
    if path:
        file_path = Path(path)
        if not file_path.exists():
            raise ConfigValidationError(f"Config file not found: {path}", field_path="--config")
        try:
            with open(file_path, encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigValidationError(f"Config is not valid JSON: {e}", field_path="--config")
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value
    return parse_experiment_config(data)


def to_scheme_config(model: SchemeModel, seed: int, field_path: str = "scheme") -> SchemeConfig:
    """Convert, turning record-level rejections into config errors at field_path."""
    try:
        return model.to_config(seed)
    except InvalidArgumentError as e:
        raise ConfigValidationError(str(e), field_path=field_path, context=e.context)
