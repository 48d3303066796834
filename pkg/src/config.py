from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Type

import yaml
from pydantic import AliasChoices, BaseModel, Field, field_validator, model_validator
from pydantic.fields import FieldInfo
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
)

from .models import DefectFamily

DEFAULT_CONFIG_PATH = "configuration.yaml"


class GridConfig(BaseModel):
    # profile / potential sampling
    y_min: float = -10.0
    y_max: float = 10.0
    n: int = 2001


class BoundGridConfig(BaseModel):
    # eigensolver window; sech-localized states are ~1e-17 at the edges
    y_min: float = -20.0
    y_max: float = 20.0
    n: int = 4001


class SolverConfig(BaseModel):
    levels: int = 3
    # zero modes sit about -1e-4 below zero on the default bound grid
    negative_tolerance: float = 1e-3


class QuadratureConfig(BaseModel):
    tol: float = 1e-10
    limit: int = 200


class SweepConfig(BaseModel):
    k_values: List[float] = Field(default_factory=lambda: [0.0, 0.5, 1.0, 2.0])
    box_half_widths: List[float] = Field(default_factory=lambda: [5.0, 10.0])
    q_min: float = 0.0
    q_max: float = 3.0
    q_steps: int = 13
    continuum_points: int = 401
    continuum_k_values: List[float] = Field(default_factory=lambda: [0.0, 0.2, 0.5])
    spectrum_k_values: List[float] = Field(default_factory=lambda: [0.0, 0.2, 0.5])
    workers: int = 4


class OutputConfig(BaseModel):
    format: Literal["csv", "json"] = "csv"
    directory: str = "./output"


class Settings(BaseSettings):
    """
    Sources, highest priority first:
    1) init kwargs (tests, CLI)
    2) environment variables (DEFECTS_ prefix, nested with __,
       e.g. DEFECTS_GRID__N=4001)
    3) .env
    4) configuration.yaml (path from config_path / CONFIG_PATH)
    """

    model_config = SettingsConfigDict(
        env_prefix="DEFECTS_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        env_nested_delimiter="__",
    )

    # --- Global runtime ---
    env: str = "dev"
    log_level: str = "INFO"

    # --- YAML-driven project configuration ---
    family: DefectFamily = DefectFamily.PHI4_KINK
    grid: GridConfig = Field(default_factory=GridConfig)
    bound_grid: BoundGridConfig = Field(default_factory=BoundGridConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    config_path: str = Field(
        default=DEFAULT_CONFIG_PATH,
        validation_alias=AliasChoices("config_path", "CONFIG_PATH"),
    )

    @field_validator("env")
    @classmethod
    def _validate_env(cls, v: str) -> str:
        allowed = {"dev", "prod", "test"}
        if v not in allowed:
            raise ValueError(f"env must be one of {sorted(allowed)}, got: {v}")
        return v

    @field_validator("family", mode="before")
    @classmethod
    def _parse_family(cls, v: Any) -> Any:
        if isinstance(v, str):
            return DefectFamily.parse(v)
        return v

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        init_kwargs = getattr(init_settings, "init_kwargs", {}) or {}
        path = (
            init_kwargs.get("config_path")
            or init_kwargs.get("CONFIG_PATH")
            or os.environ.get("CONFIG_PATH")
            or DEFAULT_CONFIG_PATH
        )
        return (
            init_settings,
            env_settings,
            dotenv_settings,
            YamlSettingsSource(settings_cls, str(path)),
        )


def _load_yaml_config(path: str) -> Dict[str, Any]:
    """
    Load configuration.yaml content.
    If the file does not exist, return an empty dict (env + defaults still work).
    """
    p = Path(path)
    if not p.exists():
        return {}

    with p.open("r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}

    if not isinstance(data, dict):
        raise ValueError(f"{path} must contain a YAML mapping/object at top-level")
    return data


class YamlSettingsSource(PydanticBaseSettingsSource):
    """Lowest-priority source: the repo-level YAML file."""

    def __init__(self, settings_cls: Type[BaseSettings], path: str):
        super().__init__(settings_cls)
        self.path = path
        self._data = _load_yaml_config(path)

    def get_field_value(self, field: FieldInfo, field_name: str) -> Tuple[Any, str, bool]:
        return self._data.get(field_name), field_name, False

    def __call__(self) -> Dict[str, Any]:
        fields = self.settings_cls.model_fields
        return {k: v for k, v in self._data.items() if k in fields and v is not None}


def load_settings(config_path: Optional[str] = None) -> Settings:
    """Main entrypoint used by the CLI."""
    if config_path is None:
        return Settings()
    return Settings(config_path=config_path)


# =============================================================================
# Per-invocation configuration
# =============================================================================


class RunConfig(BaseModel):
    """
    Validated configuration of one CLI run: Settings merged with flags.
    Validation errors here are config errors (exit code 2).
    """

    family: DefectFamily = DefectFamily.PHI4_KINK
    k_values: List[float] = Field(default_factory=lambda: [0.0, 0.5, 1.0, 2.0], min_length=1)
    continuum_k_values: List[float] = Field(default_factory=lambda: [0.0, 0.2, 0.5], min_length=1)
    spectrum_k_values: List[float] = Field(default_factory=lambda: [0.0, 0.2, 0.5], min_length=1)

    y_min: float = -10.0
    y_max: float = 10.0
    n: int = Field(default=2001, ge=3)

    bound_y_min: float = -20.0
    bound_y_max: float = 20.0
    bound_n: int = Field(default=4001, ge=3)

    box_half_widths: List[float] = Field(default_factory=lambda: [5.0, 10.0], min_length=1)
    q_min: float = 0.0
    q_max: float = 3.0
    q_steps: int = Field(default=13, ge=1)
    continuum_points: int = Field(default=401, ge=3)

    levels: int = Field(default=3, ge=1)
    negative_tolerance: float = Field(default=1e-3, ge=0.0)
    tol: float = Field(default=1e-10, gt=0.0)
    quad_limit: int = Field(default=200, ge=1)

    format: Literal["csv", "json"] = "csv"
    out: str = "./output"
    workers: int = Field(default=4, ge=1)

    @field_validator("family", mode="before")
    @classmethod
    def _parse_family(cls, v: Any) -> Any:
        if isinstance(v, str):
            return DefectFamily.parse(v)
        return v

    @field_validator("k_values", "continuum_k_values", "spectrum_k_values")
    @classmethod
    def _finite_k(cls, v: List[float]) -> List[float]:
        for k in v:
            if k != k or k in (float("inf"), float("-inf")):
                raise ValueError(f"k values must be finite, got {k!r}")
        return v

    @field_validator("box_half_widths")
    @classmethod
    def _positive_boxes(cls, v: List[float]) -> List[float]:
        for L in v:
            if not (0.0 < L < float("inf")):
                raise ValueError(f"Box half-widths must be positive and finite, got {L!r}")
        return v

    @model_validator(mode="after")
    def _check_ranges(self) -> "RunConfig":
        if not self.y_min < self.y_max:
            raise ValueError(f"ymin must be < ymax, got [{self.y_min}, {self.y_max}]")
        if not self.bound_y_min < self.bound_y_max:
            raise ValueError("bound grid requires y_min < y_max")
        if self.q_min > self.q_max:
            raise ValueError(f"q-min must be <= q-max, got {self.q_min} > {self.q_max}")
        if self.levels > self.bound_n - 2:
            raise ValueError(f"levels={self.levels} exceeds the {self.bound_n - 2} interior nodes")
        return self

    @classmethod
    def from_settings(cls, settings: Settings, **overrides: Any) -> "RunConfig":
        """Settings values, replaced by every override that is not None."""
        base: Dict[str, Any] = {
            "family": settings.family,
            "k_values": settings.sweep.k_values,
            "continuum_k_values": settings.sweep.continuum_k_values,
            "spectrum_k_values": settings.sweep.spectrum_k_values,
            "y_min": settings.grid.y_min,
            "y_max": settings.grid.y_max,
            "n": settings.grid.n,
            "bound_y_min": settings.bound_grid.y_min,
            "bound_y_max": settings.bound_grid.y_max,
            "bound_n": settings.bound_grid.n,
            "box_half_widths": settings.sweep.box_half_widths,
            "q_min": settings.sweep.q_min,
            "q_max": settings.sweep.q_max,
            "q_steps": settings.sweep.q_steps,
            "continuum_points": settings.sweep.continuum_points,
            "levels": settings.solver.levels,
            "negative_tolerance": settings.solver.negative_tolerance,
            "tol": settings.quadrature.tol,
            "quad_limit": settings.quadrature.limit,
            "format": settings.output.format,
            "out": settings.output.directory,
            "workers": settings.sweep.workers,
        }
        base.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**base)

    def q_values(self) -> List[float]:
        if self.q_steps == 1:
            return [self.q_min]
        step = (self.q_max - self.q_min) / (self.q_steps - 1)
        return [self.q_min + i * step for i in range(self.q_steps)]
