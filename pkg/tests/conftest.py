"""
Test fixtures shared across all test modules.

Provides:
1. bound_grid - default eigensolver window [-20, 20], n = 4001
2. fine_grid - [-10, 10] with h = 1e-3 for finite-difference residuals
3. config_file - temporary configuration.yaml with a small, fast setup
4. settings - Settings loaded from config_file
5. run_config - RunConfig built from settings, writing into tmp_output
6. tmp_output - per-test output directory

All fixtures use pytest's tmp_path for isolation.
"""

from __future__ import annotations

from pathlib import Path

import pytest

from src.config import RunConfig, Settings, load_settings
from src.models import Grid

SMALL_CONFIG = """\
env: test
family: phi4
grid:
  y_min: -8.0
  y_max: 8.0
  n: 401
bound_grid:
  y_min: -20.0
  y_max: 20.0
  n: 2001
solver:
  levels: 3
  negative_tolerance: 1.0e-3
quadrature:
  tol: 1.0e-10
sweep:
  k_values: [0.0, 0.5, 1.0, 2.0]
  box_half_widths: [5.0, 10.0]
  q_min: 0.0
  q_max: 2.0
  q_steps: 3
  continuum_points: 401
  continuum_k_values: [0.0, 0.2, 0.5]
  spectrum_k_values: [0.0, 0.2, 0.5]
  workers: 2
output:
  format: csv
"""


@pytest.fixture()
def bound_grid() -> Grid:
    return Grid.symmetric(20.0, 4001)


@pytest.fixture()
def fine_grid() -> Grid:
    return Grid.symmetric(10.0, 20001)


@pytest.fixture()
def tmp_output(tmp_path) -> Path:
    out = tmp_path / "output"
    out.mkdir()
    return out


@pytest.fixture()
def config_file(tmp_path) -> Path:
    path = tmp_path / "configuration.yaml"
    path.write_text(SMALL_CONFIG, encoding="utf-8")
    return path


@pytest.fixture()
def settings(config_file: Path, monkeypatch) -> Settings:
    monkeypatch.delenv("CONFIG_PATH", raising=False)
    return load_settings(str(config_file))


@pytest.fixture()
def run_config(settings: Settings, tmp_output: Path) -> RunConfig:
    return RunConfig.from_settings(settings, out=str(tmp_output))
