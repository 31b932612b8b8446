"""Shared fixtures and the --runslow switch for reproduction checks."""

import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from src.models.config import ExperimentConfig
from src.services.molecule_catalog import MoleculeCatalog

FIXTURES = Path(__file__).parent / "fixtures"


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow reproduction checks")
    parser.addoption("--update-golden", action="store_true", default=False,
                     help="rewrite golden tables in tests/fixtures instead of comparing")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def data_path() -> Path:
    """Directory holding golden files."""
    return FIXTURES


@pytest.fixture
def golden(data_path, request):
    """
    Compare a table against tests/fixtures/<name>.csv.

    A missing table fails the test; --update-golden rewrites it from the current run.
    """
    update = request.config.getoption("--update-golden")

    def check(name: str, frame: pd.DataFrame, rtol: float = 1e-10, atol: float = 1e-12):
        path = data_path / f"{name}.csv"
        if update:
            frame.to_csv(path, index=False, float_format="%.15g")
            return
        assert path.exists(), f"missing golden table {path.name}; rerun with --update-golden"
        expected = pd.read_csv(path)
        assert list(expected.columns) == list(frame.columns)
        assert len(expected) == len(frame)
        for column in frame.columns:
            assert np.allclose(frame[column].to_numpy(dtype=float), expected[column].to_numpy(dtype=float),
                               rtol=rtol, atol=atol), column

    return check


@pytest.fixture(scope="session")
def o2():
    return MoleculeCatalog.get("O2")


@pytest.fixture
def small_config() -> ExperimentConfig:
    """Cold O2, short trains and a small basis: fast end-to-end runs."""
    return ExperimentConfig.model_validate({
        "molecule": "O2",
        "temperature_K": 5.0,
        "basis": {"j_max": 30, "weight_cutoff": 1e-4},
        "train": {"n_pre": 2, "period_pre": 0.237, "delay": [0.243, 0.264],
                  "n_loc": 4, "period_loc": 0.267, "strength": 1.5},
        "classical": {"trajectories": 2000, "n_kicks": 8},
        "seed": 7,
    })


@pytest.fixture
def write_config(tmp_path):
    """Write a mapping as a .cfg file and return its path."""
    def write(data, name: str = "run.cfg") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return write
