"""Tests for CSV and results.json output."""

import json
import os

import numpy as np
import pandas as pd
import pytest

from src.models.experiment import ExperimentResult, RunManifest
from src.models.observables import EnergyTrace, PopulationDistribution
from src.services.observables import energy_trace
from src.services.result_writer import (
    RESULTS_FILE,
    read_populations,
    sha256_of,
    trace_frame,
    write_results,
)


@pytest.fixture
def result():
    pop = PopulationDistribution(entries={1: 0.123456789012345, 3: 0.5, 5: 1.0 - 0.5 - 0.123456789012345})
    return ExperimentResult(
        traces={
            "delay_1": energy_trace([0, 1, 2], [0.0, 0.237, 0.474], [2.0, 11.5, 19.25]),
            "empty": EnergyTrace(),
        },
        populations={"delay_1": pop},
        m_populations={"delay_1": {0: pop, 1: pop}},
        m_weights={"delay_1": {0: 0.5, 1: 0.5}},
        scans={"delay": [{"delay": 0.2, "energy_B": 10.0}, {"delay": 0.3, "energy_B": 12.0}]},
        metrics={"degree_of_control": 0.25, "break_time": None},
        manifest=RunManifest(command="simulate", tool_version="test", seed=0),
    )


def test_empty_trace_is_header_only(result, tmp_path):
    write_results(result, tmp_path)
    assert (tmp_path / "trace_empty.csv").read_text() == "pulse_index,t_over_trev,energy_B,absorbed_B\n"


def test_file_set(result, tmp_path):
    written = write_results(result, tmp_path)
    assert written[-1].name == RESULTS_FILE
    assert sorted(p.name for p in tmp_path.iterdir()) == sorted([
        "trace_delay_1.csv",
        "trace_empty.csv",
        "populations_delay_1.csv",
        "populations_delay_1_m.csv",
        "scan_delay.csv",
        RESULTS_FILE,
    ])


def test_populations_round_trip(result, tmp_path):
    write_results(result, tmp_path)
    restored = read_populations(tmp_path / "populations_delay_1.csv")
    original = result.populations["delay_1"]
    assert np.array_equal(restored.j_values, original.j_values)
    assert np.allclose(restored.values, original.values, rtol=0.0, atol=1e-10)


def test_raman_column(result, tmp_path):
    write_results(result, tmp_path)
    frame = pd.read_csv(tmp_path / "populations_delay_1.csv")
    assert list(frame.columns) == ["J", "P_J", "I_J_normalized"]
    assert frame["I_J_normalized"].max() == pytest.approx(1.0)


def test_trace_columns(result, tmp_path):
    write_results(result, tmp_path)
    frame = pd.read_csv(tmp_path / "trace_delay_1.csv")
    assert list(frame.columns) == ["pulse_index", "t_over_trev", "energy_B", "absorbed_B"]
    assert frame["absorbed_B"].tolist() == [0.0, 9.5, 17.25]


def test_sampled_trace_has_stderr_column():
    trace = energy_trace([0, 1], [0.0, 0.25], [0.0, 2.0], stderrs=[0.0, 0.1])
    assert list(trace_frame(trace).columns)[-1] == "stderr_B"


def test_manifest_checksums(result, tmp_path):
    write_results(result, tmp_path)
    document = json.loads((tmp_path / RESULTS_FILE).read_text())
    checksums = document["manifest"]["checksums"]
    assert set(checksums) == {p.name for p in tmp_path.glob("*.csv")}
    for name, digest in checksums.items():
        assert sha256_of(tmp_path / name) == digest
    assert document["metrics"] == {"degree_of_control": 0.25, "break_time": None}


def test_json_floats_keep_twelve_significant_digits(result, tmp_path):
    result.metrics.update({"energy_B": 100.321205943785, "tiny": 1.2345678901234567e-9, "stochasticity": 1.0 / 3.0})
    write_results(result, tmp_path)
    text = (tmp_path / RESULTS_FILE).read_text()
    metrics = json.loads(text)["metrics"]
    assert metrics["energy_B"] == 100.321205944
    assert metrics["tiny"] == 1.23456789012e-09
    assert metrics["stochasticity"] == 0.333333333333
    assert "0.3333333333333" not in text


def test_rewrite_is_byte_identical(result, tmp_path):
    write_results(result, tmp_path / "a")
    write_results(result, tmp_path / "b")
    for path in (tmp_path / "a").glob("*.csv"):
        assert path.read_bytes() == (tmp_path / "b" / path.name).read_bytes()


def test_failure_leaves_no_partial_output(result, tmp_path, monkeypatch):
    real_replace = os.replace

    def failing_replace(src, dst):
        if str(dst).endswith(RESULTS_FILE):
            raise OSError("disk full")
        real_replace(src, dst)

    monkeypatch.setattr(os, "replace", failing_replace)
    with pytest.raises(OSError):
        write_results(result, tmp_path)
    assert list(tmp_path.iterdir()) == []
