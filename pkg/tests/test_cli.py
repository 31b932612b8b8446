"""Command-line behavior: exit codes, output files, determinism across thread counts."""

import json

import pytest

from main import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, build_parser, main


@pytest.fixture
def config_data(small_config):
    return small_config.model_dump(mode="json")


def test_parser_lists_every_subcommand():
    parser = build_parser()
    for command in ("simulate", "scan-delay", "scan-period", "transition", "resonance-map", "classical"):
        args = parser.parse_args([command, "--config", "x.cfg"])
        assert args.command == command
        assert args.threads == 1


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert "kickrotor" in capsys.readouterr().out


def test_simulate_writes_results(config_data, write_config, tmp_path):
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(write_config(config_data)), "--out", str(out), "-q"]) == EXIT_OK
    assert (out / "trace_delay_1.csv").exists()
    assert (out / "populations_delay_2.csv").exists()
    document = json.loads((out / "results.json").read_text())
    assert document["manifest"]["command"] == "simulate"
    assert "degree_of_control" in document["metrics"]


def test_seed_flag_is_recorded(config_data, write_config, tmp_path):
    out = tmp_path / "out"
    assert main(["classical", "--config", str(write_config(config_data)), "--out", str(out), "--seed", "42", "-q"]) == EXIT_OK
    document = json.loads((out / "results.json").read_text())
    assert document["manifest"]["seed"] == 42


def test_invalid_config_exit_code(write_config, tmp_path):
    path = write_config({"train": {"period_loc": -1.0}})
    assert main(["simulate", "--config", str(path), "--out", str(tmp_path / "out"), "-q"]) == EXIT_CONFIG
    assert not (tmp_path / "out").exists()


def test_missing_config_file(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "none.cfg"), "--out", str(tmp_path), "-q"]) == EXIT_CONFIG


def test_bad_thread_count(config_data, write_config, tmp_path):
    path = write_config(config_data)
    assert main(["simulate", "--config", str(path), "--out", str(tmp_path), "--threads", "0", "-q"]) == EXIT_CONFIG


def test_truncation_leak_exit_code(write_config, tmp_path):
    path = write_config({
        "molecule": "O2",
        "temperature_K": 0.0,
        "basis": {"j_max": 7},
        "train": {"n_pre": 2, "n_loc": 2, "strength": 10.0},
    })
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(path), "--out", str(out), "-q"]) == EXIT_NUMERICAL
    assert not (out / "results.json").exists()


def test_csv_identical_across_thread_counts(config_data, write_config, tmp_path):
    config_data["scan"]["delay_grid"] = [0.2, 0.243, 0.264, 0.3]
    path = write_config(config_data)
    for threads in ("1", "3"):
        args = ["scan-delay", "--config", str(path), "--out", str(tmp_path / threads), "--threads", threads, "-q"]
        assert main(args) == EXIT_OK

    names = sorted(p.name for p in (tmp_path / "1").glob("*.csv"))
    assert names == sorted(p.name for p in (tmp_path / "3").glob("*.csv"))
    assert names
    for name in names:
        assert (tmp_path / "1" / name).read_bytes() == (tmp_path / "3" / name).read_bytes()
