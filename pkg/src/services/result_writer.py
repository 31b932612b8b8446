"""
Result serialization: CSV tables through pandas and a single results.json.

Files are written into a staging directory inside the output directory and
moved into place only once every file exists. The manifest goes last.
"""

import hashlib
import json
import logging
import math
import os
import shutil
import tempfile
from pathlib import Path
from typing import Dict, List, Union

import pandas as pd

from ..errors import KickRotorError
from ..models.experiment import ExperimentResult
from ..models.observables import EnergyTrace, PopulationDistribution, RamanSpectrum
from .observables import raman_forward

logger = logging.getLogger(__name__)

JSON_DIGITS = 12
FLOAT_FORMAT = f"%.{JSON_DIGITS}g"
TRACE_COLUMNS = ["pulse_index", "t_over_trev", "energy_B", "absorbed_B"]
POPULATION_COLUMNS = ["J", "P_J", "I_J_normalized"]
M_POPULATION_COLUMNS = ["m", "weight", "J", "P_J"]
RESULTS_FILE = "results.json"


def trace_frame(trace: EnergyTrace) -> pd.DataFrame:
    """Trace as a table; a stderr_B column is added for sampled traces."""
    rows = [
        {
            "pulse_index": p.pulse_index,
            "t_over_trev": p.time,
            "energy_B": p.energy,
            "absorbed_B": p.absorbed,
            **({"stderr_B": p.stderr} if p.stderr is not None else {}),
        }
        for p in trace.points
    ]
    columns = TRACE_COLUMNS + (["stderr_B"] if any(p.stderr is not None for p in trace.points) else [])
    return pd.DataFrame(rows, columns=columns)


def population_frame(pop: PopulationDistribution, spectrum: RamanSpectrum = None) -> pd.DataFrame:
    spectrum = spectrum or raman_forward(pop)
    return pd.DataFrame(
        {
            "J": pop.j_values,
            "P_J": pop.values,
            "I_J_normalized": [spectrum.intensities.get(int(j), 0.0) for j in pop.j_values],
        },
        columns=POPULATION_COLUMNS,
    )


def m_population_frame(by_m: Dict[int, PopulationDistribution], weights: Dict[int, float]) -> pd.DataFrame:
    rows = [
        {"m": m, "weight": weights.get(m, 0.0), "J": int(j), "P_J": p}
        for m, pop in sorted(by_m.items())
        for j, p in pop.entries.items()
    ]
    return pd.DataFrame(rows, columns=M_POPULATION_COLUMNS)


def _write_csv(frame: pd.DataFrame, path: Path):
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def sha256_of(path: Union[str, Path]) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def _tables(result: ExperimentResult) -> Dict[str, pd.DataFrame]:
    tables: Dict[str, pd.DataFrame] = {}
    for label, trace in result.traces.items():
        tables[f"trace_{label}.csv"] = trace_frame(trace)
    for label, pop in result.populations.items():
        tables[f"populations_{label}.csv"] = population_frame(pop, result.spectra.get(label))
    for label, by_m in result.m_populations.items():
        tables[f"populations_{label}_m.csv"] = m_population_frame(by_m, result.m_weights.get(label, {}))
    for name, rows in result.scans.items():
        columns = list(rows[0].keys()) if rows else []
        tables[f"scan_{name}.csv"] = pd.DataFrame(rows, columns=columns)
    return tables


def _significant(value):
    """Round every finite float in a JSON-ready structure to JSON_DIGITS significant digits."""
    if isinstance(value, float):
        return float(f"{value:.{JSON_DIGITS}g}") if math.isfinite(value) else value
    if isinstance(value, dict):
        return {key: _significant(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_significant(item) for item in value]
    return value


def results_document(result: ExperimentResult) -> Dict:
    """Metrics and manifest as one JSON-ready mapping, floats at JSON_DIGITS significant digits."""
    return _significant({
        "metrics": result.metrics,
        "manifest": result.manifest.model_dump(mode="json"),
    })


def write_results(result: ExperimentResult, out_dir: Union[str, Path]) -> List[Path]:
    """
    Write every table of a result plus results.json.

    Args:
        result: Scenario output; its manifest checksums are filled in here
        out_dir: Target directory, created if missing

    Returns:
        Paths of the written files, results.json last

    Raises:
        OSError: on I/O failure, after removing everything written so far
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=".staging-", dir=out_dir))
    moved: List[Path] = []

    try:
        checksums: Dict[str, str] = {}
        for name, frame in _tables(result).items():
            _write_csv(frame, staging / name)
            checksums[name] = sha256_of(staging / name)
        result.manifest.checksums = dict(sorted(checksums.items()))

        document = json.dumps(results_document(result), indent=2, sort_keys=True, default=str)
        (staging / RESULTS_FILE).write_text(document + "\n", encoding="utf-8")

        for name in sorted(checksums):
            target = out_dir / name
            os.replace(staging / name, target)
            moved.append(target)
        target = out_dir / RESULTS_FILE
        os.replace(staging / RESULTS_FILE, target)
        moved.append(target)
    except (OSError, ValueError, KickRotorError):
        logger.error("[Writer] Failed writing results to %s; removing partial output", out_dir)
        for path in moved:
            path.unlink(missing_ok=True)
        raise
    finally:
        shutil.rmtree(staging, ignore_errors=True)

    logger.info("[Writer] Wrote %d files to %s", len(moved), out_dir)
    return moved


def read_populations(path: Union[str, Path]) -> PopulationDistribution:
    """Re-read a populations CSV written by write_results."""
    frame = pd.read_csv(path)
    return PopulationDistribution.from_arrays(frame["J"].to_numpy(), frame["P_J"].to_numpy())
