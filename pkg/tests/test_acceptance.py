"""
Full-size reproduction checks of the control and localization experiments, in wide bands.

These run full thermal ensembles at experimental sizes and take minutes;
they only run with --runslow.
"""

import numpy as np
import pandas as pd
import pytest

from src.models.config import ExperimentConfig
from src.scenarios import (
    quantum_classical_transition,
    run_control_experiment,
    scan_delay,
    scan_period_sensitivity,
)
from src.services.classical import classical_energy_trace, sampling_from_ensemble
from src.services.ensembles import boltzmann_ensemble, fwhm_in_revivals, propagate_ensemble
from src.services.observables import degree_of_control, energy_from_array
from src.services.pulse_trains import uniform_train
from src.utils.units import period_from_tau

pytestmark = pytest.mark.slow

REVIVAL_MARKS = (0.0, 0.25, 0.5, 0.75, 1.0)
REVIVAL_WINDOW = 0.02 + 1e-9


def experiment_config(**sections) -> ExperimentConfig:
    return ExperimentConfig.model_validate({"molecule": "O2", "temperature_K": 25.0, "basis": {"j_max": 50},
                                            **sections})


def test_control_reproduction(golden):
    result = run_control_experiment(experiment_config())
    e1 = result.metrics["delay_1_energy_B"]
    e2 = result.metrics["delay_2_energy_B"]
    assert e1 > e2
    assert 0.2 <= result.metrics["degree_of_control"] <= 0.6
    golden("control_traces", pd.DataFrame({
        "pulse_index": [p.pulse_index for p in result.traces["delay_1"].points],
        "energy_1_B": result.traces["delay_1"].energies,
        "energy_2_B": result.traces["delay_2"].energies,
    }), rtol=1e-8)


def test_delay_scan_is_periodic_in_revivals():
    config = experiment_config()
    base = scan_delay(config, grid=[0.1, 0.243, 0.264, 0.6])
    shifted = scan_delay(config, grid=[1.1, 1.243, 1.264, 1.6])
    for a, b in zip(base.scans["delay"], shifted.scans["delay"]):
        assert a["energy_B"] == pytest.approx(b["energy_B"], rel=0.0, abs=1e-9)


def test_delay_scan_structure_at_fractional_revivals():
    result = scan_delay(experiment_config(scan={"delay_grid": {"start": 0.005, "stop": 1.0, "step": 0.005}}))
    delays = np.array([row["delay"] for row in result.scans["delay"]])
    energies = np.array([row["energy_B"] for row in result.scans["delay"]])

    def distance_to_revival(delay: float) -> float:
        return min(abs(delay - fraction) for fraction in REVIVAL_MARKS)

    assert distance_to_revival(delays[np.argmax(energies)]) <= REVIVAL_WINDOW
    assert distance_to_revival(delays[np.argmin(energies)]) <= REVIVAL_WINDOW

    near = np.zeros(delays.shape, dtype=bool)
    for fraction in REVIVAL_MARKS:
        near |= np.abs(delays - fraction) <= REVIVAL_WINDOW
    swing_near = np.mean([np.ptp(energies[np.abs(delays - f) <= REVIVAL_WINDOW]) for f in (0.25, 0.5, 0.75)])
    far_swings = []
    for low, high in zip(REVIVAL_MARKS[:-1], REVIVAL_MARKS[1:]):
        window = ~near & (delays > low) & (delays < high)
        far_swings.append(np.ptp(energies[window]))
    assert swing_near > max(far_swings)


def test_localization_against_classical_diffusion(o2):
    ensemble = boltzmann_ensemble(o2, 25.0)
    tau, strength = 1.66, 3.8
    train = uniform_train(40, period_from_tau(tau), strength)

    trajectory = propagate_ensemble(ensemble, train, j_max=100, threads=4)
    quantum = np.array([energy_from_array(row) for row in trajectory.populations])
    quantum_absorbed = quantum - quantum[0]
    assert quantum_absorbed[40] / quantum_absorbed[25] - 1.0 < 0.15

    classical = classical_energy_trace(100_000, sampling_from_ensemble(ensemble), strength, tau, 40, seed=0,
                                       threads=4).absorbed
    assert classical[40] / classical[25] - 1.0 > 0.5


def test_transition_between_quantum_and_classical():
    config = experiment_config(
        basis={"j_max": 180},
        train={"n_pre": 3, "period_pre": 0.237, "delay": [0.232, 0.263]},
        scan={"stochasticity": 3.4, "cases": [{"tau": 1.7}, {"tau": 0.6}], "n_kicks": 40},
        classical={"trajectories": 20_000},
    )
    result = quantum_classical_transition(config, threads=4)

    def control_at(case: int, kick: int) -> float:
        e1 = result.traces[f"case_{case}_delay_1"].energies[kick]
        e2 = result.traces[f"case_{case}_delay_2"].energies[kick]
        return degree_of_control(e1, e2)

    assert 0.1 <= control_at(1, 15) <= 0.5

    slow = np.array(result.traces["case_1_delay_1"].energies)
    fast = np.array(result.traces["case_2_delay_1"].energies)

    # tau = 1.7 is localized after about 10 kicks and stays there
    for label in ("case_1_delay_1", "case_1_delay_2"):
        settled = np.array(result.traces[label].energies[10:])
        assert np.all(np.abs(settled - settled.mean()) <= 0.15 * settled.mean())
    assert slow[40] < 1.15 * slow[15]

    # tau = 0.6 keeps absorbing through the first 15 kicks, far beyond tau = 1.7
    assert fast[0] < fast[5] < fast[10] < fast[15]
    assert fast[15] - fast[0] > 5.0 * (slow[15] - slow[0])

    classical = result.traces["case_2_classical"].absorbed
    assert classical[40] > 2.0 * classical[15]
    assert fast[40] - fast[0] < classical[40]


def test_period_sensitivity_with_recovery():
    config = experiment_config(basis={"j_max": 80},
                               scan={"period_list": [0.260, 0.261, 0.263, 0.267, 0.270], "optimize": True})
    rows = scan_period_sensitivity(config, threads=4).scans["period_sensitivity"]
    fixed = [abs(row["control_fixed"]) for row in rows]
    assert max(fixed) > 1.5 * min(fixed)
    for row in rows:
        assert row["control_optimized"] >= row["control_fixed"]
        assert row["control_optimized"] > 0.1


def test_finite_pulses_suppress_high_levels(o2):
    ensemble = boltzmann_ensemble(o2, 25.0)
    fwhm = fwhm_in_revivals(130.0, o2)

    def high_population(width):
        trajectory = propagate_ensemble(ensemble, uniform_train(15, 0.267, 3.8, fwhm=width), j_max=80, threads=4)
        return float(trajectory.populations[-1][21:].sum())

    assert high_population(None) > 5.0 * high_population(fwhm)
