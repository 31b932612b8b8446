"""Scenario drivers, one per experiment and CLI subcommand."""

from typing import Callable, Dict, Optional, Sequence, Type

from ..models.config import ExperimentConfig, TransitionCase
from ..models.experiment import ExperimentResult
from .base_scenario import BaseScenario
from .classical_run import ClassicalDiffusion
from .control import ControlExperiment, DelayScan
from .resonance import ResonanceMap
from .sensitivity import PeriodSensitivity
from .transition import QuantumClassicalTransition

ProgressCallback = Optional[Callable[[str], None]]

SCENARIOS: Dict[str, Type[BaseScenario]] = {
    scenario.command: scenario
    for scenario in (
        ControlExperiment,
        DelayScan,
        PeriodSensitivity,
        QuantumClassicalTransition,
        ResonanceMap,
        ClassicalDiffusion,
    )
}


def run_control_experiment(config: ExperimentConfig, threads: int = 1,
                           on_progress: ProgressCallback = None) -> ExperimentResult:
    return ControlExperiment(config, threads, on_progress).run()


def scan_delay(config: ExperimentConfig, grid: Optional[Sequence[float]] = None, threads: int = 1,
               on_progress: ProgressCallback = None) -> ExperimentResult:
    return DelayScan(config, grid, threads, on_progress).run()


def scan_period_sensitivity(
    config: ExperimentConfig,
    periods: Optional[Sequence[float]] = None,
    delays: Optional[Sequence[float]] = None,
    optimize: Optional[bool] = None,
    grid: Optional[Sequence[float]] = None,
    threads: int = 1,
    on_progress: ProgressCallback = None,
) -> ExperimentResult:
    return PeriodSensitivity(config, periods, delays, optimize, grid, threads, on_progress).run()


def quantum_classical_transition(
    config: ExperimentConfig,
    cases: Optional[Sequence[TransitionCase]] = None,
    n_kicks: Optional[int] = None,
    threads: int = 1,
    on_progress: ProgressCallback = None,
) -> ExperimentResult:
    return QuantumClassicalTransition(config, cases, n_kicks, threads, on_progress).run()


def resonance_map(config: ExperimentConfig, periods: Optional[Sequence[float]] = None,
                  n_kicks: Optional[int] = None, threads: int = 1,
                  on_progress: ProgressCallback = None) -> ExperimentResult:
    return ResonanceMap(config, periods, n_kicks, threads, on_progress).run()


def run_classical_diffusion(config: ExperimentConfig, threads: int = 1,
                            on_progress: ProgressCallback = None) -> ExperimentResult:
    return ClassicalDiffusion(config, threads, on_progress).run()


__all__ = [
    "BaseScenario",
    "ControlExperiment",
    "DelayScan",
    "PeriodSensitivity",
    "QuantumClassicalTransition",
    "ResonanceMap",
    "ClassicalDiffusion",
    "SCENARIOS",
    "run_control_experiment",
    "scan_delay",
    "scan_period_sensitivity",
    "quantum_classical_transition",
    "resonance_map",
    "run_classical_diffusion",
]
