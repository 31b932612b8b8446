"""Data models for rotors, ensembles, observables and experiment runs."""

from .rotor import (
    Parity,
    RotorBasis,
    WavePacket,
    PulseSpec,
    PulseTrain,
    KickOperator,
    TrajectorySnapshot,
)
from .molecules import MoleculeSpec, EnsembleMember, ThermalEnsemble
from .observables import PopulationDistribution, EnergyPoint, EnergyTrace, RamanSpectrum
from .classical import ClassicalState, ClassicalEnsemble, ClassicalSampling
from .config import ExperimentConfig, RangeSpec, expand_grid
from .experiment import StageData, RunManifest, ExperimentResult

__all__ = [
    "Parity",
    "RotorBasis",
    "WavePacket",
    "PulseSpec",
    "PulseTrain",
    "KickOperator",
    "TrajectorySnapshot",
    "MoleculeSpec",
    "EnsembleMember",
    "ThermalEnsemble",
    "PopulationDistribution",
    "EnergyPoint",
    "EnergyTrace",
    "RamanSpectrum",
    "ClassicalState",
    "ClassicalEnsemble",
    "ClassicalSampling",
    "ExperimentConfig",
    "RangeSpec",
    "expand_grid",
    "StageData",
    "RunManifest",
    "ExperimentResult",
]
