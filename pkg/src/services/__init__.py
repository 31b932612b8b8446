"""Computational services: propagation, ensembles, observables, classical map, I/O."""

from .rotor_core import (
    RecordPolicy,
    build_basis,
    cos2_matrix,
    kick_operator,
    apply_kick,
    evolve_free,
    propagate_delta_train,
    propagate_finite_pulse,
    propagate_finite_train,
    resonance_distance,
)
from .ensembles import (
    EnsembleTrajectory,
    boltzmann_ensemble,
    ensemble_average,
    propagate_ensemble,
    propagate_pure,
    kick_strength_from_pulse,
)
from .observables import (
    populations,
    rotational_energy,
    absorbed_energy,
    raman_forward,
    retrieve_populations,
    degree_of_control,
    participation_ratio,
    break_time_estimate,
)
from .classical import (
    classical_kick,
    classical_free,
    classical_energy_trace,
    classical_train_trace,
    sample_classical_ensemble,
)
from .pulse_trains import uniform_train, build_control_train, train_from_config
from .molecule_catalog import MoleculeCatalog
from .config_loader import parse_config, validate_config
from .result_writer import write_results, read_populations

__all__ = [
    "RecordPolicy",
    "build_basis",
    "cos2_matrix",
    "kick_operator",
    "apply_kick",
    "evolve_free",
    "propagate_delta_train",
    "propagate_finite_pulse",
    "propagate_finite_train",
    "resonance_distance",
    "EnsembleTrajectory",
    "boltzmann_ensemble",
    "ensemble_average",
    "propagate_ensemble",
    "propagate_pure",
    "kick_strength_from_pulse",
    "populations",
    "rotational_energy",
    "absorbed_energy",
    "raman_forward",
    "retrieve_populations",
    "degree_of_control",
    "participation_ratio",
    "break_time_estimate",
    "classical_kick",
    "classical_free",
    "classical_energy_trace",
    "classical_train_trace",
    "sample_classical_ensemble",
    "uniform_train",
    "build_control_train",
    "train_from_config",
    "MoleculeCatalog",
    "parse_config",
    "validate_config",
    "write_results",
    "read_populations",
]
