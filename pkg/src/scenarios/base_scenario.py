"""Base scenario interface for all kickrotor experiment drivers."""

import logging
from abc import ABC, abstractmethod
from typing import Callable, Dict, Optional, Union

import numpy as np

from .. import __version__
from ..errors import ConfigError, DomainError, KickRotorError
from ..models.classical import ClassicalSampling
from ..models.config import ExperimentConfig
from ..models.experiment import ExperimentResult, RunManifest
from ..models.molecules import ThermalEnsemble
from ..models.observables import EnergyTrace, PopulationDistribution, RamanSpectrum
from ..models.rotor import Parity, PulseTrain, WavePacket
from ..services.classical import sampling_from_ensemble
from ..services.ensembles import (
    EnsembleTrajectory,
    boltzmann_ensemble,
    fwhm_in_revivals,
    propagate_ensemble,
    propagate_pure,
)
from ..services.molecule_catalog import MoleculeCatalog
from ..services.observables import (
    INITIAL_SLOPE_KICKS,
    break_time_estimate,
    clip_noise_floor,
    degree_of_control,
    energy_from_array,
    energy_trace,
    raman_forward,
)
from ..services.rotor_core import RecordPolicy, build_basis
from ..utils.units import revival_period_ps

logger = logging.getLogger(__name__)

InitialCondition = Union[ThermalEnsemble, WavePacket]


class BaseScenario(ABC):
    """Abstract base class for the experiment drivers.

    A scenario owns one validated configuration, builds the initial condition
    once, and runs pure propagations whose results are combined in a fixed
    order so the output never depends on the thread count.
    """

    command: str = ""

    def __init__(
        self,
        config: ExperimentConfig,
        threads: int = 1,
        on_progress: Optional[Callable[[str], None]] = None,
    ):
        """
        Initialize the scenario.

        Args:
            config: Validated run configuration
            threads: Worker count for scan-level parallelism
            on_progress: Optional callback for progress updates
        """
        self.config = config
        self.threads = max(1, int(threads))
        self.on_progress = on_progress
        self.molecule = MoleculeCatalog.get(config.molecule, config.molecule_overrides)
        self.manifest: Optional[RunManifest] = None
        self._initial: Optional[InitialCondition] = None

    def report_progress(self, message: str) -> None:
        """Report progress to the caller if callback is set."""
        logger.debug("[Scenario] %s", message)
        if self.on_progress:
            self.on_progress(message)

    @abstractmethod
    def execute(self) -> ExperimentResult:
        """Run the scenario body; self.manifest is already set."""

    def run(self) -> ExperimentResult:
        """Execute with a fresh manifest; errors are recorded before they propagate."""
        self.manifest = self.new_manifest()
        try:
            self.manifest.record_stage_start("initial")
            initial = self.initial
            members = len(initial.members) if isinstance(initial, ThermalEnsemble) else 1
            self.manifest.record_stage_complete("initial", output_count=members)
            self.report_progress(f"Initial condition ready ({members} members)")

            result = self.execute()
        except KickRotorError as exc:
            self.manifest.add_error(f"{type(exc).__name__}: {exc}")
            raise
        self.manifest.finish()
        return result

    def new_manifest(self) -> RunManifest:
        return RunManifest(
            command=self.command,
            tool_version=__version__,
            seed=self.config.seed,
            threads=self.threads,
            config=self.config.model_dump(mode="json"),
            molecule=self.molecule.model_dump(mode="json"),
            revival_period_ps=revival_period_ps(self.molecule.B),
        )

    def new_result(self) -> ExperimentResult:
        return ExperimentResult(manifest=self.manifest)

    # Model settings

    @property
    def fwhm(self) -> Optional[float]:
        """Pulse FWHM in T_rev, None in the delta-kick model."""
        model = self.config.model
        if model.delta_kick:
            return None
        if model.fwhm is not None:
            return model.fwhm
        return fwhm_in_revivals(model.fwhm_fs, self.molecule)

    @property
    def dt(self) -> Optional[float]:
        return self.config.model.dt

    # Initial condition

    @property
    def initial(self) -> InitialCondition:
        if self._initial is None:
            self._initial = self._build_initial()
        return self._initial

    def _build_initial(self) -> InitialCondition:
        spec = self.config.initial
        j_max = self.config.basis.j_max
        if spec.kind == "thermal":
            return boltzmann_ensemble(self.molecule, self.config.temperature_K, self.config.basis.weight_cutoff)

        levels = [spec.j] if spec.kind == "pure" else sorted(spec.amplitudes)
        if max(levels) > j_max:
            raise ConfigError(f"initial level J={max(levels)} exceeds j_max={j_max}", "initial")
        parities = {Parity.of(j) for j in levels}
        parity = parities.pop() if len(parities) == 1 else Parity.BOTH
        basis = build_basis(j_max, parity, spec.m)

        if spec.kind == "pure":
            return WavePacket.eigenstate(basis, spec.j)
        amplitudes = np.zeros(basis.size, dtype=np.complex128)
        for j, (re, im) in spec.amplitudes.items():
            amplitudes[basis.index_of(j)] = complex(re, im)
        try:
            return WavePacket.from_amplitudes(basis, amplitudes, normalize=True)
        except ValueError as exc:
            raise ConfigError(str(exc), "initial.amplitudes") from exc

    def classical_sampling(self) -> ClassicalSampling:
        """Classical analog of the configured initial condition."""
        initial = self.initial
        if isinstance(initial, ThermalEnsemble):
            return sampling_from_ensemble(initial)
        weights: Dict[int, float] = {}
        for j, p in zip(initial.basis.j_values, initial.populations()):
            if p > 0.0:
                weights[int(j)] = float(p)
        return ClassicalSampling(j_weights=weights)

    # Propagation and bookkeeping

    def propagate(
        self,
        train: PulseTrain,
        record: RecordPolicy = RecordPolicy.EVERY_KICK,
        threads: int = 1,
    ) -> EnsembleTrajectory:
        """Propagate the initial condition through a train."""
        basis_cfg = self.config.basis
        initial = self.initial
        if isinstance(initial, ThermalEnsemble):
            return propagate_ensemble(
                initial, train, basis_cfg.j_max, record, basis_cfg.leak_threshold, self.dt, threads
            )
        return propagate_pure(initial, train, record, basis_cfg.leak_threshold, self.dt)

    def trace_of(self, trajectory: EnsembleTrajectory) -> EnergyTrace:
        energies = [energy_from_array(row) for row in trajectory.populations]
        return energy_trace(trajectory.pulse_indices, trajectory.times, energies)

    def metric_value(self, trace: EnergyTrace) -> float:
        """Final total or absorbed energy, per control_metric."""
        if self.config.control_metric == "absorbed":
            return trace.final_absorbed
        return trace.final_energy

    @staticmethod
    def final_populations(trajectory: EnsembleTrajectory) -> PopulationDistribution:
        support = np.asarray(trajectory.j_support, dtype=np.int64)
        return PopulationDistribution.from_arrays(support, trajectory.populations[-1][support])

    def spectrum_of(self, pop: PopulationDistribution) -> RamanSpectrum:
        spectrum = raman_forward(pop)
        analysis = self.config.analysis
        if analysis.clip_noise_floor:
            spectrum = clip_noise_floor(spectrum, pop, analysis.noise_floor)
        return spectrum

    def record_run(self, result: ExperimentResult, label: str, trajectory: EnsembleTrajectory) -> EnergyTrace:
        """Store the trace, final populations and Raman lines of one run under label."""
        trace = self.trace_of(trajectory)
        pop = self.final_populations(trajectory)
        support = np.asarray(trajectory.j_support, dtype=np.int64)

        result.traces[label] = trace
        result.populations[label] = pop
        result.spectra[label] = self.spectrum_of(pop)
        result.m_populations[label] = {
            m: PopulationDistribution.from_arrays(support, values[support])
            for m, values in sorted(trajectory.m_populations.items())
        }
        result.m_weights[label] = dict(sorted(trajectory.m_weights.items()))
        return trace

    def inner_threads(self, n_points: int) -> int:
        """Ensemble-level workers when a scan has fewer points than threads."""
        return self.threads if n_points <= 1 else 1

    def break_time_of(self, trace: EnergyTrace) -> Optional[int]:
        """Break time of a per-kick trace; None for short or still-growing traces."""
        if len(trace) < INITIAL_SLOPE_KICKS + 1:
            return None
        return break_time_estimate(trace, self.config.analysis.break_slope_tolerance)

    @staticmethod
    def control_or_none(e1: float, e2: float) -> Optional[float]:
        """Degree of control, or None when E1 + E2 <= 0."""
        try:
            return degree_of_control(e1, e2)
        except DomainError as exc:
            logger.warning("[Scenario] %s", exc)
            return None
