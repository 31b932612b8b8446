"""Quantum-to-classical transition at a fixed stochasticity parameter K = tau P."""

import logging
from typing import Callable, List, Optional, Sequence, Tuple

from ..errors import ConfigError
from ..models.config import ExperimentConfig, TransitionCase
from ..models.experiment import ExperimentResult
from ..services.classical import classical_energy_trace
from ..utils.units import period_from_tau, stochasticity
from .base_scenario import BaseScenario
from .control import evaluate_delays

logger = logging.getLogger(__name__)

K_TOLERANCE = 1e-9

ResolvedCase = Tuple[float, float, List[float]]


class QuantumClassicalTransition(BaseScenario):
    """
    Control experiment repeated for several (tau, P) pairs sharing one K.

    Each case uses a localizing period tau / 2 pi and n_kicks pulses in total.
    The preparation pulses share the case P unless train.strength_pre is set.
    A classical ensemble with the same tau and P is run alongside each case.
    """

    command = "transition"

    def __init__(
        self,
        config: ExperimentConfig,
        cases: Optional[Sequence[TransitionCase]] = None,
        n_kicks: Optional[int] = None,
        threads: int = 1,
        on_progress: Optional[Callable[[str], None]] = None,
    ):
        super().__init__(config, threads, on_progress)
        self.cases = list(cases) if cases is not None else list(config.scan.cases)
        self.n_kicks = n_kicks if n_kicks is not None else config.scan.n_kicks

    def resolve_cases(self) -> List[ResolvedCase]:
        """(tau, P, delays) per case, checking that all share one K."""
        if not self.cases:
            raise ConfigError("at least one (tau, P) case is required", "scan.cases")
        k_default = self.config.scan.stochasticity
        resolved: List[ResolvedCase] = []
        for i, case in enumerate(self.cases):
            if case.strength is not None:
                strength = case.strength
            elif k_default is not None:
                strength = k_default / case.tau
            else:
                raise ConfigError("strength missing and no scan.stochasticity to derive it", f"scan.cases.{i}")
            resolved.append((case.tau, strength, list(case.delay or self.config.train.delay)))

        ks = [stochasticity(tau, p) for tau, p, _ in resolved]
        if k_default is not None:
            ks.append(k_default)
        if max(ks) - min(ks) > K_TOLERANCE:
            raise ConfigError(f"cases must share one K = tau P, got {sorted(set(ks))}", "scan.cases")
        return resolved

    def execute(self) -> ExperimentResult:
        resolved = self.resolve_cases()
        train_cfg = self.config.train
        n_loc = self.n_kicks - train_cfg.n_pre
        if n_loc < 1:
            raise ConfigError(f"n_kicks={self.n_kicks} leaves no localizing pulses after {train_cfg.n_pre} "
                              "preparation pulses", "scan.n_kicks")

        result = self.new_result()
        sampling = self.classical_sampling()
        classical_cfg = self.config.classical

        for i, (tau, strength, delays) in enumerate(resolved, start=1):
            prefix = f"case_{i}"
            self.report_progress(f"Case {i}: tau={tau:.4f}, P={strength:.4f}")

            self.manifest.record_stage_start(f"{prefix}_quantum")
            train = train_cfg.model_copy(update={
                "period_loc": period_from_tau(tau),
                "n_loc": n_loc,
                "strength": strength,
                "strength_loc": None,
            })
            trajectories = evaluate_delays(self, train, delays[:2])
            values = []
            for k, trajectory in enumerate(trajectories, start=1):
                trace = self.record_run(result, f"{prefix}_delay_{k}", trajectory)
                result.metrics[f"{prefix}_delay_{k}_energy_B"] = trace.final_energy
                result.metrics[f"{prefix}_delay_{k}_break_time"] = self.break_time_of(trace)
                values.append(self.metric_value(trace))
            if len(values) == 2:
                result.metrics[f"{prefix}_degree_of_control"] = self.control_or_none(*values)
            self.manifest.record_stage_complete(f"{prefix}_quantum", len(delays[:2]), len(trajectories))

            self.manifest.record_stage_start(f"{prefix}_classical")
            classical = classical_energy_trace(
                classical_cfg.trajectories, sampling, strength, tau, self.n_kicks, self.config.seed, self.threads
            )
            result.traces[f"{prefix}_classical"] = classical
            result.metrics[f"{prefix}_classical_energy_B"] = classical.final_energy
            self.manifest.record_stage_complete(f"{prefix}_classical", classical_cfg.trajectories, len(classical))

            result.metrics[f"{prefix}_tau"] = tau
            result.metrics[f"{prefix}_strength"] = strength

        result.metrics["stochasticity"] = stochasticity(resolved[0][0], resolved[0][1])
        return result
