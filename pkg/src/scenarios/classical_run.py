"""Classical diffusion of the cos^2 kicked rotor on its own."""

import logging

from ..models.experiment import ExperimentResult
from ..services.classical import classical_energy_trace
from ..services.observables import diffusion_fit
from ..utils.units import stochasticity, tau_from_period
from .base_scenario import BaseScenario

logger = logging.getLogger(__name__)

# First kick of the late-time window used for the diffusion fit
LATE_TIME_START = 10


class ClassicalDiffusion(BaseScenario):
    """Classical energy growth; tau and P default to the localizing train."""

    command = "classical"

    def execute(self) -> ExperimentResult:
        cfg = self.config.classical
        tau = cfg.tau if cfg.tau is not None else tau_from_period(self.config.train.period_loc)
        strength = cfg.strength if cfg.strength is not None else self.config.train.p_loc

        self.manifest.record_stage_start("classical")
        self.report_progress(f"{cfg.trajectories} trajectories, tau={tau:.4f}, P={strength:.4f}")
        trace = classical_energy_trace(
            cfg.trajectories, self.classical_sampling(), strength, tau, cfg.n_kicks, self.config.seed, self.threads
        )
        self.manifest.record_stage_complete("classical", cfg.trajectories, len(trace))

        result = self.new_result()
        result.traces["classical"] = trace
        slope, r_squared = diffusion_fit(trace, min(LATE_TIME_START, cfg.n_kicks // 2))
        result.metrics.update({
            "tau": tau,
            "strength": strength,
            "stochasticity": stochasticity(tau, strength),
            "final_energy_B": trace.final_energy,
            "diffusion_rate_B_per_kick": slope,
            "r_squared": r_squared,
        })
        logger.info("[Scenario] classical K=%.3f: %.3f B per kick (R^2=%.3f)", tau * strength, slope, r_squared)
        return result
