"""Final energy against the period of a single uniform train."""

import logging
from typing import Callable, Optional, Sequence

from ..errors import ConfigError
from ..models.config import ExperimentConfig, expand_grid
from ..models.experiment import ExperimentResult
from ..services.pulse_trains import uniform_train
from ..services.rotor_core import resonance_distance
from ..utils.parallel import ordered_map
from ..utils.units import tau_from_period
from .base_scenario import BaseScenario

logger = logging.getLogger(__name__)


class ResonanceMap(BaseScenario):
    """Peaks at low-order rational T/T_rev; each row names the nearest resonance."""

    command = "resonance-map"

    def __init__(
        self,
        config: ExperimentConfig,
        periods: Optional[Sequence[float]] = None,
        n_kicks: Optional[int] = None,
        threads: int = 1,
        on_progress: Optional[Callable[[str], None]] = None,
    ):
        super().__init__(config, threads, on_progress)
        scan = config.scan
        self.periods = list(periods) if periods is not None else (
            expand_grid(scan.period_grid) or list(scan.period_list or [])
        )
        self.n_kicks = n_kicks if n_kicks is not None else scan.n_kicks

    def execute(self) -> ExperimentResult:
        if not self.periods:
            raise ConfigError("a period grid is required", "scan.period_grid")
        if any(not p > 0.0 for p in self.periods):
            raise ConfigError("periods must be positive", "scan.period_grid")
        if any(p > 1.0 for p in self.periods):
            logger.warning("[Scenario] periods above 1 T_rev repeat the map of their fractional part")

        strength = self.config.train.p_loc
        inner = self.inner_threads(len(self.periods))

        def run_period(period: float):
            trajectory = self.propagate(uniform_train(self.n_kicks, period, strength, self.fwhm), threads=inner)
            self.report_progress(f"T = {period:.4f} T_rev done")
            return trajectory

        self.manifest.record_stage_start("scan")
        self.report_progress(f"Scanning {len(self.periods)} periods, {self.n_kicks} kicks at P={strength}")
        trajectories = ordered_map(run_period, self.periods, self.threads)
        self.manifest.record_stage_complete("scan", len(self.periods), len(trajectories))

        result = self.new_result()
        rows = []
        for period, trajectory in zip(self.periods, trajectories):
            trace = self.trace_of(trajectory)
            p, q, distance = resonance_distance(period, self.config.scan.q_max)
            rows.append({
                "period": period,
                "tau": tau_from_period(period),
                "energy_B": trace.final_energy,
                "absorbed_B": trace.final_absorbed,
                "break_time": self.break_time_of(trace),
                "p": p,
                "q": q,
                "distance": distance,
            })
        result.scans["resonance"] = rows

        peak = max(rows, key=lambda r: r["energy_B"])
        result.metrics["period_at_max"] = peak["period"]
        result.metrics["energy_max_B"] = peak["energy_B"]
        result.metrics["strength"] = strength
        return result
