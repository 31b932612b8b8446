"""Two-train control experiment and the delay scan built on it."""

import logging
from typing import Callable, List, Optional, Sequence

from ..errors import ConfigError
from ..models.config import ExperimentConfig, TrainConfig, expand_grid
from ..models.experiment import ExperimentResult
from ..services.ensembles import EnsembleTrajectory
from ..services.observables import participation_ratio
from ..services.pulse_trains import train_from_config
from ..services.rotor_core import RecordPolicy
from ..utils.parallel import ordered_map
from .base_scenario import BaseScenario

logger = logging.getLogger(__name__)


def evaluate_delays(
    scenario: BaseScenario,
    train: TrainConfig,
    delays: Sequence[float],
    record: RecordPolicy = RecordPolicy.EVERY_KICK,
) -> List[EnsembleTrajectory]:
    """Propagate one control train per delay, in parallel, results in delay order."""
    inner = scenario.inner_threads(len(delays))

    def run_delay(delay: float) -> EnsembleTrajectory:
        trajectory = scenario.propagate(train_from_config(train, delay, scenario.fwhm), record, inner)
        scenario.report_progress(f"delay {delay:.4f} T_rev done")
        return trajectory

    return ordered_map(run_delay, list(delays), scenario.threads)


class ControlExperiment(BaseScenario):
    """Energy traces for each configured delay and the degree of control between the first two."""

    command = "simulate"

    def execute(self) -> ExperimentResult:
        result = self.new_result()
        delays = list(self.config.train.delay)

        self.manifest.record_stage_start("propagation")
        self.report_progress(f"Propagating {len(delays)} delay settings")
        trajectories = evaluate_delays(self, self.config.train, delays)
        self.manifest.record_stage_complete("propagation", len(delays), len(trajectories))

        self.manifest.record_stage_start("analysis")
        values = []
        for k, (delay, trajectory) in enumerate(zip(delays, trajectories), start=1):
            label = f"delay_{k}"
            trace = self.record_run(result, label, trajectory)
            result.metrics[f"{label}_delay"] = delay
            result.metrics[f"{label}_energy_B"] = trace.final_energy
            result.metrics[f"{label}_absorbed_B"] = trace.final_absorbed
            result.metrics[f"{label}_participation_ratio"] = participation_ratio(result.populations[label])
            result.metrics[f"{label}_break_time"] = self.break_time_of(trace)
            values.append(self.metric_value(trace))

        if len(values) >= 2:
            result.metrics["degree_of_control"] = self.control_or_none(values[0], values[1])
            logger.info("[Scenario] degree of control %s", result.metrics["degree_of_control"])
        self.manifest.record_stage_complete("analysis", len(trajectories), len(result.metrics))
        return result


class DelayScan(BaseScenario):
    """Final energy as a function of the delay between the two trains."""

    command = "scan-delay"

    def __init__(
        self,
        config: ExperimentConfig,
        grid: Optional[Sequence[float]] = None,
        threads: int = 1,
        on_progress: Optional[Callable[[str], None]] = None,
    ):
        super().__init__(config, threads, on_progress)
        self.grid = list(grid) if grid is not None else expand_grid(config.scan.delay_grid)

    def execute(self) -> ExperimentResult:
        if not self.grid:
            raise ConfigError("a delay grid is required", "scan.delay_grid")
        result = self.new_result()

        self.manifest.record_stage_start("scan")
        self.report_progress(f"Scanning {len(self.grid)} delays")
        trajectories = evaluate_delays(self, self.config.train, self.grid, RecordPolicy.FINAL)
        self.manifest.record_stage_complete("scan", len(self.grid), len(trajectories))

        rows = []
        for delay, trajectory in zip(self.grid, trajectories):
            trace = self.trace_of(trajectory)
            rows.append({
                "delay": delay,
                "energy_B": trace.final_energy,
                "absorbed_B": trace.final_absorbed,
                "participation_ratio": participation_ratio(self.final_populations(trajectory)),
            })
        result.scans["delay"] = rows

        values = [self.metric_value(self.trace_of(t)) for t in trajectories]
        best = max(range(len(values)), key=lambda i: values[i])
        worst = min(range(len(values)), key=lambda i: values[i])
        result.metrics["delay_at_max"] = self.grid[best]
        result.metrics["value_max_B"] = values[best]
        result.metrics["delay_at_min"] = self.grid[worst]
        result.metrics["value_min_B"] = values[worst]
        result.metrics["degree_of_control_max_min"] = self.control_or_none(values[best], values[worst])
        return result
