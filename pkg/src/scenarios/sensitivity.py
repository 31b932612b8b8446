"""Sensitivity of the control to the localizing-train period, with optional delay recovery."""

import logging
from typing import Callable, Dict, List, Optional, Sequence

from ..errors import ConfigError
from ..models.config import ExperimentConfig, expand_grid
from ..models.experiment import ExperimentResult
from .base_scenario import BaseScenario
from .control import evaluate_delays

logger = logging.getLogger(__name__)


class PeriodSensitivity(BaseScenario):
    """
    Degree of control at fixed delays for each localizing period.

    With optimization on, the delays giving the highest and the lowest final
    energy are found by exhaustive search over the delay grid together with the
    fixed delays, so the optimized control is never below the fixed one.
    """

    command = "scan-period"

    def __init__(
        self,
        config: ExperimentConfig,
        periods: Optional[Sequence[float]] = None,
        delays: Optional[Sequence[float]] = None,
        optimize: Optional[bool] = None,
        grid: Optional[Sequence[float]] = None,
        threads: int = 1,
        on_progress: Optional[Callable[[str], None]] = None,
    ):
        super().__init__(config, threads, on_progress)
        scan = config.scan
        self.periods = list(periods) if periods is not None else (
            list(scan.period_list or []) or expand_grid(scan.period_grid) or [config.train.period_loc]
        )
        self.delays = list(delays) if delays is not None else list(config.train.delay)
        self.optimize = scan.optimize if optimize is None else optimize
        self.grid = list(grid) if grid is not None else (expand_grid(scan.optimize_grid) if self.optimize else [])

    def execute(self) -> ExperimentResult:
        if len(self.delays) < 2:
            raise ConfigError("two fixed delays are required", "train.delay")
        if self.optimize and not self.grid:
            raise ConfigError("a delay grid is required when optimize is set", "scan.optimize_grid")
        if any(not p > 0.0 for p in self.periods):
            raise ConfigError("periods must be positive", "scan.period_list")

        d1, d2 = self.delays[:2]
        candidates = sorted({d1, d2, *self.grid}) if self.optimize else [d1, d2]
        result = self.new_result()
        rows: List[Dict[str, Optional[float]]] = []

        self.manifest.record_stage_start("scan")
        for i, period in enumerate(self.periods, start=1):
            self.report_progress(f"T_loc = {period:.4f} ({i}/{len(self.periods)}), {len(candidates)} delays")
            train = self.config.train.model_copy(update={"period_loc": period})
            trajectories = evaluate_delays(self, train, candidates)
            traces = {delay: self.trace_of(t) for delay, t in zip(candidates, trajectories)}
            values = {delay: self.metric_value(trace) for delay, trace in traces.items()}

            for k, delay in enumerate((d1, d2), start=1):
                label = f"period_{i}_delay_{k}"
                self.record_run(result, label, trajectories[candidates.index(delay)])

            row: Dict[str, Optional[float]] = {
                "period_loc": period,
                "energy_1_B": values[d1],
                "energy_2_B": values[d2],
                "control_fixed": self.control_or_none(values[d1], values[d2]),
            }
            if self.optimize:
                # Ties go to the earliest delay
                d_max = max(candidates, key=lambda d: (values[d], -d))
                d_min = min(candidates, key=lambda d: (values[d], d))
                row.update({
                    "delay_max": d_max,
                    "delay_min": d_min,
                    "energy_max_B": values[d_max],
                    "energy_min_B": values[d_min],
                    "control_optimized": self.control_or_none(values[d_max], values[d_min]),
                })
            rows.append(row)
        self.manifest.record_stage_complete("scan", len(self.periods) * len(candidates), len(rows))

        result.scans["period_sensitivity"] = rows
        fixed = [r["control_fixed"] for r in rows if r["control_fixed"] is not None]
        if fixed:
            result.metrics["control_fixed_max"] = max(fixed)
            result.metrics["control_fixed_min"] = min(fixed)
        if self.optimize:
            optimized = [r["control_optimized"] for r in rows if r["control_optimized"] is not None]
            if optimized:
                result.metrics["control_optimized_min"] = min(optimized)
        return result
