"""Experiment results and run-manifest tracking for reproducible reruns."""

from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from .observables import EnergyTrace, PopulationDistribution, RamanSpectrum


def _now() -> datetime:
    return datetime.now(timezone.utc)


class StageData(BaseModel):
    """Timing and size record for one stage of a run."""

    stage_name: str
    timestamp: datetime = Field(default_factory=_now)
    input_count: int = Field(0, description="Work items entering the stage")
    output_count: int = Field(0, description="Results leaving the stage")
    duration_seconds: Optional[float] = None
    details: Dict[str, Any] = Field(default_factory=dict)


class RunManifest(BaseModel):
    """Everything needed to rerun a scenario bit-identically."""

    command: str = Field(..., description="Scenario / CLI subcommand")
    tool_version: str
    seed: int
    threads: int = Field(1, ge=1)
    config: Dict[str, Any] = Field(default_factory=dict, description="Validated config echo")
    molecule: Dict[str, Any] = Field(default_factory=dict, description="Constants actually used")
    revival_period_ps: Optional[float] = None

    started_at: datetime = Field(default_factory=_now)
    finished_at: Optional[datetime] = None
    wall_time_seconds: Optional[float] = None

    stage_timestamps: Dict[str, datetime] = Field(default_factory=dict)
    stage_data: List[StageData] = Field(default_factory=list)
    errors: List[str] = Field(default_factory=list)
    checksums: Dict[str, str] = Field(default_factory=dict, description="file name -> sha256")

    def record_stage_start(self, stage_name: str):
        """Record when a stage starts."""
        self.stage_timestamps[f"{stage_name}_start"] = _now()

    def record_stage_complete(
        self,
        stage_name: str,
        input_count: int = 0,
        output_count: int = 0,
        details: Optional[Dict[str, Any]] = None,
    ):
        """Record when a stage completes with data."""
        end_time = _now()
        self.stage_timestamps[f"{stage_name}_complete"] = end_time

        start_time = self.stage_timestamps.get(f"{stage_name}_start")
        duration = (end_time - start_time).total_seconds() if start_time else None

        self.stage_data.append(StageData(
            stage_name=stage_name,
            timestamp=end_time,
            input_count=input_count,
            output_count=output_count,
            duration_seconds=duration,
            details=details or {},
        ))

    def add_error(self, error_message: str):
        """Record an error."""
        self.errors.append(f"[{_now().strftime('%H:%M:%S')}] {error_message}")

    def finish(self):
        self.finished_at = _now()
        self.wall_time_seconds = (self.finished_at - self.started_at).total_seconds()


class ExperimentResult(BaseModel):
    """Traces, populations, scan tables and metrics of one scenario run."""

    traces: Dict[str, EnergyTrace] = Field(default_factory=dict)
    populations: Dict[str, PopulationDistribution] = Field(default_factory=dict)
    m_populations: Dict[str, Dict[int, PopulationDistribution]] = Field(
        default_factory=dict, description="label -> m -> P(J | m)"
    )
    m_weights: Dict[str, Dict[int, float]] = Field(default_factory=dict, description="label -> m -> weight")
    spectra: Dict[str, RamanSpectrum] = Field(default_factory=dict, description="label -> Raman lines")
    scans: Dict[str, List[Dict[str, Optional[float]]]] = Field(default_factory=dict, description="table name -> rows")
    metrics: Dict[str, Optional[float]] = Field(default_factory=dict)
    manifest: RunManifest
