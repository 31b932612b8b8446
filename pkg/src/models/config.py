"""Run configuration schema.

Every time is in units of the revival period T_rev and every kick strength is
dimensionless, so each figure of the experiment is one configuration file.
"""

from decimal import Decimal
from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class StrictModel(BaseModel):
    """Base for config sections: unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid", frozen=True)


class RangeSpec(StrictModel):
    """Inclusive arithmetic grid start, start+step, ..., stop."""

    start: float
    stop: float
    step: float = Field(..., gt=0.0)

    @model_validator(mode="after")
    def _ordered(self) -> "RangeSpec":
        if self.stop < self.start:
            raise ValueError("stop must not be below start")
        return self

    def values(self) -> List[float]:
        # Decimal arithmetic keeps 0.2 + k*0.001 free of accumulated float error
        start, stop, step = (Decimal(repr(x)) for x in (self.start, self.stop, self.step))
        count = int((stop - start) / step + Decimal("1e-9")) + 1
        return [float(start + k * step) for k in range(count)]


GridSpec = Union[List[float], RangeSpec]


def expand_grid(grid: Optional[GridSpec]) -> List[float]:
    """Explicit list of grid values (empty when no grid is configured)."""
    if grid is None:
        return []
    if isinstance(grid, RangeSpec):
        return grid.values()
    return [float(x) for x in grid]


class MoleculeOverride(StrictModel):
    """Partial override of catalog constants."""

    B: Optional[float] = Field(None, gt=0.0)
    spin_weight_even: Optional[float] = Field(None, ge=0.0)
    spin_weight_odd: Optional[float] = Field(None, ge=0.0)
    polarizability_anisotropy: Optional[float] = Field(None, ge=0.0)


class InitialStateConfig(StrictModel):
    """Initial condition: thermal ensemble, one pure |J, m>, or injected amplitudes."""

    kind: Literal["thermal", "pure", "amplitudes"] = "thermal"
    j: int = Field(0, ge=0)
    m: int = 0
    amplitudes: Dict[int, Tuple[float, float]] = Field(
        default_factory=dict, description="J -> (real, imag), all at the configured m"
    )

    @model_validator(mode="after")
    def _consistent(self) -> "InitialStateConfig":
        if self.kind == "pure" and abs(self.m) > self.j:
            raise ValueError("|m| must not exceed j")
        if self.kind == "amplitudes":
            if not self.amplitudes:
                raise ValueError("amplitudes required when kind is 'amplitudes'")
            if any(abs(self.m) > j for j in self.amplitudes):
                raise ValueError("every amplitude J must satisfy J >= |m|")
        return self


class BasisConfig(StrictModel):
    j_max: int = Field(50, ge=0)
    leak_threshold: float = Field(1e-6, gt=0.0, lt=1.0)
    weight_cutoff: float = Field(1e-6, gt=0.0, lt=1.0)


class TrainConfig(StrictModel):
    """Preparation train, delay, localizing train."""

    n_pre: int = Field(3, ge=0)
    period_pre: float = Field(0.237, gt=0.0)
    delay: List[float] = Field(default_factory=lambda: [0.243, 0.264])
    n_loc: int = Field(12, ge=0)
    period_loc: float = Field(0.267, gt=0.0)
    strength: float = Field(3.8, ge=0.0)
    strength_pre: Optional[float] = Field(None, ge=0.0)
    strength_loc: Optional[float] = Field(None, ge=0.0)

    @field_validator("delay", mode="before")
    @classmethod
    def _listify(cls, value):
        if isinstance(value, (int, float)):
            return [value]
        return value

    @field_validator("delay")
    @classmethod
    def _positive_delays(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("at least one delay is required")
        if any(d <= 0.0 for d in value):
            raise ValueError("delays must be positive")
        return value

    @property
    def p_pre(self) -> float:
        return self.strength if self.strength_pre is None else self.strength_pre

    @property
    def p_loc(self) -> float:
        return self.strength if self.strength_loc is None else self.strength_loc


class ModelConfig(StrictModel):
    """Delta kicks (default) or finite Gaussian pulses."""

    delta_kick: bool = True
    fwhm: Optional[float] = Field(None, gt=0.0, description="T_rev units")
    fwhm_fs: Optional[float] = Field(None, gt=0.0, description="Femtoseconds")
    dt: Optional[float] = Field(None, gt=0.0, description="Split-step size, T_rev units")

    @model_validator(mode="after")
    def _width_given(self) -> "ModelConfig":
        if not self.delta_kick and self.fwhm is None and self.fwhm_fs is None:
            raise ValueError("finite-pulse model needs fwhm or fwhm_fs")
        if self.fwhm is not None and self.fwhm_fs is not None:
            raise ValueError("give fwhm or fwhm_fs, not both")
        return self


class TransitionCase(StrictModel):
    """One (tau, P) point; P defaults to scan.stochasticity / tau."""

    tau: float = Field(..., gt=0.0)
    strength: Optional[float] = Field(None, ge=0.0)
    delay: Optional[List[float]] = None


class ScanConfig(StrictModel):
    delay_grid: Optional[GridSpec] = None
    period_list: Optional[List[float]] = None
    period_grid: Optional[GridSpec] = None
    optimize: bool = False
    optimize_grid: GridSpec = Field(default_factory=lambda: RangeSpec(start=0.2, stop=0.3, step=0.001))
    cases: List[TransitionCase] = Field(default_factory=list)
    stochasticity: Optional[float] = Field(None, gt=0.0, description="K = tau P shared by all cases")
    n_kicks: int = Field(40, ge=1)
    q_max: int = Field(8, ge=1)

    @field_validator("period_list")
    @classmethod
    def _positive_periods(cls, value: Optional[List[float]]) -> Optional[List[float]]:
        if value is not None and any(p <= 0.0 for p in value):
            raise ValueError("periods must be positive")
        return value


class ClassicalConfig(StrictModel):
    trajectories: int = Field(100_000, ge=1)
    n_kicks: int = Field(50, ge=1)
    tau: Optional[float] = Field(None, gt=0.0)
    strength: Optional[float] = Field(None, ge=0.0)


class AnalysisConfig(StrictModel):
    break_slope_tolerance: float = Field(0.1, gt=0.0)
    noise_floor: float = Field(5e-3, ge=0.0)
    clip_noise_floor: bool = False


class ExperimentConfig(StrictModel):
    """Complete, validated run configuration."""

    molecule: str = "O2"
    molecule_overrides: Optional[MoleculeOverride] = None
    temperature_K: float = Field(25.0, ge=0.0)
    initial: InitialStateConfig = Field(default_factory=InitialStateConfig)
    basis: BasisConfig = Field(default_factory=BasisConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    model: ModelConfig = Field(default_factory=ModelConfig)
    scan: ScanConfig = Field(default_factory=ScanConfig)
    classical: ClassicalConfig = Field(default_factory=ClassicalConfig)
    analysis: AnalysisConfig = Field(default_factory=AnalysisConfig)
    control_metric: Literal["total", "absorbed"] = "total"
    seed: int = Field(0, ge=0)
