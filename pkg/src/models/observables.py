"""Pydantic models for measured quantities: populations, energy traces, Raman spectra."""

from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# Populations must sum to one within this tolerance
POPULATION_TOLERANCE = 1e-10


class PopulationDistribution(BaseModel):
    """Rotational level populations P_J."""

    model_config = ConfigDict(frozen=True)

    entries: Dict[int, float] = Field(..., description="J -> P_J")

    @field_validator("entries")
    @classmethod
    def _check_entries(cls, entries: Dict[int, float]) -> Dict[int, float]:
        if any(p < 0.0 for p in entries.values()):
            raise ValueError("populations must be non-negative")
        total = sum(entries.values())
        if abs(total - 1.0) > POPULATION_TOLERANCE:
            raise ValueError(f"populations sum to {total!r}, not 1")
        return dict(sorted(entries.items()))

    @property
    def j_values(self) -> np.ndarray:
        return np.fromiter(self.entries.keys(), dtype=np.int64, count=len(self.entries))

    @property
    def values(self) -> np.ndarray:
        return np.fromiter(self.entries.values(), dtype=np.float64, count=len(self.entries))

    @classmethod
    def from_arrays(cls, j_values, populations) -> "PopulationDistribution":
        return cls(entries={int(j): float(p) for j, p in zip(j_values, populations)})


class EnergyPoint(BaseModel):
    """Energy after one pulse; index 0 is the initial state."""

    model_config = ConfigDict(frozen=True)

    pulse_index: int = Field(..., ge=0)
    time: float = Field(..., description="Units of T_rev")
    energy: float = Field(..., description="Units of B")
    absorbed: float = Field(..., description="energy - energy at index 0, units of B")
    stderr: Optional[float] = Field(None, description="Standard error of a sampled mean")


class EnergyTrace(BaseModel):
    """Per-pulse rotational energy record."""

    model_config = ConfigDict(frozen=True)

    points: List[EnergyPoint] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_points(self) -> "EnergyTrace":
        indices = [p.pulse_index for p in self.points]
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ValueError("pulse indices must be strictly increasing")
        if self.points:
            baseline = self.points[0].energy
            for point in self.points:
                if abs(point.absorbed - (point.energy - baseline)) > 1e-9 * max(1.0, abs(point.energy)):
                    raise ValueError(f"absorbed energy inconsistent at index {point.pulse_index}")
        return self

    def __len__(self) -> int:
        return len(self.points)

    @property
    def energies(self) -> np.ndarray:
        return np.array([p.energy for p in self.points], dtype=np.float64)

    @property
    def absorbed(self) -> np.ndarray:
        return np.array([p.absorbed for p in self.points], dtype=np.float64)

    @property
    def final_energy(self) -> float:
        return self.points[-1].energy

    @property
    def final_absorbed(self) -> float:
        return self.points[-1].absorbed


class RamanSpectrum(BaseModel):
    """Relative Raman line intensities, normalized to a maximum of one."""

    model_config = ConfigDict(frozen=True)

    intensities: Dict[int, float] = Field(..., description="J -> I_J")

    @field_validator("intensities")
    @classmethod
    def _check_intensities(cls, intensities: Dict[int, float]) -> Dict[int, float]:
        if any(i < 0.0 for i in intensities.values()):
            raise ValueError("intensities must be non-negative")
        if intensities and abs(max(intensities.values()) - 1.0) > 1e-12:
            raise ValueError("spectrum must be normalized to a maximum of 1")
        return dict(sorted(intensities.items()))
