"""Pydantic models for the rotor basis, wave packets and pulse trains."""

import math
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# Norm tolerance for a physical wave packet
NORM_TOLERANCE = 1e-10


class Parity(str, Enum):
    """Which rotational levels a basis keeps."""

    EVEN = "even"
    ODD = "odd"
    BOTH = "both"

    def allows(self, j: int) -> bool:
        if self is Parity.BOTH:
            return True
        return (j % 2 == 0) == (self is Parity.EVEN)

    @classmethod
    def of(cls, j: int) -> "Parity":
        """Parity sector containing level j."""
        return cls.EVEN if j % 2 == 0 else cls.ODD


class RotorBasis(BaseModel):
    """Truncated angular-momentum basis at fixed m."""

    model_config = ConfigDict(frozen=True)

    j_max: int = Field(..., ge=0, description="Inclusive truncation")
    m: int = Field(0, description="Magnetic quantum number shared by all states")
    parity: Parity = Field(Parity.BOTH, description="Parity filter on J")
    j_values: Tuple[int, ...] = Field(..., description="Included J, strictly increasing")

    @model_validator(mode="after")
    def _check_levels(self) -> "RotorBasis":
        if not self.j_values:
            raise ValueError("basis is empty")
        step = 1 if self.parity is Parity.BOTH else 2
        for j in self.j_values:
            if not abs(self.m) <= j <= self.j_max:
                raise ValueError(f"J={j} outside [{abs(self.m)}, {self.j_max}]")
            if not self.parity.allows(j):
                raise ValueError(f"J={j} violates {self.parity.value} parity")
        if any(b - a != step for a, b in zip(self.j_values, self.j_values[1:])):
            raise ValueError(f"J values must increase in steps of {step}")
        return self

    @property
    def size(self) -> int:
        return len(self.j_values)

    @property
    def j_array(self) -> np.ndarray:
        return np.asarray(self.j_values, dtype=np.int64)

    def index_of(self, j: int) -> int:
        """Position of level j in the basis."""
        try:
            return self.j_values.index(j)
        except ValueError:
            raise KeyError(f"J={j} not in basis {self.parity.value}, m={self.m}") from None


class WavePacket(BaseModel):
    """Normalized complex amplitudes over a RotorBasis."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    basis: RotorBasis
    amplitudes: np.ndarray

    @field_validator("amplitudes", mode="before")
    @classmethod
    def _as_complex(cls, value) -> np.ndarray:
        return np.asarray(value, dtype=np.complex128).reshape(-1)

    @model_validator(mode="after")
    def _check_state(self) -> "WavePacket":
        if self.amplitudes.shape[0] != self.basis.size:
            raise ValueError(
                f"{self.amplitudes.shape[0]} amplitudes for a basis of {self.basis.size} states"
            )
        if abs(self.norm - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"wave packet norm {self.norm:.15f} is not 1")
        return self

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))

    @classmethod
    def eigenstate(cls, basis: RotorBasis, j: int) -> "WavePacket":
        """The pure rotational state |J, m> of the basis."""
        amplitudes = np.zeros(basis.size, dtype=np.complex128)
        amplitudes[basis.index_of(j)] = 1.0
        return cls(basis=basis, amplitudes=amplitudes)

    @classmethod
    def from_amplitudes(cls, basis: RotorBasis, amplitudes, normalize: bool = True) -> "WavePacket":
        """Build a wave packet from raw amplitudes, renormalizing unless told not to."""
        vector = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if normalize:
            norm = np.linalg.norm(vector)
            if norm == 0.0:
                raise ValueError("cannot normalize an all-zero amplitude vector")
            vector = vector / norm
        return cls(basis=basis, amplitudes=vector)

    def populations(self) -> np.ndarray:
        """|amplitude|^2 aligned with basis.j_values."""
        return np.abs(self.amplitudes) ** 2


class PulseSpec(BaseModel):
    """A single laser kick."""

    model_config = ConfigDict(frozen=True)

    time: float = Field(..., ge=0.0, description="Pulse center, units of T_rev")
    strength: float = Field(..., ge=0.0, description="Kick strength P (dimensionless)")
    fwhm: Optional[float] = Field(
        None, gt=0.0, description="Intensity FWHM in T_rev; absent means a delta kick"
    )

    @field_validator("time", "strength")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("must be finite")
        return value

    @property
    def is_delta(self) -> bool:
        return self.fwhm is None


class PulseTrain(BaseModel):
    """Time-ordered sequence of kicks."""

    model_config = ConfigDict(frozen=True)

    pulses: Tuple[PulseSpec, ...] = Field(default_factory=tuple)

    @model_validator(mode="after")
    def _time_ordered(self) -> "PulseTrain":
        times = [p.time for p in self.pulses]
        if any(b < a for a, b in zip(times, times[1:])):
            raise ValueError("pulse times must be non-decreasing")
        return self

    def __len__(self) -> int:
        return len(self.pulses)

    @property
    def is_delta(self) -> bool:
        return all(p.is_delta for p in self.pulses)


class KickOperator(BaseModel):
    """Dense unitary exp(+i P cos^2 theta) over a basis."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    basis: RotorBasis
    strength: float
    matrix: np.ndarray

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        return self.matrix @ amplitudes


class TrajectorySnapshot(BaseModel):
    """State after a given pulse (index 0 is the initial state)."""

    model_config = ConfigDict(frozen=True)

    pulse_index: int = Field(..., ge=0)
    time: float = Field(..., description="Units of T_rev")
    state: WavePacket
