"""Models for the classical cos^2 kicked rotor."""

import math
from typing import Dict

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class ClassicalState(BaseModel):
    """Phase-space point; theta lives in [0, pi) since cos^2 has period pi."""

    model_config = ConfigDict(frozen=True)

    theta: float = Field(..., description="Radians, reduced modulo pi")
    l: float = Field(..., description="Angular momentum in units of hbar")

    @field_validator("theta")
    @classmethod
    def _reduce(cls, theta: float) -> float:
        reduced = math.fmod(theta, math.pi)
        if reduced < 0.0:
            reduced += math.pi
        # fmod can round up to exactly pi for tiny negative inputs
        return 0.0 if reduced >= math.pi else reduced


class ClassicalEnsemble(BaseModel):
    """Sampled trajectories stored column-wise."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    theta: np.ndarray
    l: np.ndarray
    rng_seed: int = Field(..., ge=0)

    @model_validator(mode="after")
    def _check_arrays(self) -> "ClassicalEnsemble":
        if self.theta.ndim != 1 or self.theta.shape != self.l.shape:
            raise ValueError("theta and l must be 1-D arrays of equal length")
        if self.theta.size < 1:
            raise ValueError("ensemble must contain at least one trajectory")
        return self

    def __len__(self) -> int:
        return int(self.theta.size)


class ClassicalSampling(BaseModel):
    """Initial angular-momentum distribution; theta is always uniform on [0, pi).

    With j_weights set, each trajectory draws J from them and starts at
    l = +-sqrt(J(J+1)) with a random sign, so the mean energy matches the
    quantum thermal ensemble. Otherwise every trajectory starts at l0.
    """

    model_config = ConfigDict(frozen=True)

    j_weights: Dict[int, float] = Field(default_factory=dict, description="J -> weight")
    l0: float = 0.0
