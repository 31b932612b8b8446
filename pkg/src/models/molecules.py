"""Pydantic models for molecular constants and thermal ensembles."""

from typing import Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Ensemble weights must sum to one within this tolerance
WEIGHT_SUM_TOLERANCE = 1e-12


class MoleculeSpec(BaseModel):
    """Rotational constants and spin statistics of a linear molecule."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = Field(..., description="Catalog name, e.g. 'O2'")
    B: float = Field(..., gt=0.0, description="Rotational constant, cm^-1")
    spin_weight_even: float = Field(..., ge=0.0, description="Nuclear-spin weight of even J")
    spin_weight_odd: float = Field(..., ge=0.0, description="Nuclear-spin weight of odd J")
    polarizability_anisotropy: Optional[float] = Field(
        None, ge=0.0, description="Polarizability anisotropy, Angstrom^3"
    )

    @model_validator(mode="after")
    def _some_level_allowed(self) -> "MoleculeSpec":
        if self.spin_weight_even == 0.0 and self.spin_weight_odd == 0.0:
            raise ValueError("at least one spin weight must be positive")
        return self

    def spin_weight(self, j: int) -> float:
        return self.spin_weight_even if j % 2 == 0 else self.spin_weight_odd

    @property
    def lowest_allowed_j(self) -> int:
        return 0 if self.spin_weight_even > 0.0 else 1


class EnsembleMember(BaseModel):
    """One initial pure state |J0, m0> with its statistical weight."""

    model_config = ConfigDict(frozen=True)

    weight: float = Field(..., ge=0.0)
    j0: int = Field(..., ge=0)
    m0: int

    @model_validator(mode="after")
    def _m_in_range(self) -> "EnsembleMember":
        if abs(self.m0) > self.j0:
            raise ValueError(f"|m0|={abs(self.m0)} exceeds J0={self.j0}")
        return self

    @property
    def key(self) -> Tuple[int, int]:
        return (self.j0, self.m0)


class ThermalEnsemble(BaseModel):
    """Boltzmann x spin-statistics weighted initial states."""

    model_config = ConfigDict(frozen=True)

    members: Tuple[EnsembleMember, ...]
    temperature: float = Field(..., ge=0.0, description="Kelvin")

    @model_validator(mode="after")
    def _check_weights(self) -> "ThermalEnsemble":
        if not self.members:
            raise ValueError("ensemble has no members")
        total = sum(m.weight for m in self.members)
        if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ValueError(f"weights sum to {total!r}, not 1")

        by_j: Dict[int, list] = {}
        for member in self.members:
            by_j.setdefault(member.j0, []).append(member)
        for j0, group in by_j.items():
            if sorted(m.m0 for m in group) != list(range(-j0, j0 + 1)):
                raise ValueError(f"J0={j0} must carry every m0 in [-{j0}, {j0}] exactly once")
            if len({m.weight for m in group}) != 1:
                raise ValueError(f"J0={j0} sublevels must share one weight")
        return self

    def level_weights(self) -> Dict[int, float]:
        """Total weight w_J of each J0 level, summed over m0."""
        weights: Dict[int, float] = {}
        for member in self.members:
            weights[member.j0] = weights.get(member.j0, 0.0) + member.weight
        return dict(sorted(weights.items()))

    @property
    def j_levels(self) -> Tuple[int, ...]:
        return tuple(sorted({m.j0 for m in self.members}))
