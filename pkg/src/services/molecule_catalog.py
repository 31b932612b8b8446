"""Catalog of molecular constants used to build thermal ensembles and kick strengths."""

from typing import Dict, List, Optional

from ..errors import ConfigError
from ..models.config import MoleculeOverride
from ..models.molecules import MoleculeSpec


class MoleculeCatalog:
    """Registry of linear molecules.

    Constants are data: a run may override any of them from its configuration,
    and the values actually used are echoed in the run manifest.
    - O2: 16O nuclei are spinless bosons, so only odd J exist in the ground state
    - N2: 14N nuclei (I=1) give even:odd = 2:1
    """

    _ENTRIES: Dict[str, MoleculeSpec] = {
        "O2": MoleculeSpec(
            name="O2",
            B=1.4377,
            spin_weight_even=0.0,
            spin_weight_odd=1.0,
            polarizability_anisotropy=1.1,
        ),
        "N2": MoleculeSpec(
            name="N2",
            B=1.9896,
            spin_weight_even=2.0,
            spin_weight_odd=1.0,
            polarizability_anisotropy=0.7,
        ),
    }

    @classmethod
    def names(cls) -> List[str]:
        """All registered molecule names."""
        return sorted(cls._ENTRIES)

    @classmethod
    def get(cls, name: str, overrides: Optional[MoleculeOverride] = None) -> MoleculeSpec:
        """
        Look up a molecule, applying optional overrides.

        Args:
            name: Catalog name (case-sensitive, e.g. 'O2')
            overrides: Replacement constants

        Returns:
            MoleculeSpec

        Raises:
            ConfigError: unknown molecule, or overrides leave no allowed level
        """
        if name not in cls._ENTRIES:
            raise ConfigError(f"unknown molecule {name!r}; known: {', '.join(cls.names())}", "molecule")
        spec = cls._ENTRIES[name]
        if overrides is None:
            return spec
        changes = overrides.model_dump(exclude_none=True)
        try:
            return MoleculeSpec(**{**spec.model_dump(), **changes})
        except ValueError as exc:
            raise ConfigError(str(exc), "molecule_overrides") from exc
