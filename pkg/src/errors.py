"""Exception hierarchy for kickrotor.

Configuration problems map to CLI exit code 1, numerical problems to exit code 2.
"""

from typing import Optional


class KickRotorError(Exception):
    """Base class for all kickrotor errors."""


class ConfigError(KickRotorError, ValueError):
    """Invalid input: bad configuration, parameter out of range, wrong model."""

    def __init__(self, message: str, key_path: Optional[str] = None):
        self.key_path = key_path
        if key_path:
            message = f"{key_path}: {message}"
        super().__init__(message)


class InvalidBasisError(ConfigError):
    """Requested rotor basis is empty or inconsistent."""


class WrongModelError(ConfigError):
    """A propagator was given pulses of the other model (delta vs finite width)."""


class StepTooCoarseError(ConfigError):
    """Finite-pulse time step is too large for the pulse width."""


class DomainError(ConfigError):
    """Argument outside the mathematical domain of an operation."""


class DegenerateError(ConfigError):
    """Input carries no weight at all (all-zero distribution, empty ensemble)."""


class IncompleteEnsembleError(ConfigError):
    """Per-member results are missing for a member with nonzero weight."""


class NumericalError(KickRotorError, ArithmeticError):
    """Numerical failure during propagation."""


class EigenDecompositionError(NumericalError):
    """Diagonalization of the coupling matrix failed."""


class TruncationLeakError(NumericalError):
    """Population reached the top of the truncated basis."""

    def __init__(self, leaked: float, threshold: float, j_top: int, column: Optional[int] = None):
        self.leaked = leaked
        self.threshold = threshold
        self.j_top = j_top
        self.column = column
        super().__init__(
            f"population {leaked:.3e} in the top two levels (J <= {j_top}) exceeds "
            f"threshold {threshold:.1e}; raise basis.j_max"
        )


class PropagationError(NumericalError):
    """Propagation of one ensemble member failed."""

    def __init__(self, j0: int, m0: int, cause: Exception):
        self.j0 = j0
        self.m0 = m0
        super().__init__(f"member (J0={j0}, m0={m0}) failed: {cause}")
