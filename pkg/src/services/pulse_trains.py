"""Pulse-train builders. All times in units of T_rev."""

from typing import List, Optional

from ..errors import ConfigError
from ..models.config import TrainConfig
from ..models.rotor import PulseSpec, PulseTrain
from .rotor_core import ENVELOPE_HALF_WIDTH


def _origin(fwhm: Optional[float]) -> float:
    # Finite pulses are shifted so the first window opens at t = 0
    return 0.0 if fwhm is None else ENVELOPE_HALF_WIDTH * fwhm


def uniform_train(n_kicks: int, period: float, strength: float, fwhm: Optional[float] = None) -> PulseTrain:
    """
    n_kicks equally spaced pulses, the first at the origin.

    Raises:
        ConfigError: n_kicks < 0 or period <= 0
    """
    if n_kicks < 0:
        raise ConfigError(f"n_kicks must be >= 0, got {n_kicks}")
    if not period > 0.0:
        raise ConfigError(f"train period must be > 0, got {period}")
    origin = _origin(fwhm)
    return PulseTrain(pulses=tuple(
        PulseSpec(time=origin + k * period, strength=strength, fwhm=fwhm) for k in range(n_kicks)
    ))


def build_control_train(
    n_pre: int,
    period_pre: float,
    delay: float,
    n_loc: int,
    period_loc: float,
    strength_pre: float,
    strength_loc: float,
    fwhm: Optional[float] = None,
) -> PulseTrain:
    """
    Preparation train followed, after a delay, by the localizing train.

    The preparation pulses sit at k * period_pre. The first localizing pulse
    comes delay after the last preparation pulse (after the origin when
    n_pre is 0), the rest follow every period_loc.

    Args:
        n_pre: Number of preparation pulses
        period_pre: Preparation period
        delay: Gap between the two trains
        n_loc: Number of localizing pulses
        period_loc: Localizing period
        strength_pre: Kick strength of the preparation pulses
        strength_loc: Kick strength of the localizing pulses
        fwhm: Pulse width; None for delta kicks

    Returns:
        PulseTrain of n_pre + n_loc pulses
    """
    for name, value in (("period_pre", period_pre), ("period_loc", period_loc), ("delay", delay)):
        if not value > 0.0:
            raise ConfigError(f"must be > 0, got {value}", key_path=f"train.{name}")

    origin = _origin(fwhm)
    pulses: List[PulseSpec] = [
        PulseSpec(time=origin + k * period_pre, strength=strength_pre, fwhm=fwhm) for k in range(n_pre)
    ]
    first_loc = origin + max(n_pre - 1, 0) * period_pre + delay
    pulses.extend(
        PulseSpec(time=first_loc + k * period_loc, strength=strength_loc, fwhm=fwhm) for k in range(n_loc)
    )
    return PulseTrain(pulses=tuple(pulses))


def train_from_config(train: TrainConfig, delay: float, fwhm: Optional[float] = None) -> PulseTrain:
    """Control train for one delay of a TrainConfig."""
    return build_control_train(
        train.n_pre, train.period_pre, delay, train.n_loc, train.period_loc, train.p_pre, train.p_loc, fwhm
    )
