"""Utility functions for kickrotor."""

from .rationals import nearest_fraction, DEFAULT_MAX_ORDER
from .parallel import ordered_map
from .units import (
    revival_period_ps,
    revival_period_seconds,
    tau_from_period,
    period_from_tau,
    stochasticity,
)

__all__ = [
    "nearest_fraction",
    "DEFAULT_MAX_ORDER",
    "ordered_map",
    "revival_period_ps",
    "revival_period_seconds",
    "tau_from_period",
    "period_from_tau",
    "stochasticity",
]
