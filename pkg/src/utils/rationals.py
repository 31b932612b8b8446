"""Rational approximation utilities for locating quantum resonances."""

from math import gcd
from typing import Tuple

# Resonances of order q <= 4 are the strong low-order ones
DEFAULT_MAX_ORDER = 4


def nearest_fraction(value: float, q_max: int = DEFAULT_MAX_ORDER) -> Tuple[int, int, float]:
    """
    Find the rational p/q closest to a value with denominator q <= q_max.

    Denominators are scanned in increasing order and a candidate only replaces
    the current best when strictly closer, so ties resolve to the lowest order.

    Args:
        value: Real number to approximate (non-negative)
        q_max: Largest denominator considered

    Returns:
        Tuple of (p, q, distance) with p/q in lowest terms
    """
    best_p, best_q = round(value), 1
    best_distance = abs(value - best_p)

    for q in range(2, q_max + 1):
        # Exact hit on a previous denominator cannot be improved
        if best_distance == 0.0:
            break
        p = round(value * q)
        distance = abs(value - p / q)
        if distance < best_distance:
            common = gcd(p, q) or 1
            best_p, best_q = p // common, q // common
            best_distance = distance

    return int(best_p), int(best_q), float(best_distance)
