"""Unit conversions between molecular constants and the internal revival-period units.

Internally time is measured in units of the revival period T_rev, energy in units
of the rotational constant B, and angular momentum in units of hbar.
"""

import math

from scipy import constants

# B in cm^-1 -> B in joules
WAVENUMBER_TO_JOULE = constants.h * constants.c * 100.0

# Polarizability volume (Angstrom^3) -> SI polarizability (C m^2 / V)
ANGSTROM3_TO_SI_POLARIZABILITY = 4.0 * math.pi * constants.epsilon_0 * 1e-30

# Intensity W/cm^2 -> W/m^2
W_PER_CM2_TO_SI = 1e4

# Gaussian intensity envelope: integral = GAUSSIAN_AREA_FACTOR * peak * FWHM
GAUSSIAN_AREA_FACTOR = math.sqrt(math.pi / (4.0 * math.log(2.0)))


def revival_period_seconds(b_wavenumber: float) -> float:
    """T_rev = pi * hbar / B = 1 / (2 B c) for B given in cm^-1."""
    return math.pi * constants.hbar / (b_wavenumber * WAVENUMBER_TO_JOULE)


def revival_period_ps(b_wavenumber: float) -> float:
    """Revival period in picoseconds."""
    return revival_period_seconds(b_wavenumber) * 1e12


def tau_from_period(period: float) -> float:
    """Effective Planck constant for a train period given in units of T_rev."""
    return 2.0 * math.pi * period


def period_from_tau(tau: float) -> float:
    """Train period in units of T_rev for an effective Planck constant."""
    return tau / (2.0 * math.pi)


def stochasticity(tau: float, strength: float) -> float:
    """Classical stochasticity parameter K = tau * P."""
    return tau * strength


def thermal_energy_in_b(b_wavenumber: float, temperature_k: float) -> float:
    """k_B T expressed in units of B; infinite reduced energies are the caller's concern."""
    return constants.k * temperature_k / (b_wavenumber * WAVENUMBER_TO_JOULE)
