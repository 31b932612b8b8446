"""Measured quantities: populations, rotational energy, Raman lines, localization metrics."""

import logging
import math
from typing import Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from ..errors import DegenerateError, DomainError
from ..models.observables import EnergyPoint, EnergyTrace, PopulationDistribution, RamanSpectrum
from ..models.rotor import WavePacket
from .rotor_core import cos2_matrix

logger = logging.getLogger(__name__)

# Instrument noise floor of the Raman population retrieval
DEFAULT_NOISE_FLOOR = 5e-3

# Kicks used for the reference slope of break_time_estimate
INITIAL_SLOPE_KICKS = 3


def populations(state: WavePacket) -> PopulationDistribution:
    """P_J = |amplitude_J|^2 over the state's basis."""
    return PopulationDistribution.from_arrays(state.basis.j_values, state.populations())


def rotational_energy(pop: PopulationDistribution) -> float:
    """Sum of J(J+1) P_J, in units of B."""
    j = pop.j_values
    return float(np.dot(j * (j + 1), pop.values))


def absorbed_energy(pop: PopulationDistribution, initial: PopulationDistribution) -> float:
    """Energy gained relative to the initial distribution, in units of B."""
    return rotational_energy(pop) - rotational_energy(initial)


def energy_from_array(pop: np.ndarray) -> float:
    """Energy of a population vector indexed directly by J."""
    j = np.arange(pop.shape[-1])
    # Exactly rounded: equal vectors always give equal energies
    return math.fsum(pop * (j * (j + 1)))


def energy_trace(pulse_indices: Sequence[int], times: Sequence[float], energies: Iterable[float],
                 stderrs: Optional[Sequence[float]] = None) -> EnergyTrace:
    """Build an EnergyTrace, computing absorbed energy from the first point."""
    energies = [float(e) for e in energies]
    if not energies:
        return EnergyTrace(points=[])
    baseline = energies[0]
    points = [
        EnergyPoint(
            pulse_index=int(index),
            time=float(time),
            energy=energy,
            absorbed=energy - baseline,
            stderr=None if stderrs is None else float(stderrs[k]),
        )
        for k, (index, time, energy) in enumerate(zip(pulse_indices, times, energies))
    ]
    return EnergyTrace(points=points)


def raman_forward(pop: PopulationDistribution) -> RamanSpectrum:
    """
    Raman line intensities I_J proportional to P_J^2, normalized to a maximum of one.

    Raises:
        DegenerateError: all populations are zero
    """
    squared = pop.values ** 2
    peak = squared.max() if squared.size else 0.0
    if not peak > 0.0:
        raise DegenerateError("cannot form a Raman spectrum from an all-zero distribution")
    return RamanSpectrum(intensities={int(j): float(i / peak) for j, i in zip(pop.j_values, squared)})


def retrieve_populations(spectrum: Union[RamanSpectrum, Mapping[int, float]]) -> PopulationDistribution:
    """
    Invert the Raman model: P_J proportional to sqrt(I_J), renormalized.

    Args:
        spectrum: A normalized RamanSpectrum, or measured line intensities per J on any scale

    Raises:
        DomainError: negative intensity
        DegenerateError: all intensities zero
    """
    lines = spectrum.intensities if isinstance(spectrum, RamanSpectrum) else dict(spectrum)
    j = np.fromiter(lines.keys(), dtype=np.int64, count=len(lines))
    intensity = np.fromiter(lines.values(), dtype=np.float64, count=len(lines))
    if np.any(intensity < 0.0):
        raise DomainError("Raman intensities must be non-negative")
    amplitude = np.sqrt(intensity)
    total = amplitude.sum()
    if not total > 0.0:
        raise DegenerateError("cannot retrieve populations from an all-zero spectrum")
    return PopulationDistribution.from_arrays(j, amplitude / total)


def clip_noise_floor(spectrum: RamanSpectrum, pop: PopulationDistribution,
                     floor: float = DEFAULT_NOISE_FLOOR) -> RamanSpectrum:
    """Zero the lines whose population lies below the instrument floor, then renormalize."""
    kept = {j: (i if pop.entries.get(j, 0.0) >= floor else 0.0) for j, i in spectrum.intensities.items()}
    peak = max(kept.values(), default=0.0)
    if not peak > 0.0:
        raise DegenerateError(f"every line lies below the noise floor {floor}")
    return RamanSpectrum(intensities={j: i / peak for j, i in kept.items()})


def degree_of_control(e1: float, e2: float) -> float:
    """
    (E1 - E2) / ((E1 + E2) / 2).

    Raises:
        DomainError: E1 + E2 <= 0
    """
    if not e1 + e2 > 0.0:
        raise DomainError(f"degree of control needs E1 + E2 > 0, got {e1} + {e2}")
    return (e1 - e2) / ((e1 + e2) / 2.0)


def participation_ratio(pop: PopulationDistribution) -> float:
    """Effective number of populated levels, 1 / sum P_J^2."""
    return float(1.0 / np.sum(pop.values ** 2))


def alignment_factor(state: WavePacket) -> float:
    """Expectation value <cos^2 theta> of a wave packet."""
    matrix = cos2_matrix(state.basis)
    return float(np.real(np.vdot(state.amplitudes, matrix @ state.amplitudes)))


def _slope(x: np.ndarray, y: np.ndarray) -> float:
    return float(stats.linregress(x, y).slope)


def break_time_estimate(trace: EnergyTrace, slope_tolerance: float = 0.1) -> Optional[int]:
    """
    First pulse index after which energy growth has effectively stopped.

    The reference is the least-squares slope over the first three kicks. An index
    qualifies when the least-squares slope over every remaining tail starting
    there or later stays within slope_tolerance times the reference.

    Args:
        trace: Energy trace with at least 4 points
        slope_tolerance: Allowed fraction of the initial slope

    Returns:
        Pulse index, or None if growth never stops
    """
    if len(trace) < INITIAL_SLOPE_KICKS + 1:
        raise DomainError(f"break time needs at least {INITIAL_SLOPE_KICKS + 1} points, got {len(trace)}")
    x = np.array([p.pulse_index for p in trace.points], dtype=np.float64)
    y = trace.energies
    reference = abs(_slope(x[: INITIAL_SLOPE_KICKS + 1], y[: INITIAL_SLOPE_KICKS + 1]))
    # Absolute slack absorbs rounding in slopes of flat traces
    limit = slope_tolerance * reference + 1e-12 * max(1.0, float(np.max(np.abs(y))))

    # Scan from the end: tails of two or more points
    found: Optional[int] = None
    for start in range(len(x) - 2, -1, -1):
        if abs(_slope(x[start:], y[start:])) <= limit:
            found = start
        else:
            break
    return None if found is None else int(trace.points[found].pulse_index)


def diffusion_fit(trace: EnergyTrace, start_index: int = 0) -> Tuple[float, float]:
    """
    Least-squares line through the energies from start_index on.

    Returns:
        Tuple of (slope in B per kick, R^2)
    """
    points = [p for p in trace.points if p.pulse_index >= start_index]
    if len(points) < 2:
        raise DomainError(f"a linear fit needs two points at or after index {start_index}")
    fit = stats.linregress([p.pulse_index for p in points], [p.energy for p in points])
    return float(fit.slope), float(fit.rvalue ** 2)
