"""Thermal ensembles: Boltzmann weights, spin statistics, kick strengths and ensemble propagation."""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np
from scipy import constants

from ..errors import (
    ConfigError,
    DegenerateError,
    DomainError,
    IncompleteEnsembleError,
    KickRotorError,
    PropagationError,
    TruncationLeakError,
)
from ..models.molecules import EnsembleMember, MoleculeSpec, ThermalEnsemble
from ..models.rotor import Parity, PulseTrain, WavePacket
from ..utils.parallel import ordered_map
from ..utils.units import (
    ANGSTROM3_TO_SI_POLARIZABILITY,
    GAUSSIAN_AREA_FACTOR,
    W_PER_CM2_TO_SI,
    revival_period_ps,
    thermal_energy_in_b,
)
from .rotor_core import (
    DEFAULT_LEAK_THRESHOLD,
    RecordPolicy,
    build_basis,
    propagate_block,
)

logger = logging.getLogger(__name__)

DEFAULT_WEIGHT_CUTOFF = 1e-6

# Levels with reduced energy above this many k_B T are never populated
_MAX_REDUCED_ENERGY = 80.0
_MAX_LEVEL = 500


def boltzmann_ensemble(
    molecule: MoleculeSpec,
    temperature: float,
    weight_cutoff: float = DEFAULT_WEIGHT_CUTOFF,
) -> ThermalEnsemble:
    """
    Thermal ensemble of |J0, m0> states.

    w_J is proportional to g_J (2J+1) exp(-B J(J+1) hc / k_B T). The highest levels
    are dropped while their cumulative weight stays below weight_cutoff, the rest
    renormalized, and each level split equally over its 2J+1 sublevels.

    Args:
        molecule: Molecular constants and spin weights
        temperature: Rotational temperature in K (0 puts everything in the lowest allowed J)
        weight_cutoff: Largest discarded cumulative weight

    Returns:
        ThermalEnsemble

    Raises:
        DomainError: negative temperature or cutoff outside (0, 1)
        DegenerateError: every weight vanishes
    """
    if temperature < 0.0 or not math.isfinite(temperature):
        raise DomainError(f"temperature must be finite and >= 0, got {temperature}")
    if not 0.0 < weight_cutoff < 1.0:
        raise DomainError(f"weight_cutoff must lie in (0, 1), got {weight_cutoff}")

    level_weights = _level_weights(molecule, temperature, weight_cutoff)

    members: List[EnsembleMember] = []
    for j0, weight in level_weights.items():
        share = weight / (2 * j0 + 1)
        members.extend(EnsembleMember(weight=share, j0=j0, m0=m0) for m0 in range(-j0, j0 + 1))

    logger.debug(
        "[Ensemble] %s at %.2f K: %d levels, %d members",
        molecule.name, temperature, len(level_weights), len(members),
    )
    return ThermalEnsemble(members=tuple(members), temperature=temperature)


def _level_weights(molecule: MoleculeSpec, temperature: float, weight_cutoff: float) -> Dict[int, float]:
    j_low = molecule.lowest_allowed_j
    if temperature == 0.0:
        return {j_low: 1.0}

    kt = thermal_energy_in_b(molecule.B, temperature)
    e_low = j_low * (j_low + 1)
    j_high = j_low
    while j_high < _MAX_LEVEL and (j_high * (j_high + 1) - e_low) / kt < _MAX_REDUCED_ENERGY:
        j_high += 1

    j = np.arange(j_high + 1)
    spin = np.array([molecule.spin_weight(int(x)) for x in j], dtype=np.float64)
    raw = spin * (2 * j + 1) * np.exp(-(j * (j + 1) - e_low) / kt)
    total = raw.sum()
    if not total > 0.0:
        raise DegenerateError(f"all Boltzmann weights vanish for {molecule.name} at {temperature} K")
    weights = raw / total

    # tail[k] = weight above level k
    tail = np.concatenate([np.cumsum(weights[::-1])[::-1][1:], [0.0]])
    j_cut = int(np.argmax(tail < weight_cutoff))
    kept = weights[: j_cut + 1]
    kept = kept / kept.sum()
    return {int(level): float(w) for level, w in enumerate(kept) if w > 0.0}


def entropy(weights) -> float:
    """Shannon entropy -sum w ln w of a weight distribution."""
    w = np.asarray(list(weights.values()) if isinstance(weights, Mapping) else weights, dtype=np.float64)
    w = w[w > 0.0]
    return float(-(w * np.log(w)).sum())


def field_squared_integral(peak_intensity_w_cm2: float, fwhm_seconds: float) -> float:
    """
    Time integral of the squared field envelope for a Gaussian pulse, in V^2 s / m^2.

    I(t) = (1/2) c eps0 E(t)^2, so the integral of E^2 is 2 / (c eps0) times the fluence.
    """
    if peak_intensity_w_cm2 < 0.0 or fwhm_seconds < 0.0:
        raise DomainError("intensity and duration must be non-negative")
    fluence = GAUSSIAN_AREA_FACTOR * peak_intensity_w_cm2 * W_PER_CM2_TO_SI * fwhm_seconds
    return 2.0 * fluence / (constants.c * constants.epsilon_0)


def kick_strength_from_pulse(polarizability_anisotropy: float, fluence_integral: float) -> float:
    """
    Dimensionless kick strength P = delta_alpha / (4 hbar) * integral E^2 dt.

    Args:
        polarizability_anisotropy: delta_alpha as a polarizability volume, Angstrom^3
            (converted with 4 pi eps0 * 1e-30 to C m^2 / V)
        fluence_integral: integral of the squared field envelope, V^2 s / m^2

    Returns:
        Kick strength P
    """
    if polarizability_anisotropy < 0.0 or fluence_integral < 0.0:
        raise DomainError("polarizability anisotropy and fluence integral must be non-negative")
    delta_alpha = polarizability_anisotropy * ANGSTROM3_TO_SI_POLARIZABILITY
    return delta_alpha * fluence_integral / (4.0 * constants.hbar)


def fwhm_in_revivals(fwhm_fs: float, molecule: MoleculeSpec) -> float:
    """Pulse FWHM in femtoseconds expressed in units of the molecule's T_rev."""
    return fwhm_fs * 1e-3 / revival_period_ps(molecule.B)


def ensemble_average(
    ensemble: ThermalEnsemble,
    per_member_results: Mapping[Tuple[int, int], np.ndarray],
) -> np.ndarray:
    """
    Weighted sum of per-member observables.

    Members are summed in (J0, m0) order regardless of how the ensemble or the
    mapping is ordered, so the result is bitwise reproducible.

    Raises:
        IncompleteEnsembleError: a member with nonzero weight has no result
    """
    total: Optional[np.ndarray] = None
    for member in sorted(ensemble.members, key=lambda m: m.key):
        if member.weight == 0.0:
            continue
        if member.key not in per_member_results:
            raise IncompleteEnsembleError(f"no result for member (J0={member.j0}, m0={member.m0})")
        contribution = member.weight * np.asarray(per_member_results[member.key], dtype=np.float64)
        total = contribution if total is None else total + contribution
    if total is None:
        raise DegenerateError("ensemble carries no weight")
    return total


@dataclass
class EnsembleTrajectory:
    """Per-pulse populations of a propagated initial condition.

    populations has shape (snapshots, j_max + 1) indexed by J; levels outside every
    member basis stay zero.
    """

    pulse_indices: List[int]
    times: List[float]
    populations: np.ndarray
    j_support: Tuple[int, ...]
    m_populations: Dict[int, np.ndarray] = field(default_factory=dict)
    m_weights: Dict[int, float] = field(default_factory=dict)


def _group_members(ensemble: ThermalEnsemble, j_max: int) -> Dict[Tuple[int, Parity], List[int]]:
    """(|m0|, parity) -> J0 list; m and -m share populations."""
    groups: Dict[Tuple[int, Parity], List[int]] = {}
    for member in ensemble.members:
        if member.weight == 0.0:
            continue
        if member.j0 > j_max:
            raise ConfigError(f"initial level J0={member.j0} exceeds j_max={j_max}", "basis.j_max")
        key = (abs(member.m0), Parity.of(member.j0))
        if member.j0 not in groups.setdefault(key, []):
            groups[key].append(member.j0)
    return {key: sorted(js) for key, js in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1].value))}


def propagate_ensemble(
    ensemble: ThermalEnsemble,
    train: PulseTrain,
    j_max: int,
    record: RecordPolicy = RecordPolicy.EVERY_KICK,
    leak_threshold: Optional[float] = DEFAULT_LEAK_THRESHOLD,
    dt: Optional[float] = None,
    threads: int = 1,
) -> EnsembleTrajectory:
    """
    Propagate every ensemble member and average the level populations.

    Members sharing |m0| and J0 parity live in one basis and are propagated
    together as columns of one amplitude matrix.

    Raises:
        PropagationError: a member failed; carries (J0, m0)
    """
    groups = _group_members(ensemble, j_max)

    def run_group(item):
        (abs_m, parity), j0_list = item
        basis = build_basis(j_max, parity, abs_m)
        start = np.zeros((basis.size, len(j0_list)), dtype=np.complex128)
        for column, j0 in enumerate(j0_list):
            start[basis.index_of(j0), column] = 1.0
        try:
            blocks = propagate_block(basis, start, train, record, leak_threshold, dt=dt)
        except TruncationLeakError as exc:
            column = exc.column if exc.column is not None else 0
            raise PropagationError(j0_list[column], abs_m, exc) from exc
        except KickRotorError as exc:
            raise PropagationError(j0_list[0], abs_m, exc) from exc
        return basis, blocks

    logger.info("[Ensemble] propagating %d members in %d blocks", len(ensemble.members), len(groups))
    outcomes = ordered_map(run_group, list(groups.items()), threads)

    per_member: Dict[Tuple[int, int], np.ndarray] = {}
    pulse_indices: List[int] = []
    times: List[float] = []
    support = set()
    for ((abs_m, _), j0_list), (basis, blocks) in zip(groups.items(), outcomes):
        pulse_indices = [index for index, _, _ in blocks]
        times = [time for _, time, _ in blocks]
        support.update(basis.j_values)
        stacked = np.stack([np.abs(amps) ** 2 for _, _, amps in blocks])  # (snap, n, k)
        for column, j0 in enumerate(j0_list):
            full = np.zeros((len(blocks), j_max + 1), dtype=np.float64)
            full[:, basis.j_array] = stacked[:, :, column]
            for m0 in {abs_m, -abs_m}:
                per_member[(j0, m0)] = full

    averaged = ensemble_average(ensemble, per_member)

    m_weights: Dict[int, float] = {}
    m_populations: Dict[int, np.ndarray] = {}
    for member in sorted(ensemble.members, key=lambda m: (m.m0, m.j0)):
        if member.weight == 0.0:
            continue
        final = per_member[member.key][-1]
        m_weights[member.m0] = m_weights.get(member.m0, 0.0) + member.weight
        m_populations[member.m0] = m_populations.get(member.m0, 0.0) + member.weight * final
    for m0, weight in m_weights.items():
        m_populations[m0] = m_populations[m0] / weight

    return EnsembleTrajectory(
        pulse_indices=pulse_indices,
        times=times,
        populations=averaged,
        j_support=tuple(sorted(support)),
        m_populations=m_populations,
        m_weights=m_weights,
    )


def propagate_pure(
    state: WavePacket,
    train: PulseTrain,
    record: RecordPolicy = RecordPolicy.EVERY_KICK,
    leak_threshold: Optional[float] = DEFAULT_LEAK_THRESHOLD,
    dt: Optional[float] = None,
) -> EnsembleTrajectory:
    """Same result shape as propagate_ensemble for a single pure initial state."""
    basis = state.basis
    blocks = propagate_block(basis, state.amplitudes, train, record, leak_threshold, dt=dt)
    populations = np.zeros((len(blocks), basis.j_max + 1), dtype=np.float64)
    for row, (_, _, amps) in enumerate(blocks):
        populations[row, basis.j_array] = np.abs(amps) ** 2
    return EnsembleTrajectory(
        pulse_indices=[index for index, _, _ in blocks],
        times=[time for _, time, _ in blocks],
        populations=populations,
        j_support=basis.j_values,
        m_populations={basis.m: populations[-1].copy()},
        m_weights={basis.m: 1.0},
    )
