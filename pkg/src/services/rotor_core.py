"""Exact propagation of a linear rigid rotor under free evolution and cos^2 laser kicks.

Units: time in T_rev, energy in B, angular momentum in hbar. Free evolution over
dt multiplies |J> by exp(-i pi J(J+1) dt); a delta kick of strength P applies
exp(+i P cos^2 theta), the sign following the attractive laser potential.
"""

import logging
import math
from enum import Enum
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg
from scipy.special import erf

from ..errors import (
    DomainError,
    EigenDecompositionError,
    InvalidBasisError,
    StepTooCoarseError,
    TruncationLeakError,
    WrongModelError,
    ConfigError,
)
from ..models.rotor import (
    Parity,
    PulseSpec,
    PulseTrain,
    KickOperator,
    RotorBasis,
    TrajectorySnapshot,
    WavePacket,
)
from ..utils.rationals import nearest_fraction

logger = logging.getLogger(__name__)

DEFAULT_LEAK_THRESHOLD = 1e-6

# Gaussian envelopes are cut at +-3 FWHM around the pulse center
ENVELOPE_HALF_WIDTH = 3.0

# Largest split step relative to the FWHM
MAX_STEP_FRACTION = 0.25


class RecordPolicy(str, Enum):
    """Which snapshots a propagation keeps."""

    EVERY_KICK = "every_kick"
    FINAL = "final"


# (pulse_index, time, amplitudes) for block propagation
BlockSnapshot = Tuple[int, float, np.ndarray]


def build_basis(j_max: int, parity: Parity = Parity.BOTH, m: int = 0) -> RotorBasis:
    """
    Build the truncated basis of all J of the requested parity with |m| <= J <= j_max.

    Args:
        j_max: Inclusive truncation
        parity: Parity filter
        m: Magnetic quantum number

    Returns:
        RotorBasis

    Raises:
        InvalidBasisError: j_max < |m|, or nothing survives the parity filter
    """
    parity = Parity(parity)
    if j_max < abs(m):
        raise InvalidBasisError(f"j_max={j_max} is below |m|={abs(m)}")
    j_values = tuple(j for j in range(abs(m), j_max + 1) if parity.allows(j))
    if not j_values:
        raise InvalidBasisError(f"no {parity.value} J in [{abs(m)}, {j_max}]")
    return RotorBasis(j_max=j_max, m=m, parity=parity, j_values=j_values)


def _cos_step(j: int, m: int) -> float:
    """<J-1, m| cos(theta) |J, m>; zero when J-1 < |m|."""
    if j <= abs(m):
        return 0.0
    return math.sqrt((j * j - m * m) / ((2 * j - 1) * (2 * j + 1)))


def cos2_element(j_bra: int, j_ket: int, m: int) -> float:
    """<J', m| cos^2(theta) |J, m> from the cos(theta) ladder coefficients."""
    if j_bra == j_ket:
        return _cos_step(j_ket, m) ** 2 + _cos_step(j_ket + 1, m) ** 2
    if abs(j_bra - j_ket) == 2:
        low = min(j_bra, j_ket)
        return _cos_step(low + 1, m) * _cos_step(low + 2, m)
    return 0.0


def cos2_matrix(basis: RotorBasis) -> np.ndarray:
    """
    Real symmetric matrix of cos^2(theta) over the basis.

    Nonzero entries only for Delta J = 0, +-2.
    """
    j_values = basis.j_values
    size = basis.size
    matrix = np.zeros((size, size), dtype=np.float64)
    for row, j_bra in enumerate(j_values):
        for col in range(row, size):
            j_ket = j_values[col]
            if j_ket - j_bra > 2:
                break
            value = cos2_element(j_bra, j_ket, basis.m)
            matrix[row, col] = value
            matrix[col, row] = value
    return matrix


@lru_cache(maxsize=256)
def _cos2_eigensystem(basis: RotorBasis) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigenvalues and orthogonal eigenvectors of the cos^2 matrix, cached per basis.

    Even and odd J are diagonalized as separate blocks, so eigenvectors never mix parities.
    """
    matrix = cos2_matrix(basis)
    eigenvalues = np.zeros(basis.size, dtype=np.float64)
    eigenvectors = np.zeros((basis.size, basis.size), dtype=np.float64)
    try:
        for remainder in (0, 1):
            block = np.flatnonzero(basis.j_array % 2 == remainder)
            if block.size == 0:
                continue
            values, vectors = linalg.eigh(matrix[np.ix_(block, block)])
            eigenvalues[block] = values
            eigenvectors[np.ix_(block, block)] = vectors
    except (linalg.LinAlgError, ValueError) as exc:
        asymmetry = float(np.max(np.abs(matrix - matrix.T))) if matrix.size else 0.0
        raise EigenDecompositionError(
            f"eigh failed for basis m={basis.m}, parity={basis.parity.value}, "
            f"size={basis.size}, max asymmetry={asymmetry:.2e}: {exc}"
        ) from exc
    eigenvalues.setflags(write=False)
    eigenvectors.setflags(write=False)
    return eigenvalues, eigenvectors


@lru_cache(maxsize=1024)
def _kick_matrix(basis: RotorBasis, strength: float) -> np.ndarray:
    eigenvalues, eigenvectors = _cos2_eigensystem(basis)
    matrix = (eigenvectors * np.exp(1j * strength * eigenvalues)) @ eigenvectors.T
    matrix.setflags(write=False)
    return matrix


def kick_operator(basis: RotorBasis, strength: float) -> KickOperator:
    """
    Unitary U = exp(+i P C) with C the cos^2 matrix, built by eigendecomposition.

    Args:
        basis: Rotor basis
        strength: Kick strength P >= 0

    Returns:
        KickOperator, cached per (basis, P)
    """
    if strength < 0.0 or not math.isfinite(strength):
        raise DomainError(f"kick strength must be finite and >= 0, got {strength}")
    return KickOperator(basis=basis, strength=strength, matrix=_kick_matrix(basis, float(strength)))


def free_phases(basis: RotorBasis, dt: float) -> np.ndarray:
    """
    Diagonal of the free propagator over dt (units of T_rev, negative allowed).

    J(J+1) is always even, so the phase is reduced modulo 2 before scaling by pi;
    dt = 1 is the identity up to rounding.
    """
    if not math.isfinite(dt):
        raise DomainError(f"dt must be finite, got {dt}")
    jj = (basis.j_array * (basis.j_array + 1)).astype(np.float64)
    reduced = np.mod(jj * dt, 2.0)
    return np.exp(-1j * np.pi * reduced)


def _scale_rows(diagonal: np.ndarray, amplitudes: np.ndarray) -> np.ndarray:
    if amplitudes.ndim == 1:
        return diagonal * amplitudes
    return diagonal[:, None] * amplitudes


def _kick_by_eigenbasis(basis: RotorBasis, amplitudes: np.ndarray, strength: float) -> np.ndarray:
    """Apply exp(+i P C) without forming the matrix; used for the many small finite-pulse steps."""
    eigenvalues, eigenvectors = _cos2_eigensystem(basis)
    rotated = eigenvectors.T @ amplitudes
    rotated = _scale_rows(np.exp(1j * strength * eigenvalues), rotated)
    return eigenvectors @ rotated


def apply_kick(state: WavePacket, strength: float) -> WavePacket:
    """Apply one delta kick of strength P."""
    operator = kick_operator(state.basis, strength)
    return WavePacket(basis=state.basis, amplitudes=operator.apply(state.amplitudes))


def evolve_free(state: WavePacket, dt: float) -> WavePacket:
    """Free evolution over dt (units of T_rev)."""
    return WavePacket(basis=state.basis, amplitudes=free_phases(state.basis, dt) * state.amplitudes)


def check_leak(basis: RotorBasis, amplitudes: np.ndarray, threshold: Optional[float]):
    """
    Raise when the top two levels of the basis hold more than threshold population.

    Args:
        basis: Basis the amplitudes live in
        amplitudes: Vector or matrix (one column per state)
        threshold: Leak threshold; None disables the check
    """
    # with two levels or fewer every populated level is a top level
    if threshold is None or basis.size <= 2:
        return
    top = np.abs(amplitudes[-2:]) ** 2
    leaked = top.sum(axis=0)
    worst = int(np.argmax(leaked)) if leaked.ndim else None
    worst_value = float(leaked[worst]) if worst is not None else float(leaked)
    if worst_value > threshold:
        raise TruncationLeakError(worst_value, threshold, basis.j_values[-1], column=worst)


def envelope_fractions(fwhm: float, dt: float) -> Tuple[float, np.ndarray]:
    """
    Split a Gaussian intensity envelope, cut at +-3 FWHM, into equal time steps.

    Args:
        fwhm: Intensity FWHM (T_rev)
        dt: Largest allowed step (T_rev)

    Returns:
        Tuple of (actual step, fraction of the pulse area in each step); fractions sum to 1
    """
    window = 2.0 * ENVELOPE_HALF_WIDTH * fwhm
    steps = max(1, math.ceil(window / dt - 1e-9))
    step = window / steps
    sigma = fwhm / (2.0 * math.sqrt(2.0 * math.log(2.0)))
    edges = -ENVELOPE_HALF_WIDTH * fwhm + step * np.arange(steps + 1)
    cumulative = 0.5 * erf(edges / (sigma * math.sqrt(2.0)))
    fractions = np.diff(cumulative)
    return step, fractions / fractions.sum()


def _check_finite_step(pulse: PulseSpec, dt: float):
    if pulse.fwhm is None:
        raise WrongModelError("pulse has no fwhm; use propagate_delta_train for delta kicks")
    if not dt > 0.0:
        raise DomainError(f"split step must be positive, got {dt}")
    if dt > MAX_STEP_FRACTION * pulse.fwhm:
        raise StepTooCoarseError(
            f"step {dt:.3e} exceeds fwhm/4 = {MAX_STEP_FRACTION * pulse.fwhm:.3e}"
        )


def _finite_pulse_block(basis: RotorBasis, amplitudes: np.ndarray, pulse: PulseSpec, dt: float) -> np.ndarray:
    """Split-step evolution across one pulse window, from center-3 FWHM to center+3 FWHM."""
    _check_finite_step(pulse, dt)
    step, fractions = envelope_fractions(pulse.fwhm, dt)
    half = free_phases(basis, 0.5 * step)
    full = free_phases(basis, step)

    amplitudes = _scale_rows(half, amplitudes)
    for k, fraction in enumerate(fractions):
        if k:
            amplitudes = _scale_rows(full, amplitudes)
        amplitudes = _kick_by_eigenbasis(basis, amplitudes, pulse.strength * float(fraction))
    return _scale_rows(half, amplitudes)


def propagate_finite_pulse(state: WavePacket, pulse: PulseSpec, dt: float) -> WavePacket:
    """
    Evolve a state through one finite-width pulse.

    The state is taken at pulse.time - 3 fwhm and returned at pulse.time + 3 fwhm.
    Each step applies half a step of free phases, an impulsive kick carrying that
    step's share of the envelope, then another half step; shares sum to one so
    the integrated strength is exactly P.

    Args:
        state: Normalized wave packet
        pulse: Pulse with fwhm > 0
        dt: Largest split step, at most fwhm/4

    Returns:
        Evolved WavePacket

    Raises:
        StepTooCoarseError: dt > fwhm/4
    """
    amplitudes = _finite_pulse_block(state.basis, state.amplitudes, pulse, dt)
    return WavePacket(basis=state.basis, amplitudes=amplitudes)


def propagate_block(
    basis: RotorBasis,
    amplitudes: np.ndarray,
    train: PulseTrain,
    record: RecordPolicy = RecordPolicy.EVERY_KICK,
    leak_threshold: Optional[float] = DEFAULT_LEAK_THRESHOLD,
    dt: Optional[float] = None,
) -> List[BlockSnapshot]:
    """
    Propagate one or many states (matrix columns) through a pulse train.

    Delta trains alternate free phases with cached kick matrices. Trains of
    finite pulses evolve freely between pulse windows and split-step inside them.

    Args:
        basis: Shared basis of all columns
        amplitudes: Vector (n,) or matrix (n, k) at time 0
        train: All-delta or all-finite pulse train
        record: Snapshot policy
        leak_threshold: Truncation leak threshold (None disables)
        dt: Split step for finite pulses; default fwhm/4 per pulse

    Returns:
        List of (pulse_index, time, amplitudes); index 0 is the initial state
    """
    record = RecordPolicy(record)
    finite = [not p.is_delta for p in train.pulses]
    if any(finite) and not all(finite):
        raise WrongModelError("train mixes delta kicks and finite pulses")

    current = np.array(amplitudes, dtype=np.complex128)
    snapshots: List[BlockSnapshot] = [(0, 0.0, current.copy())]
    t = 0.0

    for index, pulse in enumerate(train.pulses, start=1):
        if pulse.is_delta:
            current = _scale_rows(free_phases(basis, pulse.time - t), current)
            current = _kick_matrix(basis, float(pulse.strength)) @ current
            t = pulse.time
        else:
            half_window = ENVELOPE_HALF_WIDTH * pulse.fwhm
            start = pulse.time - half_window
            if index > 1 and start < t - 1e-12:
                raise ConfigError(
                    f"pulse {index} window starts at {start:.6f} T_rev, before the previous "
                    f"window ends at {t:.6f}; pulses overlap"
                )
            step = dt if dt is not None else MAX_STEP_FRACTION * pulse.fwhm
            current = _scale_rows(free_phases(basis, start - t), current)
            current = _finite_pulse_block(basis, current, pulse, step)
            t = pulse.time + half_window

        check_leak(basis, current, leak_threshold)
        if record is RecordPolicy.EVERY_KICK or index == len(train):
            snapshots.append((index, pulse.time, current.copy()))

    return snapshots


def propagate_delta_train(
    state: WavePacket,
    train: PulseTrain,
    record: RecordPolicy = RecordPolicy.EVERY_KICK,
    leak_threshold: Optional[float] = DEFAULT_LEAK_THRESHOLD,
) -> List[TrajectorySnapshot]:
    """
    Propagate a wave packet through a train of delta kicks.

    Args:
        state: Normalized initial state at time 0
        train: Delta-kick train
        record: Snapshot policy
        leak_threshold: Truncation leak threshold (None disables)

    Returns:
        Snapshots keyed by pulse index, starting with the initial state

    Raises:
        WrongModelError: a pulse has a finite width
        TruncationLeakError: population reached the top two basis levels
    """
    if not train.is_delta:
        raise WrongModelError(
            "train contains finite-width pulses; use propagate_finite_pulse / propagate_finite_train"
        )
    blocks = propagate_block(state.basis, state.amplitudes, train, record, leak_threshold)
    return _to_snapshots(state.basis, blocks)


def propagate_finite_train(
    state: WavePacket,
    train: PulseTrain,
    dt: Optional[float] = None,
    record: RecordPolicy = RecordPolicy.EVERY_KICK,
    leak_threshold: Optional[float] = DEFAULT_LEAK_THRESHOLD,
) -> List[TrajectorySnapshot]:
    """
    Propagate a wave packet through a train of finite-width pulses.

    Snapshots are taken when each pulse window closes and labeled with the pulse
    center time.
    """
    if not train.pulses:
        return _to_snapshots(state.basis, [(0, 0.0, state.amplitudes.copy())])
    if any(p.is_delta for p in train.pulses):
        raise WrongModelError("train contains delta kicks; use propagate_delta_train")
    blocks = propagate_block(state.basis, state.amplitudes, train, record, leak_threshold, dt=dt)
    return _to_snapshots(state.basis, blocks)


def _to_snapshots(basis: RotorBasis, blocks: List[BlockSnapshot]) -> List[TrajectorySnapshot]:
    return [
        TrajectorySnapshot(pulse_index=index, time=time, state=WavePacket(basis=basis, amplitudes=amps))
        for index, time, amps in blocks
    ]


def resonance_distance(period: float, q_max: int) -> Tuple[int, int, float]:
    """
    Nearest quantum resonance T/T_rev = p/q with q <= q_max.

    Args:
        period: Train period in units of T_rev
        q_max: Highest resonance order considered

    Returns:
        Tuple of (p, q, |period - p/q|)
    """
    if not period > 0.0:
        raise DomainError(f"period must be positive, got {period}")
    if q_max < 1:
        raise DomainError(f"q_max must be >= 1, got {q_max}")
    return nearest_fraction(period, q_max)
