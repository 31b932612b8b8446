"""
Classical cos^2 kicked rotor.

Kick: l -> l - P sin(2 theta). Free flight over a gap of g T_rev:
theta -> (theta + tau l) mod pi with tau = 2 pi g. Energy is B l^2.

Trajectories are generated in fixed-size chunks, each with its own Philox
stream keyed by (seed, chunk index), so results never depend on the
number of worker threads.
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from ..errors import DomainError
from ..models.classical import ClassicalEnsemble, ClassicalSampling, ClassicalState
from ..models.molecules import ThermalEnsemble
from ..models.observables import EnergyTrace
from ..models.rotor import PulseTrain
from ..utils.parallel import ordered_map
from ..utils.units import period_from_tau, tau_from_period
from .observables import energy_trace
from .pulse_trains import uniform_train

logger = logging.getLogger(__name__)

CHUNK_SIZE = 4096
DEFAULT_TRAJECTORIES = 100_000
JACOBIAN_STEP = 1e-6


def classical_kick(state: ClassicalState, strength: float) -> ClassicalState:
    """Impulse from the -P cos^2(theta) potential; theta is unchanged."""
    if strength < 0.0:
        raise DomainError(f"kick strength must be >= 0, got {strength}")
    return ClassicalState(theta=state.theta, l=state.l - strength * math.sin(2.0 * state.theta))


def classical_free(state: ClassicalState, tau: float) -> ClassicalState:
    """Free rotation for an effective Planck constant tau."""
    if tau < 0.0:
        raise DomainError(f"tau must be >= 0, got {tau}")
    return ClassicalState(theta=state.theta + tau * state.l, l=state.l)


def _kick_arrays(theta: np.ndarray, l: np.ndarray, strength: float) -> np.ndarray:
    return l - strength * np.sin(2.0 * theta)


def _free_arrays(theta: np.ndarray, l: np.ndarray, tau: float) -> np.ndarray:
    return np.mod(theta + tau * l, np.pi)


def sampling_from_ensemble(ensemble: ThermalEnsemble) -> ClassicalSampling:
    """Classical analog of a thermal ensemble: same J-level weights."""
    return ClassicalSampling(j_weights=ensemble.level_weights())


def _chunk_sizes(size: int) -> List[int]:
    full, rest = divmod(size, CHUNK_SIZE)
    return [CHUNK_SIZE] * full + ([rest] if rest else [])


def _chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed, chunk_index]))


def _sample_chunk(rng: np.random.Generator, n: int, sampling: ClassicalSampling) -> Tuple[np.ndarray, np.ndarray]:
    theta = rng.uniform(0.0, np.pi, size=n)
    if not sampling.j_weights:
        return theta, np.full(n, float(sampling.l0))

    j = np.fromiter(sampling.j_weights.keys(), dtype=np.int64)
    w = np.fromiter(sampling.j_weights.values(), dtype=np.float64)
    drawn = rng.choice(j, size=n, p=w / w.sum())
    sign = rng.choice(np.array([-1.0, 1.0]), size=n)
    return theta, sign * np.sqrt(drawn * (drawn + 1.0))


def _check_size(size: int):
    if size < 1:
        raise DomainError(f"classical ensemble needs at least one trajectory, got {size}")


def sample_classical_ensemble(size: int, sampling: ClassicalSampling, seed: int = 0) -> ClassicalEnsemble:
    """
    Draw the initial phase-space points.

    The draw is identical to the one used inside classical_train_trace for
    the same (size, sampling, seed).
    """
    _check_size(size)
    thetas, ls = [], []
    for index, n in enumerate(_chunk_sizes(size)):
        theta, l = _sample_chunk(_chunk_rng(seed, index), n, sampling)
        thetas.append(theta)
        ls.append(l)
    return ClassicalEnsemble(theta=np.concatenate(thetas), l=np.concatenate(ls), rng_seed=seed)


def _run_chunk(args) -> np.ndarray:
    """Sums of l^2 and l^4 at t=0 and after every pulse, shape (n_pulses + 1, 2)."""
    index, n, sampling, seed, pulses = args
    theta, l = _sample_chunk(_chunk_rng(seed, index), n, sampling)

    sums = np.empty((len(pulses) + 1, 2))
    l2 = l * l
    sums[0] = (l2.sum(), (l2 * l2).sum())
    previous = 0.0
    for k, pulse in enumerate(pulses):
        theta = _free_arrays(theta, l, tau_from_period(pulse.time - previous))
        l = _kick_arrays(theta, l, pulse.strength)
        previous = pulse.time
        l2 = l * l
        sums[k + 1] = (l2.sum(), (l2 * l2).sum())
    return sums


def classical_train_trace(
    train: PulseTrain,
    size: int = DEFAULT_TRAJECTORIES,
    sampling: Optional[ClassicalSampling] = None,
    seed: int = 0,
    threads: int = 1,
) -> EnergyTrace:
    """
    Mean classical energy <l^2> (units of B) at t=0 and after each pulse of an
    arbitrary delta-kick train, with the standard error of the mean.

    Args:
        train: Pulse train; widths are ignored (impulsive kicks)
        size: Number of trajectories
        sampling: Initial distribution; defaults to l = 0
        seed: Master seed
        threads: Worker count over trajectory chunks

    Returns:
        EnergyTrace with n_pulses + 1 points, pulse_index 0 being the initial state

    Raises:
        DomainError: size < 1
    """
    _check_size(size)
    sampling = sampling or ClassicalSampling()
    pulses = list(train.pulses)

    work = [(index, n, sampling, seed, pulses) for index, n in enumerate(_chunk_sizes(size))]
    logger.info("[Classical] %d trajectories in %d chunks, %d kicks", size, len(work), len(pulses))
    partial = ordered_map(_run_chunk, work, threads)

    total = np.zeros((len(pulses) + 1, 2))
    for sums in partial:
        total += sums
    mean = total[:, 0] / size
    variance = np.maximum(total[:, 1] / size - mean * mean, 0.0)
    stderr = np.sqrt(variance / size)

    indices = list(range(len(pulses) + 1))
    times = [0.0] + [p.time for p in pulses]
    return energy_trace(indices, times, mean, stderr)


def classical_energy_trace(
    size: int,
    sampling: Optional[ClassicalSampling],
    strength: float,
    tau: float,
    n_kicks: int,
    seed: int = 0,
    threads: int = 1,
) -> EnergyTrace:
    """
    Classical energy per kick for a periodic train at effective Planck constant tau.

    Raises:
        DomainError: size < 1, n_kicks < 1, tau <= 0 or negative strength
    """
    if n_kicks < 1:
        raise DomainError(f"n_kicks must be >= 1, got {n_kicks}")
    if tau <= 0.0 or strength < 0.0:
        raise DomainError(f"need tau > 0 and P >= 0, got tau={tau}, P={strength}")
    train = uniform_train(n_kicks, period_from_tau(tau), strength)
    return classical_train_trace(train, size, sampling, seed, threads)


def one_kick_map(theta: float, l: float, strength: float, tau: float) -> Tuple[float, float]:
    """Kick followed by free flight, without the mod-pi reduction."""
    l_new = l - strength * math.sin(2.0 * theta)
    return theta + tau * l_new, l_new


def kick_jacobian(theta: float, l: float, strength: float, tau: float, step: float = JACOBIAN_STEP) -> np.ndarray:
    """Central-difference Jacobian d(theta', l') / d(theta, l) of one_kick_map."""
    jac = np.empty((2, 2))
    for col, (dtheta, dl) in enumerate(((step, 0.0), (0.0, step))):
        plus = one_kick_map(theta + dtheta, l + dl, strength, tau)
        minus = one_kick_map(theta - dtheta, l - dl, strength, tau)
        jac[:, col] = (np.array(plus) - np.array(minus)) / (2.0 * step)
    return jac
