"""Tests for populations, energies, Raman lines and localization metrics."""

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from pydantic import ValidationError

from src.errors import DegenerateError, DomainError
from src.models.observables import PopulationDistribution, RamanSpectrum
from src.models.rotor import Parity, WavePacket
from src.services.observables import (
    absorbed_energy,
    alignment_factor,
    break_time_estimate,
    clip_noise_floor,
    degree_of_control,
    diffusion_fit,
    energy_from_array,
    energy_trace,
    participation_ratio,
    populations,
    raman_forward,
    retrieve_populations,
    rotational_energy,
)
from src.services.rotor_core import build_basis


def distribution(entries):
    return PopulationDistribution(entries=entries)


def linear_trace(n, slope=1.0, offset=0.0):
    return energy_trace(range(n), [0.25 * k for k in range(n)], [offset + slope * k for k in range(n)])


class TestPopulations:
    def test_eigenstate(self):
        state = WavePacket.eigenstate(build_basis(5, Parity.ODD), 1)
        assert populations(state).entries == {1: 1.0, 3: 0.0, 5: 0.0}

    def test_equal_superposition(self):
        state = WavePacket.from_amplitudes(build_basis(3, Parity.ODD), [1.0, 1.0])
        assert populations(state).entries == pytest.approx({1: 0.5, 3: 0.5}, abs=1e-15)

    def test_must_sum_to_one(self):
        with pytest.raises(ValidationError):
            distribution({1: 0.5, 3: 0.4})


class TestRotationalEnergy:
    @pytest.mark.parametrize("entries, expected", [
        ({0: 1.0}, 0.0),
        ({1: 1.0}, 2.0),
        ({1: 0.5, 3: 0.5}, 7.0),
    ])
    def test_examples(self, entries, expected):
        assert rotational_energy(distribution(entries)) == pytest.approx(expected, abs=1e-14)

    def test_absorbed(self):
        assert absorbed_energy(distribution({3: 1.0}), distribution({1: 1.0})) == pytest.approx(10.0)

    def test_dense_vector(self):
        assert energy_from_array(np.array([0.0, 0.5, 0.0, 0.5])) == pytest.approx(7.0, abs=1e-14)

    @given(
        real=st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=11, max_size=11),
        imag=st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=11, max_size=11),
        phase=st.floats(min_value=0.0, max_value=2.0 * np.pi),
    )
    def test_global_phase_leaves_energy_unchanged(self, real, imag, phase):
        amplitudes = np.asarray(real) + 1j * np.asarray(imag)
        assume(np.linalg.norm(amplitudes) > 1e-3)
        basis = build_basis(21, Parity.ODD)
        state = WavePacket.from_amplitudes(basis, amplitudes)
        rotated = WavePacket.from_amplitudes(basis, np.exp(1j * phase) * amplitudes)
        assert rotational_energy(populations(rotated)) == pytest.approx(
            rotational_energy(populations(state)), rel=1e-12, abs=1e-12)

    @given(st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=1, max_size=40))
    def test_dense_vector_non_negative(self, weights):
        assert energy_from_array(np.asarray(weights)) >= 0.0


class TestRaman:
    def test_uniform_two_levels(self):
        spectrum = raman_forward(distribution({7: 0.5, 11: 0.5}))
        assert spectrum.intensities == {7: 1.0, 11: 1.0}

    def test_squaring(self):
        spectrum = raman_forward(distribution({7: 0.8, 11: 0.2}))
        assert spectrum.intensities[7] / spectrum.intensities[11] == pytest.approx(16.0, rel=1e-12)

    def test_single_line_inverts_to_delta(self):
        pop = retrieve_populations(RamanSpectrum(intensities={5: 1.0, 7: 0.0}))
        assert pop.entries == {5: 1.0, 7: 0.0}

    def test_ratio_inverts_to_square_root(self):
        pop = retrieve_populations(RamanSpectrum(intensities={1: 1.0, 3: 1.0 / 16.0}))
        assert pop.entries == pytest.approx({1: 0.8, 3: 0.2}, abs=1e-14)

    def test_forward_then_retrieve(self):
        pop = distribution({1: 0.1, 3: 0.6, 5: 0.3})
        assert retrieve_populations(raman_forward(pop)).entries == pytest.approx(pop.entries, abs=1e-12)

    def test_all_zero_spectrum(self):
        with pytest.raises(DegenerateError):
            retrieve_populations({1: 0.0, 3: 0.0})

    def test_negative_intensity(self):
        with pytest.raises(DomainError):
            retrieve_populations({1: 1.0, 3: -0.1})

    def test_negative_intensity_rejected_by_model(self):
        with pytest.raises(ValidationError):
            RamanSpectrum(intensities={1: 1.0, 3: -0.1})

    def test_measured_intensities_on_any_scale(self):
        pop = retrieve_populations({3: 0.25, 1: 4.0})
        assert pop.entries == pytest.approx({1: 0.8, 3: 0.2}, abs=1e-14)

    def test_noise_floor_clips_weak_lines(self):
        pop = distribution({1: 0.002, 3: 0.498, 5: 0.5})
        clipped = clip_noise_floor(raman_forward(pop), pop, floor=0.005)
        assert clipped.intensities[1] == 0.0
        assert max(clipped.intensities.values()) == 1.0

    def test_noise_floor_removing_everything(self):
        pop = distribution({1: 0.5, 3: 0.5})
        with pytest.raises(DegenerateError):
            clip_noise_floor(raman_forward(pop), pop, floor=0.6)


class TestDegreeOfControl:
    def test_equal_energies(self):
        assert degree_of_control(3.0, 3.0) == 0.0

    def test_arithmetic(self):
        assert degree_of_control(1.25, 0.75) == pytest.approx(0.5)

    def test_antisymmetric(self):
        assert degree_of_control(2.0, 5.0) == pytest.approx(-degree_of_control(5.0, 2.0))

    def test_non_positive_sum(self):
        with pytest.raises(DomainError):
            degree_of_control(0.0, 0.0)


class TestParticipationRatio:
    def test_delta(self):
        assert participation_ratio(distribution({3: 1.0, 5: 0.0})) == 1.0

    @pytest.mark.parametrize("n", [2, 4, 7])
    def test_uniform(self, n):
        pop = distribution({2 * k + 1: 1.0 / n for k in range(n)})
        assert participation_ratio(pop) == pytest.approx(n, rel=1e-12)


class TestBreakTime:
    def test_constant_trace(self):
        trace = energy_trace(range(6), range(6), [4.0] * 6)
        assert break_time_estimate(trace) == 0

    def test_linear_growth_never_breaks(self):
        assert break_time_estimate(linear_trace(12)) is None

    def test_saturating_trace(self):
        energies = [0.0, 3.0, 6.0, 9.0, 12.0] + [15.0] * 7
        trace = energy_trace(range(12), range(12), energies)
        assert break_time_estimate(trace, slope_tolerance=0.05) == 5

    def test_too_short(self):
        with pytest.raises(DomainError):
            break_time_estimate(linear_trace(3))


class TestDiffusionFit:
    def test_exact_line(self):
        slope, r_squared = diffusion_fit(linear_trace(20, slope=2.5, offset=1.0))
        assert slope == pytest.approx(2.5)
        assert r_squared == pytest.approx(1.0)

    def test_start_index(self):
        energies = [0.0] * 5 + [float(k) for k in range(10)]
        slope, _ = diffusion_fit(energy_trace(range(15), range(15), energies), start_index=5)
        assert slope == pytest.approx(1.0)

    def test_needs_two_points(self):
        with pytest.raises(DomainError):
            diffusion_fit(linear_trace(5), start_index=4)


def test_energy_trace_absorbed_is_relative_to_first_point():
    trace = energy_trace([0, 1, 2], [0.0, 0.2, 0.4], [2.0, 5.0, 4.0])
    assert list(trace.absorbed) == [0.0, 3.0, 2.0]
    assert trace.final_energy == 4.0


def test_alignment_of_isotropic_state():
    state = WavePacket.eigenstate(build_basis(4, Parity.EVEN), 0)
    assert alignment_factor(state) == pytest.approx(1.0 / 3.0, abs=1e-15)
