"""Tests for rational approximation, unit conversion and the ordered parallel map."""

import math
import time

import pytest
from hypothesis import given, strategies as st

from src.utils.parallel import ordered_map
from src.utils.rationals import nearest_fraction
from src.utils.units import (
    period_from_tau,
    revival_period_ps,
    stochasticity,
    tau_from_period,
    thermal_energy_in_b,
)


class TestNearestFraction:
    def test_integer(self):
        assert nearest_fraction(1.0, 4) == (1, 1, 0.0)

    def test_lowest_terms(self):
        assert nearest_fraction(0.5, 4) == (1, 2, 0.0)

    def test_third(self):
        p, q, distance = nearest_fraction(0.34, 4)
        assert (p, q) == (1, 3)
        assert distance == pytest.approx(0.34 - 1.0 / 3.0)

    @given(st.floats(min_value=0.0, max_value=5.0), st.integers(min_value=1, max_value=12))
    def test_distance_is_minimal(self, value, q_max):
        p, q, distance = nearest_fraction(value, q_max)
        assert q <= q_max
        assert distance == pytest.approx(abs(value - p / q))
        for qq in range(1, q_max + 1):
            assert distance <= abs(value - round(value * qq) / qq) + 1e-15


class TestUnits:
    def test_oxygen_revival_period(self):
        assert revival_period_ps(1.4377) == pytest.approx(11.6, rel=0.005)

    def test_tau_round_trip(self):
        assert period_from_tau(tau_from_period(0.267)) == pytest.approx(0.267, rel=1e-15)

    def test_stochasticity(self):
        assert stochasticity(1.7, 2.0) == pytest.approx(3.4)

    def test_thermal_energy(self):
        # k_B / (h c) = 0.695 cm^-1 per kelvin
        assert thermal_energy_in_b(1.0, 1.0) == pytest.approx(0.695, rel=1e-3)


class TestOrderedMap:
    def test_inline(self):
        assert ordered_map(lambda x: x * x, [3, 1, 2]) == [9, 1, 4]

    def test_threads_keep_order(self):
        def slow_first(x):
            time.sleep(0.02 if x == 0 else 0.0)
            return x

        assert ordered_map(slow_first, range(8), threads=4) == list(range(8))

    def test_empty(self):
        assert ordered_map(math.sqrt, [], threads=4) == []
