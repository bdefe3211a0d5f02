"""Tests for entanglement diagnostics."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eoentangle.gaussian import GaussianState, two_mode_squeezed_vacuum
from eoentangle.metrics import (
    DUAN_THRESHOLD,
    EprPair,
    duan_verdict,
    epr_variance,
    photon_number,
    tms_reference_variance,
)


class TestEprVariance:
    def test_vacuum(self):
        assert epr_variance(GaussianState.vacuum(2), EprPair(0, 1)) == pytest.approx(2.0)

    @pytest.mark.parametrize("xi", [0.1, 0.5, 1.5])
    def test_two_mode_squeezed_vacuum(self, xi):
        assert epr_variance(two_mode_squeezed_vacuum(xi), (0, 1)) == pytest.approx(2 * math.exp(-2 * xi))

    def test_thermal_modes(self):
        s = GaussianState.thermal([0.7, 0.7])
        assert epr_variance(s, (0, 1)) == pytest.approx(2 * (2 * 0.7 + 1))

    def test_pair_validation(self):
        with pytest.raises(ValueError):
            EprPair(1, 1)
        with pytest.raises(IndexError):
            epr_variance(GaussianState.vacuum(2), (0, 2))


class TestDuanVerdict:
    def test_entangled(self):
        assert duan_verdict(2 / 9)

    def test_boundary(self):
        assert not duan_verdict(DUAN_THRESHOLD)

    def test_hot_resonators(self):
        assert not duan_verdict(2 * (2 * 6.4 + 1))

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            duan_verdict(-0.1)


class TestPhotonNumber:
    def test_vacuum(self):
        assert photon_number(GaussianState.vacuum(1), 0) == 0.0

    def test_thermal(self):
        assert photon_number(GaussianState.thermal([2.5]), 0) == pytest.approx(2.5)

    @pytest.mark.parametrize("mode", [0, 1])
    def test_tms(self, mode):
        xi = 0.8
        assert photon_number(two_mode_squeezed_vacuum(xi), mode) == pytest.approx(math.sinh(xi) ** 2)

    def test_mean_excluded_by_default(self):
        s = GaussianState(np.array([1.0, 1.0]), 0.5 * np.eye(2))
        assert photon_number(s, 0) == 0.0
        assert photon_number(s, 0, include_mean=True) == pytest.approx(1.0)

    def test_range(self):
        with pytest.raises(IndexError):
            photon_number(GaussianState.vacuum(1), 1)


class TestReferenceVariance:
    def test_values(self):
        assert tms_reference_variance(0.0) == 2.0
        assert tms_reference_variance(math.log(3)) == pytest.approx(2 / 9)
        assert tms_reference_variance(math.atanh(0.5)) == pytest.approx(2 / 3)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.0, 50.0), min_size=2, max_size=2))
def test_product_thermal_never_entangled(nth):
    v = epr_variance(GaussianState.thermal(nth), (0, 1))
    assert v >= 2.0 - 1e-12
    assert not duan_verdict(v)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 3.0), st.lists(st.floats(-10.0, 10.0), min_size=4, max_size=4))
def test_displacement_invariance(xi, shift):
    s = two_mode_squeezed_vacuum(xi)
    moved = GaussianState(s.mean + np.array(shift), s.covariance)
    assert epr_variance(moved, (0, 1)) == pytest.approx(epr_variance(s, (0, 1)), abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-3, 5.0))
def test_tms_always_entangled(xi):
    assert duan_verdict(epr_variance(two_mode_squeezed_vacuum(xi), (0, 1)))


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 3.0), st.floats(0.0, 3.0))
def test_photon_number_non_negative(xi, n):
    s = GaussianState.thermal([n, n])
    assert photon_number(s, 0) >= 0
    assert photon_number(two_mode_squeezed_vacuum(xi), 1) >= 0
