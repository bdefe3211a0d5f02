"""Tests for scheme dynamics, closed forms and variance formulas."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eoentangle.errors import InstabilityError
from eoentangle.gaussian import (
    GaussianState,
    evolve_exact,
    mode_matrix_to_quadrature,
    propagator,
    steady_state,
    trajectory,
)
from eoentangle.metrics import epr_variance, photon_number
from eoentangle.schemes import (
    THREE_MODE_BASIS,
    SchemeConfig,
    adiabatic_reduction,
    cascaded_schedule,
    cascaded_segment_matrices,
    decoupling_time,
    dissipative_dynamics,
    dissipative_steady_variance,
    dissipative_transient_variance,
    effective_decay,
    initial_state,
    parallel_closed_form,
    parallel_dynamics,
    parallel_trajectory,
    scaled_time,
    squeezing_parameters,
)


def cascaded(r=0.5, tau2=math.pi / 2 + 2, **kw):
    return SchemeConfig(kind="cascaded", r=r, tau1=math.pi / 2, tau2=tau2, **kw)


class TestSchemeConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            SchemeConfig(kind="serial", r=0.5)
        with pytest.raises(ValueError):
            SchemeConfig(kind="parallel", r=-0.1)
        with pytest.raises(ValueError):
            SchemeConfig(kind="parallel", r=0.5, k1=-1.0)
        with pytest.raises(ValueError):
            SchemeConfig(kind="parallel", r=0.5, n_th=(0, -1, 0))
        with pytest.raises(ValueError):
            SchemeConfig(kind="cascaded", r=0.5, tau1=2.0, tau2=1.0)

    def test_initial_occupations_default_to_bath(self):
        cfg = SchemeConfig(kind="parallel", r=0.5, n_th=(0, 0.3, 0.1))
        s = initial_state(cfg)
        assert [photon_number(s, i) for i in range(3)] == pytest.approx([0, 0.3, 0.1])
        s = initial_state(cfg.with_(initial_occupations=(0, 0, 0)))
        assert photon_number(s, 1) == pytest.approx(0.0)


class TestCascaded:
    def test_composite_block_form(self):
        _, _, comp = cascaded_segment_matrices(cascaded())
        zeta = 1.0
        expected = np.array(
            [
                [-1, 0, 0],
                [0, -math.cosh(zeta), -math.sinh(zeta)],
                [0, math.sinh(zeta), math.cosh(zeta)],
            ]
        )
        np.testing.assert_allclose(comp, expected, atol=1e-12)

    def test_r_zero_is_double_beam_splitter(self):
        M1, M2, comp = cascaded_segment_matrices(cascaded(r=0.0, tau2=3.0))
        np.testing.assert_allclose(M2, np.eye(3))
        np.testing.assert_allclose(comp, M1 @ M1)

    def test_schedule_propagator_matches_composite(self):
        cfg = cascaded(r=0.7, tau2=3.1)
        comp = cascaded_segment_matrices(cfg)[2]
        P = cascaded_schedule(cfg).propagator()
        np.testing.assert_allclose(P, mode_matrix_to_quadrature(comp, THREE_MODE_BASIS), atol=1e-10)

    def test_lossless_endpoint_variance(self):
        cfg = cascaded(r=0.5, tau2=math.pi / 2 + 2)
        out = cascaded_schedule(cfg).evolve(GaussianState.vacuum(3))
        assert epr_variance(out, (1, 2)) == pytest.approx(2 * math.exp(-2.0), abs=1e-12)
        # optical mode decouples and returns to vacuum
        np.testing.assert_allclose(out.covariance[:2, :2], 0.5 * np.eye(2), atol=1e-12)

    def test_ode_and_exact_agree(self):
        cfg = cascaded(r=0.77, tau2=2.4, k0=0.5, k1=0.002, k2=0.002, n_th=(0, 0.3, 0.1))
        sched = cascaded_schedule(cfg)
        a = sched.evolve(initial_state(cfg), method="exact")
        b = sched.evolve(initial_state(cfg), method="ode")
        np.testing.assert_allclose(a.covariance, b.covariance, atol=1e-7)

    def test_uncoupled_decay(self):
        cfg = SchemeConfig(kind="cascaded", r=0.0, tau1=1.0, tau2=2.0, k0=0.1, k1=0.1, k2=0.1)
        # red periods still couple a1 and b1, so check the isolated b2 mode only
        s0 = GaussianState.thermal([1.0, 1.0, 1.0])
        out = cascaded_schedule(cfg).evolve(s0)
        assert photon_number(out, 2) == pytest.approx(math.exp(-2 * 0.1 * 3.0), rel=1e-10)

    def test_trajectory_crosses_segments(self):
        cfg = cascaded(r=0.6, tau2=3.0, k0=0.2)
        sched = cascaded_schedule(cfg)
        s0 = initial_state(cfg)
        times = np.linspace(0, sched.duration, 9)
        states = sched.trajectory(s0, times)
        np.testing.assert_allclose(states[-1].covariance, sched.evolve(s0).covariance, atol=1e-12)
        with pytest.raises(ValueError):
            sched.trajectory(s0, [sched.duration + 1])

    def test_bad_method(self):
        with pytest.raises(ValueError):
            cascaded_schedule(cascaded()).evolve(GaussianState.vacuum(3), method="euler")


class TestParallel:
    def test_closed_form_identity_at_zero(self):
        np.testing.assert_allclose(parallel_closed_form(0.0, 0.5), np.eye(3), atol=1e-15)

    def test_decoupling_block(self):
        M = parallel_closed_form(math.pi / math.sqrt(0.75), 0.5)
        np.testing.assert_allclose(M[1:, 1:], [[-5 / 3, -4 / 3], [4 / 3, 5 / 3]], atol=1e-12)
        np.testing.assert_allclose(M[0], [-1, 0, 0], atol=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.0, 0.95), st.floats(0.0, 15.0))
    def test_propagator_matches_closed_form(self, r, tau):
        P = propagator(parallel_dynamics(SchemeConfig(kind="parallel", r=r)), tau)
        Q = mode_matrix_to_quadrature(parallel_closed_form(tau, r), THREE_MODE_BASIS)
        assert np.abs(P - Q).max() < 1e-9 * max(1.0, np.abs(Q).max())

    def test_series_branch_continuity(self):
        # just below and above the switch point ε = 1e-6
        lo = parallel_closed_form(1.0, math.sqrt(1 - 0.99e-12))
        hi = parallel_closed_form(1.0, math.sqrt(1 - 1.01e-12))
        np.testing.assert_allclose(lo, hi, atol=1e-6)

    def test_r_to_one_limit(self):
        tau = 1.0
        M = parallel_closed_form(tau, 1 - 1e-9)
        limit = np.array(
            [[1, 1j * tau, 1j * tau], [1j * tau, 1 - tau**2 / 2, -(tau**2) / 2],
             [-1j * tau, tau**2 / 2, 1 + tau**2 / 2]]
        )
        np.testing.assert_allclose(M, limit, atol=1e-6)
        np.testing.assert_allclose(M, parallel_closed_form(tau, 1 - 1e-4), atol=1e-3)

    def test_r_above_one_continues(self):
        M = parallel_closed_form(2.0, 1.5)
        P = propagator(parallel_dynamics(SchemeConfig(kind="parallel", r=1.5)), 2.0)
        np.testing.assert_allclose(P, mode_matrix_to_quadrature(M, THREE_MODE_BASIS), atol=1e-10)

    def test_r_zero_keeps_b2_as_pure_decay(self):
        cfg = SchemeConfig(kind="parallel", r=0.0, k2=0.3, n_th=(0, 0, 0.2))
        out = evolve_exact(parallel_dynamics(cfg), GaussianState.thermal([0, 0, 1.0]), 2.0)
        expected = 0.2 + (1.0 - 0.2) * math.exp(-2 * 0.3 * 2.0)
        assert photon_number(out, 2) == pytest.approx(expected, rel=1e-12)

    def test_lossy_optical_number_stays_positive(self):
        cfg = SchemeConfig(kind="parallel", r=0.5, k0=0.1, k1=0.1, k2=0.1, n_th=(0, 0.1, 0.1))
        times = np.linspace(0, 3 * decoupling_time(0.5), 301)[1:]
        n = [photon_number(s, 0) for s in parallel_trajectory(cfg, times)]
        assert min(n) > 0

    def test_closed_form_trajectory_matches_generic(self):
        cfg = SchemeConfig(kind="parallel", r=0.8, k0=0.05, k1=0.05, k2=0.05, n_th=(0, 0.3, 1.0))
        times = np.linspace(0, 12, 7)
        a = parallel_trajectory(cfg, times)
        b = trajectory(parallel_dynamics(cfg), initial_state(cfg), times)
        for x, y in zip(a, b):
            np.testing.assert_allclose(x.covariance, y.covariance, atol=1e-9)

    @pytest.mark.parametrize("nth", [0.0, 0.2, 1.0])
    def test_thermal_endpoint(self, nth):
        # V = 2(n1 + n2 + 1) e^{-2ξ} for thermal inputs at the decoupling time
        cfg = SchemeConfig(kind="parallel", r=0.5, n_th=(0, nth, nth))
        out = evolve_exact(parallel_dynamics(cfg), initial_state(cfg), decoupling_time(0.5))
        assert epr_variance(out, (1, 2)) == pytest.approx(2 * (2 * nth + 1) / 9, abs=1e-10)

    def test_decoupling_time_unstable(self):
        with pytest.raises(InstabilityError):
            decoupling_time(1.0)


class TestDissipative:
    def test_gamma(self):
        assert effective_decay(SchemeConfig(kind="dissipative", r=0.5, k0=10)) == pytest.approx(0.15)

    def test_gamma_r_zero(self):
        assert effective_decay(SchemeConfig(kind="dissipative", r=0.0, k0=4)) == pytest.approx(0.5)

    def test_unstable(self):
        with pytest.raises(InstabilityError):
            effective_decay(SchemeConfig(kind="dissipative", r=1.0, k0=10))

    def test_r_zero_keeps_microwaves_in_vacuum(self):
        s = steady_state(dissipative_dynamics(SchemeConfig(kind="dissipative", r=0.0, k0=10)))
        assert epr_variance(s, (2, 3)) == pytest.approx(2.0, abs=1e-12)

    def test_reduced_model_tracks_full_model(self):
        cfg = SchemeConfig(kind="dissipative", r=0.5, k0=10.0)
        red, gamma = adiabatic_reduction(cfg)
        np.testing.assert_allclose(np.diag(red.drift), -(1 - 0.25) / 10 * np.ones(4), atol=1e-12)
        xs = np.linspace(0, 5, 21)
        taus = xs * cfg.k0 / (1 - cfg.r**2)
        full = trajectory(dissipative_dynamics(cfg), initial_state(cfg), taus)
        reduced = trajectory(red, GaussianState.vacuum(2), taus)
        gap = max(abs(epr_variance(f, (2, 3)) - epr_variance(s, (0, 1))) for f, s in zip(full, reduced))
        assert gap < 5 / cfg.k0
        assert epr_variance(steady_state(red), (0, 1)) == pytest.approx(2 / 3, abs=1e-12)

    def test_transient_initial_value(self):
        cfg = SchemeConfig(kind="dissipative", r=0.5, k0=10, k1=0.01, k2=0.01, n_th=(0, 0.2, 0.2))
        assert dissipative_transient_variance(0.0, 0.0, cfg) == pytest.approx(2 * (2 * 0.2 + 1))

    @pytest.mark.parametrize("r", [0.1, 0.5, 0.9])
    def test_transient_ideal_limit(self, r):
        cfg = SchemeConfig(kind="dissipative", r=r, k0=10)
        v = dissipative_transient_variance(60.0, None, cfg)
        assert v == pytest.approx(2 * (1 - r) / (1 + r), abs=1e-12)

    def test_transient_matches_steady_formula(self):
        cfg = SchemeConfig(kind="dissipative", r=0.5, k0=10, k1=0.0075, k2=0.0075, n_th=(0, 0.01, 0.01))
        assert cfg.k1 / effective_decay(cfg) == pytest.approx(0.05)
        v = dissipative_transient_variance(1e4, None, cfg)
        assert v == pytest.approx(dissipative_steady_variance(cfg), abs=1e-9)

    def test_transient_checks_consistency(self):
        cfg = SchemeConfig(kind="dissipative", r=0.5, k0=10)
        with pytest.raises(ValueError):
            dissipative_transient_variance(1.0, 1.0, cfg)
        with pytest.raises(ValueError):
            dissipative_transient_variance(1.0, None, cfg.with_(k1=0.1))
        x = scaled_time(np.array([1.0, 2.0]), cfg)
        assert dissipative_transient_variance(x, np.array([1.0, 2.0]), cfg).shape == (2,)

    def test_steady_formula_limits(self):
        cfg = SchemeConfig(kind="dissipative", r=0.5, k0=10, n_th=(0, 0.3, 0.1))
        assert dissipative_steady_variance(cfg) == pytest.approx(2 / 3)
        huge = cfg.with_(k1=1e9, k2=1e9)
        assert dissipative_steady_variance(huge) == pytest.approx(0.3 + 0.1 + 2, rel=1e-6)

    def test_steady_formula_thermal_term(self):
        # The formula's bath term matches a Lyapunov solve only for empty baths;
        # the physical large-k0 value is [V0 + 4α(n1 + n2 + 1)] / (1 + 2α).
        cfg = SchemeConfig(kind="dissipative", r=0.5, k0=1000, k1=0.01, k2=0.01)
        alpha = cfg.k1 / effective_decay(cfg)
        for n in (0.0, 0.5):
            hot = cfg.with_(n_th=(0, n, n))
            lyapunov = epr_variance(steady_state(dissipative_dynamics(hot)), (2, 3))
            physical = (2 / 3 + 4 * alpha * (2 * n + 1)) / (1 + 2 * alpha)
            assert lyapunov == pytest.approx(physical, rel=5e-3)
            if n == 0:
                assert dissipative_steady_variance(hot) == pytest.approx(lyapunov, rel=5e-3)
            else:
                assert dissipative_steady_variance(hot) < lyapunov - 0.5

    def test_steady_formula_monotone(self):
        cfg = SchemeConfig(kind="dissipative", r=0.5, k0=10, k1=0.01, k2=0.01, n_th=(0, 0.1, 0.1))
        v = dissipative_steady_variance(cfg)
        assert dissipative_steady_variance(cfg.with_(k1=0.02, k2=0.02)) > v
        assert dissipative_steady_variance(cfg.with_(n_th=(0, 0.2, 0.1))) > v

    def test_steady_formula_needs_equal_decays(self):
        cfg = SchemeConfig(kind="dissipative", r=0.5, k0=10, k1=0.01, k2=0.02)
        with pytest.raises(ValueError):
            dissipative_steady_variance(cfg)


class TestSqueezingParameters:
    def test_parallel(self):
        rep = squeezing_parameters(SchemeConfig(kind="parallel", r=0.5))
        assert rep.parameter == pytest.approx(math.atanh(0.8))
        assert math.cosh(rep.parameter) == pytest.approx(5 / 3)
        assert rep.ideal_variance == pytest.approx(2 / 9)

    def test_dissipative(self):
        rep = squeezing_parameters(SchemeConfig(kind="dissipative", r=0.5, k0=10))
        assert rep.ideal_variance == pytest.approx(2 / 3)

    def test_cascaded_r_zero(self):
        rep = squeezing_parameters(cascaded(r=0.0, tau2=5.0))
        assert rep.parameter == 0.0 and rep.ideal_variance == 2.0

    def test_unstable(self):
        with pytest.raises(InstabilityError):
            squeezing_parameters(SchemeConfig(kind="parallel", r=1.0))
