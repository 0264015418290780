import json
import math

import numpy as np
import pytest

from barrier_sta import (
    ControllerConfig,
    SinusoidSchedule,
    TablePerturbation,
    barrier_window_constants,
    h_alpha,
    monitor_decrease,
    run_simulation,
    sigma_sat,
    v_inside,
    v_outside,
)


class TestSigmaSat:
    def test_linear_zone(self):
        assert sigma_sat(0.5) == 0.5

    def test_saturates(self):
        assert sigma_sat(3.0) == 1.0
        assert sigma_sat(-2.0) == -1.0

    def test_zero(self):
        assert sigma_sat(0.0) == 0.0


class TestOutsideLyapunov:
    def test_reference_point(self):
        ev = v_outside(s=1.0, phi=0.0, k1=1.0, k2=1.0, gamma=2.0, alpha=0.5)
        assert math.isclose(ev.psi, 1.0, rel_tol=1e-12)
        assert math.isclose(ev.v_value, 5.0, rel_tol=1e-12)
        assert math.isclose(ev.lambda_min, (3.0 - math.sqrt(5.0)) / 2.0, rel_tol=1e-12)
        assert math.isclose(ev.lambda_max, (3.0 + math.sqrt(5.0)) / 2.0, rel_tol=1e-12)

    def test_vanishes_at_origin(self):
        ev = v_outside(s=0.0, phi=0.0, k1=1.0, k2=1.0, gamma=2.0, alpha=0.5)
        assert ev.v_value == 0.0

    def test_positive_definite_over_gain_grid(self):
        for gamma in (0.1, 1.0, 2.0, 10.0):
            for k1 in np.logspace(-3, 3, 121):
                ev = v_outside(0.5, 0.2, float(k1), 1.0, gamma, 0.5)
                assert ev.lambda_min > 0.0
                assert ev.lambda_max >= ev.lambda_min

    def test_eigenvalue_sandwich_at_random_states(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            s = float(rng.uniform(-3.0, 3.0))
            phi = float(rng.uniform(-5.0, 5.0))
            k1 = float(rng.uniform(1e-2, 1e2))
            k2 = float(rng.uniform(0.0, 1e2))
            gamma = float(rng.uniform(0.1, 10.0))
            alpha = float(rng.uniform(0.1, 1.0))
            ev = v_outside(s, phi, k1, k2, gamma, alpha)
            z_sq = abs(s) ** (2.0 * alpha) + ev.psi ** 2
            core = ev.v_value - 2.0 * gamma * k2 * abs(s)
            slack = 1e-9 * max(1.0, abs(core), ev.lambda_max * z_sq)
            assert ev.lambda_min * z_sq - slack <= core <= ev.lambda_max * z_sq + slack

    def test_preconditions(self):
        with pytest.raises(ValueError):
            v_outside(1.0, 0.0, 0.0, 1.0, 2.0, 0.5)
        with pytest.raises(ValueError):
            v_outside(1.0, 0.0, 1.0, -1.0, 2.0, 0.5)
        with pytest.raises(ValueError):
            v_outside(1.0, 0.0, 1.0, 1.0, 0.0, 0.5)


class TestInsideLyapunov:
    def test_origin_is_zero(self):
        assert v_inside(0.0, 0.0, 0.5, 2.0).v_value == 0.0

    def test_reference_point(self):
        ev = v_inside(1.0, 0.0, 0.5, 2.0)
        assert math.isclose(ev.v_value, math.log(2.0), rel_tol=1e-12)

    def test_sandwich_values_at_unit_point(self):
        # independently computed at 50-digit precision for c_zeta=0.5, L=2
        ev = v_inside(1.0, 1.0, 0.5, 2.0)
        assert math.isclose(ev.lower, 1.019860385419959, rel_tol=1e-12)
        assert math.isclose(ev.upper, 1.8664339756999316, rel_tol=1e-12)
        assert ev.lower <= ev.v_value <= ev.upper
        # saturated same-sign corner sits exactly on the lower bound
        assert ev.v_value == ev.lower
        assert ev.f_factor == 1.0

    def test_upper_bound_attained_on_opposing_saturated_corner(self):
        ev = v_inside(1.0, -1.0, 0.5, 2.0)
        assert ev.v_value == ev.upper
        assert ev.f_factor == 2.0

    def test_f_factor_selection(self):
        assert v_inside(1.0, -0.5, 0.5, 2.0).f_factor == 2.0
        assert v_inside(1.0, 0.5, 0.5, 2.0).f_factor == 1.0
        assert v_inside(0.0, 0.7, 0.5, 2.0).f_factor == 2.0  # sgn(0) * y2 == 0

    def test_sandwich_holds_at_random_points(self):
        rng = np.random.default_rng(20240817)
        for _ in range(10_000):
            y1 = float(rng.uniform(-10.0, 10.0))
            y2 = float(rng.uniform(-5.0, 5.0))
            c = float(rng.uniform(0.05, 5.0))
            l_alpha = float(rng.uniform(1.01, 5.0))
            ev = v_inside(y1, y2, c, l_alpha)
            slack = 1e-12 * max(1.0, abs(ev.v_value))
            assert ev.lower - slack <= ev.v_value <= ev.upper + slack

    def test_preconditions(self):
        with pytest.raises(ValueError):
            v_inside(1.0, 1.0, 0.0, 2.0)
        with pytest.raises(ValueError):
            v_inside(1.0, 1.0, 0.5, 1.0)


class TestWindowConstants:
    def test_defaults_ordering(self):
        c_theta, c_zeta = barrier_window_constants(0.1, 0.5)
        assert c_theta >= c_zeta > 0.0

    def test_matches_well_depth_at_endpoints(self):
        c_theta, c_zeta = barrier_window_constants(0.1, 0.5, theta=0.01, zeta=0.09)
        assert c_theta == h_alpha(0.01, 0.1, 0.5)
        assert c_zeta == h_alpha(0.09, 0.1, 0.5)

    def test_monotone_ordering_on_random_windows(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            eps = float(rng.choice([1e-4, 1e-2, 1e-1]))
            theta, zeta = sorted(rng.uniform(1e-3 * eps, 0.999 * eps, size=2))
            if theta == zeta:
                continue
            c_theta, c_zeta = barrier_window_constants(eps, 0.5, float(theta), float(zeta))
            assert c_theta >= c_zeta

    def test_invalid_window(self):
        with pytest.raises(ValueError):
            barrier_window_constants(0.1, 0.5, theta=0.09, zeta=0.01)


class TestMonitorDecrease:
    def test_zero_perturbation_descent_is_monotone(self):
        cfg = ControllerConfig(s0=1.0, horizon=0.2)
        traj = run_simulation(cfg, TablePerturbation(samples=((0.0, 0.0),)))
        report = monitor_decrease(traj, cfg.gamma, cfg.alpha, skip_initial=0)
        assert report.decrease_fraction == 1.0
        assert report.violations == ()

    def test_all_inside_run_has_no_dynamic_pairs(self):
        cfg = ControllerConfig(s0=0.0, v0=0.0, horizon=0.05)
        traj = run_simulation(cfg, TablePerturbation(samples=((0.0, 0.0),)))
        report = monitor_decrease(traj, cfg.gamma, cfg.alpha)
        assert report.decrease_fraction is None
        assert report.mode_occupancy == {"A1": 1.0}
        assert report.switch_counts["total"] == 0
        assert report.reach_time == 0.0

    def test_reach_time_and_occupancy(self):
        cfg = ControllerConfig(s0=1.0, horizon=0.3)
        traj = run_simulation(cfg, SinusoidSchedule())
        report = monitor_decrease(traj, cfg.gamma, cfg.alpha)
        assert report.reach_time is not None
        assert 0.0 < report.reach_time < 0.3
        assert abs(sum(report.mode_occupancy.values()) - 1.0) < 1e-12
        assert report.switch_counts["total"] >= 1

    def test_json_round_trip_keys(self):
        cfg = ControllerConfig(s0=1.0, horizon=0.05)
        traj = run_simulation(cfg, SinusoidSchedule())
        report = monitor_decrease(traj, cfg.gamma, cfg.alpha)
        data = json.loads(report.to_json())
        assert set(data) == {"decrease_fraction", "violations", "reach_time",
                             "mode_occupancy", "switch_counts"}

    def test_empty_trajectory_rejected(self):
        class Empty:
            records = ()
            config_echo = (ControllerConfig(), None)

        with pytest.raises(ValueError):
            monitor_decrease(Empty(), 2.0, 0.5)
