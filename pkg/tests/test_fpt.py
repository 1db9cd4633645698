import math

import numpy as np
import pytest

from growthfpt import (AffineGMBoundary, DanielsBoundary, DensityCurve,
                       DomainError, ExpBoundary, GeneralBoundary, GridError,
                       GrowthParams, LognormalProcess, OrderError, OUProcess,
                       SimConfig, StartOnBoundary, estimate_fpt,
                       fpt_pdf_gm_closed, fpt_pdf_lognormal, fpt_pdf_ou,
                       integrate_adaptive, to_wiener_spec, volterra_fpt,
                       wiener_spec)
from growthfpt.fpt import affine_gm_boundary_fns, exp_boundary_fns
from growthfpt.growth_curve import _g

from conftest import BASE

PARAMS = GrowthParams(p=1.5, **BASE)
PHI_1 = math.exp(-0.5) / math.sqrt(2.0 * math.pi)


def mass_to_infinity(fn, t_hi=1e7, n_seg=140):
    safe = lambda t: fn(t) if t > 0.0 else 0.0
    edges = np.concatenate(([0.0], np.geomspace(1e-6, t_hi, n_seg)))
    return sum(integrate_adaptive(safe, a, b) for a, b in zip(edges[:-1], edges[1:]))


class TestClosedFormGM:
    def test_wiener_level_crossing(self):
        # |S| / sqrt(2 pi t^3) * exp(-S^2 / 2t) at S = 1, t = 1
        spec = wiener_spec(1.0)
        val = fpt_pdf_gm_closed(spec, DanielsBoundary(0.0, 1.0), 0.0, 0.0, 1.0)
        assert val == pytest.approx(PHI_1, rel=1e-13)
        for t in (0.3, 2.0, 7.0):
            direct = abs(1.0) / math.sqrt(2.0 * math.pi * t ** 3) * math.exp(
                -1.0 / (2.0 * t))
            assert fpt_pdf_gm_closed(spec, DanielsBoundary(0.0, 1.0),
                                     0.0, 0.0, t) == pytest.approx(direct, rel=1e-12)

    def test_vanishes_at_time_origin(self):
        spec = wiener_spec(1.0)
        assert fpt_pdf_gm_closed(spec, DanielsBoundary(0.0, 1.0),
                                 0.0, 0.0, 1e-6) < 1e-300

    def test_downcrossing_symmetry(self):
        spec = wiener_spec(1.0)
        up = fpt_pdf_gm_closed(spec, DanielsBoundary(0.0, 1.0), 0.0, 0.0, 1.3)
        down = fpt_pdf_gm_closed(spec, DanielsBoundary(0.0, -1.0), 0.0, 0.0, 1.3)
        assert up == pytest.approx(down, rel=1e-13)

    def test_start_on_boundary(self):
        with pytest.raises(StartOnBoundary):
            fpt_pdf_gm_closed(wiener_spec(1.0), DanielsBoundary(0.0, 1.0),
                              1.0, 0.0, 1.0)

    def test_order_error(self):
        with pytest.raises(OrderError):
            fpt_pdf_gm_closed(wiener_spec(1.0), DanielsBoundary(0.0, 1.0),
                              0.0, 1.0, 1.0)

    def test_matches_lognormal_after_transform(self):
        proc = LognormalProcess(PARAMS, 0.02)
        bnd = ExpBoundary(A=0.8, B=0.0)
        spec, transform, _ = to_wiener_spec(proc)
        # image of the boundary is affine: intercept ln A, slope B + sigma^2/2
        s2 = proc.sigma ** 2
        d1 = (bnd.B + 0.5 * s2) / s2
        d2 = math.log(bnd.A)
        z0 = transform(1.0, 0.0)
        for t in (5.0, 30.0, 41.4, 120.0):
            a = fpt_pdf_lognormal(proc, bnd, 1.0, 0.0, t)
            b = fpt_pdf_gm_closed(spec, DanielsBoundary(d1=d1, d2=d2), z0, 0.0, t)
            assert a == pytest.approx(b, rel=1e-10)

    def test_transform_route_with_offset_start_and_tilt(self):
        # t0 > 0 with a tilted boundary exercises every anchoring convention
        params = GrowthParams(gamma=0.5, n=1.0, p=1.5, k=20.0, x0=2.0, t0=1.0)
        proc = LognormalProcess(params, 0.03)
        bnd = ExpBoundary(A=0.8 * 2.0 * math.exp(-0.002), B=0.002)
        spec, transform, _ = to_wiener_spec(proc)
        s2 = proc.sigma ** 2
        d1 = (bnd.B + 0.5 * s2) / s2
        d2 = math.log(bnd.A)
        z0 = transform(2.0, 1.0)
        fns = exp_boundary_fns(proc, bnd)
        assert fns.s(1.0) == pytest.approx(bnd.A * math.exp(bnd.B), rel=1e-12)
        for t in (2.0, 10.0, 60.0):
            a = fpt_pdf_lognormal(proc, bnd, 2.0, 1.0, t)
            b = fpt_pdf_gm_closed(spec, DanielsBoundary(d1=d1, d2=d2), z0, 1.0, t)
            assert a == pytest.approx(b, rel=1e-10)


class TestClosedFormLognormal:
    def test_total_mass_absorbing_drift(self):
        proc = LognormalProcess(PARAMS, 0.02)
        mass = mass_to_infinity(
            lambda t: fpt_pdf_lognormal(proc, ExpBoundary(A=0.8), 1.0, 0.0, t))
        assert mass == pytest.approx(1.0, abs=1e-4)

    def test_total_mass_defective_case(self):
        proc = LognormalProcess(PARAMS, 0.02)
        mass = mass_to_infinity(
            lambda t: fpt_pdf_lognormal(proc, ExpBoundary(A=1.2), 1.0, 0.0, t))
        assert mass == pytest.approx(1.0 / 1.2, abs=1e-3)

    def test_mode_location(self):
        # hitting time of a drifted Brownian level: mode 2 (sqrt(9+a^2)-3)/s^2
        proc = LognormalProcess(PARAMS, 0.02)
        bnd = ExpBoundary(A=0.8)
        ts = np.linspace(20.0, 70.0, 5001)
        vals = [fpt_pdf_lognormal(proc, bnd, 1.0, 0.0, float(t)) for t in ts]
        mode = float(ts[int(np.argmax(vals))])
        a = -math.log(0.8)
        expected = 2.0 * (math.sqrt(9.0 + a * a) - 3.0) / 0.02 ** 2
        assert mode == pytest.approx(expected, abs=0.02)
        assert abs(mode - 41.39) <= 0.1

    def test_p_invariance(self):
        vals = []
        for p in (1.5, 1.0, 0.75, 2.0 / 3.0, 0.25):
            proc = LognormalProcess(GrowthParams(p=p, **BASE), 0.02)
            vals.append(fpt_pdf_lognormal(proc, ExpBoundary(A=0.8), 1.0, 0.0, 40.0))
        assert max(vals) - min(vals) <= 1e-12 * max(vals)

    def test_scale_invariance(self):
        proc = LognormalProcess(GrowthParams(gamma=0.5, n=1.0, p=1.5, k=200.0,
                                             x0=5.0, t0=0.0), 0.02)
        ref = LognormalProcess(PARAMS, 0.02)
        for t in (10.0, 41.0, 90.0):
            a = fpt_pdf_lognormal(proc, ExpBoundary(A=0.8 * 5.0), 5.0, 0.0, t)
            b = fpt_pdf_lognormal(ref, ExpBoundary(A=0.8), 1.0, 0.0, t)
            assert a == pytest.approx(b, rel=1e-12)

    def test_boundary_functions_track_the_mean_proportion(self):
        proc = LognormalProcess(PARAMS, 0.02)
        fns = exp_boundary_fns(proc, ExpBoundary(A=0.8))
        for t in (0.0, 1.0, 10.0):
            expected = 0.8 * _g(PARAMS, 0.0) / _g(PARAMS, t)
            assert fns.s(t) == pytest.approx(expected, rel=1e-12)


class TestClosedFormOU:
    def test_nonnegative_and_vanishing_at_origin(self):
        proc = OUProcess(PARAMS, 0.1)
        bnd = AffineGMBoundary(A=0.8 * _g(PARAMS, 0.0))
        assert fpt_pdf_ou(proc, bnd, 1.0, 0.0, 1e-5) >= 0.0
        assert fpt_pdf_ou(proc, bnd, 1.0, 0.0, 1e-5) < 1e-300
        for t in (0.5, 2.0, 20.0):
            assert fpt_pdf_ou(proc, bnd, 1.0, 0.0, t) >= 0.0

    def test_mass_matches_monte_carlo_hit_fraction(self):
        proc = OUProcess(PARAMS, 0.1)
        nu = 0.8
        bnd = AffineGMBoundary(A=nu * 1.0 * _g(PARAMS, 0.0))
        mass = integrate_adaptive(
            lambda t: fpt_pdf_ou(proc, bnd, 1.0, 0.0, t) if t > 0 else 0.0,
            0.0, 50.0)
        cfg = SimConfig(dt=0.1, horizon=50.0, n_paths=100_000, seed=31)
        sample = estimate_fpt(proc, bnd, cfg)
        frac = sample.hit_times.size / sample.n_paths
        assert abs(mass - frac) < 1e-3

    def test_domain_error_at_ceiling(self):
        params = GrowthParams(p=0.25, **BASE)
        proc = OUProcess(params, 0.1)
        bnd = AffineGMBoundary(A=0.8 * _g(params, 0.0))
        with pytest.raises(DomainError):
            fpt_pdf_ou(proc, bnd, 1.0, 0.0, 30.0)

    def test_agrees_with_volterra(self):
        proc = OUProcess(PARAMS, 0.1)
        bnd = AffineGMBoundary(A=0.8 * _g(PARAMS, 0.0))
        from growthfpt import gm_spec_G
        grid = np.linspace(0.0, 20.0, 2001)
        curve = volterra_fpt(gm_spec_G(proc),
                             affine_gm_boundary_fns(proc, bnd, 0.0),
                             1.0, 0.0, grid)
        closed = np.array([fpt_pdf_ou(proc, bnd, 1.0, 0.0, t) for t in grid[1:]])
        peak = closed.max()
        mask = closed > 0.01 * peak
        rel = np.abs(curve.values[1:][mask] - closed[mask]) / closed[mask]
        assert rel.max() < 0.01

    def test_offset_start_and_tilt_agree_with_volterra(self):
        from growthfpt import gm_spec_G
        params = GrowthParams(gamma=0.5, n=1.0, p=1.5, k=20.0, x0=2.0, t0=1.0)
        proc = OUProcess(params, 0.1)
        bnd = AffineGMBoundary(A=0.8 * 2.0 * _g(params, 1.0), B=0.05)
        grid = np.linspace(1.0, 21.0, 2001)
        curve = volterra_fpt(gm_spec_G(proc),
                             affine_gm_boundary_fns(proc, bnd, 1.0),
                             2.0, 1.0, grid)
        closed = np.array([fpt_pdf_ou(proc, bnd, 2.0, 1.0, t) for t in grid[1:]])
        assert np.max(np.abs(curve.values[1:] - closed)) < 1e-12


class TestVolterraSolver:
    def test_closed_form_boundary_is_exact(self):
        spec = wiener_spec(1.0)
        grid = np.linspace(0.0, 5.0, 801)
        bnd = GeneralBoundary(s=lambda t: 1.0, s_dot=lambda t: 0.0)
        curve = volterra_fpt(spec, bnd, 0.0, 0.0, grid)
        closed = np.array([fpt_pdf_gm_closed(spec, DanielsBoundary(0.0, 1.0),
                                             0.0, 0.0, t) for t in grid[1:]])
        assert np.max(np.abs(curve.values[1:] - closed)) < 1e-10

    def test_wiener_constant_boundary_accuracy(self):
        spec = wiener_spec(1.0)
        grid = np.linspace(0.0, 5.0, 4001)
        bnd = GeneralBoundary(s=lambda t: 1.0, s_dot=lambda t: 0.0)
        curve = volterra_fpt(spec, bnd, 0.0, 0.0, grid)
        closed = np.array([fpt_pdf_gm_closed(spec, DanielsBoundary(0.0, 1.0),
                                             0.0, 0.0, t) for t in grid[1:]])
        peak = closed.max()
        mask = closed > 0.01 * peak
        rel = np.abs(curve.values[1:][mask] - closed[mask]) / closed[mask]
        assert rel.max() < 0.01

    def test_convergence_under_step_halving(self):
        # non-closed-form boundary so the integral term actually contributes;
        # errors against a much finer reference must drop at least first-order
        spec = wiener_spec(1.0)
        bnd = GeneralBoundary(s=lambda t: 1.0 + 0.25 * math.sin(t),
                              s_dot=lambda t: 0.25 * math.cos(t))
        sols = {}
        for K in (500, 1000, 8000):
            grid = np.linspace(0.0, 5.0, K + 1)
            sols[K] = volterra_fpt(spec, bnd, 0.0, 0.0, grid)
        ref = sols[8000]
        e = {}
        for K in (500, 1000):
            interp = np.interp(sols[K].times, ref.times, ref.values)
            e[K] = float(np.trapezoid(np.abs(sols[K].values - interp),
                                      sols[K].times))
        ratio = e[500] / e[1000]
        assert ratio >= 1.8  # at least first-order decrease
        assert e[1000] < 1e-5

    def test_downcrossing_matches_reflected_problem(self):
        spec = wiener_spec(1.0)
        grid = np.linspace(0.0, 4.0, 801)
        below = GeneralBoundary(s=lambda t: -1.0, s_dot=lambda t: 0.0)
        curve = volterra_fpt(spec, below, 0.0, 0.0, grid)
        closed = np.array([fpt_pdf_gm_closed(spec, DanielsBoundary(0.0, -1.0),
                                             0.0, 0.0, t) for t in grid[1:]])
        assert np.max(np.abs(curve.values[1:] - closed)) < 1e-10

    def test_grid_and_start_validation(self):
        spec = wiener_spec(1.0)
        bnd = GeneralBoundary(s=lambda t: 1.0, s_dot=lambda t: 0.0)
        with pytest.raises(GridError):
            volterra_fpt(spec, bnd, 0.0, 0.0, np.array([0.0, 0.1, 0.3]))
        with pytest.raises(StartOnBoundary):
            volterra_fpt(spec, bnd, 1.0, 0.0, np.linspace(0.0, 1.0, 11))


class TestDensityCurve:
    def test_mass_and_nonnegativity(self):
        ts = np.linspace(0.0, 5.0, 101)
        vals = np.exp(-ts)
        curve = DensityCurve(times=ts, values=vals)
        assert curve.mass <= 1.0 + 1e-6
        assert np.all(curve.values >= 0.0)

    def test_rejects_significantly_negative_values(self):
        ts = np.linspace(0.0, 1.0, 11)
        vals = np.full(11, 1.0)
        vals[5] = -0.1
        with pytest.raises(DomainError):
            DensityCurve(times=ts, values=vals)

    def test_rejects_mass_above_one(self):
        ts = np.linspace(0.0, 1.0, 11)
        with pytest.raises(DomainError):
            DensityCurve(times=ts, values=np.full(11, 1.5))

    def test_cumulative_matches_mass(self):
        ts = np.linspace(0.0, 5.0, 101)
        curve = DensityCurve(times=ts, values=np.exp(-ts))
        cum = curve.cumulative()
        assert cum[-1] == pytest.approx(curve.mass, rel=1e-12)
        assert np.all(np.diff(cum) >= 0.0)
