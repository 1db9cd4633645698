import math

import numpy as np
import pytest
from scipy.integrate import quad

from growthfpt import (DanielsBoundary, GeneralBoundary, GrowthParams,
                       OrderError, OUProcess, SimConfig, daniels_boundary_fns,
                       fpt_pdf_gm_closed, gm_spec_G, infinitesimal_coeffs,
                       psi_kernel, r_ratio, simulate_paths, transition_law,
                       wiener_spec)
from growthfpt.growth_curve import _g, h_eval

from conftest import BASE
from test_quadrature import g2_antiderivative_p15

PARAMS = GrowthParams(p=1.5, **BASE)


class TestRRatio:
    def test_wiener(self):
        spec = wiener_spec(1.0)
        for t in (0.5, 1.0, 7.0):
            r, rd = r_ratio(spec, t)
            assert r == pytest.approx(t, rel=1e-14)
            assert rd == pytest.approx(1.0, rel=1e-14)

    def test_ou_clock_increment(self):
        spec = gm_spec_G(OUProcess(PARAMS, 0.1))
        r1, _ = r_ratio(spec, 1.0)
        r0, _ = r_ratio(spec, 0.0)
        expected = 0.01 * (g2_antiderivative_p15(1.0) - g2_antiderivative_p15(0.0))
        assert r1 - r0 == pytest.approx(expected, rel=1e-9)
        assert r1 - r0 == pytest.approx(3.2551e-3, rel=1e-4)

    def test_strictly_increasing_on_random_grids(self):
        rng = np.random.default_rng(8)
        specs = [wiener_spec(0.7), gm_spec_G(OUProcess(PARAMS, 0.1))]
        for spec in specs:
            for _ in range(50):
                ts = np.sort(rng.uniform(0.01, 15.0, size=8))
                rs = [r_ratio(spec, t)[0] for t in ts]
                assert all(b > a for a, b in zip(rs, rs[1:]))


class TestTransitionLaw:
    def test_wiener_values(self):
        law = transition_law(wiener_spec(1.0), 0.0, 0.0, 2.0)
        assert law.mean == 0.0
        assert law.variance == pytest.approx(2.0, rel=1e-14)

    def test_identity_case(self):
        law = transition_law(wiener_spec(1.0), 1.3, 2.0, 2.0)
        assert law.mean == 1.3
        assert law.variance == 0.0
        assert law.cdf(1.2) == 0.0
        assert law.cdf(1.4) == 1.0

    def test_order_error(self):
        with pytest.raises(OrderError):
            transition_law(wiener_spec(1.0), 0.0, 2.0, 1.0)

    def test_pdf_normalised(self):
        law = transition_law(gm_spec_G(OUProcess(PARAMS, 0.1)), 1.0, 0.5, 2.0)
        mass, _ = quad(law.pdf, law.mean - 12.0 * math.sqrt(law.variance),
                       law.mean + 12.0 * math.sqrt(law.variance))
        assert mass == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("spec_name", ["wiener", "ou"])
    def test_chapman_kolmogorov(self, spec_name):
        spec = (wiener_spec(0.8) if spec_name == "wiener"
                else gm_spec_G(OUProcess(PARAMS, 0.1)))
        y, tau, s, t = 0.7, 0.3, 1.1, 2.4
        inner = transition_law(spec, y, tau, s)
        target = transition_law(spec, y, tau, t)
        x = target.mean + 0.7 * math.sqrt(target.variance)

        def integrand(z):
            return transition_law(spec, z, s, t).pdf(x) * inner.pdf(z)

        lo = inner.mean - 12.0 * math.sqrt(inner.variance)
        hi = inner.mean + 12.0 * math.sqrt(inner.variance)
        val, _ = quad(integrand, lo, hi, limit=200)
        assert val == pytest.approx(target.pdf(x), abs=1e-6)

    def test_variance_identity_with_clock(self):
        rng = np.random.default_rng(5)
        spec = gm_spec_G(OUProcess(PARAMS, 0.1))
        for _ in range(25):
            tau = rng.uniform(0.0, 4.0)
            t = tau + rng.uniform(0.01, 4.0)
            law = transition_law(spec, 1.0, tau, t)
            r_t, _ = r_ratio(spec, t)
            r_tau, _ = r_ratio(spec, tau)
            alt = spec.k2(t) ** 2 * (r_t - r_tau)
            assert law.variance == pytest.approx(alt, rel=1e-12)


class TestInfinitesimalCoeffs:
    def test_wiener(self):
        b1, b2 = infinitesimal_coeffs(wiener_spec(0.02), 0.4, 1.7)
        assert b1 == 0.0
        assert b2 == pytest.approx(4e-4, rel=1e-12)

    def test_ou_drift_is_fertility_times_state(self):
        proc = OUProcess(PARAMS, 0.1)
        spec = gm_spec_G(proc)
        for t in (0.3, 1.0, 4.0):
            for x in (-0.5, 1.0, 6.0):
                b1, b2 = infinitesimal_coeffs(spec, x, t)
                assert b1 == pytest.approx(h_eval(PARAMS, t) * x, rel=1e-9)
                assert b2 == pytest.approx(0.01, rel=1e-9)

    def test_drift_matches_transition_mean_slope(self):
        spec = gm_spec_G(OUProcess(PARAMS, 0.1))
        x, t = 2.0, 1.0
        d = 1e-6
        mean_fwd = transition_law(spec, x, t, t + d).mean
        b1, _ = infinitesimal_coeffs(spec, x, t)
        assert (mean_fwd - x) / d == pytest.approx(b1, rel=1e-4)


class TestPsiKernel:
    def test_vanishes_on_closed_form_boundaries(self):
        rng = np.random.default_rng(17)
        specs = [wiener_spec(1.0), gm_spec_G(OUProcess(PARAMS, 0.1))]
        for spec in specs:
            for _ in range(100):
                b = DanielsBoundary(d1=rng.uniform(-2, 2), d2=rng.uniform(-2, 2))
                s, s_dot = daniels_boundary_fns(spec, b)
                tau = rng.uniform(0.05, 4.0)
                t = tau + rng.uniform(0.05, 4.0)
                val = psi_kernel(spec, GeneralBoundary(s=s, s_dot=s_dot),
                                 t, s(tau), tau)
                assert abs(val) < 1e-10

    def test_wiener_constant_boundary_value(self):
        # reduction for k1 = t, k2 = 1, m = 0: -(S - y)/(2 (t - tau)) * pdf
        spec = wiener_spec(1.0)
        bnd = GeneralBoundary(s=lambda t: 1.0, s_dot=lambda t: 0.0)
        val = psi_kernel(spec, bnd, 1.0, 0.0, 0.0)
        phi1 = math.exp(-0.5) / math.sqrt(2.0 * math.pi)
        assert val == pytest.approx(-0.5 * phi1, rel=1e-13)
        assert val == pytest.approx(-0.12098536225957168, rel=1e-12)

    def test_minus_two_psi_is_the_closed_form_density(self):
        spec = gm_spec_G(OUProcess(PARAMS, 0.1))
        d = DanielsBoundary(d1=0.1, d2=1.4)
        s, s_dot = daniels_boundary_fns(spec, d)
        bnd = GeneralBoundary(s=s, s_dot=s_dot)
        x0 = 1.0
        for t in (0.5, 2.0, 8.0):
            closed = fpt_pdf_gm_closed(spec, d, x0, 0.0, t)
            assert -2.0 * psi_kernel(spec, bnd, t, x0, 0.0) == pytest.approx(
                closed, rel=1e-10)

    def test_order_error(self):
        bnd = GeneralBoundary(s=lambda t: 1.0, s_dot=lambda t: 0.0)
        with pytest.raises(OrderError):
            psi_kernel(wiener_spec(1.0), bnd, 1.0, 0.0, 1.0)


class TestCovarianceFactorization:
    @pytest.mark.parametrize("kind", ["lognormal_transformed", "ou"])
    def test_monte_carlo_covariance(self, kind):
        # E[(X(s)-m(s))(X(t)-m(t))] = k1(s) k2(t) for s <= t, within 3 se
        n_paths = 40_000
        if kind == "ou":
            proc = OUProcess(PARAMS, 0.1)
            spec = gm_spec_G(proc)
            cfg = SimConfig(dt=0.5, horizon=2.0, n_paths=n_paths, seed=99)
            ts, paths = simulate_paths(proc, cfg)
            s_idx, t_idx = 2, 4  # times 1.0 and 2.0
            # centre by the conditional mean of the degenerate start; the
            # t0-anchored triple (r(t0) = 0) then gives cov = k1(s) k2(t)
            a = paths[:, s_idx] - PARAMS.x0 * _g(PARAMS, 0.0) / _g(PARAMS, ts[s_idx])
            b = paths[:, t_idx] - PARAMS.x0 * _g(PARAMS, 0.0) / _g(PARAMS, ts[t_idx])
            expected = spec.k1(ts[s_idx]) * spec.k2(ts[t_idx])
        else:
            from growthfpt import LognormalProcess, to_wiener_spec
            proc = LognormalProcess(PARAMS, 0.5)
            spec, transform, _ = to_wiener_spec(proc)
            cfg = SimConfig(dt=0.5, horizon=2.0, n_paths=n_paths, seed=100)
            ts, paths = simulate_paths(proc, cfg)
            s_idx, t_idx = 2, 4
            z0 = transform(PARAMS.x0, 0.0)
            a = np.array([transform(x, ts[s_idx]) for x in paths[:, s_idx]]) - z0
            b = np.array([transform(x, ts[t_idx]) for x in paths[:, t_idx]]) - z0
            # started-at-a-point Wiener: cov = sigma^2 * s
            expected = 0.25 * ts[s_idx]
        prod = a * b
        est = float(np.mean(prod))
        se = float(np.std(prod, ddof=1) / math.sqrt(n_paths))
        assert abs(est - expected) <= 3.0 * se
