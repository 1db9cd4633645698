import math

import numpy as np
import pytest
from scipy.integrate import quad

from growthfpt import (GrowthParams, LognormalProcess, NonPositiveState,
                       infinitesimal_coeffs, sample_transition_L,
                       to_wiener_spec, transition_law, transition_law_L,
                       x_eval)

from conftest import BASE

PARAMS = GrowthParams(p=1.5, **BASE)
PROC = LognormalProcess(PARAMS, 0.02)


class TestTransitionLaw:
    def test_identity_case(self):
        law = transition_law_L(PROC, 2.0, 1.0, 1.0)
        assert law.log_mean == pytest.approx(math.log(2.0), rel=1e-14)
        assert law.log_variance == 0.0
        assert law.variance == 0.0

    def test_conditional_mean_tracks_the_curve(self):
        for t in (0.5, 1.0, 4.0, 15.0):
            law = transition_law_L(PROC, PARAMS.x0, 0.0, t)
            assert law.mean == pytest.approx(x_eval(PARAMS, t), rel=1e-12)

    def test_reference_moments_at_t_one(self):
        law = transition_law_L(PROC, 1.0, 0.0, 1.0)
        mean = x_eval(PARAMS, 1.0)
        assert mean == pytest.approx(3.7377146529512184, rel=1e-12)
        assert law.mean == pytest.approx(mean, rel=1e-12)
        assert law.variance == pytest.approx(mean * mean * math.expm1(4e-4),
                                             rel=1e-12)
        assert law.variance == pytest.approx(5.589e-3, rel=1e-3)

    def test_nonpositive_state_rejected(self):
        with pytest.raises(NonPositiveState):
            transition_law_L(PROC, 0.0, 0.0, 1.0)

    def test_cdf_is_proper(self):
        law = transition_law_L(PROC, 1.0, 0.0, 2.0)
        assert law.cdf(1e-12) < 1e-10
        assert law.cdf(1e9) == pytest.approx(1.0, abs=1e-10)
        # strictly increasing across the representable bulk of the law
        sd = math.sqrt(law.log_variance)
        xs = np.exp(np.linspace(law.log_mean - 6.0 * sd, law.log_mean + 6.0 * sd, 50))
        cs = [law.cdf(float(x)) for x in xs]
        assert all(b > a for a, b in zip(cs, cs[1:]))

    def test_tower_property(self):
        # E[E[X(t) | X(s)] | y, tau] = E[X(t) | y, tau] by quadrature over X(s)
        y, tau, s, t = 1.0, 0.0, 0.7, 1.6
        mid = transition_law_L(PROC, y, tau, s)

        def integrand(x):
            return transition_law_L(PROC, x, s, t).mean * mid.pdf(x)

        lo = math.exp(mid.log_mean - 10.0 * math.sqrt(mid.log_variance))
        hi = math.exp(mid.log_mean + 10.0 * math.sqrt(mid.log_variance))
        val, _ = quad(integrand, lo, hi, limit=200)
        assert val == pytest.approx(transition_law_L(PROC, y, tau, t).mean,
                                    rel=1e-8)


class TestWienerRepresentation:
    def test_origin_maps_to_zero(self):
        _, transform, _ = to_wiener_spec(PROC)
        assert transform(1.0, 0.0) == pytest.approx(0.0, abs=1e-14)

    def test_round_trip(self):
        rng = np.random.default_rng(2)
        _, transform, inverse = to_wiener_spec(PROC)
        for _ in range(50):
            x = rng.uniform(0.05, 30.0)
            t = rng.uniform(0.0, 20.0)
            assert inverse(transform(x, t), t) == pytest.approx(x, rel=1e-12)

    def test_spec_coefficients(self):
        spec, _, _ = to_wiener_spec(PROC)
        b1, b2 = infinitesimal_coeffs(spec, 0.3, 2.0)
        assert b1 == 0.0
        assert b2 == pytest.approx(PROC.sigma ** 2, rel=1e-14)

    def test_nonpositive_state_rejected(self):
        _, transform, _ = to_wiener_spec(PROC)
        with pytest.raises(NonPositiveState):
            transform(-1.0, 0.5)

    def test_density_change_of_variables(self):
        # pdf of X equals the Wiener pdf of the transformed state over x
        spec, transform, _ = to_wiener_spec(PROC)
        y, tau, t = 1.0, 0.0, 2.0
        law_x = transition_law_L(PROC, y, tau, t)
        z_tau = transform(y, tau)
        law_z = transition_law(spec, z_tau, tau, t)
        for x in (2.0, 3.5, 5.0, 8.0):
            lhs = law_x.pdf(x)
            rhs = law_z.pdf(transform(x, t)) / x
            assert lhs == pytest.approx(rhs, rel=1e-10)


class TestSampling:
    def test_vanishing_noise_is_deterministic(self):
        proc = LognormalProcess(PARAMS, 1e-12)
        rng = np.random.default_rng(0)
        val = sample_transition_L(proc, 1.0, 0.0, 1.0, rng)
        assert val == pytest.approx(x_eval(PARAMS, 1.0), rel=1e-9)

    def test_moments_of_draws(self):
        rng = np.random.default_rng(123)
        n = 200_000
        law = transition_law_L(PROC, 1.0, 0.0, 1.0)
        zs = rng.standard_normal(n)
        draws = np.exp(law.log_mean + math.sqrt(law.log_variance) * zs)
        se = math.sqrt(law.variance / n)
        assert abs(float(np.mean(draws)) - law.mean) <= 3.0 * se
        # log-draws are exactly normal: skewness within MC error of zero
        logs = np.log(draws)
        sk = float(np.mean((logs - logs.mean()) ** 3) / logs.std() ** 3)
        assert abs(sk) <= 3.0 * math.sqrt(6.0 / n)

    def test_sampler_agrees_with_law(self):
        rng = np.random.default_rng(7)
        draws = np.array([sample_transition_L(PROC, 1.0, 0.0, 1.0, rng)
                          for _ in range(20_000)])
        law = transition_law_L(PROC, 1.0, 0.0, 1.0)
        se = math.sqrt(law.variance / draws.size)
        assert abs(float(draws.mean()) - law.mean) <= 3.0 * se
