"""Additive-noise extension of the growth curve.

The state solves dX = h(t) X dt + sigma dW with state space all of R (the
process may legitimately go negative).  Conditionally on X(tau) = y the state
at t is Gaussian:

    mean      M = y * g(tau) / g(t)
    variance  V = sigma^2 * g(t)^{-2} * int_tau^t g(u)^2 du

The variance is the state-transition-matrix form of the SDE solution
X(t) = x0 g(t0)/g(t) + sigma * int (g(u)/g(t)) dW(u); composing two Gaussian
steps reproduces it exactly, which pins the form down independently of any
printed formula (and the Monte Carlo suite re-checks it).

As a Gauss-Markov triple the process has m = 0, k2 = 1/g and
k1 = sigma^2 * k2(t) * int_{t0}^t g(u)^2 du, so r = sigma^2 * int g^2 plays
the role of the intrinsic clock.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, InvalidParams, OrderError
from .gm_core import GMSpec, TransitionLaw
from .growth_curve import GrowthParams, _core, _g, h_eval
from .quadrature import DEFAULT_QUADRATURE, integrate_adaptive


@dataclass(frozen=True)
class OUProcess:
    params: GrowthParams
    sigma: float

    def __post_init__(self) -> None:
        if not (self.sigma > 0.0):
            raise InvalidParams(f"sigma must be > 0, got {self.sigma}")


@lru_cache(maxsize=8192)
def _int_g2(params: GrowthParams, a: float, b: float) -> float:
    """int_a^b g(u)^2 du, cached per (params, a, b).

    The upper limit is clipped just below a finite domain end so panel
    endpoints never land on the undefined side of t_star.
    """
    t_star = _core(params).t_star
    if math.isfinite(t_star):
        b = min(b, t_star * (1.0 - 1e-12))
        a = min(a, b)
    return integrate_adaptive(lambda u: _g(params, u) ** 2, a, b,
                              DEFAULT_QUADRATURE)


def _check_times(params: GrowthParams, tau: float, t: float) -> None:
    if t < tau:
        raise OrderError(f"t={t} < tau={tau}")
    if tau < params.t0:
        raise OrderError(f"tau={tau} precedes t0={params.t0}")
    ts = _core(params).t_star
    if t >= ts:
        raise DomainError(f"t={t} at or beyond the domain end t_star={ts}")


def transition_law_G(proc: OUProcess, y: float, tau: float, t: float) -> TransitionLaw:
    """Gaussian transition law of the additive-noise process."""
    _check_times(proc.params, tau, t)
    gt = _g(proc.params, t)
    mean = y * _g(proc.params, tau) / gt
    if t == tau:
        return TransitionLaw(mean=y, variance=0.0)
    var = proc.sigma ** 2 * _int_g2(proc.params, tau, t) / (gt * gt)
    return TransitionLaw(mean=mean, variance=var)


def gm_spec_G(proc: OUProcess) -> GMSpec:
    """Gauss-Markov triple of the additive-noise process.

    k2 = 1/g with k2' = h/g, k1 = sigma^2 k2(t) P(t) where P is the prefix
    integral of g^2 from t0, and k1' follows from the product rule plus
    P' = g^2.  All pieces are closed-form except P, which is quadrature.
    """
    params = proc.params
    s2 = proc.sigma * proc.sigma
    t0 = params.t0

    def k2(t: float) -> float:
        return 1.0 / _g(params, t)

    def k2_dot(t: float) -> float:
        return h_eval(params, t) / _g(params, t)

    def k1(t: float) -> float:
        return s2 * k2(t) * _int_g2(params, t0, t)

    def k1_dot(t: float) -> float:
        g = _g(params, t)
        return s2 * (k2_dot(t) * _int_g2(params, t0, t) + g)

    return GMSpec(
        m=lambda t: 0.0,
        m_dot=lambda t: 0.0,
        k1=k1,
        k1_dot=k1_dot,
        k2=k2,
        k2_dot=k2_dot,
    )


def sample_transition_G(proc: OUProcess, y: float, tau: float, t: float,
                        rng: np.random.Generator) -> float:
    """Exact Gaussian draw of X(t) given X(tau) = y."""
    law = transition_law_G(proc, y, tau, t)
    if law.variance == 0.0:
        return law.mean
    return law.mean + math.sqrt(law.variance) * rng.standard_normal()
