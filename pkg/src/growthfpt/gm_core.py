"""Gauss-Markov processes via their covariance factorization.

A non-singular Gaussian process with mean m(t) is Markovian exactly when its
covariance factors as c(s, t) = k1(s) * k2(t) for s <= t, with
r(t) = k1(t)/k2(t) strictly increasing and k1*k2 > 0 on the interior.  The
triple (m, k1, k2) plus analytic derivatives is everything the transition
laws, the infinitesimal coefficients, and the first-passage machinery need,
so it is the representation used throughout the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

from .errors import OrderError

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)

TimeFn = Callable[[float], float]


@dataclass(frozen=True)
class GMSpec:
    """A Gauss-Markov process as evaluable (m, k1, k2) with derivatives.

    Derivatives are supplied analytically by whoever builds the spec; nothing
    here differentiates numerically, which keeps the first-passage kernels
    smooth.  The callables must be pure and immutable after construction.
    """

    m: TimeFn
    m_dot: TimeFn
    k1: TimeFn
    k1_dot: TimeFn
    k2: TimeFn
    k2_dot: TimeFn


def wiener_spec(sigma: float) -> GMSpec:
    """Driftless Wiener process with variance sigma^2 per unit time:
    m = 0, k1 = sigma^2 * t, k2 = 1."""
    s2 = sigma * sigma
    return GMSpec(
        m=lambda t: 0.0,
        m_dot=lambda t: 0.0,
        k1=lambda t: s2 * t,
        k1_dot=lambda t: s2,
        k2=lambda t: 1.0,
        k2_dot=lambda t: 0.0,
    )


@dataclass(frozen=True)
class DanielsBoundary:
    """Boundary s(t) = m(t) + d1*k1(t) + d2*k2(t).

    On boundaries of this family the first-passage kernel vanishes
    identically and the passage density is available in closed form.
    """

    d1: float
    d2: float


def daniels_boundary_fns(spec: GMSpec, b: DanielsBoundary) -> Tuple[TimeFn, TimeFn]:
    """(s, s') callables for a Daniels-type boundary on the given process."""
    def s(t: float) -> float:
        return spec.m(t) + b.d1 * spec.k1(t) + b.d2 * spec.k2(t)

    def s_dot(t: float) -> float:
        return spec.m_dot(t) + b.d1 * spec.k1_dot(t) + b.d2 * spec.k2_dot(t)

    return s, s_dot


def r_ratio(spec: GMSpec, t: float) -> Tuple[float, float]:
    """The intrinsic clock r(t) = k1/k2 and its derivative r'(t)."""
    k1, k2 = spec.k1(t), spec.k2(t)
    k1d, k2d = spec.k1_dot(t), spec.k2_dot(t)
    r = k1 / k2
    r_dot = (k1d * k2 - k1 * k2d) / (k2 * k2)
    return r, r_dot


@dataclass(frozen=True)
class TransitionLaw:
    """Normal transition law of X(t) given X(tau) = y."""

    mean: float
    variance: float

    def pdf(self, x: float) -> float:
        if self.variance == 0.0:
            return math.inf if x == self.mean else 0.0
        z = (x - self.mean)
        return math.exp(-z * z / (2.0 * self.variance)) / (
            _SQRT2PI * math.sqrt(self.variance))

    def cdf(self, x: float) -> float:
        if self.variance == 0.0:
            return 0.0 if x < self.mean else 1.0
        z = (x - self.mean) / math.sqrt(2.0 * self.variance)
        return 0.5 * (1.0 + math.erf(z))


def transition_law(spec: GMSpec, y: float, tau: float, t: float) -> TransitionLaw:
    """Conditional law of X(t) given X(tau) = y, for tau <= t.

    mean = m(t) + (k2(t)/k2(tau)) * (y - m(tau))
    var  = k2(t) * [k1(t) - (k2(t)/k2(tau)) * k1(tau)]
         = k2(t)^2 * [r(t) - r(tau)]
    """
    if t < tau:
        raise OrderError(f"transition requested backwards: t={t} < tau={tau}")
    k2t, k2tau = spec.k2(t), spec.k2(tau)
    ratio = k2t / k2tau
    mean = spec.m(t) + ratio * (y - spec.m(tau))
    var = k2t * (spec.k1(t) - ratio * spec.k1(tau))
    if t == tau:
        var = 0.0
    return TransitionLaw(mean=mean, variance=max(var, 0.0))


def infinitesimal_coeffs(spec: GMSpec, x: float, t: float) -> Tuple[float, float]:
    """Drift and infinitesimal variance of the process at (x, t):

    B1 = m'(t) + (x - m(t)) * k2'(t)/k2(t),   B2 = k2(t)^2 * r'(t).
    """
    k2 = spec.k2(t)
    b1 = spec.m_dot(t) + (x - spec.m(t)) * spec.k2_dot(t) / k2
    _, r_dot = r_ratio(spec, t)
    b2 = k2 * k2 * r_dot
    return b1, b2


def psi_kernel(spec: GMSpec, boundary, t: float, y: float, tau: float) -> float:
    """Kernel of the first-passage Volterra equation at (t | y, tau).

    `boundary` is any object exposing s(t) and s_dot(t).  The value is

        { [s'(t) - m'(t)]/2
          - [s(t) - m(t)]/2 * [k1'(t)k2(tau) - k2'(t)k1(tau)] / Dn
          - [y - m(tau)]/2  * [k2'(t)k1(t)  - k2(t)k1'(t)]  / Dn } * f(s(t), t | y, tau)

    with Dn = k1(t)k2(tau) - k2(t)k1(tau).  It vanishes identically when the
    boundary is of Daniels type and y sits on the boundary at tau.
    """
    if tau >= t:
        raise OrderError(f"kernel needs tau < t, got tau={tau}, t={t}")
    st = boundary.s(t)
    sdt = boundary.s_dot(t)
    k1t, k2t = spec.k1(t), spec.k2(t)
    k1tau, k2tau = spec.k1(tau), spec.k2(tau)
    k1dt, k2dt = spec.k1_dot(t), spec.k2_dot(t)
    mt, mtau = spec.m(t), spec.m(tau)
    dn = k1t * k2tau - k2t * k1tau
    bracket = (0.5 * (sdt - spec.m_dot(t))
               - 0.5 * (st - mt) * (k1dt * k2tau - k2dt * k1tau) / dn
               - 0.5 * (y - mtau) * (k2dt * k1t - k2t * k1dt) / dn)
    law = transition_law(spec, y, tau, t)
    return bracket * law.pdf(st)
