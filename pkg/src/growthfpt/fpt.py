"""First-passage-time densities through a single time-dependent boundary.

Closed forms exist for three boundary families:

  * Daniels-type boundaries m + d1*k1 + d2*k2 on any Gauss-Markov process,
    where the Volterra kernel vanishes identically;
  * exponential-form boundaries A*exp{B t + int_{t0}^t h} for the
    multiplicative-noise process (an affine boundary after the log
    transform);
  * affine-in-(k1, k2) boundaries (A + B*sigma^2*int g^2)/g for the
    additive-noise process (a Daniels boundary of its Gauss-Markov triple).

Everything else goes through a product-integration solver for the
second-kind Volterra equation

    g(t) = -2*Psi(t | x0, t0) + 2 * int_{t0}^t g(tau) * Psi(t | s(tau), tau) dtau,

discretized with left rectangles so the kernel diagonal is never touched;
the scheme is first-order accurate in the step (faster in practice because
the kernel itself vanishes on the diagonal).

The closed form is stated for a start strictly below the boundary; starts
above are handled by reflecting state space, which is what the absolute
values in the formulas implement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (DomainError, GridError, OrderError, StartOnBoundary)
from .gm_core import (DanielsBoundary, GMSpec, TimeFn, daniels_boundary_fns,
                      r_ratio, transition_law)
from .growth_curve import _core, _g, h_eval
from .process_lognormal import LognormalProcess
from .process_ou import OUProcess, _int_g2, gm_spec_G

_SQRT2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class GeneralBoundary:
    """A C^1 boundary given by its value and derivative callables."""

    s: TimeFn
    s_dot: TimeFn


@dataclass(frozen=True)
class ExpBoundary:
    """Boundary A * exp{B t + int_{t0}^t h(xi) dxi} for the lognormal process.

    With B = 0 and A = nu * x0 this is nu times the conditional mean of the
    process started at (x0, t0), i.e. a fixed percentage of the mean curve;
    s(t0) = A * exp(B t0).
    """

    A: float
    B: float = 0.0

    def __post_init__(self) -> None:
        if not (self.A > 0.0):
            raise DomainError(f"boundary scale A must be > 0, got {self.A}")


@dataclass(frozen=True)
class AffineGMBoundary:
    """Boundary (1/g(t)) * {A + B*sigma^2*int_{t0}^t g(u)^2 du} for the
    additive-noise process; a Daniels boundary of its Gauss-Markov triple.

    With B = 0 and A = nu * x0 * g(t0) this is nu times the conditional mean.
    """

    A: float
    B: float = 0.0


@dataclass(frozen=True)
class DensityCurve:
    """A passage-time density sampled on an increasing time grid.

    `mass` is the trapezoid integral over the grid, i.e. the probability
    captured up to the final time: a value below one can mean either a
    genuinely defective density or plain horizon truncation, which is why
    the number is carried rather than renormalised away.
    """

    times: np.ndarray
    values: np.ndarray
    mass: float = field(init=False)

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape:
            raise GridError("times and values must be 1-d arrays of equal length")
        if times.size > 1 and not np.all(np.diff(times) > 0.0):
            raise GridError("times must be strictly increasing")
        peak = float(np.max(values)) if values.size else 0.0
        if values.size and float(np.min(values)) < -1e-8 * max(peak, 1e-300):
            raise DomainError("density values significantly negative")
        values = np.maximum(values, 0.0)
        mass = float(np.trapezoid(values, times))
        if mass > 1.0 + 1e-6:
            raise DomainError(f"density mass {mass} exceeds one")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "mass", mass)

    def cumulative(self) -> np.ndarray:
        """Accumulated mass at each grid time (trapezoid prefix sums)."""
        if self.times.size < 2:
            return np.zeros_like(self.values)
        seg = 0.5 * (self.values[1:] + self.values[:-1]) * np.diff(self.times)
        return np.concatenate(([0.0], np.cumsum(seg)))

    @classmethod
    def from_function(cls, fn: Callable[[float], float],
                      times: np.ndarray) -> "DensityCurve":
        times = np.asarray(times, dtype=float)
        return cls(times=times, values=np.array([fn(t) for t in times]))


def fpt_pdf_gm_closed(spec: GMSpec, b: DanielsBoundary, x0: float, t0: float,
                      t: float) -> float:
    """Closed-form passage density through a Daniels-type boundary:

        |s(t0) - x0| / (r(t) - r(t0)) * k2(t)/k2(t0) * r'(t) * f(s(t), t | x0, t0)

    valid for either ordering of x0 versus s(t0) by symmetry of the Gaussian
    transition law under state reflection.
    """
    if t <= t0:
        raise OrderError(f"need t > t0, got t={t}, t0={t0}")
    s_fn, _ = daniels_boundary_fns(spec, b)
    s0 = s_fn(t0)
    if s0 == x0:
        raise StartOnBoundary(f"x0 = s(t0) = {x0}")
    r_t, rdot_t = r_ratio(spec, t)
    r_t0, _ = r_ratio(spec, t0)
    law = transition_law(spec, x0, t0, t)
    pref = (abs(s0 - x0) / (r_t - r_t0)) * (spec.k2(t) / spec.k2(t0)) * rdot_t
    return pref * law.pdf(s_fn(t))


def fpt_pdf_lognormal(proc: LognormalProcess, b: ExpBoundary, x0: float,
                      t0: float, t: float) -> float:
    """Passage density of the multiplicative-noise process through an
    exponential-form boundary:

        |ln(s(t0)/x0)| / sqrt(2 pi sigma^2 (t-t0)^3)
          * exp{ -[(sigma^2/2 + B)(t-t0) + ln(s(t0)/x0)]^2 / (2 sigma^2 (t-t0)) }

    The value depends only on (s(t0)/x0, B, sigma, t-t0): in particular it is
    invariant under the curve shape parameter p and under common rescaling of
    (x0, A).
    """
    if t <= t0:
        raise OrderError(f"need t > t0, got t={t}, t0={t0}")
    s0 = b.A * math.exp(b.B * t0)
    if s0 == x0:
        raise StartOnBoundary(f"x0 = s(t0) = {x0}")
    dt = t - t0
    s2 = proc.sigma * proc.sigma
    lr = math.log(s0 / x0)
    arg = (0.5 * s2 + b.B) * dt + lr
    expo = -arg * arg / (2.0 * s2 * dt)
    if expo < -745.0:
        return 0.0
    return abs(lr) / math.sqrt(2.0 * math.pi * s2 * dt ** 3) * math.exp(expo)


def exp_boundary_fns(proc: LognormalProcess, b: ExpBoundary) -> GeneralBoundary:
    """State-space callables for an exponential-form boundary."""
    params = proc.params
    g_t0 = _g(params, params.t0)

    def s(t: float) -> float:
        return b.A * math.exp(b.B * t) * g_t0 / _g(params, t)

    def s_dot(t: float) -> float:
        return s(t) * (b.B + h_eval(params, t))

    return GeneralBoundary(s=s, s_dot=s_dot)


def affine_gm_boundary_fns(proc: OUProcess, b: AffineGMBoundary,
                           t0: float) -> GeneralBoundary:
    """State-space callables for an affine boundary anchored at t0."""
    params = proc.params
    s2 = proc.sigma * proc.sigma

    def s(t: float) -> float:
        return (b.A + b.B * s2 * _int_g2(params, t0, t)) / _g(params, t)

    def s_dot(t: float) -> float:
        g = _g(params, t)
        core = b.A + b.B * s2 * _int_g2(params, t0, t)
        return b.B * s2 * g + core * h_eval(params, t) / g

    return GeneralBoundary(s=s, s_dot=s_dot)


def fpt_pdf_ou(proc: OUProcess, b: AffineGMBoundary, x0: float, t0: float,
               t: float) -> float:
    """Passage density of the additive-noise process through an affine
    boundary, via the Daniels closed form of its Gauss-Markov triple.

    The prefactor works out to g(t0)*g(t)*|s(t0) - x0| / int_{t0}^t g^2,
    multiplying the Gaussian transition density at the boundary.
    """
    params = proc.params
    if t <= t0:
        raise OrderError(f"need t > t0, got t={t}, t0={t0}")
    if t >= _core(params).t_star:
        raise DomainError(f"t={t} at or beyond the domain end")
    spec = gm_spec_G(proc)
    # map (A, B) anchored at t0 onto Daniels coefficients of the triple,
    # whose own prefix integral is anchored at params.t0
    r_t0, _ = r_ratio(spec, t0)
    daniels = DanielsBoundary(d1=b.B, d2=b.A - b.B * r_t0)
    return fpt_pdf_gm_closed(spec, daniels, x0, t0, t)


def _reflected(spec: GMSpec) -> GMSpec:
    return GMSpec(
        m=lambda t: -spec.m(t),
        m_dot=lambda t: -spec.m_dot(t),
        k1=spec.k1,
        k1_dot=spec.k1_dot,
        k2=spec.k2,
        k2_dot=spec.k2_dot,
    )


def _uniform_step(grid: np.ndarray) -> float:
    if grid.ndim != 1 or grid.size < 2:
        raise GridError("grid must contain at least two times")
    steps = np.diff(grid)
    h = steps[0]
    if h <= 0.0 or not np.allclose(steps, h, rtol=1e-9, atol=0.0):
        raise GridError("grid must be uniform and increasing")
    return float(h)


def volterra_fpt(spec: GMSpec, s: GeneralBoundary, x0: float, t0: float,
                 grid: np.ndarray) -> DensityCurve:
    """Product-integration solution of the passage-density Volterra equation
    on a uniform grid starting at t0.

    Start must be strictly off the boundary; a start above it is handled by
    reflecting the problem through zero.
    """
    grid = np.asarray(grid, dtype=float)
    h = _uniform_step(grid)
    if not math.isclose(grid[0], t0, rel_tol=0.0, abs_tol=1e-12 * max(1.0, abs(t0))):
        raise GridError(f"grid must start at t0={t0}, starts at {grid[0]}")
    s0 = s.s(t0)
    if x0 == s0:
        raise StartOnBoundary(f"x0 = s(t0) = {x0}")
    if x0 > s0:
        refl = GeneralBoundary(s=lambda t: -s.s(t), s_dot=lambda t: -s.s_dot(t))
        return volterra_fpt(_reflected(spec), refl, -x0, t0, grid)

    K = grid.size
    m_arr = np.array([spec.m(t) for t in grid])
    md_arr = np.array([spec.m_dot(t) for t in grid])
    k1_arr = np.array([spec.k1(t) for t in grid])
    k1d_arr = np.array([spec.k1_dot(t) for t in grid])
    k2_arr = np.array([spec.k2(t) for t in grid])
    k2d_arr = np.array([spec.k2_dot(t) for t in grid])
    s_arr = np.array([s.s(t) for t in grid])
    sd_arr = np.array([s.s_dot(t) for t in grid])
    r_arr = k1_arr / k2_arr

    dens = np.zeros(K)

    def psi_row(k: int, y: np.ndarray, j: np.ndarray) -> np.ndarray:
        """Kernel values Psi(t_k | y_j, t_j) for an index array j."""
        dn = k1_arr[k] * k2_arr[j] - k2_arr[k] * k1_arr[j]
        n1 = k1d_arr[k] * k2_arr[j] - k2d_arr[k] * k1_arr[j]
        n2 = k2d_arr[k] * k1_arr[k] - k2_arr[k] * k1d_arr[k]
        var = k2_arr[k] ** 2 * (r_arr[k] - r_arr[j])
        mean = m_arr[k] + k2_arr[k] / k2_arr[j] * (y - m_arr[j])
        f = np.exp(-(s_arr[k] - mean) ** 2 / (2.0 * var)) / np.sqrt(
            2.0 * math.pi * var)
        bracket = (0.5 * (sd_arr[k] - md_arr[k])
                   - 0.5 * (s_arr[k] - m_arr[k]) * n1 / dn
                   - 0.5 * (y - m_arr[j]) * n2 / dn)
        return bracket * f

    j0 = np.array([0])
    for k in range(1, K):
        forcing = psi_row(k, np.array([x0]), j0)[0]
        val = -2.0 * forcing
        if k > 1:
            jj = np.arange(1, k)
            val += 2.0 * h * float(np.dot(dens[jj], psi_row(k, s_arr[jj], jj)))
        dens[k] = val
    return DensityCurve(times=grid, values=dens)
