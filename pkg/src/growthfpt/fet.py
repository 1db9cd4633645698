"""First-exit-time densities from a band between two boundaries.

For bands of the form s_i = m + a*k1 + c_i*k2 around a start
x0 = m + a*k1 + c*k2 (c1 < c < c2) the total exit density has an
image-expansion ("theta series") closed form: with R = r(t) - r(t0),
L = c2 - c1, u = c - c1, v = c2 - c,

    gamma(t) = k2(t) r'(t) / R * sum_{n in Z} exp(-2 n^2 L^2 / R) *
        { (u + 2nL) exp(-2nL u / R) f(s1(t), t | x0, t0)
        + (v - 2nL) exp(+2nL v / R) f(s2(t), t | x0, t0) }.

The sum is truncated symmetrically: terms are added in +/-n pairs until a
pair contributes less than rel_tol of the running total, with exponents
guarded against underflow and a hard cap on n.

For general C^1 bands the pair (gamma1, gamma2) of exit-through-lower /
exit-through-upper densities solves a coupled system of second-kind Volterra
equations, discretized here with the same left-rectangle product integration
as the single-boundary solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import (BandCrossing, DomainError, InvalidParams, OrderError,
                     SeriesDivergence, StartOutsideBand)
from .fpt import DensityCurve, GeneralBoundary, _uniform_step
from .gm_core import GMSpec, r_ratio, transition_law
from .growth_curve import _core, _g
from .process_lognormal import LognormalProcess
from .process_ou import OUProcess, gm_spec_G

_SQRT2PI = math.sqrt(2.0 * math.pi)
_EXP_FLOOR = -700.0  # exp() underflows around -745; keep a margin


@dataclass(frozen=True)
class BandSpec:
    """Affine band in Wiener coordinates: boundaries c_i + slope*t."""

    c1: float
    c: float
    c2: float
    slope: float = 0.0

    def __post_init__(self) -> None:
        if not (self.c1 < self.c < self.c2):
            raise StartOutsideBand(
                f"need c1 < c < c2, got {self.c1}, {self.c}, {self.c2}")


@dataclass(frozen=True)
class ProportionalBand:
    """Band boundaries as fixed proportions nu1 < nu2 of the conditional mean
    curve, with the start at proportion nu (nu = 1 starts exactly at x0)."""

    nu1: float
    nu: float
    nu2: float

    def __post_init__(self) -> None:
        if not (0.0 < self.nu1 < self.nu < self.nu2):
            raise StartOutsideBand(
                f"need 0 < nu1 < nu < nu2, got {self.nu1}, {self.nu}, {self.nu2}")


@dataclass(frozen=True)
class SeriesControl:
    rel_tol: float = 1e-12
    n_max: int = 10_000

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0.0):
            raise InvalidParams("rel_tol must be positive")
        if self.n_max < 1:
            raise InvalidParams("n_max must be >= 1")


DEFAULT_SERIES = SeriesControl()


def _guarded_exp(arg: float) -> float:
    return math.exp(arg) if arg > _EXP_FLOOR else 0.0


def _theta_sum(R: float, L: float, u: float, v: float, f1: float, f2: float,
               ctl: SeriesControl) -> float:
    """The image sum of the band-exit closed form (prefactor excluded)."""

    def pair(n: int) -> float:
        base = -2.0 * n * n * L * L / R
        t1 = (u + 2.0 * n * L) * _guarded_exp(base - 2.0 * n * L * u / R) * f1
        t2 = (v - 2.0 * n * L) * _guarded_exp(base + 2.0 * n * L * v / R) * f2
        return t1 + t2

    total = pair(0)
    for n in range(1, ctl.n_max + 1):
        delta = pair(n) + pair(-n)
        total += delta
        if abs(delta) <= ctl.rel_tol * max(abs(total), 1e-300):
            return total
    raise SeriesDivergence(
        f"image sum did not stabilise within n_max={ctl.n_max} terms")


def fet_pdf_gm_closed(spec: GMSpec, a: float, band: BandSpec, x0: float,
                      t0: float, t: float,
                      ctl: SeriesControl = DEFAULT_SERIES) -> float:
    """Total exit density gamma(t | x0, t0) for an affine-in-(k1, k2) band.

    Boundaries are s_i = m + a*k1 + band.ci*k2 and the start must satisfy
    x0 = m(t0) + a*k1(t0) + band.c*k2(t0); band.slope is ignored here (it is
    the Wiener-coordinate reading of `a`).
    """
    if t <= t0:
        raise OrderError(f"need t > t0, got t={t}, t0={t0}")
    x0_implied = spec.m(t0) + a * spec.k1(t0) + band.c * spec.k2(t0)
    scale = max(abs(x0), abs(x0_implied), 1.0)
    if abs(x0 - x0_implied) > 1e-9 * scale:
        raise InvalidParams(
            f"x0={x0} inconsistent with m + a*k1 + c*k2 = {x0_implied} at t0")
    r_t, rdot_t = r_ratio(spec, t)
    r_t0, _ = r_ratio(spec, t0)
    R = r_t - r_t0
    if R <= 0.0:
        return 0.0
    law = transition_law(spec, x0, t0, t)
    s1_t = spec.m(t) + a * spec.k1(t) + band.c1 * spec.k2(t)
    s2_t = spec.m(t) + a * spec.k1(t) + band.c2 * spec.k2(t)
    f1 = law.pdf(s1_t)
    f2 = law.pdf(s2_t)
    L = band.c2 - band.c1
    u = band.c - band.c1
    v = band.c2 - band.c
    pref = spec.k2(t) * rdot_t / R
    return pref * _theta_sum(R, L, u, v, f1, f2, ctl)


def wiener_band_pdf(band: BandSpec, sigma: float, dt: float,
                    ctl: SeriesControl = DEFAULT_SERIES) -> float:
    """Exit density of a Wiener process (variance sigma^2 per unit time)
    from the affine band c_i + slope*t after elapsed time dt, the start
    sitting at intercept offset c with c1 < c < c2."""
    if dt <= 0.0:
        raise OrderError(f"elapsed time must be positive, got {dt}")
    R = sigma * sigma * dt
    L = band.c2 - band.c1
    u = band.c - band.c1
    v = band.c2 - band.c
    a1 = -((band.slope * dt + band.c1 - band.c) ** 2) / (2.0 * R)
    a2 = -((band.slope * dt + band.c2 - band.c) ** 2) / (2.0 * R)
    norm = 1.0 / math.sqrt(2.0 * math.pi * R)
    f1 = norm * _guarded_exp(a1)
    f2 = norm * _guarded_exp(a2)
    return (1.0 / dt) * _theta_sum(R, L, u, v, f1, f2, ctl)


def fet_pdf_lognormal_band(proc: LognormalProcess, band: ProportionalBand,
                           x0: float, t0: float, t: float,
                           ctl: SeriesControl = DEFAULT_SERIES) -> float:
    """Exit density of the multiplicative-noise process from the band of
    mean proportions [nu1, nu2], started at proportion nu of x0.

    Only the ratios nu/nu1, nu2/nu, nu2/nu1 and (sigma, t - t0) enter:

        gamma(t) = 1/sqrt(2 pi sigma^2 dt^3) * sum_n exp{-2 n^2 ln^2(nu2/nu1) / (sigma^2 dt)}
           * { [ln(nu/nu1) + 2n ln(nu2/nu1)] exp{-2n ln(nu2/nu1) ln(nu/nu1)/(sigma^2 dt)}
                 * exp{-[sigma^2 dt/2 + ln(nu1/nu)]^2 / (2 sigma^2 dt)}
             + [ln(nu2/nu) - 2n ln(nu2/nu1)] exp{+2n ln(nu2/nu1) ln(nu2/nu)/(sigma^2 dt)}
                 * exp{-[sigma^2 dt/2 + ln(nu2/nu)]^2 / (2 sigma^2 dt)} }

    so the value is independent of the curve shape p and of x0 itself.
    """
    if t <= t0:
        raise OrderError(f"need t > t0, got t={t}, t0={t0}")
    dt = t - t0
    s2 = proc.sigma * proc.sigma
    R = s2 * dt
    L = math.log(band.nu2 / band.nu1)
    u = math.log(band.nu / band.nu1)
    v = math.log(band.nu2 / band.nu)
    norm = 1.0 / math.sqrt(2.0 * math.pi * R)
    f1 = norm * _guarded_exp(-((0.5 * s2 * dt - u) ** 2) / (2.0 * R))
    f2 = norm * _guarded_exp(-((0.5 * s2 * dt + v) ** 2) / (2.0 * R))
    return (1.0 / dt) * _theta_sum(R, L, u, v, f1, f2, ctl)


def fet_pdf_wiener_symmetric(c_half_width: float, sigma: float, dt: float,
                             ctl: SeriesControl = DEFAULT_SERIES) -> float:
    """Exit density from a constant symmetric band started at its midpoint.

    Specialises the general affine-band formula with slope 0 and
    c = (c1 + c2)/2 rather than transcribing any pre-simplified display.
    """
    if not (c_half_width > 0.0):
        raise InvalidParams("half width must be positive")
    band = BandSpec(c1=-c_half_width, c=0.0, c2=c_half_width, slope=0.0)
    return wiener_band_pdf(band, sigma, dt, ctl)


def fet_pdf_wiener_symmetric_split(c_half_width: float, sigma: float, dt: float,
                                   ctl: SeriesControl = DEFAULT_SERIES
                                   ) -> Tuple[float, float]:
    """(gamma1, gamma2) for the symmetric case: equal halves by symmetry."""
    total = fet_pdf_wiener_symmetric(c_half_width, sigma, dt, ctl)
    return 0.5 * total, 0.5 * total


def fet_pdf_ou_band(proc: OUProcess, c1: float, c: float, c2: float, B: float,
                    x0: float, t0: float, t: float,
                    ctl: SeriesControl = DEFAULT_SERIES) -> float:
    """Exit density of the additive-noise process from a proportional band.

    With B = 0 the boundaries are s_i(t) = c_i * x0 * g(t0)/g(t), i.e. fixed
    proportions of the conditional mean started from x0, and the start state
    is c * x0 (c = 1 starts exactly at x0).  B tilts the band along the
    intrinsic clock the same way the affine passage boundary does.
    """
    if not (c1 < c < c2):
        raise StartOutsideBand(f"need c1 < c < c2, got {c1}, {c}, {c2}")
    params = proc.params
    if t >= _core(params).t_star:
        raise DomainError(f"t={t} at or beyond the domain end")
    if t <= t0:
        raise OrderError(f"need t > t0, got t={t}, t0={t0}")
    spec = gm_spec_G(proc)
    r_t0, _ = r_ratio(spec, t0)
    scale = x0 * _g(params, t0)
    band = BandSpec(c1=c1 * scale - B * r_t0, c=c * scale - B * r_t0,
                    c2=c2 * scale - B * r_t0)
    x_start = spec.m(t0) + B * spec.k1(t0) + band.c * spec.k2(t0)
    return fet_pdf_gm_closed(spec, B, band, x_start, t0, t, ctl)


def volterra_fet(spec: GMSpec, s1: GeneralBoundary, s2: GeneralBoundary,
                 x0: float, t0: float, grid: np.ndarray
                 ) -> Tuple[DensityCurve, DensityCurve, DensityCurve]:
    """Coupled product-integration solution for a general C^1 band.

    Returns (gamma1, gamma2, gamma): exit-through-lower, exit-through-upper,
    and their sum, on the supplied uniform grid starting at t0.
    """
    grid = np.asarray(grid, dtype=float)
    h = _uniform_step(grid)
    if not math.isclose(grid[0], t0, rel_tol=0.0, abs_tol=1e-12 * max(1.0, abs(t0))):
        raise GridError(f"grid must start at t0={t0}, starts at {grid[0]}")

    K = grid.size
    m_arr = np.array([spec.m(t) for t in grid])
    md_arr = np.array([spec.m_dot(t) for t in grid])
    k1_arr = np.array([spec.k1(t) for t in grid])
    k1d_arr = np.array([spec.k1_dot(t) for t in grid])
    k2_arr = np.array([spec.k2(t) for t in grid])
    k2d_arr = np.array([spec.k2_dot(t) for t in grid])
    s1_arr = np.array([s1.s(t) for t in grid])
    s1d_arr = np.array([s1.s_dot(t) for t in grid])
    s2_arr = np.array([s2.s(t) for t in grid])
    s2d_arr = np.array([s2.s_dot(t) for t in grid])
    r_arr = k1_arr / k2_arr

    if np.any(s1_arr >= s2_arr):
        raise BandCrossing("lower boundary meets or exceeds the upper one")
    if not (s1_arr[0] < x0 < s2_arr[0]):
        raise StartOutsideBand(
            f"x0={x0} not inside ({s1_arr[0]}, {s2_arr[0]}) at t0")

    g1 = np.zeros(K)
    g2 = np.zeros(K)

    def psi_row(k: int, bnd: int, y: np.ndarray, j: np.ndarray) -> np.ndarray:
        """Psi_bnd(t_k | y_j, t_j) with bnd selecting the boundary."""
        s_arr, sd_arr = (s1_arr, s1d_arr) if bnd == 1 else (s2_arr, s2d_arr)
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

    x0_arr = np.array([x0])
    j0 = np.array([0])
    for k in range(1, K):
        f1 = psi_row(k, 1, x0_arr, j0)[0]
        f2 = psi_row(k, 2, x0_arr, j0)[0]
        v1 = 2.0 * f1
        v2 = -2.0 * f2
        if k > 1:
            jj = np.arange(1, k)
            p1_low = psi_row(k, 1, s1_arr[jj], jj)
            p1_up = psi_row(k, 1, s2_arr[jj], jj)
            p2_low = psi_row(k, 2, s1_arr[jj], jj)
            p2_up = psi_row(k, 2, s2_arr[jj], jj)
            v1 -= 2.0 * h * float(np.dot(g1[jj], p1_low) + np.dot(g2[jj], p1_up))
            v2 += 2.0 * h * float(np.dot(g1[jj], p2_low) + np.dot(g2[jj], p2_up))
        g1[k] = v1
        g2[k] = v2
    lower = DensityCurve(times=grid, values=g1)
    upper = DensityCurve(times=grid, values=g2)
    total = DensityCurve(times=grid, values=g1 + g2)
    return lower, upper, total
