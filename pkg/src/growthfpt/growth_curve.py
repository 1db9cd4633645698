"""Deterministic growth curve, its reparametrization, and the fertility rate.

The curve solves

    dx/dt = gamma * k^{n(p-1)} * x^{1+n(1-p)} * [1 - (x/k)^n]^p,   x(t0) = x0,

with shape parameters gamma, n > 0 and 0 < p < 1 + 1/n.  Writing
A_n = (k/x0)^n - 1, the solution can be carried by a single auxiliary
function

    g(t) = { eta + [1 + eta^{1-p} * ln(alpha) * (1-p) * t]^{1/(1-p)} }^{1/n},

    alpha = exp(-gamma*n),
    eta   = [A_n^{1-p} + n*gamma*(1-p)*t0]^{1/(p-1)},

so that x(t) = x0 * g(t0) / g(t).  The curve is then a Malthus law with
time-dependent fertility h(t) = -g'(t)/g(t) = -d/dt ln g(t), which is what
both diffusion extensions feed on.

Shape taxonomy (driven by p and the integrality of q = 1/(1-p)):

    1 <= p < 1+1/n   sigmoid saturating at the carrying capacity k
    0 < p < 1, q even integer    rise to k, plateau, decay to 0
    0 < p < 1, q odd integer     rise to k, plateau, finite-time blow-up
    0 < p < 1, q non-integer     reaches k exactly at a finite time t*

For p -> 1 the inner power collapses to alpha^t and g = (eta + alpha^t)^{1/n};
a dedicated branch evaluates that limit (and a log1p-stabilised variant close
to it) so the curve is continuous across p = 1.

Negative bases raised to q are continued with real signed powers when q is an
integer (within 1e-9); non-integer powers of negative numbers raise
DomainError.  That continuation is what produces the post-plateau behaviours
of the even/odd regimes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .errors import DomainError, InvalidParams, OrderError

# |1-p| at or below this: use the exact p -> 1 limit branch.
P_LIMIT_TOL = 1e-8
# |1-p| between P_LIMIT_TOL and this: evaluate bracket powers through log1p.
P_STABLE_TOL = 1e-5
# tolerance for recognising an integer exponent in signed powers
INT_TOL = 1e-9


def signed_pow(base: float, q: float) -> float:
    """base**q extended to negative bases when q is an integer.

    For base < 0 the real continuation sign(base)^m * |base|^q is used when q
    is within INT_TOL of an integer m; otherwise the value would be complex
    and DomainError is raised.
    """
    if base >= 0.0:
        return base ** q
    m = round(q)
    if abs(q - m) > INT_TOL:
        raise DomainError(
            f"negative base {base!r} with non-integer exponent {q!r}")
    mag = abs(base) ** q
    return mag if m % 2 == 0 else -mag


@dataclass(frozen=True)
class GrowthParams:
    """The six parameters of the growth curve.

    gamma, n : positive shape/rate parameters
    p        : shape parameter, 0 < p < 1 + 1/n
    k        : carrying capacity, k > x0
    x0       : initial size, 0 < x0 < k
    t0       : initial time, t0 >= 0
    """

    gamma: float
    n: float
    p: float
    k: float
    x0: float
    t0: float = 0.0

    def __post_init__(self) -> None:
        if not (self.gamma > 0.0):
            raise InvalidParams(f"gamma must be > 0, got {self.gamma}")
        if not (self.n > 0.0):
            raise InvalidParams(f"n must be > 0, got {self.n}")
        if not (self.k > 0.0):
            raise InvalidParams(f"k must be > 0, got {self.k}")
        if not (0.0 < self.x0 < self.k):
            raise InvalidParams(
                f"x0 must satisfy 0 < x0 < k, got x0={self.x0}, k={self.k}")
        if not (self.t0 >= 0.0):
            raise InvalidParams(f"t0 must be >= 0, got {self.t0}")
        if not (0.0 < self.p < 1.0 + 1.0 / self.n):
            raise InvalidParams(
                f"p must satisfy 0 < p < 1 + 1/n = {1.0 + 1.0 / self.n}, "
                f"got {self.p}")

    @property
    def a_n(self) -> float:
        """(k/x0)^n - 1, strictly positive for valid parameters."""
        return (self.k / self.x0) ** self.n - 1.0


@dataclass(frozen=True)
class ReparamCoeffs:
    """Reparametrization pair: alpha = exp(-gamma*n), eta > 0."""

    alpha: float
    eta: float


class CurveRegime(enum.Enum):
    SIGMOID_SATURATING = "SigmoidSaturating"
    PLATEAU_THEN_DECAY = "PlateauThenDecay"
    PLATEAU_THEN_GROWTH = "PlateauThenGrowth"
    FINITE_TIME_CEILING = "FiniteTimeCeiling"


@dataclass(frozen=True)
class TimeDomain:
    """Right end of the curve's real-valued time domain (may be +inf)."""

    t_star: float

    @property
    def finite(self) -> bool:
        return math.isfinite(self.t_star)


class _Core(NamedTuple):
    """Derived constants shared by every curve evaluation."""

    limit_branch: bool   # p within P_LIMIT_TOL of 1
    stable_branch: bool  # p close enough to 1 to need log1p evaluation
    alpha: float
    eta: float
    q: float        # 1/(1-p); meaningless on the limit branch
    slope: float    # eta^{1-p} * ln(alpha) * (1-p), sign-continued; 0 on limit
    regime: CurveRegime
    t_star: float


@lru_cache(maxsize=512)
def _core(params: GrowthParams) -> _Core:
    gamma, n, p, t0 = params.gamma, params.n, params.p, params.t0
    a_n = params.a_n
    alpha = math.exp(-gamma * n)
    ln_alpha = -gamma * n

    if abs(1.0 - p) <= P_LIMIT_TOL:
        # p -> 1: eta -> exp(gamma*n*t0)/A_n and the bracket power -> alpha^t
        eta = math.exp(gamma * n * t0) / a_n
        return _Core(True, False, alpha, eta, math.nan, 0.0,
                     CurveRegime.SIGMOID_SATURATING, math.inf)

    one_m_p = 1.0 - p
    q = 1.0 / one_m_p
    denom = a_n ** one_m_p + n * gamma * one_m_p * t0
    if denom == 0.0:
        raise DomainError(
            "reparametrization undefined: A_n^{1-p} + n*gamma*(1-p)*t0 = 0")
    if abs(1.0 - p) <= P_STABLE_TOL:
        # D = exp((1-p) log A_n) + small term; invert in log space
        eta = math.exp(math.log(denom) / (p - 1.0))
    else:
        eta = signed_pow(denom, 1.0 / (p - 1.0))
    if eta <= 0.0:
        raise DomainError(
            "reparametrization undefined: eta = "
            f"[{denom!r}]^(1/(p-1)) is not positive")
    # eta^{1-p} with the sign carried through equals 1/denom exactly; using
    # the positive real power of eta here would break the equivalence with
    # the direct solution whenever denom < 0 (large t0, p > 1, even 1/(p-1)).
    slope = ln_alpha * one_m_p / denom

    if p >= 1.0:
        regime = CurveRegime.SIGMOID_SATURATING
        t_star = math.inf
    else:
        q_int = round(q)
        if abs(q - q_int) <= INT_TOL:
            regime = (CurveRegime.PLATEAU_THEN_DECAY if q_int % 2 == 0
                      else CurveRegime.PLATEAU_THEN_GROWTH)
            t_star = math.inf
        else:
            regime = CurveRegime.FINITE_TIME_CEILING
            t_star = -1.0 / slope  # root of the bracket 1 + slope*t
    return _Core(False, abs(1.0 - p) <= P_STABLE_TOL, alpha, eta, q, slope,
                 regime, t_star)


def reparametrize(params: GrowthParams) -> ReparamCoeffs:
    """Map the native parameters to the (alpha, eta) pair carrying g."""
    c = _core(params)
    return ReparamCoeffs(alpha=c.alpha, eta=c.eta)


def classify_regime(params: GrowthParams) -> CurveRegime:
    """Qualitative shape class of the curve (see module docstring)."""
    return _core(params).regime


def domain_end(params: GrowthParams) -> TimeDomain:
    """Right end of the domain: finite only in the finite-time-ceiling regime.

    Even/odd integer bracket exponents continue through the bracket's zero,
    and for p > 1 the bracket is increasing, so every other regime extends
    to +inf.
    """
    return TimeDomain(t_star=_core(params).t_star)


def _check_t(params: GrowthParams, t: float, *, allow_t_star: bool = False) -> None:
    if t < params.t0:
        raise DomainError(f"t={t} precedes the initial time t0={params.t0}")
    ts = _core(params).t_star
    if allow_t_star:
        if t > ts:
            raise DomainError(f"t={t} beyond the domain end t_star={ts}")
    elif t >= ts:
        raise DomainError(f"t={t} at or beyond the domain end t_star={ts}")


def _g_pow_n(params: GrowthParams, t: float) -> float:
    """g(t)^n, evaluated on whichever branch the parameters select."""
    c = _core(params)
    if c.limit_branch:
        return c.eta + c.alpha ** t
    arg = c.slope * t
    if c.stable_branch:
        return c.eta + math.exp(c.q * math.log1p(arg))
    return c.eta + signed_pow(1.0 + arg, c.q)


def g_eval(coeffs: ReparamCoeffs, params: GrowthParams, t: float) -> float:
    """The auxiliary function g(t); x(t) = x0*g(t0)/g(t).

    `coeffs` must come from reparametrize(params); it is accepted explicitly
    so callers can see which (alpha, eta) pair is in force.
    """
    c = _core(params)
    if not (math.isclose(coeffs.alpha, c.alpha, rel_tol=1e-12)
            and math.isclose(coeffs.eta, c.eta, rel_tol=1e-12)):
        raise InvalidParams("coeffs do not match reparametrize(params)")
    _check_t(params, t, allow_t_star=True)
    return signed_pow(_g_pow_n(params, t), 1.0 / params.n)


def _g(params: GrowthParams, t: float) -> float:
    """Internal g(t) without the coeffs cross-check."""
    return signed_pow(_g_pow_n(params, t), 1.0 / params.n)


def x_eval(params: GrowthParams, t: float) -> float:
    """Curve value x(t) = x0 * g(t0) / g(t).

    Evaluation exactly at the finite domain end returns k (the curve attains
    the carrying capacity there); beyond it raises DomainError.
    """
    c = _core(params)
    if t == c.t_star:
        return params.k
    _check_t(params, t)
    return params.x0 * _g(params, params.t0) / _g(params, t)


def h_eval(params: GrowthParams, t: float) -> float:
    """Fertility rate h(t) = -g'(t)/g(t) = -d/dt ln g(t)."""
    _check_t(params, t)
    c = _core(params)
    if c.limit_branch:
        # g^n = eta + alpha^t, (g^n)' = alpha^t ln alpha = -gamma*n*alpha^t
        at = c.alpha ** t
        return params.gamma * at / (c.eta + at)
    # (g^n)' = slope * q * B^{q-1} with B = 1 + slope*t; q-1 = p/(1-p)
    arg = c.slope * t
    if c.stable_branch:
        b_pow = math.exp((c.q - 1.0) * math.log1p(arg))
    else:
        b_pow = signed_pow(1.0 + arg, c.q - 1.0)
    return -c.slope * c.q * b_pow / (params.n * _g_pow_n(params, t))


def h_integral(params: GrowthParams, a: float, b: float) -> float:
    """Exact integral of h over [a, b]: ln g(a) - ln g(b) (no quadrature)."""
    if b < a:
        raise OrderError(f"integration bounds out of order: a={a} > b={b}")
    if a == b:
        return 0.0
    _check_t(params, a)
    _check_t(params, b, allow_t_star=False)
    return (math.log(_g_pow_n(params, a)) - math.log(_g_pow_n(params, b))) / params.n
