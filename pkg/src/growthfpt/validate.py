"""Self-contained oracle suite behind the `validate` command.

Each check pits one computation against an independent route to the same
quantity: analytic identities, alternative parametrizations, numerical
integration, or Monte Carlo.  Checks run at a reduced scale so the whole
table finishes in well under a minute; the pytest suite runs the same
oracles at full scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from .errors import DomainError
from .fet import (BandSpec, ProportionalBand, fet_pdf_lognormal_band,
                  fet_pdf_wiener_symmetric, fet_pdf_wiener_symmetric_split,
                  wiener_band_pdf)
from .fpt import (AffineGMBoundary, DanielsBoundary, DensityCurve, ExpBoundary,
                  GeneralBoundary, fpt_pdf_gm_closed, fpt_pdf_lognormal,
                  fpt_pdf_ou, volterra_fpt)
from .gm_core import daniels_boundary_fns, psi_kernel, wiener_spec
from .growth_curve import (GrowthParams, classify_regime, domain_end,
                           x_eval)
from .montecarlo import SimConfig, density_distance, estimate_fet, estimate_fpt
from .process_lognormal import LognormalProcess
from .process_ou import OUProcess, gm_spec_G, transition_law_G
from .quadrature import integrate_adaptive

BASE = dict(gamma=0.5, n=1.0, k=20.0, x0=1.0, t0=0.0)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _mass_to_infinity(fn: Callable[[float], float], t_hi: float = 1e7,
                      n_seg: int = 140) -> float:
    """Integral of a passage density over (0, inf) via log-segmented panels.

    The density is taken as 0 at the time origin, where the closed forms are
    not defined but vanish in the limit.
    """
    safe = lambda t: fn(t) if t > 0.0 else 0.0
    edges = np.concatenate(([0.0], np.geomspace(1e-6, t_hi, n_seg)))
    return sum(integrate_adaptive(safe, a, b) for a, b in zip(edges[:-1], edges[1:]))


def _direct_solution(params: GrowthParams, t: float) -> float:
    """The growth curve evaluated straight from its native parametrization."""
    one_m_p = 1.0 - params.p
    inner = (params.gamma * params.n * (params.p - 1.0) * (t - params.t0)
             + params.a_n ** one_m_p)
    q = 1.0 / one_m_p
    if inner >= 0.0:
        ip = inner ** q
    else:
        m = round(q)
        ip = abs(inner) ** q * (1 if m % 2 == 0 else -1)
    return params.k / (1.0 + ip) ** (1.0 / params.n)


def check_curve_equivalence(n_sets: int = 50, seed: int = 202) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    done = 0
    while done < n_sets:
        n = rng.uniform(0.4, 3.0)
        k = rng.uniform(2.0, 80.0)
        params = GrowthParams(
            gamma=rng.uniform(0.1, 1.5), n=n,
            p=rng.uniform(0.1, 1.0 + 1.0 / n - 0.05),
            k=k, x0=rng.uniform(0.05, 0.8) * k, t0=rng.uniform(0.0, 1.5))
        if abs(params.p - 1.0) < 1e-4:
            continue
        try:
            t_star = domain_end(params).t_star
        except DomainError:
            # p > 1 with t0 large enough that no real eta exists
            continue
        hi = params.t0 + min(10.0, 0.8 * (t_star - params.t0))
        for t in rng.uniform(params.t0, hi, size=10):
            a = x_eval(params, float(t))
            b = _direct_solution(params, float(t))
            worst = max(worst, abs(a - b) / abs(b))
        done += 1
    return CheckResult("curve reparametrization equivalence",
                       worst <= 1e-10, f"max rel err {worst:.3e} (tol 1e-10)")


def check_regimes() -> CheckResult:
    tags = {p: classify_regime(GrowthParams(p=p, **BASE)).value
            for p in (1.5, 0.75, 2.0 / 3.0, 0.25)}
    t_star = domain_end(GrowthParams(p=0.25, **BASE)).t_star
    ok = (tags[1.5] == "SigmoidSaturating"
          and tags[0.75] == "PlateauThenDecay"
          and tags[2.0 / 3.0] == "PlateauThenGrowth"
          and tags[0.25] == "FiniteTimeCeiling"
          and abs(t_star - 24.267) <= 1e-3)
    return CheckResult("regime classification and finite ceiling",
                       ok, f"tags {tags}, t_star {t_star:.5f}")


def check_fpt_mass() -> CheckResult:
    proc = LognormalProcess(GrowthParams(p=1.5, **BASE), 0.02)
    m08 = _mass_to_infinity(
        lambda t: fpt_pdf_lognormal(proc, ExpBoundary(A=0.8), 1.0, 0.0, t))
    m12 = _mass_to_infinity(
        lambda t: fpt_pdf_lognormal(proc, ExpBoundary(A=1.2), 1.0, 0.0, t))
    ok = abs(m08 - 1.0) <= 1e-4 and abs(m12 - 1.0 / 1.2) <= 1e-3
    return CheckResult("proportional-boundary passage mass",
                       ok, f"mass(nu=0.8)={m08:.6f}, mass(nu=1.2)={m12:.6f}")


def check_fpt_mode() -> CheckResult:
    proc = LognormalProcess(GrowthParams(p=1.5, **BASE), 0.02)
    ts = np.linspace(20.0, 70.0, 2001)
    vals = [fpt_pdf_lognormal(proc, ExpBoundary(A=0.8), 1.0, 0.0, t) for t in ts]
    mode = float(ts[int(np.argmax(vals))])
    return CheckResult("passage-density mode location",
                       abs(mode - 41.39) <= 0.1, f"mode at t={mode:.3f}")


def check_kernel_vanishing(n_draws: int = 200, seed: int = 77) -> CheckResult:
    rng = np.random.default_rng(seed)
    specs = [wiener_spec(1.0), gm_spec_G(OUProcess(GrowthParams(p=1.5, **BASE), 0.1))]
    worst = 0.0
    for spec in specs:
        for _ in range(n_draws):
            d = DanielsBoundary(d1=rng.uniform(-2, 2), d2=rng.uniform(-2, 2))
            s_fn, sd_fn = daniels_boundary_fns(spec, d)
            tau = rng.uniform(0.05, 3.0)
            t = tau + rng.uniform(0.05, 3.0)
            val = psi_kernel(spec, GeneralBoundary(s=s_fn, s_dot=sd_fn),
                             t, s_fn(tau), tau)
            worst = max(worst, abs(val))
    return CheckResult("kernel vanishing on closed-form boundaries",
                       worst < 1e-10, f"max |Psi| {worst:.3e}")


def check_volterra_vs_closed(steps: int = 1200) -> CheckResult:
    spec = wiener_spec(1.0)
    grid = np.linspace(0.0, 5.0, steps + 1)
    curve = volterra_fpt(spec, GeneralBoundary(s=lambda t: 1.0, s_dot=lambda t: 0.0),
                         0.0, 0.0, grid)
    closed = np.array([fpt_pdf_gm_closed(spec, DanielsBoundary(0.0, 1.0), 0.0, 0.0, t)
                       for t in grid[1:]])
    rel = np.abs(curve.values[1:] - closed) / closed.max()
    params = GrowthParams(p=1.5, **BASE)
    ou = OUProcess(params, 0.1)
    og = np.linspace(0.0, 20.0, steps + 1)
    from .fpt import affine_gm_boundary_fns
    from .growth_curve import _g
    bnd = AffineGMBoundary(A=0.8 * params.x0 * _g(params, 0.0))
    fns = affine_gm_boundary_fns(ou, bnd, 0.0)
    ocurve = volterra_fpt(gm_spec_G(ou), fns, 1.0, 0.0, og)
    oclosed = np.array([fpt_pdf_ou(ou, bnd, 1.0, 0.0, t) for t in og[1:]])
    orel = np.abs(ocurve.values[1:] - oclosed) / oclosed.max()
    ok = rel.max() < 0.01 and orel.max() < 0.01
    return CheckResult("Volterra solver vs closed forms",
                       ok, f"wiener dev {rel.max():.2e}, ou dev {orel.max():.2e}")


def check_wiener_band() -> CheckResult:
    mass = integrate_adaptive(lambda t: fet_pdf_wiener_symmetric(1.0, 1.0, t),
                              1e-9, 40.0)
    mean = integrate_adaptive(lambda t: t * fet_pdf_wiener_symmetric(1.0, 1.0, t),
                              1e-9, 40.0)
    g1, g2 = fet_pdf_wiener_symmetric_split(1.0, 1.0, 0.7)
    ok = abs(mass - 1.0) <= 1e-4 and abs(mean - 1.0) <= 5e-3 and abs(g1 - g2) <= 1e-12
    return CheckResult("symmetric band exit identities",
                       ok, f"mass {mass:.6f}, mean exit {mean:.4f}")


def check_band_equivalence() -> CheckResult:
    proc = LognormalProcess(GrowthParams(p=1.5, **BASE), 0.02)
    band = ProportionalBand(nu1=0.8, nu=1.0, nu2=1.25)
    worst = 0.0
    for t in (5.0, 30.0, 80.0, 200.0):
        a = fet_pdf_lognormal_band(proc, band, 1.0, 0.0, t)
        z = wiener_band_pdf(BandSpec(c1=math.log(0.8), c=0.0, c2=math.log(1.25),
                                     slope=0.02 ** 2 / 2.0), 0.02, t)
        worst = max(worst, abs(a - z) / max(abs(z), 1e-300))
    return CheckResult("band density equals its Wiener-coordinate form",
                       worst <= 1e-10, f"max rel dev {worst:.2e}")


def check_mc_fpt(n_paths: int = 20_000, seed: int = 40) -> CheckResult:
    proc = LognormalProcess(GrowthParams(p=1.5, **BASE), 0.02)
    bnd = ExpBoundary(A=0.8)
    cfg = SimConfig(dt=0.2, horizon=150.0, n_paths=n_paths, seed=seed)
    sample = estimate_fpt(proc, bnd, cfg)
    grid = np.linspace(0.0, 150.0, 3001)
    curve = DensityCurve.from_function(
        lambda t: fpt_pdf_lognormal(proc, bnd, 1.0, 0.0, t) if t > 0 else 0.0, grid)
    _, ks = density_distance(sample, curve)
    return CheckResult("Monte Carlo passage times vs closed form (KS)",
                       ks < 0.01, f"KS {ks:.4f} with {n_paths} paths")


def check_mc_fet(n_paths: int = 20_000, seed: int = 41) -> CheckResult:
    proc = LognormalProcess(GrowthParams(p=1.5, **BASE), 0.02)
    band = ProportionalBand(nu1=0.8, nu=1.0, nu2=1.2)
    s1 = ExpBoundary(A=0.8)
    s2 = ExpBoundary(A=1.2)
    cfg = SimConfig(dt=0.5, horizon=800.0, n_paths=n_paths, seed=seed)
    sample = estimate_fet(proc, s1, s2, cfg)
    grid = np.linspace(0.0, 800.0, 3001)
    curve = DensityCurve.from_function(
        lambda t: fet_pdf_lognormal_band(proc, band, 1.0, 0.0, t) if t > 0 else 0.0,
        grid)
    l1, _ = density_distance(sample, curve)
    return CheckResult("Monte Carlo exit times vs closed form (L1)",
                       l1 < 0.05, f"L1 {l1:.4f} with {n_paths} paths")


def check_variance_form(n_paths: int = 200_000, seed: int = 42) -> CheckResult:
    """Pins the conditional-variance form of the additive process by MC."""
    from .montecarlo import simulate_paths
    params = GrowthParams(p=1.5, **BASE)
    proc = OUProcess(params, 0.1)
    cfg = SimConfig(dt=0.5, horizon=1.0, n_paths=n_paths, seed=seed)
    _, paths = simulate_paths(proc, cfg)
    v_mc = float(np.var(paths[:, -1], ddof=1))
    v_true = transition_law_G(proc, 1.0, 0.0, 1.0).variance
    from .growth_curve import _g
    v_printed = 0.01 * integrate_adaptive(
        lambda th: (_g(params, 0.0) / _g(params, th)) ** 2, 0.0, 1.0)
    se = v_true * math.sqrt(2.0 / (n_paths - 1))
    ok = abs(v_mc - v_true) <= 3.0 * se and abs(v_mc - v_printed) > 10.0 * se
    return CheckResult(
        "additive-noise variance form pinned by MC",
        ok, f"MC {v_mc:.6f} vs true {v_true:.6f} (3se {3 * se:.1e}) "
            f"vs alternative {v_printed:.6f}")


ALL_CHECKS: List[Callable[[], CheckResult]] = [
    check_curve_equivalence,
    check_regimes,
    check_fpt_mass,
    check_fpt_mode,
    check_kernel_vanishing,
    check_volterra_vs_closed,
    check_wiener_band,
    check_band_equivalence,
    check_mc_fpt,
    check_mc_fet,
    check_variance_form,
]


def run_all(verbose: bool = True) -> Tuple[bool, List[CheckResult]]:
    results = []
    for check in ALL_CHECKS:
        res = check()
        results.append(res)
        if verbose:
            status = "PASS" if res.passed else "FAIL"
            print(f"[{status}] {res.name}: {res.detail}")
    return all(r.passed for r in results), results
