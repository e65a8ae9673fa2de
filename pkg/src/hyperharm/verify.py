"""Named verification suites: each one turns a proved identity, inequality,
or norm equivalence into measurable residuals, bands, or convergence orders
and produces a SuiteReport.

Residual suites pass when every residual meets its tolerance. Band and
constant-measuring suites are informational: they never fail on the size of
a measured constant, only on its instability under grid refinement. All
randomness flows from the configured seed, and reports exclude wall-clock
data so that repeated runs are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import functionals as fn
from . import geometry as geo
from . import harmonic as hm
from . import kernels as ker
from . import specfun as sf
from .config import RunConfig
from .errors import HyperharmError
from .geometry import BallPoint, ConeRegion


@dataclass
class SuiteReport:
    suite: str
    status: str  # pass | fail | info
    constants: dict = field(default_factory=dict)
    residual_max: float | None = None
    residual_mean: float | None = None
    tolerance: float | None = None
    seed: int = 0
    notes: list = field(default_factory=list)
    runtime_s: float | None = None  # reported on stderr only

    def to_text(self) -> str:
        doc = {
            "suite": self.suite,
            "status": self.status,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "residual_max": self.residual_max,
            "residual_mean": self.residual_mean,
            "constants": {k: self.constants[k]
                          for k in sorted(self.constants)},
            "notes": list(self.notes),
        }
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"

    def csv_rows(self) -> list:
        tol = "" if self.tolerance is None else f"{self.tolerance:.17g}"
        rows = []
        if not self.constants:
            rows.append([self.suite, self.status, "", "", tol, ""])
        for name in sorted(self.constants):
            rows.append([self.suite, self.status, name,
                         f"{self.constants[name]:.17g}", tol, ""])
        return rows


def _rng(config: RunConfig, offset: int) -> np.random.Generator:
    return np.random.default_rng(config.seed * 1009 + offset)


def _random_u(n: int, lmax: int, rng) -> hm.HarmonicFunction:
    return hm.extend(hm.random_zonal(n, lmax, rng))


# ---------------------------------------------------------------------------
# suite: kernel consistency


def suite_kernel_consistency(config: RunConfig) -> SuiteReport:
    """Series form of the kernels against the closed forms, plus unit mass
    of the interpolating family."""
    rng = _rng(config, 1)
    worst = 0.0
    residuals = []
    for n in (3, 4, 5, 6):
        t = rng.uniform(-1.0, 1.0, 50)
        for r in (0.3, 0.6, 0.9):
            s1 = ker.poisson_hyp_series_rt(n, r, t, 1.0)
            h = ker.poisson_hyp_rt(n, r, t)
            s0 = ker.poisson_hyp_series_rt(n, r, t, 0.0)
            e = ker.poisson_euclid_rt(n, r, t)
            res = max(float(np.max(np.abs(s1 - h) / h)),
                      float(np.max(np.abs(s0 - e) / e)))
            residuals.append(res)
            worst = max(worst, res)
    mass_err = 0.0
    for n in (3, 4, 5, 6):
        grid = geo.sphere_quadrature(n, 300)
        t = grid.nodes @ grid.pole
        for delta in (0.0, 0.5, 1.0):
            for r in (0.3, 0.6, 0.9):
                v = ker.poisson_hyp_series_rt(n, r, t, delta, cap=1024,
                                              mp_amplification=np.inf)
                mass_err = max(mass_err, abs(grid.integrate(v) - 1.0))
    center_ok = (ker.poisson_hyp_rt(3, 0.0, 0.5) == 1.0
                 and ker.poisson_euclid_rt(3, 0.0, 0.5) == 1.0)
    ok = worst <= 1e-8 and mass_err <= 1e-7 and center_ok
    return SuiteReport(
        suite="kernel-consistency",
        status="pass" if ok else "fail",
        constants={"max_relative_residual": worst,
                   "max_unit_mass_error": mass_err},
        residual_max=worst,
        residual_mean=float(np.mean(residuals)),
        tolerance=1e-8,
        seed=config.seed,
        notes=["series vs closed form at n in 3..6, r in {0.3,0.6,0.9}",
               "unit mass for delta in {0, 0.5, 1}"])


# ---------------------------------------------------------------------------
# suite: Green's formula


def _D_of_radial_sq(n, pts):
    """Invariant Laplacian applied to |x|^2, in closed form."""
    r2 = np.sum(pts ** 2, axis=1)
    return (2.0 * n * (1.0 - r2) ** 2
            + 4.0 * (n - 2.0) * (1.0 - r2) * r2)


def _D_of_linear(n, pts, pole):
    """Invariant Laplacian applied to <x, pole>: the Euclidean part drops."""
    r2 = np.sum(pts ** 2, axis=1)
    return 2.0 * (n - 2.0) * (1.0 - r2) * (pts @ pole)


def suite_green(config: RunConfig) -> SuiteReport:
    """Both sides of the invariant Green formula on centered balls, for
    harmonic/harmonic, harmonic/polynomial, and polynomial/polynomial
    pairs."""
    n = config.n
    rng = _rng(config, 2)
    u = _random_u(n, min(config.lmax, 6), rng)
    w = _random_u(n, min(config.lmax, 6), rng)
    pole = u.pole
    du_dr = u._map_radial(lambda l, rad: rad.diff_r())
    dw_dr = w._map_radial(lambda l, rad: rad.diff_r())
    sphere = geo.sphere_quadrature(n, 160, pole=pole)
    t = sphere.nodes @ pole
    area = geo.sphere_area(n - 1)
    residuals = {}
    for R in (0.5, 0.7):
        vol = geo.ball_quadrature(n, np.zeros(n), R, n_radial=32, n_psi=10,
                                  n_theta=20, axis1=pole)
        pts = vol.points
        r2 = np.sum(pts ** 2, axis=1)
        wgt = (1.0 - r2) ** (-float(n))
        bweight = area * R ** (n - 1) * (1.0 - R ** 2) ** (-n + 2)
        uS = u.eval_rt(R, t)
        wS = w.eval_rt(R, t)
        urS = du_dr.eval_rt(R, t)
        wrS = dw_dr.eval_rt(R, t)

        # harmonic / harmonic: the volume side vanishes identically
        bd = bweight * sphere.integrate(uS * wrS - wS * urS)
        residuals[f"harm-harm-R{R}"] = abs(bd)

        # harmonic / |x|^2
        Dv = _D_of_radial_sq(n, pts)
        lhs = vol.integrate(wgt * u.eval_points(pts) * Dv)
        rhs = bweight * sphere.integrate(uS * 2.0 * R - R * R * urS)
        residuals[f"harm-quad-R{R}"] = abs(lhs - rhs) / max(abs(rhs), 1.0)

        # |x|^2 / <x, pole>: both non-harmonic
        v1 = r2
        v2 = pts @ pole
        lhs = vol.integrate(wgt * (v1 * _D_of_linear(n, pts, pole)
                                   - v2 * _D_of_radial_sq(n, pts)))
        v1S = R * R
        v2S = R * t
        rhs = bweight * sphere.integrate(v1S * t - v2S * 2.0 * R)
        rhs_scale = bweight * abs(sphere.integrate(np.abs(v1S * t)
                                                   + np.abs(v2S * 2.0 * R)))
        residuals[f"poly-poly-R{R}"] = abs(lhs - rhs) / max(rhs_scale, 1.0)

    worst = max(residuals.values())
    ok = worst <= 1e-5
    return SuiteReport(
        suite="green",
        status="pass" if ok else "fail",
        constants=residuals,
        residual_max=worst,
        residual_mean=float(np.mean(list(residuals.values()))),
        tolerance=1e-5,
        seed=config.seed,
        notes=["volume weight (1-|x|^2)^-n, boundary weight "
               "(1-r^2)^(-n+2)"])


# ---------------------------------------------------------------------------
# suite: mean value inequality


def _ball_lp_mean(vals_fn, a: np.ndarray, radius: float, p: float,
                  pole) -> float:
    n = len(a)
    nrm = np.linalg.norm(a)
    axis = a / nrm if nrm > 0 else pole
    vg = geo.ball_quadrature(n, a, radius, n_radial=8, n_psi=6, n_theta=10,
                             axis1=axis, axis2=pole)
    return float(vg.integrate(np.abs(vals_fn(vg.points)) ** p)) ** (1.0 / p)


def suite_mean_value(config: RunConfig) -> SuiteReport:
    """Envelope of the mean-value ratio |grad^d N^k u(a)| over the scaled
    ball average of |N^k u|, across random points and a boundary-approaching
    ladder; boundedness and a flat ladder trend are the assertions."""
    n = config.n
    rng = _rng(config, 3)
    eps = 1.0 / 13.0
    funcs = [_random_u(n, min(config.lmax, 6), rng) for _ in range(20)]
    pole = funcs[0].pole

    def derivative_data(u):
        out = []
        for k in (0, 1, 2):
            Nk = hm.apply_N(u, k) if k else u
            out.append((Nk, hm.gradient_sq(Nk)))
        return out

    def ratios_at(data, a, eps):
        out = []
        r_a = float(np.linalg.norm(a))
        rad = 6.0 * (1.0 - r_a ** 2) * eps
        for Nk, g2 in data:
            lhs0 = abs(float(Nk.eval_points(a[None])[0]))
            lhs1 = math.sqrt(max(float(g2(a[None])[0]), 0.0))
            for p in (1.0, 2.0):
                avg = _ball_lp_mean(Nk.eval_points, a, rad, p, pole)
                if avg < 1e-300:
                    continue
                for d, lhs in ((0, lhs0), (1, lhs1)):
                    bound = (1.0 - r_a) ** (-d - n / p) * avg
                    out.append(lhs / bound)
        return out

    all_ratios = []
    data0 = None
    for u in funcs:
        data = derivative_data(u)
        if data0 is None:
            data0 = data
        pts = rng.standard_normal((10, n))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        pts *= rng.uniform(0.1, 0.95, (10, 1))
        for a in pts:
            all_ratios.extend(ratios_at(data, a, eps))

    # ladder trend toward the boundary; the regression covers the tail of
    # the ladder, past the interior transient where the gradient-order
    # ratios are still decaying toward their boundary limit
    zeta = rng.standard_normal(n)
    zeta /= np.linalg.norm(zeta)
    ms = np.arange(1, 11)
    ladder_max = []
    for m in ms:
        a = (1.0 - 0.5 ** m) * zeta
        ladder_max.append(max(ratios_at(data0, a, eps)))
    tail = ms >= 4
    slope = float(np.polyfit(ms[tail] * math.log(2.0),
                             np.log(np.asarray(ladder_max)[tail]), 1)[0])

    # refinement: halving epsilon keeps ratios finite
    half_eps_max = max(ratios_at(data0, 0.5 * zeta, eps / 2.0))

    # constant data: the ratio is the fixed normalization of the ball mean
    const_u = hm.extend(hm.ZonalExpansion(n, pole, [1.0]))
    const_ratio = ratios_at(derivative_data(const_u)[:1], 0.4 * zeta, eps)[0]

    envelope = float(np.max(all_ratios + ladder_max))
    stable = abs(slope) <= 0.1 and np.isfinite(envelope) \
        and np.isfinite(half_eps_max) and np.isfinite(const_ratio)
    return SuiteReport(
        suite="mean-value",
        status="info" if stable else "fail",
        constants={"ratio_envelope": envelope,
                   "ladder_log_slope": slope,
                   "half_epsilon_ratio": half_eps_max,
                   "constant_data_ratio": const_ratio},
        residual_max=None,
        residual_mean=None,
        tolerance=0.1,
        seed=config.seed,
        notes=["ratio |grad^d N^k u(a)| / ((1-|a|)^(-d-n/p) ball L^p mean)",
               "200 points over 20 seeded functions; ladder slope fitted "
               "on the asymptotic tail m >= 4",
               "info suite: fails only on ladder instability"])


# ---------------------------------------------------------------------------
# suite: operator identities


def _max_abs(u: hm.HarmonicFunction, pts) -> float:
    return float(np.max(np.abs(u.eval_points(pts))))


def suite_operator_identities(config: RunConfig) -> SuiteReport:
    """Residuals of the commutator identity, the first and second
    derivative-recursion instances, and the ray-inversion roundtrip, all on
    exact mode forms."""
    rng = _rng(config, 4)
    one_minus = [1.0, 0.0, -1.0]
    res_comm = []
    res_rec1 = []
    res_rec2 = []
    res_inv = []
    dims = (3, 4, 5)
    for i in range(50):
        n = dims[i % 3]
        l = int(rng.integers(0, config.lmax + 1))
        c = float(rng.uniform(0.5, 2.0)) * (1.0 if rng.uniform() < 0.5
                                            else -1.0)
        pole = np.zeros(n)
        pole[0] = 1.0
        u = hm.extend(hm.ZonalExpansion(n, pole, [0.0] * l + [c]))
        pts = rng.standard_normal((6, n))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        pts *= rng.uniform(0.1, 0.9, (6, 1))
        scale = max(_max_abs(u, pts), 1.0)

        # commutator on the non-harmonic Nu
        w = hm.apply_N(u)
        lhs = hm.apply_L(hm.apply_N(w)).add(
            hm.apply_N(hm.apply_L(w)).scale(-1.0))
        rhs = hm.apply_L(w).scale(2.0).add(
            hm.apply_N(w, 2).add(hm.apply_lap_sigma(w)).scale(2.0)).add(
            hm.apply_N(w).scale(-2.0 * (n - 2)))
        res_comm.append(
            float(np.max(np.abs(lhs.eval_points(pts)
                                - rhs.eval_points(pts)))) / scale)

        # first recursion instance (harmonic input)
        lhs = hm._mul_poly(hm.apply_N(u, 2), one_minus).add(
            hm.apply_N(u).scale(2.0 * (n - 2)))
        rhs = hm._mul_poly(
            hm.apply_N(u).scale(n - 2.0).add(
                hm.apply_lap_sigma(u).scale(-1.0)), one_minus)
        res_rec1.append(
            float(np.max(np.abs(lhs.eval_points(pts)
                                - rhs.eval_points(pts)))) / scale)

        # second instance, from applying N and reusing the first
        lhs = hm._mul_poly(hm.apply_N(u, 3), one_minus).add(
            hm.apply_N(u, 2).scale(2.0 * (n - 3)))
        inner = hm.apply_N(u, 2).scale(n - 3.0).add(
            hm.apply_N(u).scale(n - 2.0)).add(
            hm.apply_lap_sigma(u).scale(-1.0)).add(
            hm.apply_N(hm.apply_lap_sigma(u)).scale(-1.0))
        rhs = hm.apply_lap_sigma(u).scale(2.0).add(
            hm._mul_poly(inner, one_minus))
        res_rec2.append(
            float(np.max(np.abs(lhs.eval_points(pts)
                                - rhs.eval_points(pts)))) / scale)

    # ray-inversion roundtrip
    for n, k in ((3, 1), (4, 1), (5, 2)):
        u = _random_u(n, min(config.lmax, 5), _rng(config, 40 + n + k))
        Nk = hm.apply_N(u, k)
        Nk1 = hm.apply_N(u, k + 1)

        def v_func(t, _a=Nk, _b=Nk1, _n=n, _k=k):
            t = np.asarray(t, dtype=float)
            return (2.0 * (_n - 1 - _k) * _a.eval_rt(t, 1.0)
                    + (1.0 - t ** 2) * _b.eval_rt(t, 1.0))

        for r in (0.4, 0.8):
            got = hm.invert_N_from_ray(v_func, r, n, k)
            want = Nk.eval_rt(r, 1.0)
            res_inv.append(abs(got - want) / max(abs(want), 1.0))

    worst_ident = max(max(res_comm), max(res_rec1), max(res_rec2))
    worst_inv = max(res_inv)
    ok = worst_ident <= 1e-8 and worst_inv <= 1e-6
    return SuiteReport(
        suite="operator-identities",
        status="pass" if ok else "fail",
        constants={"commutator_max": max(res_comm),
                   "recursion1_max": max(res_rec1),
                   "recursion2_max": max(res_rec2),
                   "inversion_roundtrip_max": worst_inv},
        residual_max=worst_ident,
        residual_mean=float(np.mean(res_comm + res_rec1 + res_rec2)),
        tolerance=1e-8,
        seed=config.seed,
        notes=["identities evaluated on exact mode forms; inversion "
               "roundtrip tolerance 1e-6"])


# ---------------------------------------------------------------------------
# suite: kernel comparison bounds


def _kernel_ratio_max(n: int, deltas, r_grid, t_grid) -> float:
    worst = 0.0
    for delta in deltas:
        for r in r_grid:
            v = ker.poisson_hyp_series_rt(n, r, t_grid, delta, cap=1024,
                                          mp_amplification=np.inf)
            e = ker.poisson_euclid_rt(n, r, t_grid)
            worst = max(worst, float(np.max(v / e)))
    return worst


def suite_prop18(config: RunConfig) -> SuiteReport:
    """Bounds of the interpolating kernel family: upper-bound constant
    against the Euclidean kernel (stability-checked under grid doubling) and
    positivity of the normalized kernel inside approach regions."""
    n = config.n
    deltas = (0.0, 0.25, 0.5, 0.75, 1.0)
    r_grid = np.array([0.2, 0.5, 0.8, 0.95])
    t_grid = np.linspace(-1.0, 1.0, 41)
    c_base = _kernel_ratio_max(n, deltas, r_grid, t_grid)
    r2_grid = np.sort(np.concatenate([r_grid, [0.35, 0.65, 0.875, 0.925]]))
    t2_grid = np.linspace(-1.0, 1.0, 81)
    c_fine = _kernel_ratio_max(n, deltas, r2_grid, t2_grid)
    drift = abs(c_fine - c_base) / c_base

    # delta = 0 gives ratio exactly 1; on the axis the ratio is (1+r)^(n-2)
    axis_err = 0.0
    for r in r_grid:
        got = ker.poisson_hyp_rt(n, r, 1.0) / ker.poisson_euclid_rt(n, r, 1.0)
        axis_err = max(axis_err, abs(got - (1.0 + r) ** (n - 2)))
    zero_err = abs(_kernel_ratio_max(n, (0.0,), r_grid, t_grid) - 1.0)

    # in-cone lower bound: positivity of P_{h,delta} (1-|x|^2)^(n-1)
    xi = np.zeros(n)
    xi[0] = 1.0
    lower = {}
    for alpha in (0.1, 0.3, 0.5, 0.7):
        region = ConeRegion(alpha, xi)
        vg = geo.cone_quadrature(region, n, 0.95, shells=10, n_radial=3,
                                 n_polar=8, n_angular=8)
        r = np.linalg.norm(vg.points, axis=1)
        t = np.clip((vg.points @ xi) / np.where(r > 0, r, 1.0), -1.0, 1.0)
        best = np.inf
        # the cone grid reuses a few distinct radii; batch the angles per r
        for delta in deltas:
            for ri in np.unique(np.round(r, 12)):
                sel = np.abs(r - ri) < 1e-12
                vals = ker.poisson_hyp_series_rt(
                    n, float(ri), t[sel], delta, cap=1024,
                    mp_amplification=np.inf)
                best = min(best, float(np.min(
                    np.atleast_1d(vals) * (1 - ri ** 2) ** (n - 1))))
        lower[alpha] = best

    ok = drift <= 0.05 and lower[0.1] > 0.0 and axis_err < 1e-10 \
        and zero_err < 1e-8
    return SuiteReport(
        suite="prop18",
        status="pass" if ok else "fail",
        constants={"upper_bound_constant": c_fine,
                   "upper_bound_drift": drift,
                   "lower_bound_alpha_0.1": lower[0.1],
                   "lower_bound_alpha_0.3": lower[0.3],
                   "lower_bound_alpha_0.5": lower[0.5],
                   "lower_bound_alpha_0.7": lower[0.7],
                   "axis_ratio_error": axis_err},
        residual_max=drift,
        residual_mean=None,
        tolerance=0.05,
        seed=config.seed,
        notes=["upper constant: sup over delta grid x (r,t) samples of the "
               "kernel ratio; lower constant: min over cone nodes of the "
               "(1-|x|^2)^(n-1)-normalized kernel"])


# ---------------------------------------------------------------------------
# suites: norm-equivalence bands


def _norm_set(u, grid: fn.FunctionalGrid, alpha: float, ps,
              g_form: str) -> dict:
    out = {}
    m = fn.cone_max(u, alpha, grid)
    s = fn.area_integral(u, alpha, grid, refine_tol=0.05)
    sN = fn.area_integral(u, alpha, grid, radial_only=True, refine_tol=0.05)
    g = fn.littlewood_paley_g(u, grid, form=g_form)
    gN = fn.littlewood_paley_g(u, grid, radial_only=True, form=g_form)
    for p in ps:
        out[p] = {"Malpha": m.quasinorm(p), "S": s.quasinorm(p),
                  "SN": sN.quasinorm(p), "g": g.quasinorm(p),
                  "gN": gN.quasinorm(p)}
    return out


def _band_spread(norms_by_u, p, a, b) -> float:
    ratios = []
    for norms in norms_by_u:
        num, den = norms[p][a], norms[p][b]
        if den > 1e-12 and num > 1e-12:
            ratios.append(num / den)
    if not ratios:
        return float("nan")
    return max(ratios) / min(ratios)


def _theoremA_pass(config: RunConfig, degree: int, cone: fn.ConeSpec,
                   families) -> dict:
    bands = {}
    for n, funcs in families.items():
        grid = fn.functional_grid(n, degree=degree, ladder_depth=12,
                                  cone=cone)
        norms = [_norm_set(u, grid, config.alphas[-1], config.ps,
                           config.g_form) for u in funcs]
        keys = ("Malpha", "S", "SN", "g", "gN")
        for p in config.ps:
            for i, a in enumerate(keys):
                for b in keys[i + 1:]:
                    bands[(n, p, a, b)] = _band_spread(norms, p, a, b)
    return bands


def suite_theoremA(config: RunConfig) -> SuiteReport:
    """Pairwise ratio bands between the five functional norms over a seeded
    family: finiteness and refinement stability stand in for the theorem's
    unnamed equivalence constants."""
    rng = _rng(config, 5)
    families = {}
    for n in (3, 4):
        families[n] = [_random_u(n, min(config.lmax, 6), rng)
                       for _ in range(10)]
    base = _theoremA_pass(config, 16, fn.ConeSpec(8, 3, 4, 4), families)
    fine = _theoremA_pass(config, 24, fn.ConeSpec(8, 3, 6, 6), families)
    spread_max = max(v for v in fine.values() if np.isfinite(v))
    drift = max(abs(fine[k] - base[k]) / base[k] for k in base
                if np.isfinite(base[k]) and base[k] > 0)
    ok = spread_max <= 1e3 and drift <= 0.10
    return SuiteReport(
        suite="theorem-a",
        status="pass" if ok else "fail",
        constants={"max_band_spread": spread_max,
                   "max_refinement_drift": drift},
        residual_max=drift,
        residual_mean=None,
        tolerance=0.10,
        seed=config.seed,
        notes=["bands over 20 seeded zonal functions, n in {3,4}",
               "pairwise spreads of Malpha, S, SN, g, gN norms"])


def suite_hardy_sobolev(config: RunConfig) -> SuiteReport:
    """Maximal-function norms of the derivative families N^j u, tangential
    powers, and the damped odd-order quantity; reports cross-ratio bands."""
    rng = _rng(config, 6)
    one_minus = [1.0, 0.0, -1.0]
    results = {}
    p = 1.0
    for n, k in ((config.n, 1), (4, 2)):
        funcs = [_random_u(n, min(config.lmax, 6), rng) for _ in range(6)]
        grid = fn.functional_grid(n, degree=16, ladder_depth=12,
                                  cone=fn.ConeSpec(8, 3, 6, 6))
        alpha = config.alphas[-1]
        norms = []
        for u in funcs:
            entry = {}
            for j in range(k + 1):
                entry[f"N{j}"] = fn.cone_max(
                    hm.apply_N(u, j) if j else u, alpha, grid).quasinorm(p)
            for j in range(1, k // 2 + 1):
                entry[f"lap{j}"] = fn.cone_max(
                    hm.apply_lap_sigma(u, j), alpha, grid).quasinorm(p)
            if k % 2 == 1:
                damped = hm._mul_poly(
                    hm.apply_lap_sigma(u, (k + 1) // 2), one_minus)
                entry["damped"] = fn.cone_max(damped, alpha,
                                              grid).quasinorm(p)
                entry["S_half"] = fn.area_integral(
                    hm.apply_neg_lap_sigma_half(u), alpha, grid,
                    refine_tol=0.05).quasinorm(p)
                entry["SN_N"] = fn.area_integral(
                    hm.apply_N(u), alpha, grid, radial_only=True,
                    refine_tol=0.05).quasinorm(p)
            norms.append(entry)
        keys = sorted(norms[0])
        for i, a in enumerate(keys):
            for b in keys[i + 1:]:
                ratios = [e[a] / e[b] for e in norms
                          if e[b] > 1e-12 and e[a] > 1e-12]
                if ratios:
                    results[f"n{n}-k{k}-{a}/{b}"] = \
                        max(ratios) / min(ratios)
    spread = max(results.values())
    ok = np.isfinite(spread)
    return SuiteReport(
        suite="hardy-sobolev",
        status="info" if ok else "fail",
        constants={"max_band_spread": spread,
                   **{k: v for k, v in sorted(results.items())[:8]}},
        residual_max=None,
        residual_mean=None,
        tolerance=None,
        seed=config.seed,
        notes=["cross-ratio bands of maximal norms over derivative "
               "families; k = 2 exercised at n = 4 (k <= n-2)"])


# ---------------------------------------------------------------------------
# suite: Lipschitz exponents


def _project_singular_zonal(gamma: float, t0: float, lmax: int) -> np.ndarray:
    """Zonal coefficients of |t - t0|^gamma on the 2-sphere. Gauss-Jacobi
    nodes on each side of t0 absorb |t - t0|^gamma as the quadrature weight,
    so the remaining polynomial factor Z_l integrates exactly."""
    from scipy.special import roots_jacobi
    nq = lmax // 2 + 8
    x, w = roots_jacobi(nq, 0.0, gamma)  # weight (1+x)^gamma on [-1, 1]
    s = 0.5 * (1.0 + x)
    acc = np.zeros(lmax + 1)
    for half_len, sign in ((1.0 - t0, 1.0), (1.0 + t0, -1.0)):
        t = t0 + sign * half_len * s
        Z = sf.zonal_all(lmax, 3, t)
        acc += (half_len / 2.0) ** (gamma + 1.0) * (Z @ w)
    c = 0.5 * acc  # measure dt/2 on the 2-sphere
    z1 = np.array([sf.zonal_at_one(l, 3) for l in range(lmax + 1)])
    return c / z1


def _fit_slope(x, y) -> float:
    return float(np.polyfit(x, y, 1)[0])


def suite_lipschitz(config: RunConfig) -> SuiteReport:
    """Boundary-smoothness transfer: decay exponents of the extension of
    Hoelder profiles, growth exponent of the kernel gradient, and a bounded
    limiting-class check."""
    n = 3
    t0 = 0.2
    lmax = 256
    ms = np.arange(1, 7)
    radii = 1.0 - 0.5 ** ms
    log_h = np.log(1.0 - radii)
    tg = np.unique(np.clip(np.concatenate([
        np.linspace(-1.0, 1.0, 801),
        t0 + np.linspace(-0.05, 0.05, 401)]), -1.0, 1.0))
    slopes = {}
    pole = np.array([1.0, 0.0, 0.0])
    for gamma in (0.3, 0.5, 0.7):
        coeffs = _project_singular_zonal(gamma, t0, lmax)
        data = hm.ZonalExpansion(n, pole, coeffs)
        u = hm.extend(data)
        # order 0: dyadic radial differences sup_t |u(r_{m+1}) - u(r_m)|;
        # interior values only, so the projection-truncation floor at the
        # boundary never enters
        vals = [u.eval_rt(r, tg)
                for r in np.append(radii, 1.0 - 0.5 ** (len(ms) + 1))]
        sup0 = [float(np.max(np.abs(b - a)))
                for a, b in zip(vals[:-1], vals[1:])]
        slopes[f"gamma{gamma}-k0"] = _fit_slope(log_h, np.log(sup0))
        # order 1: sup of (1-r) |grad u|
        g2 = hm.gradient_sq(u)
        sup1 = []
        for r in radii:
            pts = r * np.column_stack(
                [tg, np.sqrt(np.maximum(0.0, 1 - tg ** 2)),
                 np.zeros_like(tg)])
            sup1.append((1.0 - r)
                        * math.sqrt(float(np.max(g2(pts)))))
        slopes[f"gamma{gamma}-k1"] = _fit_slope(log_h, np.log(sup1))

    # kernel gradient growth: sup over angles of |grad P_h| ~ (1-r)^(-n)
    kernel_sup = []
    for r in radii:
        A = 1.0 + r * r - 2.0 * r * tg
        P = ((1.0 - r * r) / A) ** (n - 1)
        dPdr = (n - 1) * P * (-2.0 * r / (1.0 - r * r)
                              - (2.0 * r - 2.0 * tg) / A)
        dPdt = (n - 1) * P * (2.0 * r / A)
        grad2 = dPdr ** 2 + (1.0 - tg ** 2) * dPdt ** 2 / r ** 2
        kernel_sup.append(math.sqrt(float(np.max(grad2))))
    kernel_slope = _fit_slope(log_h, np.log(kernel_sup))
    slopes["kernel-gradient"] = kernel_slope

    # limiting class: lacunary data of second-order smoothness; the scaled
    # third radial derivative stays bounded along the ladder
    lac = np.zeros(65)
    for kk in range(7):
        l = 2 ** kk
        lac[l] = 4.0 ** (-kk) / sf.zonal_at_one(l, 3)
    uz = hm.extend(hm.ZonalExpansion(n, pole, lac))
    d3 = uz._map_radial(
        lambda l, rad: rad.diff_r().diff_r().diff_r())
    zyg = [(1.0 - r) * float(np.max(np.abs(d3.eval_rt(r, tg))))
           for r in 1.0 - 0.5 ** np.arange(2, 12)]
    zyg_ratio = max(zyg) / max(zyg[0], 1e-300)

    ok = all(abs(slopes[f"gamma{g}-k{k}"] - g) <= 0.1
             for g in (0.3, 0.5, 0.7) for k in (0, 1)) \
        and abs(kernel_slope + n) <= 0.15 and zyg_ratio < 10.0
    return SuiteReport(
        suite="lipschitz",
        status="pass" if ok else "fail",
        constants={**slopes, "limiting_class_ratio": zyg_ratio},
        residual_max=max(abs(slopes[f"gamma{g}-k{k}"] - g)
                         for g in (0.3, 0.5, 0.7) for k in (0, 1)),
        residual_mean=None,
        tolerance=0.1,
        seed=config.seed,
        notes=["profiles |t-t0|^gamma projected to degree 256",
               "order 0 via dyadic radial differences along the ladder",
               "kernel gradient slope target -n, tolerance 0.15"])


# ---------------------------------------------------------------------------
# registry and reporting


SUITES = {
    "kernel-consistency": suite_kernel_consistency,
    "green": suite_green,
    "mean-value": suite_mean_value,
    "operator-identities": suite_operator_identities,
    "prop18": suite_prop18,
    "theorem-a": suite_theoremA,
    "hardy-sobolev": suite_hardy_sobolev,
    "lipschitz": suite_lipschitz,
}


def run_suite(name: str, config: RunConfig) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(name)
    start = time.perf_counter()
    report = SUITES[name](config)
    report.runtime_s = time.perf_counter() - start
    print(f"[{name}] {report.status} ({report.runtime_s:.1f}s)",
          file=sys.stderr)
    return report


def write_reports(reports, out_dir: str) -> str:
    """One text document per suite plus the aggregate CSV; returns the CSV
    path. Writes are atomic and byte-deterministic (runtime omitted)."""
    os.makedirs(out_dir, exist_ok=True)
    for rep in reports:
        path = os.path.join(out_dir, f"report-{rep.suite}.txt")
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            fh.write(rep.to_text())
        os.replace(tmp, path)
    csv_path = os.path.join(out_dir, "reports.csv")
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["suite", "status", "constant", "value", "tolerance",
                "runtime_s"])
    for rep in reports:
        for row in rep.csv_rows():
            w.writerow(row)
    tmp = csv_path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(buf.getvalue())
    os.replace(tmp, csv_path)
    return csv_path
