"""Maximal, area, and Littlewood-Paley functionals for harmonic extensions,
with L^p quasi-norms on the sphere.

Functionals are computed per boundary node over a shared FunctionalGrid: a
boundary quadrature grid, a dyadic radial ladder approaching the boundary,
and a cone-quadrature resolution for the approach regions. Per-node work is
independent; HYPERHARM_THREADS caps the worker pool (0 or unset picks a
sensible default).
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_legendre

from . import geometry as geo
from . import harmonic as hm
from .errors import QuadratureFailure
from .geometry import BallPoint, ConeRegion, SphereGrid


def thread_count() -> int:
    """Worker cap from HYPERHARM_THREADS; 0 or unset means auto."""
    raw = os.environ.get("HYPERHARM_THREADS", "0")
    try:
        k = int(raw)
    except ValueError:
        k = 0
    if k <= 0:
        k = min(4, os.cpu_count() or 1)
    return max(1, k)


@dataclass(frozen=True)
class ConeSpec:
    """Node counts for approach-region quadrature."""

    shells: int = 12
    n_radial: int = 3
    n_polar: int = 8
    n_angular: int = 8

    def doubled(self) -> "ConeSpec":
        return ConeSpec(self.shells, self.n_radial, 2 * self.n_polar,
                        2 * self.n_angular)


@dataclass(frozen=True)
class FunctionalGrid:
    """Boundary grid, radial ladder, and cone resolution shared by the
    functionals. The ladder is dyadic, r_m = 1 - 2^-m, and every functional
    is truncated at r_M (the ladder top)."""

    boundary: SphereGrid
    radii: np.ndarray
    cone: ConeSpec = ConeSpec()

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if r.size == 0 or r[-1] >= 1.0 or np.any(np.diff(r) <= 0):
            raise ValueError("ladder must increase and stay below 1")
        object.__setattr__(self, "radii", r)

    @property
    def r_max(self) -> float:
        return float(self.radii[-1])

    @property
    def h_min(self) -> float:
        return 1.0 - self.r_max


def functional_grid(n: int, degree: int = 48, ladder_depth: int = 18,
                    pole=None, full: bool = False,
                    cone: ConeSpec | None = None) -> FunctionalGrid:
    boundary = geo.sphere_quadrature(n, degree, full=full, pole=pole)
    radii = 1.0 - 0.5 ** np.arange(1, ladder_depth + 1)
    return FunctionalGrid(boundary, radii, cone or ConeSpec())


@dataclass
class FunctionalResult:
    """Per-boundary-node values of one functional."""

    kind: str
    grid: FunctionalGrid
    values: np.ndarray
    _norms: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.grid.boundary.nodes),):
            raise ValueError("one value per boundary node required")

    def quasinorm(self, p: float) -> float:
        if p <= 0:
            raise ValueError("p must be positive")
        if p not in self._norms:
            w = self.grid.boundary.weights
            # numpy pairwise summation keeps the reduction deterministic
            self._norms[p] = float(np.sum(w * np.abs(self.values) ** p)
                                   ** (1.0 / p))
        return self._norms[p]

    def write_csv(self, path: str) -> None:
        nodes = self.grid.boundary.nodes
        n = nodes.shape[1]
        tmp = f"{path}.tmp"
        with open(tmp, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["node"] + [f"x{i + 1}" for i in range(n)] + ["value"])
            for i, (xi, v) in enumerate(zip(nodes, self.values)):
                w.writerow([i] + [f"{c:.17g}" for c in xi] + [f"{v:.17g}"])
        os.replace(tmp, path)


def lp_quasinorm(result: FunctionalResult, p: float) -> float:
    return result.quasinorm(p)


# ---------------------------------------------------------------------------
# evaluator adapters


def _values(u, pts: np.ndarray) -> np.ndarray:
    if hasattr(u, "eval_points"):
        return np.asarray(u.eval_points(pts), dtype=float)
    return np.asarray(u(pts), dtype=float)


def _grad_sq_func(u, n: int, h: float = 1e-5):
    if isinstance(u, hm.HarmonicFunction):
        return hm.gradient_sq(u)

    def fd(pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        out = np.zeros(len(pts))
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            d = (_values(u, pts + e) - _values(u, pts - e)) / (2.0 * h)
            out += d ** 2
        return out

    return fd


def _radial_deriv_sq_func(u, n: int, h: float = 1e-5):
    """|Nu|^2 = (r d_r u)^2 as a point function."""
    if isinstance(u, hm.HarmonicFunction):
        Nu = hm.apply_N(u)
        return lambda pts: np.asarray(Nu.eval_points(pts)) ** 2

    def fd(pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        r = np.linalg.norm(pts, axis=1)
        unit = pts / np.where(r > 0, r, 1.0)[:, None]
        d = (_values(u, pts + h * unit) - _values(u, pts - h * unit)) \
            / (2.0 * h)
        return (r * d) ** 2

    return fd


def _parallel_map(fn, items) -> list:
    k = thread_count()
    if k == 1 or len(items) < 4:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# maximal functionals


def radial_max(u, grid: FunctionalGrid) -> FunctionalResult:
    """Radial maximal function: per node, max |u| along the ladder."""
    nodes = grid.boundary.nodes
    radii = grid.radii
    pts = (radii[:, None, None] * nodes[None, :, :]).reshape(-1, nodes.shape[1])
    vals = np.abs(_values(u, pts)).reshape(len(radii), len(nodes))
    return FunctionalResult("radial-max", grid, vals.max(axis=0))


def cone_max(u, alpha: float, grid: FunctionalGrid) -> FunctionalResult:
    """Non-tangential maximal function over the approach region of aperture
    alpha, truncated at the ladder top."""
    nodes = grid.boundary.nodes
    spec = grid.cone
    pole = grid.boundary.pole

    def one(xi):
        region = ConeRegion(alpha, xi)
        vg = geo.cone_quadrature(region, len(xi), grid.r_max,
                                 pole=pole, shells=spec.shells,
                                 n_radial=spec.n_radial,
                                 n_polar=spec.n_polar,
                                 n_angular=spec.n_angular)
        best = float(np.max(np.abs(_values(u, vg.points))))
        # the radial ray lies in every approach region; include the ladder
        ray = np.abs(_values(u, grid.radii[:, None] * xi[None, :]))
        return max(best, float(np.max(ray)))

    vals = _parallel_map(one, list(nodes))
    return FunctionalResult("cone-max", grid, np.array(vals))


# ---------------------------------------------------------------------------
# square functionals


def _cone_weighted_integral(q, region: ConeRegion, n: int, grid:
                            FunctionalGrid, spec: ConeSpec, pole) -> float:
    vg = geo.cone_quadrature(region, n, grid.r_max, pole=pole,
                             shells=spec.shells, n_radial=spec.n_radial,
                             n_polar=spec.n_polar, n_angular=spec.n_angular)
    r2 = np.sum(vg.points ** 2, axis=1)
    w = (1.0 - r2) ** (-n + 2)
    return float(vg.weights @ (q(vg.points) * w))


def area_integral(u, alpha: float, grid: FunctionalGrid,
                  radial_only: bool = False,
                  refine_tol: float = 1e-3,
                  max_refine: int = 2) -> FunctionalResult:
    """Area functional: square root of the cone integral of |grad u|^2 (or
    |Nu|^2 when radial_only) against (1-|x|^2)^(-n+2). The cone resolution is
    refined until the values settle to refine_tol."""
    nodes = grid.boundary.nodes
    n = nodes.shape[1]
    pole = grid.boundary.pole
    q = _radial_deriv_sq_func(u, n) if radial_only else _grad_sq_func(u, n)

    def sweep(spec):
        def one(xi):
            return _cone_weighted_integral(q, ConeRegion(alpha, xi), n,
                                           grid, spec, pole)
        return np.array(_parallel_map(one, list(nodes)))

    spec = grid.cone
    prev = sweep(spec)
    for _ in range(max_refine):
        spec = spec.doubled()
        cur = sweep(spec)
        scale = max(float(np.max(cur)), 1e-300)
        if float(np.max(np.abs(cur - prev))) <= refine_tol * scale:
            kind = "area-radial" if radial_only else "area"
            return FunctionalResult(kind, grid, np.sqrt(np.maximum(cur, 0.0)))
        prev = cur
    raise QuadratureFailure("cone integral did not settle under refinement")


def littlewood_paley_g(u, grid: FunctionalGrid,
                       radial_only: bool = False,
                       form: str = "squared") -> FunctionalResult:
    """Ray square function: per node xi, the square root of the integral of
    |grad u(t xi)|^2 (1-t^2) dt (or |Nu|^2 when radial_only) over the ladder
    range [0, r_M]. form="paper-literal" integrates |grad u| unsquared
    instead, for comparison."""
    if form not in ("squared", "paper-literal"):
        raise ValueError("form must be 'squared' or 'paper-literal'")
    nodes = grid.boundary.nodes
    n = nodes.shape[1]
    q = _radial_deriv_sq_func(u, n) if radial_only else _grad_sq_func(u, n)
    if form == "paper-literal":
        base = q
        q = lambda pts: np.sqrt(np.maximum(base(pts), 0.0))
    xg, wg = roots_legendre(8)
    edges = np.concatenate([[0.0], grid.radii])
    ts, tw = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        ts.append(lo + half * (xg + 1.0))
        tw.append(half * wg)
    ts = np.concatenate(ts)
    tw = np.concatenate(tw)
    weight = tw * (1.0 - ts ** 2)
    pts = (ts[:, None, None] * nodes[None, :, :]).reshape(-1, n)
    vals = q(pts).reshape(len(ts), len(nodes))
    integ = weight @ vals
    kind = "g-radial" if radial_only else "g"
    return FunctionalResult(kind, grid, np.sqrt(np.maximum(integ, 0.0)))


# ---------------------------------------------------------------------------
# fractional ray integral


def ray_integral_Il(f, l: float, x: BallPoint, tol: float = 1e-10,
                    max_doublings: int = 12) -> float:
    """I_l f at r zeta: integral over [0, r] of f(t zeta) (1-t)^(l-1) dt,
    with panels refined toward t = r where the weight steepens for l < 1."""
    r = x.r
    if r == 0.0:
        return 0.0
    zeta = x.zeta

    def integrand(t):
        pts = t[:, None] * zeta[None, :]
        if hasattr(f, "eval_points"):
            vals = np.asarray(f.eval_points(pts), dtype=float)
        else:
            vals = np.asarray([float(f(BallPoint(ti, zeta))) for ti in t])
        return vals * (1.0 - t) ** (l - 1.0)

    xg, wg = roots_legendre(12)
    panels = 4
    prev = None
    for _ in range(max_doublings):
        edges = r * (1.0 - 0.5 ** np.arange(panels + 1))
        edges[-1] = r
        total = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            half = 0.5 * (hi - lo)
            t = lo + half * (xg + 1.0)
            total += half * float(wg @ integrand(t))
        if prev is not None and abs(total - prev) <= tol * max(abs(total),
                                                              1.0):
            return total
        prev = total
        panels *= 2
    raise QuadratureFailure("ray integral did not settle")
