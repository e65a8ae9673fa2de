"""Ball-model geometry: the isometry group action on the unit ball,
non-tangential approach regions, the invariant measure, and quadrature grids
on spheres, balls, and cones."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as _gamma
from scipy.special import roots_chebyt, roots_gegenbauer, roots_legendre

from .errors import DegenerateDenominator, UnsupportedRequest

DEFAULT_MEASURE_EXPONENT = None  # None means "use the dimension n"


def sphere_area(d: int) -> float:
    """Surface area of the d-sphere S^d embedded in R^{d+1}."""
    return 2.0 * math.pi ** ((d + 1) / 2.0) / _gamma((d + 1) / 2.0)


@dataclass(frozen=True)
class BallPoint:
    """Interior point of the unit ball, stored as radius times unit
    direction."""

    r: float
    zeta: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.zeta, dtype=float)
        nrm = float(np.linalg.norm(z))
        if abs(nrm - 1.0) > 1e-12:
            raise ValueError("direction must be a unit vector")
        if not 0.0 <= self.r < 1.0:
            raise ValueError("radius must lie in [0, 1)")
        object.__setattr__(self, "zeta", z)

    @classmethod
    def from_cartesian(cls, x) -> "BallPoint":
        x = np.asarray(x, dtype=float)
        r = float(np.linalg.norm(x))
        if r == 0.0:
            e = np.zeros(len(x))
            e[0] = 1.0
            return cls(0.0, e)
        return cls(r, x / r)

    @property
    def cartesian(self) -> np.ndarray:
        return self.r * self.zeta

    @property
    def n(self) -> int:
        return len(self.zeta)


def _minkowski_J(n: int) -> np.ndarray:
    J = np.eye(n + 1)
    J[0, 0] = -1.0
    return J


@dataclass(frozen=True)
class GroupElement:
    """Element of the identity component of the Lorentz group O(n,1),
    acting conformally on the ball."""

    matrix: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.matrix, dtype=float)
        n = g.shape[0] - 1
        J = _minkowski_J(n)
        if not np.allclose(g.T @ J @ g, J, atol=1e-10):
            raise ValueError("matrix does not preserve the Lorentz form")
        if g[0, 0] < 1.0 - 1e-10:
            raise ValueError("matrix is not in the identity component")
        object.__setattr__(self, "matrix", g)

    @property
    def n(self) -> int:
        return self.matrix.shape[0] - 1

    def inverse(self) -> "GroupElement":
        J = _minkowski_J(self.n)
        return GroupElement(J @ self.matrix.T @ J)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.matrix @ other.matrix)


def identity_element(n: int) -> GroupElement:
    return GroupElement(np.eye(n + 1))


def boost(t: float, n: int = 3) -> GroupElement:
    """Hyperbolic translation along the first axis: cosh/sinh in the upper
    2x2 block, identity elsewhere. Moves the origin to radius tanh(t/2)."""
    g = np.eye(n + 1)
    g[0, 0] = g[1, 1] = math.cosh(t)
    g[0, 1] = g[1, 0] = math.sinh(t)
    return GroupElement(g)


def rotation_element(R: np.ndarray) -> GroupElement:
    """Embed an SO(n) rotation as a block-diagonal group element fixing the
    origin."""
    R = np.asarray(R, dtype=float)
    n = R.shape[0]
    g = np.eye(n + 1)
    g[1:, 1:] = R
    return GroupElement(g)


def random_rotation(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random SO(n) matrix via QR of a Gaussian sample."""
    A = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(A)
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def random_group_element(n: int, rng: np.random.Generator,
                         max_boost: float = 2.0) -> GroupElement:
    """Random element as rotation * boost * rotation."""
    k1 = rotation_element(random_rotation(n, rng))
    k2 = rotation_element(random_rotation(n, rng))
    a = boost(float(rng.uniform(0.0, max_boost)), n)
    return k1 @ a @ k2


def mobius_act(g: GroupElement, x: BallPoint) -> BallPoint:
    """Conformal action of the group on the ball.

    y_p = (1/2 (1+|x|^2) g_{p0} + sum_l g_{pl} x_l) /
          (1/2 (1-|x|^2) + 1/2 (1+|x|^2) g_{00} + sum_l g_{0l} x_l)
    """
    G = g.matrix
    xv = x.cartesian
    r2 = float(xv @ xv)
    denom = 0.5 * (1.0 - r2) + 0.5 * (1.0 + r2) * G[0, 0] + G[0, 1:] @ xv
    if denom < 1e-14:
        raise DegenerateDenominator(f"action denominator {denom!r} too small")
    y = (0.5 * (1.0 + r2) * G[1:, 0] + G[1:, 1:] @ xv) / denom
    return BallPoint.from_cartesian(y)


def invariant_measure_weight(x: BallPoint, n: int,
                             exponent: float | None = None) -> float:
    """Density of the isometry-invariant measure against Lebesgue measure,
    (1-|x|^2)^(-e). The invariance-validated exponent is e = n, the default."""
    e = float(n) if exponent is None else float(exponent)
    return (1.0 - x.r ** 2) ** (-e)


# ---------------------------------------------------------------------------
# approach regions


@dataclass(frozen=True)
class ConeRegion:
    """Non-tangential approach region: the interior of the convex hull of
    B(0, alpha) and the boundary point xi."""

    alpha: float
    xi: np.ndarray

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("aperture must lie in (0, 1)")
        v = np.asarray(self.xi, dtype=float)
        nrm = float(np.linalg.norm(v))
        if abs(nrm - 1.0) > 1e-12:
            raise ValueError("boundary point must be a unit vector")
        object.__setattr__(self, "xi", v)

    def contains(self, x: BallPoint) -> bool:
        return cone_contains(self, x)


def _cone_min_quadratic(alpha: float, r: float, t: float) -> float:
    """min over tau in [0,1] of |x - tau xi|^2 - (1-tau)^2 alpha^2 for
    x = r(t xi + ...), which depends on x only through (r, t)."""
    A = 1.0 - alpha * alpha
    B = alpha * alpha - r * t
    C = r * r - alpha * alpha
    # quadratic A tau^2 + 2 B tau + C, A > 0
    tau = min(1.0, max(0.0, -B / A))
    return A * tau * tau + 2.0 * B * tau + C


def cone_contains(region: ConeRegion, x: BallPoint) -> bool:
    """Membership by closed-form minimization of the hull quadratic."""
    t = float(x.zeta @ region.xi)
    return _cone_min_quadratic(region.alpha, x.r, t) < 0.0


def cone_polar_cut(region: ConeRegion, r: float) -> float:
    """Smallest t = <direction, xi> at radius r still inside the region;
    -1 if the whole sphere of radius r is inside (r < alpha)."""
    a = region.alpha
    if r < a:
        return -1.0
    if r >= 1.0:
        raise ValueError("r must be < 1")
    lo, hi = -1.0, 1.0
    # membership is monotone in t at fixed r; bisect the sign change
    if _cone_min_quadratic(a, r, hi) >= 0.0:
        return 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _cone_min_quadratic(a, r, mid) < 0.0:
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# quadrature grids


@dataclass(frozen=True)
class SphereGrid:
    """Nodes (unit vectors) and positive weights summing to 1, integrating
    against the normalized surface measure. zonal_only marks grids valid only
    for integrands of the form F(<xi, pole>)."""

    nodes: np.ndarray
    weights: np.ndarray
    zonal_only: bool = False
    pole: np.ndarray | None = None

    def integrate(self, values) -> float:
        return float(self.weights @ np.asarray(values, dtype=float))


def orthonormal_frame(*axes, n: int | None = None) -> list[np.ndarray]:
    """Gram-Schmidt frame whose leading vectors follow the given axes
    (degenerate axes replaced by coordinate directions), padded to 3 vectors."""
    if n is None:
        n = len(axes[0])
    out: list[np.ndarray] = []
    cands = [np.asarray(a, dtype=float) for a in axes]
    cands += [np.eye(n)[k] for k in range(n)]
    for v in cands:
        if len(out) == max(3, len(axes)):
            break
        w = v.copy()
        for e in out:
            w -= (w @ e) * e
        nrm = float(np.linalg.norm(w))
        if nrm > 1e-9:
            out.append(w / nrm)
    return out


def _angular_weight_rule(n: int, m: int):
    """Nodes s_i and weights such that sum_i w_i f(s_i) approximates
    int_{S^{n-2}} f(<omega, e>) dOmega = A_{n-3} int f(s)(1-s^2)^{(n-4)/2} ds."""
    if n == 3:
        s, w = roots_chebyt(m)  # weight (1-s^2)^{-1/2}
        scale = 2.0  # A_0, the two points of S^0
    else:
        # roots_gegenbauer(m, lam) integrates against (1-s^2)^{lam - 1/2}
        s, w = roots_gegenbauer(m, (n - 3) / 2.0)
        scale = sphere_area(n - 3)
    return s, w * scale


def sphere_quadrature(n: int, degree: int, full: bool = False,
                      pole: np.ndarray | None = None) -> SphereGrid:
    """Quadrature on the unit sphere against the normalized measure.

    full=True (n = 3 only): product Gauss-Legendre (polar) x uniform
    (azimuth) grid, exact for spherical polynomials up to the degree.
    Otherwise a zonal-reduction rule valid for integrands F(<xi, pole>).
    """
    if pole is None:
        pole = np.zeros(n)
        pole[0] = 1.0
    pole = np.asarray(pole, dtype=float)
    if full:
        if n != 3:
            raise UnsupportedRequest("full sphere grids exist only for n = 3")
        m = max(degree // 2 + 1, 2)
        tq, tw = roots_legendre(m)
        naz = max(degree + 1, 4)
        phi = 2.0 * math.pi * np.arange(naz) / naz
        st = np.sqrt(1.0 - tq ** 2)
        nodes = np.empty((m * naz, 3))
        nodes[:, 0] = np.repeat(tq, naz)
        nodes[:, 1] = np.repeat(st, naz) * np.tile(np.cos(phi), m)
        nodes[:, 2] = np.repeat(st, naz) * np.tile(np.sin(phi), m)
        w = np.repeat(tw, naz) / (2.0 * naz)
        return SphereGrid(nodes, w, zonal_only=False, pole=pole)
    m = max(degree // 2 + 1, 2)
    if n == 3:
        t, w = roots_legendre(m)
        w = w / 2.0
    else:
        t, w = roots_gegenbauer(m, (n - 2) / 2.0)
        w = w / w.sum()
    e1, e2, _ = orthonormal_frame(pole, n=n)
    nodes = np.outer(t, e1) + np.outer(np.sqrt(1.0 - t ** 2), e2)
    return SphereGrid(nodes, w, zonal_only=True, pole=pole)


@dataclass(frozen=True)
class VolumeGrid:
    """Points in the ball with Lebesgue weights, for volume integrals. The
    two_direction flag marks grids exact only for integrands depending on at
    most two fixed directions (always exact for n = 3)."""

    points: np.ndarray
    weights: np.ndarray
    two_direction: bool = False

    def integrate(self, values) -> float:
        return float(self.weights @ np.asarray(values, dtype=float))


def ball_quadrature(n: int, center, radius: float, n_radial: int = 24,
                    n_psi: int = 12, n_theta: int = 24,
                    axis1=None, axis2=None) -> VolumeGrid:
    """Lebesgue quadrature over the ball B(center, radius).

    Exact (up to degree) for integrands depending on |x - center| and the
    components of (x - center) along two fixed directions axis1, axis2; for
    n = 3 this covers all integrands.
    """
    center = np.asarray(center, dtype=float)
    if axis1 is None:
        axis1 = np.eye(n)[0]
    if axis2 is None:
        axis2 = np.eye(n)[min(1, n - 1)]
    e1, e2, e3 = orthonormal_frame(axis1, axis2, n=n)

    rq, rw = roots_legendre(n_radial)
    rho = 0.5 * radius * (rq + 1.0)
    rhow = 0.5 * radius * rw * rho ** (n - 1)

    # sphere directions via the two-direction disk reduction:
    # w = sin(psi)(cos th, sin th), remainder on +-e3 with half weight
    pq, pw = roots_legendre(n_psi)
    psi = 0.25 * math.pi * (pq + 1.0)
    psw = 0.25 * math.pi * pw
    th = 2.0 * math.pi * np.arange(n_theta) / n_theta
    thw = 2.0 * math.pi / n_theta
    area_rest = sphere_area(n - 3) if n > 3 else 2.0
    dirs, dw = [], []
    for p, wp in zip(psi, psw):
        s, c = math.sin(p), math.cos(p)
        ang = wp * thw * s * c ** (n - 3) * area_rest / 2.0
        for t in th:
            base = s * (math.cos(t) * e1 + math.sin(t) * e2)
            dirs.append(base + c * e3)
            dw.append(ang)
            dirs.append(base - c * e3)
            dw.append(ang)
    dirs = np.array(dirs)
    dw = np.array(dw)

    pts = center[None, None, :] + rho[:, None, None] * dirs[None, :, :]
    wts = rhow[:, None] * dw[None, :]
    return VolumeGrid(pts.reshape(-1, n), wts.ravel(), two_direction=(n > 3))


def cone_quadrature(region: ConeRegion, n: int, r_max: float,
                    pole=None, shells: int = 18, n_radial: int = 4,
                    n_polar: int = 12, n_angular: int = 12) -> VolumeGrid:
    """Lebesgue quadrature over the approach region truncated at |x| <= r_max.

    Dyadic radial shells x Gauss-Legendre, polar nodes between the per-radius
    cone cut and 1, angular nodes against the (1-s^2)^{(n-4)/2} reduction.
    Exact only for integrands depending on |x|, <x, xi> and <x, pole>;
    for n = 3 with uniform-azimuth nodes this covers all integrands.
    """
    xi = region.xi
    if pole is None:
        pole = xi
    pole = np.asarray(pole, dtype=float)
    # frame: first vector xi, second toward the part of pole orthogonal to xi
    _, e2, e3 = orthonormal_frame(xi, pole, n=n)

    gq, gw = roots_legendre(n_radial)
    pq, pw = roots_legendre(n_polar)
    s_nodes, s_w = _angular_weight_rule(n, n_angular)

    edges = [0.0] + [1.0 - 0.5 ** (j + 1) for j in range(shells)]
    edges = [e for e in edges if e < r_max] + [r_max]

    pts, wts = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        for q, wq in zip(gq, gw):
            r = lo + half * (q + 1.0)
            wr = half * wq * r ** (n - 1)
            tmin = cone_polar_cut(region, r)
            if tmin >= 1.0:
                continue
            th = 0.5 * (1.0 - tmin)
            for qp, wp in zip(pq, pw):
                t = tmin + th * (qp + 1.0)
                wt = th * wp * (1.0 - t * t) ** ((n - 3) / 2.0)
                rt = math.sqrt(max(1.0 - t * t, 0.0))
                for s, ws in zip(s_nodes, s_w):
                    sq = math.sqrt(max(1.0 - s * s, 0.0))
                    d = t * xi + rt * (s * e2 + sq * e3)
                    pts.append(r * d)
                    wts.append(wr * wt * ws)
    return VolumeGrid(np.array(pts), np.array(wts), two_direction=True)
