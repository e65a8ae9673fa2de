"""Harmonic extension of boundary data on the unit ball and exact operator
calculus on mode representations.

A mode is c * f_l(delta^2 r^2) r^l (angular factor). The radial engine keeps
each mode as sum_i p_i(r) G_i(delta^2 r^2), where G_i is the i-th derivative
of the normalized radial factor f_l. This family is closed under the radial
derivative N = r d/dr, multiplication by polynomials in r, the tangential
Laplacian (an eigenvalue per mode), and dilation, so all the differential
operators used here act exactly (no finite differences on mode forms).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import gammaln, roots_legendre, sph_harm_y

from . import specfun as sf
from .errors import (DataFileError, OriginSingularity, QuadratureFailure,
                     UnsupportedDimension)
from .geometry import BallPoint

_P = np.polynomial.polynomial


def _trim(c: np.ndarray) -> np.ndarray:
    c = np.atleast_1d(np.asarray(c, dtype=float))
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        return np.zeros(1)
    return c[: nz[-1] + 1]


@dataclass(frozen=True)
class RadialPart:
    """Radial factor sum_i p_i(r) G_i(delta^2 r^2) of a degree-l mode.

    polys[i] holds ascending coefficients of p_i; G_i is the i-th derivative
    of f_l. For even n the buckets with i >= n/2 vanish identically and are
    dropped."""

    l: int
    n: int
    delta: float
    polys: tuple

    @classmethod
    def base(cls, l: int, n: int, coeff: float = 1.0,
             delta: float = 1.0) -> "RadialPart":
        p0 = np.zeros(l + 1)
        p0[l] = coeff
        return cls(l, n, delta, (p0,))

    def _with(self, polys) -> "RadialPart":
        if self.n % 2 == 0:
            polys = polys[: self.n // 2]  # G_i = 0 for i >= n/2
        polys = [_trim(p) for p in polys]
        while len(polys) > 1 and np.all(polys[-1] == 0.0):
            polys.pop()
        return replace(self, polys=tuple(polys))

    def evaluate(self, r):
        r = np.asarray(r, dtype=float)
        x = (self.delta * r) ** 2
        out = np.zeros(r.shape) if r.shape else 0.0
        for i, p in enumerate(self.polys):
            if np.all(p == 0.0):
                continue
            out = out + _P.polyval(r, p) * sf.fl_deriv(self.l, self.n, x, i)
        return out

    def scale(self, c: float) -> "RadialPart":
        return self._with([p * c for p in self.polys])

    def add(self, other: "RadialPart") -> "RadialPart":
        if (other.l, other.n) != (self.l, self.n) or \
                other.delta != self.delta:
            raise ValueError("incompatible radial parts")
        m = max(len(self.polys), len(other.polys))
        out = []
        for i in range(m):
            a = self.polys[i] if i < len(self.polys) else np.zeros(1)
            b = other.polys[i] if i < len(other.polys) else np.zeros(1)
            out.append(_P.polyadd(a, b))
        return self._with(out)

    def mul_poly(self, coeffs) -> "RadialPart":
        coeffs = np.asarray(coeffs, dtype=float)
        return self._with([_P.polymul(p, coeffs) for p in self.polys])

    def apply_N(self) -> "RadialPart":
        """N = r d/dr: bucket i receives r p_i' and feeds 2 delta^2 r^2 p_i
        into bucket i+1 (chain rule through the hypergeometric argument)."""
        m = len(self.polys)
        out = [np.zeros(1) for _ in range(m + 1)]
        shift = 2.0 * self.delta ** 2
        for i, p in enumerate(self.polys):
            rp = _P.polymul(_P.polyder(p), [0.0, 1.0])  # r p'
            out[i] = _P.polyadd(out[i], rp)
            out[i + 1] = _P.polyadd(out[i + 1],
                                    _P.polymul(p, [0.0, 0.0, shift]))
        return self._with(out)

    def diff_r(self) -> "RadialPart":
        """d/dr: bucket i receives p_i' and feeds 2 delta^2 r p_i up."""
        m = len(self.polys)
        out = [np.zeros(1) for _ in range(m + 1)]
        shift = 2.0 * self.delta ** 2
        for i, p in enumerate(self.polys):
            out[i] = _P.polyadd(out[i], _P.polyder(p))
            out[i + 1] = _P.polyadd(out[i + 1],
                                    _P.polymul(p, [0.0, shift]))
        return self._with(out)

    def _shift_down(self, k: int, tol: float = 1e-9) -> "RadialPart":
        scale = max((np.max(np.abs(p)) for p in self.polys), default=0.0)
        out = []
        for p in self.polys:
            head = p[:k]
            if scale > 0.0 and np.any(np.abs(head) > tol * scale):
                raise OriginSingularity(
                    "radial part does not vanish to the required order at 0")
            out.append(p[k:] if len(p) > k else np.zeros(1))
        return self._with(out)

    def div_r2(self) -> "RadialPart":
        """Exact division by r^2; valid when the low-order coefficients
        cancel, which they do for every operator combination used here."""
        return self._shift_down(2)

    def div_r(self) -> "RadialPart":
        return self._shift_down(1)

    def dilate(self, delta0: float) -> "RadialPart":
        """r -> delta0 r: rescale polynomials and the argument scale."""
        out = [p * delta0 ** np.arange(len(p)) for p in self.polys]
        return replace(self, delta=self.delta * delta0,
                       polys=tuple(_trim(p) for p in out))

    def is_zero(self) -> bool:
        return all(np.all(p == 0.0) for p in self.polys)


@dataclass(frozen=True)
class ZonalExpansion:
    """Boundary data phi(<xi, pole>) = sum_l c_l Z_l(<xi, pole>)."""

    n: int
    pole: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.pole, dtype=float)
        if abs(np.linalg.norm(p) - 1.0) > 1e-12:
            raise ValueError("pole must be a unit vector")
        object.__setattr__(self, "pole", p)
        object.__setattr__(self, "coeffs",
                           np.asarray(self.coeffs, dtype=float))

    def boundary_value(self, t):
        t = np.asarray(t, dtype=float)
        L = len(self.coeffs) - 1
        Z = sf.zonal_all(L, self.n, t)
        return np.tensordot(self.coeffs, Z, axes=(0, 0))


@dataclass(frozen=True)
class Sph3Expansion:
    """Boundary data on the 2-sphere as complex spherical-harmonic
    coefficients a_{l,m} with the reality symmetry
    a_{l,-m} = (-1)^m conj(a_{l,m})."""

    coeffs: tuple  # coeffs[l] is a complex array of length 2l+1 (m = -l..l)

    @property
    def lmax(self) -> int:
        return len(self.coeffs) - 1


def zonal_to_sph3(data: ZonalExpansion) -> Sph3Expansion:
    """Addition theorem: c_l Z_l(<zeta, xi>) = 4 pi c_l
    sum_m conj(Y_lm(zeta)) Y_lm(xi)."""
    if data.n != 3:
        raise UnsupportedDimension("full coefficient sets exist only for n=3")
    theta = math.acos(max(-1.0, min(1.0, data.pole[2])))
    phi = math.atan2(data.pole[1], data.pole[0])
    out = []
    for l, c in enumerate(data.coeffs):
        ms = np.arange(-l, l + 1)
        Y = sph_harm_y(l, ms, theta, phi)
        out.append(4.0 * math.pi * c * np.conj(Y))
    return Sph3Expansion(tuple(out))


@dataclass(frozen=True)
class HarmonicFunction:
    """Finite mode expansion on the ball.

    kind "zonal": modes[l] is a RadialPart with the coefficient folded in,
    the angular factor being Z_l(<zeta, pole>). kind "sph3" (n = 3): modes[l]
    is (RadialPart, complex coefficient array over m)."""

    n: int
    kind: str
    pole: np.ndarray | None
    modes: tuple
    delta: float = 1.0

    # -- evaluation ---------------------------------------------------------

    def eval_rt(self, r, t):
        """Zonal fast path: value at radius r, cosine t to the pole."""
        if self.kind != "zonal":
            raise ValueError("eval_rt applies to zonal expansions")
        r = np.asarray(r, dtype=float)
        t = np.asarray(t, dtype=float)
        out = np.zeros(np.broadcast(r, t).shape)
        if not self.modes:
            return out if out.shape else float(out)
        lmax = max(l for l, _ in self.modes)
        Z = sf.zonal_all(lmax, self.n, t)
        for l, rad in self.modes:
            out = out + rad.evaluate(r) * Z[l]
        return out if out.shape else float(out)

    def eval_points(self, pts):
        """Value at an array of Cartesian interior points (m x n)."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        r = np.linalg.norm(pts, axis=1)
        if self.kind == "zonal":
            safe = np.where(r > 0, r, 1.0)
            t = (pts @ self.pole) / safe
            t[r == 0] = 1.0  # r^l kills l>0 modes; Z_l value irrelevant
            return self.eval_rt(r, np.clip(t, -1.0, 1.0))
        # sph3
        safe = np.where(r > 0, r, 1.0)
        theta = np.arccos(np.clip(pts[:, 2] / safe, -1.0, 1.0))
        phi = np.arctan2(pts[:, 1], pts[:, 0])
        out = np.zeros(len(pts), dtype=complex)
        for l, (rad, coeff) in self.modes:
            rv = rad.evaluate(r)
            ms = np.arange(-l, l + 1)
            Y = sph_harm_y(np.full_like(ms, l), ms, theta[:, None], phi[:, None])
            out = out + rv * (Y @ coeff)
        return out.real

    def __call__(self, x: BallPoint) -> float:
        return float(self.eval_points(x.cartesian[None, :])[0])

    # -- structural helpers -------------------------------------------------

    def _map_radial(self, fn) -> "HarmonicFunction":
        if self.kind == "zonal":
            modes = tuple((l, fn(l, rad)) for l, rad in self.modes)
            modes = tuple((l, rad) for l, rad in modes if not rad.is_zero())
        else:
            modes = tuple((l, (fn(l, rad), coeff))
                          for l, (rad, coeff) in self.modes)
            modes = tuple((l, rc) for l, rc in modes if not rc[0].is_zero())
        return replace(self, modes=modes)

    def scale(self, c: float) -> "HarmonicFunction":
        return self._map_radial(lambda l, rad: rad.scale(c))

    def add(self, other: "HarmonicFunction") -> "HarmonicFunction":
        if (self.n, self.kind, self.delta) != (other.n, other.kind,
                                               other.delta):
            raise ValueError("incompatible expansions")
        if self.kind == "zonal" and not np.allclose(self.pole, other.pole):
            raise ValueError("expansions have different poles")
        if self.kind == "zonal":
            acc: dict = {l: rad for l, rad in self.modes}
            for l, rad in other.modes:
                acc[l] = acc[l].add(rad) if l in acc else rad
            modes = tuple(sorted(acc.items()))
        else:
            acc = {l: rc for l, rc in self.modes}
            for l, (rad, coeff) in other.modes:
                if l in acc:
                    r0, c0 = acc[l]
                    same_rad = len(r0.polys) == len(rad.polys) and all(
                        p.shape == q.shape and np.array_equal(p, q)
                        for p, q in zip(r0.polys, rad.polys))
                    if same_rad:
                        acc[l] = (r0, c0 + coeff)
                    elif np.allclose(c0, coeff):
                        acc[l] = (r0.add(rad), c0)
                    else:
                        raise ValueError(
                            "cannot merge sph3 modes differing in both the "
                            "radial part and the coefficients")
                else:
                    acc[l] = (rad, coeff)
            modes = tuple(sorted(acc.items()))
        return replace(self, modes=modes)


# ---------------------------------------------------------------------------
# extension and data ingestion


def extend(boundary, pole=None, delta: float = 1.0) -> HarmonicFunction:
    """Harmonic extension: boundary sum c_l Z_l becomes
    sum c_l f_l(r^2) r^l Z_l (exact for finite expansions). delta < 1 builds
    the dilated extension directly (see dilate)."""
    if isinstance(boundary, ZonalExpansion):
        modes = tuple(
            (l, RadialPart.base(l, boundary.n, float(c)))
            for l, c in enumerate(boundary.coeffs) if c != 0.0)
        u = HarmonicFunction(boundary.n, "zonal", boundary.pole, modes)
    elif isinstance(boundary, Sph3Expansion):
        modes = tuple(
            (l, (RadialPart.base(l, 3, 1.0), np.asarray(c, dtype=complex)))
            for l, c in enumerate(boundary.coeffs)
            if np.any(np.asarray(c) != 0.0))
        u = HarmonicFunction(3, "sph3", None, modes)
    else:
        raise TypeError("boundary must be a ZonalExpansion or Sph3Expansion")
    if delta != 1.0:
        u = dilate(u, delta)
    return u


def dilate(u: HarmonicFunction, delta0: float) -> HarmonicFunction:
    """v(x) = u(delta0 x); annihilated by the interpolating operator with
    parameter delta0 when u is harmonic."""
    if not 0.0 < delta0 <= 1.0:
        raise ValueError("dilation parameter must lie in (0, 1]")
    v = u._map_radial(lambda l, rad: rad.dilate(delta0))
    return replace(v, delta=u.delta * delta0)


def random_zonal(n: int, lmax: int, rng: np.random.Generator,
                 decay: float = 2.0, pole=None) -> ZonalExpansion:
    """Seeded test data: c_l = rho_l (l+1)^(-decay), rho_l uniform in
    [-1, 1]."""
    if pole is None:
        pole = np.zeros(n)
        pole[0] = 1.0
    rho = rng.uniform(-1.0, 1.0, lmax + 1)
    c = rho * (np.arange(lmax + 1) + 1.0) ** (-decay)
    return ZonalExpansion(n, pole, c)


def project_zonal(func, n: int, lmax: int, degree: int | None = None
                  ) -> np.ndarray:
    """Coefficients of phi(t) in the zonal basis by quadrature against the
    projected sphere measure; c_l = int phi Z_l dnu / Z_l(1)."""
    if degree is None:
        degree = 2 * lmax + 16
    m = degree // 2 + 1
    from scipy.special import roots_gegenbauer, roots_legendre as _rl
    if n == 3:
        t, w = _rl(m)
        w = w / 2.0
    else:
        t, w = roots_gegenbauer(m, (n - 2) / 2.0)
        w = w / w.sum()
    vals = np.asarray(func(t), dtype=float)
    Z = sf.zonal_all(lmax, n, t)
    c = (Z * vals) @ w
    z1 = np.array([sf.zonal_at_one(l, n) for l in range(lmax + 1)])
    return c / z1


def load_boundary_data(source) -> tuple:
    """Parse boundary data from a JSON file path, JSON text, or dict.

    Returns (expansion, seed) where expansion is ZonalExpansion or
    Sph3Expansion. Schema: {"n": int, "kind": "zonal-coeffs" |
    "zonal-samples" | "sph3-coeffs", "pole": [...], "coeffs" | "samples":
    ..., "seed": optional int}.
    """
    if isinstance(source, dict):
        doc = source
    else:
        text = None
        try:
            with open(source) as fh:
                text = fh.read()
        except (OSError, TypeError):
            text = source
        try:
            doc = json.loads(text)
        except (json.JSONDecodeError, TypeError) as exc:
            raise DataFileError(f"unreadable boundary data: {exc}") from exc
    if not isinstance(doc, dict):
        raise DataFileError("boundary data must be a JSON object")
    try:
        n = int(doc["n"])
        kind = doc["kind"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DataFileError("boundary data needs integer 'n' and 'kind'") \
            from exc
    if n < 3:
        raise DataFileError("dimension must be at least 3")
    seed = doc.get("seed")
    pole = np.asarray(doc.get("pole", [1.0] + [0.0] * (n - 1)), dtype=float)
    if pole.shape != (n,):
        raise DataFileError("pole length must match the dimension")
    nrm = float(np.linalg.norm(pole))
    if nrm == 0.0:
        raise DataFileError("pole must be nonzero")
    pole = pole / nrm
    if kind == "zonal-coeffs":
        if "coeffs" not in doc:
            raise DataFileError("kind zonal-coeffs requires 'coeffs'")
        return ZonalExpansion(n, pole, np.asarray(doc["coeffs"],
                                                  dtype=float)), seed
    if kind == "zonal-samples":
        if "samples" not in doc:
            raise DataFileError("kind zonal-samples requires 'samples'")
        samples = np.asarray(doc["samples"], dtype=float)
        if samples.ndim != 2 or samples.shape[1] != 2:
            raise DataFileError("samples must be rows of [t, value]")
        order = np.argsort(samples[:, 0])
        ts, vs = samples[order, 0], samples[order, 1]
        lmax = max(1, min(len(ts) // 2, 128))

        def interp(t):
            return np.interp(t, ts, vs)

        coeffs = project_zonal(interp, n, lmax)
        return ZonalExpansion(n, pole, coeffs), seed
    if kind == "sph3-coeffs":
        if n != 3:
            raise DataFileError("sph3-coeffs requires n = 3")
        if "coeffs" not in doc:
            raise DataFileError("kind sph3-coeffs requires 'coeffs'")
        rows = doc["coeffs"]
        try:
            packed = [np.asarray([complex(v[0], v[1]) if
                                  isinstance(v, (list, tuple)) else complex(v)
                                  for v in row], dtype=complex)
                      for row in rows]
        except (TypeError, IndexError, ValueError) as exc:
            raise DataFileError("sph3 coefficients must be rows of complex "
                                "pairs") from exc
        for l, row in enumerate(packed):
            if len(row) != 2 * l + 1:
                raise DataFileError(f"degree {l} row must have {2*l+1} "
                                    "entries")
        return Sph3Expansion(tuple(packed)), seed
    raise DataFileError(f"unknown boundary-data kind {kind!r}")


# ---------------------------------------------------------------------------
# exact operators on mode forms


def apply_N(u: HarmonicFunction, k: int = 1) -> HarmonicFunction:
    """k-fold radial derivative N = r d/dr, exact per mode."""
    out = u
    for _ in range(k):
        out = out._map_radial(lambda l, rad: rad.apply_N())
    return out


def apply_lap_sigma(u: HarmonicFunction, j: int = 1) -> HarmonicFunction:
    """j-th power of the tangential Laplacian: each degree-l mode scales by
    (-l(l+n-2))^j."""
    return u._map_radial(
        lambda l, rad: rad.scale(sf.lap_sigma_eigenvalue(l, u.n) ** j))


def apply_neg_lap_sigma_half(u: HarmonicFunction) -> HarmonicFunction:
    """Square root of minus the tangential Laplacian: scale by
    sqrt(l(l+n-2))."""
    return u._map_radial(
        lambda l, rad: rad.scale(math.sqrt(-sf.lap_sigma_eigenvalue(l, u.n))))


def _mul_poly(u: HarmonicFunction, coeffs) -> HarmonicFunction:
    return u._map_radial(lambda l, rad: rad.mul_poly(coeffs))


def apply_L(u: HarmonicFunction) -> HarmonicFunction:
    """L = (1/r^2)[(1-r^2)N^2 + (n-2)(1+r^2)N + (1-r^2) tangential], exact
    on mode forms; the 1/r^2 divides out because the numerator coefficients
    cancel to machine precision at orders 0 and 1."""
    n = u.n
    one_minus = [1.0, 0.0, -1.0]
    one_plus = [1.0, 0.0, 1.0]
    part = _mul_poly(apply_N(u, 2), one_minus)
    part = part.add(_mul_poly(apply_N(u, 1), one_plus).scale(n - 2.0))
    part = part.add(_mul_poly(apply_lap_sigma(u), one_minus))
    return part._map_radial(lambda l, rad: rad.div_r2())


def apply_D(u: HarmonicFunction) -> HarmonicFunction:
    """Invariant Laplacian D = (1-r^2) L."""
    return _mul_poly(apply_L(u), [1.0, 0.0, -1.0])


def apply_L_fd(f, x: BallPoint, n: int, h: float = 1e-4,
               r_min: float = 1e-3) -> float:
    """Black-box L by finite differences: D/(1-r^2) with D from second
    differences. Refuses points too close to the origin, where the 1/r^2
    prefactor is numerically hostile."""
    if x.r < r_min:
        raise OriginSingularity("black-box L needs r >= r_min")
    return d_residual(f, x.cartesian, n, delta=1.0, h=h) / (1.0 - x.r ** 2)


def gradient_sq(u: HarmonicFunction):
    """Returns a callable giving |grad u|^2 at Cartesian point arrays.

    Zonal: (d_r u)^2 + (1-t^2)(sum_l R_l(r) Z_l'(t))^2 / r^2, with the 1/r
    absorbed into the radial parts exactly. sph3: ((N u)^2 +
    sum_{i<j} (rotation-derivative u)^2) / r^2 with values combined at the
    evaluation points.
    """
    if u.kind == "zonal":
        dr = u._map_radial(lambda l, rad: rad.diff_r())
        # tangential factor: modes l >= 1 with radial part divided by r
        tang = tuple((l, rad.div_r()) for l, rad in u.modes if l >= 1)

        def grad2(pts):
            pts = np.atleast_2d(np.asarray(pts, dtype=float))
            r = np.linalg.norm(pts, axis=1)
            safe = np.where(r > 0, r, 1.0)
            t = np.clip((pts @ u.pole) / safe, -1.0, 1.0)
            t = np.where(r > 0, t, 1.0)
            radial = dr.eval_rt(r, t)
            out = radial ** 2
            if tang:
                lmax = max(l for l, _ in tang)
                dZ = np.stack([sf.zonal_deriv(l, u.n, t)
                               for l in range(lmax + 1)])
                acc = np.zeros_like(r)
                for l, rad in tang:
                    acc += rad.evaluate(r) * dZ[l]
                out = out + (1.0 - t ** 2) * acc ** 2
            return out

        return grad2
    # sph3: rotational derivatives plus N, all exact in coefficients
    Nu = apply_N(u)
    rots = [apply_Lij(u, i, j) for i, j in ((1, 2), (2, 3), (3, 1))]

    def grad2(pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        r = np.linalg.norm(pts, axis=1)
        if np.any(r < 1e-8):
            raise OriginSingularity("sph3 gradient needs r > 0")
        total = Nu.eval_points(pts) ** 2
        for v in rots:
            total = total + v.eval_points(pts) ** 2
        return total / r ** 2

    return grad2


def _ladder_coeff(l: int, m: int, up: bool) -> float:
    tgt = m + 1 if up else m - 1
    val = l * (l + 1) - m * tgt
    return math.sqrt(val) if val > 0 else 0.0


def apply_Lij(u: HarmonicFunction, i: int, j: int,
              k: int = 1) -> HarmonicFunction:
    """Rotation derivative x_i d_j - x_j d_i, k times, acting exactly on
    spherical-harmonic coefficients (n = 3). Preserves harmonicity and the
    degree l; mixes m through the ladder operators."""
    if u.kind == "zonal":
        if u.n != 3:
            raise UnsupportedDimension(
                "rotation derivatives need full coefficients; only n = 3 "
                "zonal data can be promoted")
        u = zonal_as_sph3(u)
    if (i, j) not in ((1, 2), (2, 3), (3, 1), (2, 1), (3, 2), (1, 3)):
        raise ValueError("axes must be distinct and in 1..3")
    sign = 1.0
    if (i, j) in ((2, 1), (3, 2), (1, 3)):
        i, j = j, i
        sign = -1.0

    def act(l: int, a: np.ndarray) -> np.ndarray:
        ms = np.arange(-l, l + 1)
        if (i, j) == (1, 2):
            return 1j * ms * a
        up = np.zeros_like(a)
        dn = np.zeros_like(a)
        for idx, m in enumerate(ms):
            cu = _ladder_coeff(l, m, True)
            cd = _ladder_coeff(l, m, False)
            if cu and idx + 1 < len(ms):
                up[idx + 1] += cu * a[idx]
            if cd and idx - 1 >= 0:
                dn[idx - 1] += cd * a[idx]
        if (i, j) == (2, 3):  # i Lx = i (L+ + L-)/2
            return 0.5j * (up + dn)
        # (3, 1): i Ly = (L+ - L-)/2
        return 0.5 * (up - dn)

    modes = u.modes
    for _ in range(k):
        modes = tuple((l, (rad, sign * act(l, coeff)))
                      for l, (rad, coeff) in modes)
    modes = tuple((l, rc) for l, rc in modes if np.any(rc[1] != 0.0))
    return replace(u, modes=modes)


def zonal_as_sph3(u: HarmonicFunction) -> HarmonicFunction:
    """Re-express an n = 3 zonal mode form in full coefficients, keeping the
    radial parts (so operator history survives the conversion)."""
    if u.kind != "zonal" or u.n != 3:
        raise UnsupportedDimension("conversion defined for n = 3 zonal forms")
    theta = math.acos(max(-1.0, min(1.0, u.pole[2])))
    phi = math.atan2(u.pole[1], u.pole[0])
    modes = []
    for l, rad in u.modes:
        ms = np.arange(-l, l + 1)
        Y = sph_harm_y(l, ms, theta, phi)
        modes.append((l, (rad, 4.0 * math.pi * np.conj(Y))))
    return HarmonicFunction(3, "sph3", None, tuple(modes), u.delta)


# ---------------------------------------------------------------------------
# finite-difference oracles


def fd_gradient(f, x: np.ndarray, h: float) -> np.ndarray:
    n = len(x)
    g = np.zeros(n)
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2.0 * h)
    return g


def fd_laplacian(f, x: np.ndarray, h: float) -> float:
    n = len(x)
    c = f(x)
    out = 0.0
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        out += (f(x + e) - 2.0 * c + f(x - e)) / h ** 2
    return out


def d_residual(f, x: np.ndarray, n: int, delta: float = 1.0,
               h: float = 1e-4) -> float:
    """Finite-difference residual of the interpolating invariant Laplacian
    (1-delta^2 r^2)^2 Lap + 2(n-2) delta^2 (1-delta^2 r^2) sum x_i d_i;
    O(h^2)-consistent, and zero through that order on dilated harmonic
    functions."""
    r2 = float(x @ x)
    w = 1.0 - delta ** 2 * r2
    lap = fd_laplacian(f, x, h)
    rad = float(x @ fd_gradient(f, x, h))
    return w * w * lap + 2.0 * (n - 2.0) * delta ** 2 * w * rad


def fd_order(f, points, n: int, delta: float = 1.0,
             h0: float = 1e-2) -> float:
    """Observed convergence order of the residual under step halving,
    aggregated over points by the median of log2 ratios."""
    orders = []
    for x in points:
        r1 = abs(d_residual(f, x, n, delta, h0))
        r2 = abs(d_residual(f, x, n, delta, h0 / 2.0))
        if r2 > 1e-14:
            orders.append(math.log2(r1 / r2))
    if not orders:
        raise ValueError("all residuals vanished; no order to measure")
    return float(np.median(orders))


# ---------------------------------------------------------------------------
# radial inversion of the derivative relation


def invert_N_from_ray(v_func, r: float, n: int, k: int,
                      tol: float = 1e-9, max_doublings: int = 10) -> float:
    """Recover N^k u(r zeta) from v(t) = 2(n-1-k) N^k u(t zeta) +
    (1-t^2) N^{k+1} u(t zeta) by the integral formula

        N^k u(r) = ((1-r^2)/r^2)^(n-1-k)
                   int_0^r v(t) t^(2n-3-2k) (1-t^2)^(k-n) dt.
    """
    a = 2 * n - 3 - 2 * k

    def integrand(t):
        return v_func(t) * t ** a * (1.0 - t ** 2) ** (k - n)

    xg, wg = roots_legendre(16)
    prev = None
    panels = 4
    for _ in range(max_doublings):
        edges = r * (1.0 - 0.5 ** np.arange(panels + 1))
        edges[-1] = r
        total = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            half = 0.5 * (hi - lo)
            ts = lo + half * (xg + 1.0)
            total += half * float(wg @ integrand(ts))
        if prev is not None and abs(total - prev) <= tol * max(abs(total),
                                                              1e-30):
            pref = ((1.0 - r ** 2) / r ** 2) ** (n - 1 - k)
            return pref * total
        prev = total
        panels += 4
    raise QuadratureFailure("ray inversion integral did not settle")
