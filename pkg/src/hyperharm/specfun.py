"""Special functions for the radial and angular factors of hyperbolic-harmonic
expansions on the unit ball.

The radial family is F_l(x) = 2F1(l, 1 - n/2; l + n/2; x) together with its
normalization f_l = F_l / F_l(1); the angular family is the zonal harmonic
Z_l(t) = ((2l + n - 2)/(n - 2)) C_l^{(n-2)/2}(t), normalized so that
sum_l r^l Z_l(t) reproduces the Euclidean Poisson kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from .errors import NonConvergence

SERIES_TOL = 1e-12
SERIES_CAP = 100_000

# x above this threshold routes odd-n evaluation through the Euler integral,
# where the power series slows to a crawl.
_SERIES_X_MAX = 0.9


def pochhammer(a: float, k: int) -> float:
    """Rising factorial a (a+1) ... (a+k-1); 1 for k = 0."""
    if k < 0:
        raise ValueError("pochhammer requires k >= 0")
    out = 1.0
    for j in range(k):
        out *= a + j
    return out


def gauss_Fl_at_one(l: int, n: int) -> float:
    """F_l(1) by the Gauss summation formula.

    F_l(1) = Gamma(l + n/2) Gamma(n-1) / (Gamma(n/2) Gamma(l + n - 1)),
    valid since the parameter excess n - 1 is positive.
    """
    return math.exp(
        math.lgamma(l + n / 2.0)
        + math.lgamma(n - 1.0)
        - math.lgamma(n / 2.0)
        - math.lgamma(l + n - 1.0)
    )


def _series_2f1(a: float, b: float, c: float, x, tol: float, cap: int):
    """Power series for 2F1(a, b; c; x), vectorized over x.

    Terminates exactly when b is a nonpositive integer; otherwise sums until
    the term drops below tol relative to the partial sum.
    """
    x = np.asarray(x, dtype=float)
    term = np.ones_like(x)
    total = np.ones_like(x)
    terminating = b <= 0 and float(b).is_integer()
    kmax = int(-b) if terminating else cap
    for k in range(kmax):
        term = term * ((a + k) * (b + k) / ((c + k) * (k + 1.0))) * x
        total = total + term
        if not terminating and np.all(
            np.abs(term) <= tol * np.maximum(np.abs(total), 1.0)
        ):
            return total
    if not terminating:
        raise NonConvergence(
            f"2F1({a},{b};{c}) series did not converge within {cap} terms"
        )
    return total


@lru_cache(maxsize=1)
def _euler_panels(nodes_per_panel: int = 12, depth: int = 40):
    """Composite Gauss-Legendre rule on [0,1) with panels refined
    geometrically toward t = 1, so integrands with endpoint scales down to
    ~2^-depth are resolved uniformly."""
    xg, wg = roots_legendre(nodes_per_panel)
    ts, ws = [], []
    lo = 0.0
    for j in range(depth):
        hi = 1.0 - 0.5 ** (j + 1)
        half = 0.5 * (hi - lo)
        ts.append(lo + half * (xg + 1.0))
        ws.append(half * wg)
        lo = hi
    return np.concatenate(ts), np.concatenate(ws)


def _euler_2f1(a: float, b: float, c: float, x):
    """2F1(a, b; c; x) by the Euler integral over the first parameter,
    requiring c > a > 0. Accurate for x arbitrarily close to 1."""
    if not c > a > 0:
        raise ValueError("Euler integral needs c > a > 0")
    t, w = _euler_panels()
    base = w * t ** (a - 1.0) * (1.0 - t) ** (c - a - 1.0)
    x = np.asarray(x, dtype=float)
    kern = (1.0 - x[..., None] * t) ** (-b)
    integral = kern @ base
    pref = math.exp(math.lgamma(c) - math.lgamma(a) - math.lgamma(c - a))
    return pref * integral


def _eval_2f1_family(a: float, b: float, c: float, x, tol: float, cap: int):
    """Evaluate 2F1(a, b; c; x) for the radial-family parameter patterns,
    choosing series or Euler integral per point."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)
    terminating = b <= 0 and float(b).is_integer()
    near = x > _SERIES_X_MAX
    if terminating or not near.any():
        out[:] = _series_2f1(a, b, c, x, tol, cap)
    else:
        far = ~near
        if far.any():
            out[far] = _series_2f1(a, b, c, x[far], tol, cap)
        out[near] = _euler_2f1(a, b, c, x[near])
    return out[0] if scalar else out


def hyp2f1_Fl(l: int, n: int, x, tol: float = SERIES_TOL, cap: int = SERIES_CAP):
    """F_l(x) = 2F1(l, 1 - n/2; l + n/2; x) for x in [0, 1].

    For n even the series terminates and is summed exactly as a polynomial of
    degree <= n/2 - 1; for n odd the series (or the Euler integral near x = 1)
    is used. x = 1 is returned from the Gauss closed form.
    """
    if l < 0 or n < 3:
        raise ValueError("need l >= 0 and n >= 3")
    if l == 0:
        x = np.asarray(x, dtype=float)
        return float(1.0) if x.ndim == 0 else np.ones_like(x)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    xv = np.atleast_1d(x)
    out = np.empty_like(xv)
    at_one = xv == 1.0
    if at_one.any():
        out[at_one] = gauss_Fl_at_one(l, n)
    rest = ~at_one
    if rest.any():
        out[rest] = _eval_2f1_family(l, 1.0 - n / 2.0, l + n / 2.0, xv[rest], tol, cap)
    return float(out[0]) if scalar else out


def fl_normalized(l: int, n: int, x, tol: float = SERIES_TOL, cap: int = SERIES_CAP):
    """f_l(x) = F_l(x) / F_l(1); identically 1 for l = 0 and at x = 1."""
    if l == 0:
        x = np.asarray(x, dtype=float)
        return float(1.0) if x.ndim == 0 else np.ones_like(x)
    return hyp2f1_Fl(l, n, x, tol, cap) / gauss_Fl_at_one(l, n)


def fl_deriv(l: int, n: int, x, order: int = 1,
             tol: float = SERIES_TOL, cap: int = SERIES_CAP):
    """order-th derivative of f_l at x, via the parameter-shift rule
    d/dx 2F1(a,b;c;x) = (ab/c) 2F1(a+1, b+1; c+1; x)."""
    if order == 0:
        return fl_normalized(l, n, x, tol, cap)
    a, b, c = float(l), 1.0 - n / 2.0, l + n / 2.0
    pref = 1.0
    for j in range(order):
        pref *= (a + j) * (b + j) / (c + j)
    if pref == 0.0:
        x = np.asarray(x, dtype=float)
        return float(0.0) if x.ndim == 0 else np.zeros_like(x)
    val = _eval_2f1_family(a + order, b + order, c + order, x, tol, cap)
    return pref * val / gauss_Fl_at_one(l, n)


# ---------------------------------------------------------------------------
# zonal harmonics


def _gegenbauer_all(lmax: int, lam: float, t):
    """C_0 .. C_lmax of the Gegenbauer family with parameter lam at t, by the
    forward three-term recurrence (stable on [-1, 1])."""
    t = np.asarray(t, dtype=float)
    out = np.empty((lmax + 1,) + t.shape)
    out[0] = 1.0
    if lmax >= 1:
        out[1] = 2.0 * lam * t
    for l in range(2, lmax + 1):
        out[l] = (2.0 * (l + lam - 1.0) * t * out[l - 1]
                  - (l + 2.0 * lam - 2.0) * out[l - 2]) / l
    return out


def zonal_all(lmax: int, n: int, t):
    """Z_0(t) .. Z_lmax(t) stacked along the first axis."""
    lam = (n - 2.0) / 2.0
    c = _gegenbauer_all(lmax, lam, t)
    scale = (2.0 * np.arange(lmax + 1) + n - 2.0) / (n - 2.0)
    return c * scale.reshape((-1,) + (1,) * (c.ndim - 1))


def zonal(l: int, n: int, t):
    """Zonal harmonic Z_l(t) = ((2l+n-2)/(n-2)) C_l^{(n-2)/2}(t)."""
    if l < 0 or n < 3:
        raise ValueError("need l >= 0 and n >= 3")
    out = zonal_all(l, n, t)[l]
    return float(out) if np.ndim(t) == 0 else out


def zonal_deriv(l: int, n: int, t):
    """d/dt Z_l(t), via (C_l^lam)' = 2 lam C_{l-1}^{lam+1}."""
    if l == 0:
        t = np.asarray(t, dtype=float)
        return float(0.0) if t.ndim == 0 else np.zeros_like(t)
    lam = (n - 2.0) / 2.0
    c = _gegenbauer_all(l - 1, lam + 1.0, t)[l - 1]
    out = (2.0 * l + n - 2.0) / (n - 2.0) * 2.0 * lam * c
    return float(out) if np.ndim(t) == 0 else out


def zonal_at_one(l: int, n: int) -> float:
    """Z_l(1), the dimension of the degree-l spherical-harmonic space."""
    lam = (n - 2.0) / 2.0
    # C_l^lam(1) = (2 lam)_l / l!, in log-gamma form to survive large l
    c1 = math.exp(math.lgamma(2.0 * lam + l) - math.lgamma(2.0 * lam)
                  - math.lgamma(l + 1.0))
    return (2.0 * l + n - 2.0) / (n - 2.0) * c1


def lap_sigma_eigenvalue(l: int, n: int) -> float:
    """Eigenvalue of the tangential Laplacian on degree-l harmonics."""
    return -float(l * (l + n - 2))


@dataclass(frozen=True)
class RadialFactor:
    """The degree-l radial factor of dimension n, with F_l(1) cached."""

    l: int
    n: int
    value_at_one: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "value_at_one", gauss_Fl_at_one(self.l, self.n))

    def __call__(self, x):
        """f_l(x) = F_l(x) / F_l(1)."""
        return fl_normalized(self.l, self.n, x)

    def deriv(self, x, order: int = 1):
        return fl_deriv(self.l, self.n, x, order)


@dataclass(frozen=True)
class ZonalPolynomial:
    """Degree-l zonal harmonic with its Gegenbauer coefficient table
    (monomial coefficients in t, ascending)."""

    l: int
    n: int
    coeffs: tuple = field(init=False)

    def __post_init__(self):
        # build monomial coefficients from the recurrence, exactly in floats
        lam = (self.n - 2.0) / 2.0
        polys = [np.array([1.0]), np.array([0.0, 2.0 * lam])]
        for l in range(2, self.l + 1):
            a = np.zeros(l + 1)
            a[1:] += 2.0 * (l + lam - 1.0) / l * polys[l - 1]
            a[: l - 1] -= (l + 2.0 * lam - 2.0) / l * polys[l - 2]
            polys.append(a)
        c = polys[self.l] if self.l >= 1 else polys[0]
        scale = (2.0 * self.l + self.n - 2.0) / (self.n - 2.0)
        object.__setattr__(self, "coeffs", tuple(scale * c[: self.l + 1]))

    def __call__(self, t):
        out = np.polynomial.polynomial.polyval(np.asarray(t, dtype=float),
                                               np.asarray(self.coeffs))
        return float(out) if np.ndim(t) == 0 else out
