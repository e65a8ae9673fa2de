"""Tests for the maximal, area, and Littlewood-Paley functionals and the
L^p quasi-norms."""

import csv
import os

import numpy as np
import pytest

from hyperharm import functionals as fn
from hyperharm import harmonic as hm
from hyperharm import kernels as ker
from hyperharm.geometry import BallPoint


def e_vec(n, i=0):
    v = np.zeros(n)
    v[i] = 1.0
    return v


def constant_u(n, c=1.0):
    return hm.extend(hm.ZonalExpansion(n, e_vec(n), [c]))


def sample_u(n, lmax=4, seed=0):
    rng = np.random.default_rng(seed)
    return hm.extend(hm.random_zonal(n, lmax, rng))


def small_grid(n, **kw):
    kw.setdefault("degree", 24)
    kw.setdefault("ladder_depth", 10)
    kw.setdefault("cone", fn.ConeSpec(shells=8, n_radial=3, n_polar=6,
                                      n_angular=6))
    return fn.functional_grid(n, **kw)


class TestGrid:
    def test_ladder(self):
        g = fn.functional_grid(3, ladder_depth=18)
        assert len(g.radii) == 18
        assert g.r_max == 1.0 - 2.0 ** -18
        assert g.h_min == 2.0 ** -18

    def test_invalid_ladder(self):
        with pytest.raises(ValueError):
            fn.FunctionalGrid(fn.functional_grid(3).boundary,
                              np.array([0.5, 0.4]))


class TestRadialMax:
    def test_constant(self):
        g = small_grid(3)
        res = fn.radial_max(constant_u(3, 2.5), g)
        assert np.allclose(res.values, 2.5)

    def test_single_mode_monotone(self):
        # for u = f_1(r^2) r Z_1(t), |u| grows along each ray, so the ladder
        # max sits at the top radius
        n = 3
        u = hm.extend(hm.ZonalExpansion(n, e_vec(n), [0.0, 1.0]))
        g = small_grid(n)
        res = fn.radial_max(u, g)
        t = g.boundary.nodes @ g.boundary.pole
        want = np.abs(u.eval_rt(g.r_max, t))
        assert np.allclose(res.values, want)

    def test_kernel_value_at_its_node(self):
        n = 3
        g = small_grid(n)
        xi0 = g.boundary.nodes[0]

        def u(pts):
            return np.array([ker.poisson_hyp(
                BallPoint(np.linalg.norm(p), p / np.linalg.norm(p)
                          if np.linalg.norm(p) > 0 else xi0), xi0)
                for p in np.atleast_2d(pts)])

        res = fn.radial_max(u, g)
        rM = g.r_max
        want = ((1 + rM) / (1 - rM)) ** (n - 1)
        assert res.values[0] == pytest.approx(want, rel=1e-8)


class TestConeMax:
    def test_constant(self):
        g = small_grid(4)
        res = fn.cone_max(constant_u(4), 0.5, g)
        assert np.allclose(res.values, 1.0)

    def test_dominates_radial(self):
        for n in (3, 4):
            u = sample_u(n, seed=n)
            g = small_grid(n)
            rad = fn.radial_max(u, g)
            cone = fn.cone_max(u, 0.5, g)
            assert np.all(cone.values >= rad.values - 1e-12)

    def test_aperture_monotone(self):
        u = sample_u(3, seed=2)
        g = small_grid(3)
        small = fn.cone_max(u, 0.3, g)
        large = fn.cone_max(u, 0.7, g)
        assert np.all(large.values >= small.values - 1e-12)


class TestAreaIntegral:
    def test_constant_vanishes(self):
        g = small_grid(3)
        res = fn.area_integral(constant_u(3), 0.5, g)
        assert np.max(res.values) < 1e-12

    def test_radial_only_dominated(self):
        u = sample_u(3, seed=3)
        g = small_grid(3)
        full = fn.area_integral(u, 0.5, g)
        rad = fn.area_integral(u, 0.5, g, radial_only=True)
        assert np.all(rad.values <= full.values + 1e-10)

    def test_self_convergence(self):
        # refinement inside area_integral settles to 1e-3; an extra doubling
        # on top must not move the values by more than that scale
        n = 3
        u = hm.extend(hm.ZonalExpansion(n, e_vec(n), [0.0, 0.0, 1.0]))
        g1 = small_grid(n)
        g2 = fn.functional_grid(n, degree=24, ladder_depth=10,
                                cone=g1.cone.doubled())
        a = fn.area_integral(u, 0.5, g1)
        b = fn.area_integral(u, 0.5, g2)
        scale = max(np.max(b.values), 1e-12)
        assert np.max(np.abs(a.values - b.values)) < 5e-3 * scale


class TestLittlewoodPaley:
    def test_constant_vanishes(self):
        g = small_grid(4)
        res = fn.littlewood_paley_g(constant_u(4), g)
        assert np.max(res.values) < 1e-12

    def test_radial_only_dominated(self):
        u = sample_u(4, seed=4)
        g = small_grid(4)
        full = fn.littlewood_paley_g(u, g)
        rad = fn.littlewood_paley_g(u, g, radial_only=True)
        assert np.all(rad.values <= full.values + 1e-12)

    def test_bounded_by_area_functional(self):
        # the ray is contained in the cone and the weights compare, so the
        # measured envelope g <= C S_alpha should hold with a modest C
        u = sample_u(3, seed=5)
        g = small_grid(3)
        gv = fn.littlewood_paley_g(u, g)
        sv = fn.area_integral(u, 0.5, g)
        mask = sv.values > 1e-8
        assert np.all(gv.values[mask] <= 20.0 * sv.values[mask])

    def test_single_mode_closed_form(self):
        # u = r t (degree-1 mode, n=3): check g^N against direct quadrature
        n = 3
        u = hm.extend(hm.ZonalExpansion(n, e_vec(n), [0.0, 1.0 / 3.0]))
        g = small_grid(n)
        res = fn.littlewood_paley_g(u, g, radial_only=True)
        t = g.boundary.nodes @ g.boundary.pole
        Nu = hm.apply_N(u)
        from scipy.integrate import quad
        for idx in (0, len(t) // 2):
            want2, _ = quad(lambda s: Nu.eval_rt(s, t[idx]) ** 2
                            * (1 - s ** 2), 0, g.r_max)
            assert res.values[idx] == pytest.approx(np.sqrt(want2), rel=1e-6)


class TestRayIntegral:
    def test_constant_l1(self):
        x = BallPoint(0.7, e_vec(3))
        got = fn.ray_integral_Il(lambda b: 1.0, 1.0, x)
        assert got == pytest.approx(0.7, abs=1e-10)

    def test_constant_l2(self):
        x = BallPoint(0.6, e_vec(4))
        got = fn.ray_integral_Il(lambda b: 1.0, 2.0, x)
        assert got == pytest.approx(0.6 - 0.18, abs=1e-10)

    def test_weight_monotone_in_l(self):
        u = sample_u(3, seed=6)
        absu = lambda b: abs(u(b))
        x = BallPoint(0.9, e_vec(3))
        lo = fn.ray_integral_Il(absu, 1.5, x)
        hi = fn.ray_integral_Il(absu, 0.5, x)
        assert lo <= hi + 1e-12

    def test_singular_weight(self):
        x = BallPoint(0.999, e_vec(3))
        got = fn.ray_integral_Il(lambda b: 1.0, 0.25, x)
        want = (1.0 - (1.0 - 0.999) ** 0.25) / 0.25
        assert got == pytest.approx(want, rel=1e-8)


class TestQuasinorm:
    def test_constant(self):
        g = small_grid(3)
        res = fn.FunctionalResult("test", g, np.ones(len(g.boundary.nodes)))
        for p in (0.8, 1.0, 1.5, 2.0):
            assert fn.lp_quasinorm(res, p) == pytest.approx(1.0)

    def test_p2_rms(self):
        g = small_grid(3)
        vals = np.linspace(0.1, 2.0, len(g.boundary.nodes))
        res = fn.FunctionalResult("test", g, vals)
        want = np.sqrt(g.boundary.weights @ vals ** 2)
        assert fn.lp_quasinorm(res, 2.0) == pytest.approx(want)

    def test_homogeneity(self):
        g = small_grid(4)
        vals = np.abs(np.sin(np.arange(len(g.boundary.nodes)) + 1.0))
        a = fn.FunctionalResult("test", g, vals)
        b = fn.FunctionalResult("test", g, 3.0 * vals)
        for p in (0.8, 1.5):
            assert fn.lp_quasinorm(b, p) == pytest.approx(
                3.0 * fn.lp_quasinorm(a, p), rel=1e-12)

    def test_invalid_p(self):
        g = small_grid(3)
        res = fn.FunctionalResult("test", g, np.ones(len(g.boundary.nodes)))
        with pytest.raises(ValueError):
            res.quasinorm(0.0)


class TestOutput:
    def test_csv_roundtrip(self, tmp_path):
        g = small_grid(3)
        vals = np.linspace(0, 1, len(g.boundary.nodes))
        res = fn.FunctionalResult("test", g, vals)
        path = tmp_path / "out.csv"
        res.write_csv(str(path))
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["node", "x1", "x2", "x3", "value"]
        assert len(rows) == len(vals) + 1
        got = np.array([float(r[-1]) for r in rows[1:]])
        assert np.allclose(got, vals)

    def test_threaded_matches_serial(self, monkeypatch):
        u = sample_u(3, seed=7)
        g = small_grid(3)
        monkeypatch.setenv("HYPERHARM_THREADS", "1")
        a = fn.cone_max(u, 0.5, g)
        monkeypatch.setenv("HYPERHARM_THREADS", "3")
        b = fn.cone_max(u, 0.5, g)
        assert np.array_equal(a.values, b.values)
