import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import exwave as xw
from exwave.errors import ConfigurationError, InputError


class TestMakeGrid:
    def test_small_grid_values(self):
        g = xw.make_grid(math.pi, 3)
        assert g.h == pytest.approx(math.pi / 4, rel=1e-15)
        assert np.allclose(g.lam, [1.0, 2.0, 3.0])
        assert g.dlam == pytest.approx(1.0, rel=1e-15)

    def test_production_grid_values(self):
        g = xw.make_grid(40.0, 8192)
        assert g.dlam == pytest.approx(0.07853981, rel=1e-6)
        assert g.lam_max == pytest.approx(643.398, rel=1e-4)

    @pytest.mark.parametrize("L,N", [(0.0, 8), (-1.0, 8), (5.0, 0), (5.0, -3)])
    def test_rejects_degenerate(self, L, N):
        with pytest.raises(ConfigurationError):
            xw.make_grid(L, N)

    def test_invariants(self):
        g = xw.make_grid(13.7, 501)
        assert g.h * (g.N + 1) == pytest.approx(g.L, rel=1e-15)
        assert np.all(np.diff(g.r) > 0)
        assert g.r[0] > 1.0 and g.r[-1] < 1.0 + g.L
        assert g.lam[0] > 0 and g.lam[-1] == pytest.approx(g.lam_max)


class TestSample:
    def test_zero_profile(self, pi_grid):
        f = xw.sample(lambda r: 0.0 * r, pi_grid)
        assert np.all(f.g == 0.0)

    def test_one_over_r(self):
        g = xw.make_grid(math.pi, 3)
        f = xw.sample(lambda r: 1.0 / r, g)
        assert np.allclose(f.g, [1.0, 1.0, 1.0])

    def test_first_eigenmode(self, pi_grid):
        f = xw.sample(lambda r: np.sin(r - 1.0) / r, pi_grid)
        assert np.allclose(f.g, np.sin(pi_grid.t), atol=1e-15)

    def test_nonfinite_rejected(self, pi_grid):
        with np.errstate(divide="ignore"), pytest.raises(InputError):
            xw.sample(lambda r: 1.0 / (r - r[3]), pi_grid)

    def test_values_readback(self, pi_grid):
        f = xw.sample(lambda r: np.exp(-r), pi_grid)
        assert np.abs(f.values - np.exp(-pi_grid.r)).max() < 1e-16


class TestLpNorm:
    def test_inverse_square_profile(self):
        # int_1^10 r^-2 dr = 0.9; the rectangle rule converges at first order
        # (this profile does not vanish at the walls, so the dropped endpoint
        # contributions h*(f(1)+f(10))/2 dominate the error)
        errs = []
        for N in (2000, 4000, 8000):
            g = xw.make_grid(9.0, N)
            f = xw.sample(lambda r: r**-2.0, g)
            errs.append(abs(xw.lp_norm(f, 2) ** 2 - 0.9))
        assert errs[-1] < 1e-3
        assert errs[0] > errs[1] > errs[2]
        assert errs[0] / errs[2] == pytest.approx(4.0, rel=0.2)

    def test_zero_field(self, pi_grid):
        assert xw.lp_norm(xw.zero_field(pi_grid), 3.7) == 0.0

    def test_sup_norm_of_monotone_profile(self, pi_grid):
        f = xw.sample(lambda r: 1.0 / r, pi_grid)
        assert xw.lp_norm(f, math.inf) == pytest.approx(1.0 / pi_grid.r[0], rel=1e-15)

    @pytest.mark.parametrize("p", [0.5, 0.0, -2.0, math.nan])
    def test_rejects_bad_exponent(self, pi_grid, p):
        with pytest.raises(ConfigurationError):
            xw.lp_norm(xw.zero_field(pi_grid), p)

    @given(c=st.floats(min_value=-1e6, max_value=1e6).filter(lambda x: abs(x) > 1e-12))
    @settings(max_examples=40, deadline=None)
    def test_homogeneity(self, c):
        g = xw.make_grid(10.0, 128)
        rng = np.random.default_rng(4)
        f = xw.RadialField(g, rng.standard_normal(g.N))
        for p in (1.0, 2.0, 5.0, math.inf):
            assert xw.lp_norm(c * f, p) == pytest.approx(abs(c) * xw.lp_norm(f, p), rel=1e-12)

    @pytest.mark.parametrize("p,q", [(1.5, 6.0), (1.0, 4.0), (1.2, 12.0)])
    def test_hoelder_interpolation(self, p, q):
        # 1/2 = theta/p + (1-theta)/q
        theta = (0.5 - 1.0 / q) / (1.0 / p - 1.0 / q)
        g = xw.make_grid(15.0, 512)
        rng = np.random.default_rng(9)
        for _ in range(20):
            f = xw.RadialField(g, rng.standard_normal(g.N))
            lhs = xw.lp_norm(f, 2)
            rhs = xw.lp_norm(f, p) ** theta * xw.lp_norm(f, q) ** (1 - theta)
            assert lhs <= rhs * (1 + 1e-12)


class TestWeightedSup:
    def test_inverse_r(self, pi_grid):
        f = xw.sample(lambda r: 1.0 / r, pi_grid)
        assert xw.weighted_sup(f, 1.0) == pytest.approx(1.0, rel=1e-15)

    def test_zero(self, pi_grid):
        assert xw.weighted_sup(xw.zero_field(pi_grid), 0.7) == 0.0


class TestSupportRadius:
    def test_bump_support(self):
        g = xw.make_grid(20.0, 2048)
        f = xw.bump_field(g, 4.0, 0.5)
        assert xw.support_radius(f) == pytest.approx(4.5, abs=0.02)

    def test_zero_field(self, pi_grid):
        assert xw.support_radius(xw.zero_field(pi_grid)) == 1.0


def test_field_arithmetic_requires_same_grid():
    a = xw.zero_field(xw.make_grid(5.0, 16))
    b = xw.zero_field(xw.make_grid(5.0, 32))
    with pytest.raises(ConfigurationError):
        _ = a + b
