import math

import numpy as np
import pytest

import exwave as xw
from exwave.calculus import (
    band_symbol,
    cutoff,
    dyadic_band,
    growth_denominator,
    low_symbol,
)
from exwave.data import rough_field
from exwave.errors import AdmissibilityError, BandError, ConfigurationError


@pytest.fixture()
def random_field(work_grid):
    rng = np.random.default_rng(21)
    return xw.RadialField(work_grid, rng.standard_normal(work_grid.N))


class TestMultiplier:
    def test_identity(self, random_field):
        out = xw.apply_multiplier(lambda lam: np.ones_like(lam), random_field)
        assert np.abs(out.g - random_field.g).max() < 1e-12 * np.abs(random_field.g).max()

    def test_laplacian_on_mode(self, pi_grid):
        f = xw.RadialField(pi_grid, np.sin(2.0 * pi_grid.t))
        out = xw.apply_multiplier(lambda lam: lam**2, f)
        assert np.allclose(out.g, 4.0 * f.g, atol=1e-12)

    def test_reciprocal_round_trip(self, random_field):
        half = xw.apply_multiplier(lambda lam: 1.0 / lam, random_field)
        back = xw.apply_multiplier(lambda lam: lam, half)
        assert np.abs(back.g - random_field.g).max() < 1e-10

    def test_composition_law(self, random_field):
        m1 = lambda lam: np.cos(lam)
        m2 = lambda lam: 1.0 + lam**0.5
        seq = xw.apply_multiplier(m1, xw.apply_multiplier(m2, random_field))
        prod = xw.apply_multiplier(lambda lam: m1(lam) * m2(lam), random_field)
        assert np.abs(seq.g - prod.g).max() < 1e-10

    def test_nonfinite_symbol_rejected(self, random_field):
        with np.errstate(divide="ignore"), pytest.raises(ConfigurationError):
            xw.apply_multiplier(lambda lam: lam / (lam - lam[5]), random_field)


class TestCutoff:
    def test_plateaus(self):
        lam = np.array([0.0, 0.3, 1.0, 1.5, 2.0, 7.0])
        phi = cutoff(lam)
        assert np.all(phi[:3] == 1.0)
        assert np.all(phi[4:] == 0.0)
        assert 0.0 < phi[3] < 1.0

    def test_band_support(self):
        lam = np.linspace(0.0, 40.0, 4001)
        psi = band_symbol(lam, 8.0)
        inside = (lam >= 4.0) & (lam <= 16.0)
        assert np.all(psi[~inside] == 0.0)
        assert np.all((0.0 <= psi) & (psi <= 1.0))
        # psi_N(N) = phi(1) - phi(2) = 1
        assert band_symbol(np.array([8.0]), 8.0)[0] == 1.0


class TestProjections:
    def test_mode_at_block_center_unchanged(self):
        g = xw.make_grid(math.pi, 64)  # lam_k = k
        f = xw.RadialField(g, np.sin(4.0 * g.t))
        out = xw.lp_project(f, 4.0)
        assert np.abs(out.g - f.g).max() < 1e-12

    def test_low_plus_high_is_identity(self, random_field):
        low = xw.lp_low(random_field, 8.0)
        high = xw.lp_high(random_field, 8.0)
        recon = low + high
        assert np.abs(recon.g - random_field.g).max() < 1e-12 * np.abs(random_field.g).max()

    def test_band_reconstruction_smooth_field(self, work_grid):
        rng = np.random.default_rng(3)
        from exwave.data import random_bumps

        f = random_bumps(work_grid, rng, widths=(0.5, 1.5))
        band = dyadic_band(work_grid)
        total = xw.apply_multiplier(lambda lam: low_symbol(lam, band[0] / 2.0), f)
        for N in band:
            total = total + xw.lp_project(f, N)
        defect = xw.lp_norm(total - f, 2) / xw.lp_norm(f, 2)
        assert defect < 1e-8

    @pytest.mark.parametrize("N", [3.0, 0.1, 1e9])
    def test_band_violations(self, work_grid, N):
        f = xw.zero_field(work_grid)
        with pytest.raises(BandError):
            xw.lp_project(f, N)

    def test_partition_telescopes_exactly(self, work_grid):
        band = dyadic_band(work_grid)
        lam = work_grid.lam
        total = low_symbol(lam, band[0] / 2.0)
        for N in band:
            total = total + band_symbol(lam, N)
        assert np.abs(total - low_symbol(lam, band[-1])).max() < 1e-13
        covered = lam <= band[-1]
        assert np.abs(total[covered] - 1.0).max() < 1e-13

    def test_low_projection_idempotence(self, random_field):
        twice = xw.lp_low(xw.lp_low(random_field, 16.0), 16.0)
        squared = xw.apply_multiplier(lambda lam: low_symbol(lam, 16.0) ** 2, random_field)
        assert np.abs(twice.g - squared.g).max() < 1e-11


class TestSobolevNorm:
    def test_single_coefficient(self):
        g = xw.make_grid(math.pi, 16)
        f = xw.spectral_mode(g, 2, 1.0)  # coefficient 1 at lam = 2
        assert xw.sobolev_norm(f, 0.5) == pytest.approx(math.sqrt(2.0), rel=1e-12)

    def test_order_zero_is_l2(self, random_field):
        assert xw.sobolev_norm(random_field, 0.0) == pytest.approx(
            xw.lp_norm(random_field, 2), rel=1e-12
        )

    def test_rough_family_divergence_scan(self):
        """Norm is stable below the critical order and grows without bound at it."""
        s, delta = 0.9, 0.25
        at_s, at_edge = [], []
        for m in range(10, 15):
            g = xw.make_grid(10.0, 2**m)
            f = rough_field(g, s, np.random.default_rng(1), delta=delta)
            at_s.append(xw.sobolev_norm(f, s))
            at_edge.append(xw.sobolev_norm(f, s + delta))
        assert at_s[-1] / at_s[-2] - 1.0 < 0.01
        assert all(b > a for a, b in zip(at_edge, at_edge[1:]))
        assert at_edge[-1] / at_edge[0] > 1.10


class TestBesovNorm:
    def test_zero_field(self, work_grid):
        assert xw.besov_norm(xw.zero_field(work_grid), -0.5, 4.0, 2.0) == 0.0

    def test_single_dyadic_mode(self, work_grid):
        # spectral content exactly at lam = 16: only the N = 16 block sees it fully
        k = int(round(16.0 / work_grid.dlam))
        f = xw.spectral_mode(work_grid, k, 2.0)
        lam_k = work_grid.lam[k - 1]
        sigma = -0.5
        blocks = [
            N ** (sigma * 2.0) * xw.lp_norm(xw.lp_project(f, N), 4.0) ** 2
            for N in dyadic_band(work_grid)
        ]
        expected = sum(blocks) ** 0.5
        assert xw.besov_norm(f, sigma, 4.0, 2.0) == pytest.approx(expected, rel=1e-10)
        # the mode sits within a factor 2 of the N = 16 block center
        assert 8.0 <= lam_k <= 32.0

    @pytest.mark.parametrize("q,rho", [(0.5, 2.0), (4.0, 0.2), (math.nan, 2.0)])
    def test_invalid_exponents(self, work_grid, q, rho):
        with pytest.raises(ConfigurationError):
            xw.besov_norm(xw.zero_field(work_grid), 0.0, q, rho)


class TestEnergy:
    def test_velocity_only(self, pi_grid):
        ut = xw.sample(lambda r: 1.0 / r, pi_grid)
        scale = math.sqrt(2.0) / xw.lp_norm(ut, 2)
        st = xw.WaveState(xw.zero_field(pi_grid), scale * ut, 0.0)
        assert xw.energy(st, 4.0) == pytest.approx(1.0, rel=1e-12)

    def test_zero_state(self, pi_grid):
        st = xw.WaveState(xw.zero_field(pi_grid), xw.zero_field(pi_grid), 0.0)
        assert xw.energy(st, 3.0) == 0.0

    def test_small_single_mode_quintic_correction(self):
        g = xw.make_grid(math.pi, 256)
        a = 1e-3
        u = xw.spectral_mode(g, 2, a)
        st = xw.WaveState(u, xw.zero_field(g), 0.0)
        # gradient part: 0.5 * lam^2 * a^2 * dlam = 2 a^2 dlam; potential by quadrature
        potential = g.h * np.sum(np.abs(u.values) ** 5 * g.r**2) / 5.0
        expected = 2.0 * a**2 * g.dlam + potential
        assert potential < 1e-14
        assert xw.energy(st, 4.0) == pytest.approx(expected, rel=1e-10)


class TestParameterSet:
    @pytest.mark.parametrize("p", [3.0, 3.5, 4.0, 4.5, 5.0])
    def test_critical_regularity_range(self, p):
        ps = xw.ParameterSet(p=p, s=0.999, J=4)
        assert 0.5 <= ps.s_c <= 1.0
        # the admissible window is nonempty strictly inside (3, 5) and
        # degenerates to s_min = 1 at the energy-critical edge p = 5
        assert ps.s_min < 1.0 or (p == 5.0 and ps.s_min == 1.0)

    def test_rejects_out_of_range_power(self):
        with pytest.raises(ConfigurationError):
            xw.ParameterSet(p=2.5, s=0.9, J=3)

    def test_admissibility_gate(self):
        ps = xw.ParameterSet(p=4.0, s=0.9, J=3)
        with pytest.raises(AdmissibilityError):
            ps.require_admissible()


class TestDerivedExponents:
    def test_cubic_thresholds(self):
        ps = xw.ParameterSet(p=3.0, s=0.9, J=4)
        exps = xw.derived_exponents(ps)
        assert exps.s_c == pytest.approx(0.5, abs=1e-15)
        assert exps.s_min == pytest.approx(0.75, abs=1e-15)
        assert exps.theorem_growth_exponent == pytest.approx(0.4, rel=1e-12)

    def test_quartic_values(self):
        ps = xw.ParameterSet(p=4.0, s=0.96, J=5)
        exps = xw.derived_exponents(ps)
        assert exps.s_min == pytest.approx(113.0 / 120.0, rel=1e-12)
        assert exps.energy_growth_exponent == pytest.approx(0.7636, abs=5e-4)
        assert exps.theorem_growth_exponent == pytest.approx(0.5011, abs=5e-4)

    def test_inadmissible_rejected(self):
        with pytest.raises(AdmissibilityError):
            xw.derived_exponents(xw.ParameterSet(p=4.0, s=0.94, J=5))

    def test_cubic_reduction_identity(self):
        for s in np.linspace(0.76, 0.999, 60):
            exps = xw.derived_exponents(xw.ParameterSet(p=3.0, s=float(s), J=3))
            closed = 3.0 * (1.0 - s) * (2.0 * s - 1.0) / (4.0 * s - 3.0)
            assert exps.theorem_growth_exponent == pytest.approx(closed, rel=1e-12)

    def test_denominator_sign_tracks_threshold(self):
        assert growth_denominator(4.0, 113.0 / 120.0) == pytest.approx(0.0, abs=1e-12)
        assert growth_denominator(4.0, 0.96) > 0
        assert growth_denominator(4.0, 0.9) < 0
