# -*- coding: utf-8 -*-
"""
Tests for the limiting spectral measures of C(x).
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))


class TestStieltjes:
    """Tests for the cubic and its physical root."""

    def test_root_solves_cubic(self):
        """Test that the selected root satisfies the polynomial."""
        from src.theory.freeprob import FreeModelParams, cubic_coefficients, stieltjes

        params = FreeModelParams(gamma=0.3, r=1.0, x=0.2)
        z = np.array([0.5 + 0.1j, 2.0 + 1e-3j, 5.0 + 2.0j])
        g = stieltjes(z, params)
        a3, a2, a1, a0 = cubic_coefficients(z, params)
        residual = ((a3 * g + a2) * g + a1) * g + a0
        assert np.allclose(residual, 0.0, atol=1e-9)
        assert np.all(g.imag < 0)

    def test_tracking_agrees_with_pointwise_rule(self):
        """Test that branch continuation and the per-point rule pick the same root inside the support."""
        from src.theory.freeprob import EPSILONS, FreeModelParams, stieltjes, support_bounds, track_branch

        params = FreeModelParams(gamma=0.3, r=1.0, x=0.2)
        grid = np.linspace(*support_bounds(params), 400)
        tracked = track_branch(grid, params)
        pointwise = stieltjes(grid + 1j * EPSILONS[0], params)
        inside = -tracked.imag / np.pi > 1e-2
        assert inside.sum() > 100
        assert np.allclose(tracked[inside], pointwise[inside], atol=1e-8)

    def test_conjugate_symmetry(self):
        """Test that G(conj z) equals conj G(z) in both half-planes."""
        from src.theory.freeprob import FreeModelParams, stieltjes

        z = np.array([1.0 + 0.5j, 0.5 + 0.1j, 3.0 - 2.0j, 2.0 - 1e-3j])
        for gamma, r, x in ((0.3, 1.0, 0.2), (0.1, 2.0, 0.0), (0.25, 1.0, 0.3)):
            params = FreeModelParams(gamma, r, x)
            g = stieltjes(z, params)
            assert np.allclose(stieltjes(np.conj(z), params), np.conj(g), atol=1e-12)
            assert np.all(np.sign(g.imag) == -np.sign(z.imag))
            assert stieltjes(1.0 - 0.5j, params) == pytest.approx(np.conj(stieltjes(1.0 + 0.5j, params)))

    def test_r_transform_is_sum_of_parts(self):
        """Test that the cubic is R_W(G) + R_GOE(G) + 1/G = z cleared of denominators."""
        from src.theory.freeprob import FreeModelParams, cubic_coefficients, r_transform, stieltjes

        rng = np.random.default_rng(4)
        g = rng.normal(size=6) - 1j * rng.uniform(0.1, 1.0, size=6)
        z = rng.normal(size=6) + 1j * rng.uniform(0.1, 1.0, size=6)
        for gamma, r, x in ((0.3, 1.0, 0.2), (0.05, 2.0, 0.7)):
            params = FreeModelParams(gamma, r, x)
            wishart = 2.0 * r / (1.0 - 2.0 * r * gamma * g)
            goe = 4.0 * r * r * gamma * x * g
            assert np.allclose(r_transform(g, params), wishart + goe)
            a3, a2, a1, a0 = cubic_coefficients(z, params)
            cubic = ((a3 * g + a2) * g + a1) * g + a0
            cleared = -g * (1.0 - 2.0 * r * gamma * g) * (wishart + goe + 1.0 / g - z)
            assert np.allclose(cubic, cleared)

            root = stieltjes(z, params)
            assert np.allclose(r_transform(root, params) + 1.0 / root, z, atol=1e-8)

    def test_invalid_params(self):
        """Test that non-positive gamma raises ValueError."""
        from src.theory.freeprob import FreeModelParams

        with pytest.raises(ValueError):
            FreeModelParams(gamma=0.0)


class TestDensity:
    """Tests for densities, masses and edges."""

    def test_zero_energy_is_scaled_marchenko_pastur(self):
        """Test that x = 0 reproduces the Marchenko-Pastur law scaled by 2r."""
        from src.theory.freeprob import FreeModelParams, density_at, mp_closed_form

        gamma, r = 0.25, 1.5
        lo, hi = 2 * r * (1 - 0.5) ** 2, 2 * r * (1 + 0.5) ** 2
        lam = np.linspace(lo, hi, 50)[5:-5]
        computed = density_at(lam, FreeModelParams(gamma, r, 0.0))
        assert np.allclose(computed, mp_closed_form(lam, gamma, scale=2 * r), atol=1e-4)

    def test_mass_is_one(self):
        """Test unit mass with the noise term switched on."""
        from src.theory.freeprob import FreeModelParams, density

        measure = density(FreeModelParams(gamma=0.2, r=1.0, x=0.3))
        assert measure.mass == pytest.approx(1.0, abs=1e-4)
        assert measure.atoms == ()
        assert measure.mean() == pytest.approx(2.0, abs=1e-3)

    def test_zero_atom(self):
        """Test the atom of mass 1 - 1/gamma at 0 when gamma > 1 and x = 0."""
        from src.theory.freeprob import FreeModelParams, density, support_edge_min

        params = FreeModelParams(gamma=2.0, r=1.0, x=0.0)
        measure = density(params)
        assert measure.atoms == ((0.0, 0.5),)
        assert measure.mass == pytest.approx(1.0, abs=1e-4)
        assert support_edge_min(params) == 0.0

    def test_support_edge_at_zero_energy(self):
        """Test lambda_min = 2r (1 - sqrt(gamma))^2 for x = 0."""
        from src.theory.freeprob import FreeModelParams, support_edge_min

        edge = support_edge_min(FreeModelParams(gamma=0.16, r=1.0, x=0.0))
        assert edge == pytest.approx(2 * 0.6 ** 2, abs=1e-4)

    def test_noise_lowers_edge(self):
        """Test that the GOE component pushes the lower edge down."""
        from src.theory.freeprob import FreeModelParams, support_edge_min

        quiet = support_edge_min(FreeModelParams(gamma=0.1, x=0.0))
        noisy = support_edge_min(FreeModelParams(gamma=0.1, x=0.3))
        assert noisy < quiet

    def test_overparameterized_edge_not_positive(self):
        """Test lambda*_{x,1} <= 0 for gamma > 1 at every energy."""
        from src.theory.freeprob import FreeModelParams, support_edge_min

        for x in (0.0, 0.3, 1.0):
            assert support_edge_min(FreeModelParams(2.0, 1.0, x)) <= 0.0

    def test_edge_decreasing_in_energy(self):
        """Test that the lower edge falls as x grows at fixed gamma and r."""
        from src.theory.freeprob import FreeModelParams, support_edge_min

        edges = [support_edge_min(FreeModelParams(0.1, 1.0, x)) for x in np.linspace(0.0, 1.0, 6)]
        assert all(a > b for a, b in zip(edges, edges[1:]))

    def test_closed_forms_have_unit_mass(self):
        """Test the semicircle and Marchenko-Pastur measures."""
        from src.theory.freeprob import mp_density, sc_density

        assert sc_density().mass == pytest.approx(1.0, abs=1e-4)
        assert mp_density(0.5).mass == pytest.approx(1.0, abs=1e-4)
        scaled = mp_density(3.0, scale=2.0)
        assert scaled.atoms == ((0.0, pytest.approx(2.0 / 3.0)),)
        assert scaled.mass == pytest.approx(1.0, abs=1e-4)

    def test_ks_against_goe_samples(self):
        """Test that scaled GOE eigenvalues are close to the semicircle."""
        from src.theory.freeprob import sc_density
        from src.theory.randmat import sample_goe

        rng = np.random.default_rng(0)
        samples = np.concatenate([np.linalg.eigvalsh(sample_goe(200, rng) / np.sqrt(200)) for _ in range(5)])
        assert sc_density().ks_distance(samples) < 0.05


class TestBandEdge:
    """Tests for E0 and the asymptotic critical-point count."""

    def test_overparameterized(self):
        """Test that gamma >= 1 has no band edge."""
        from src.theory.freeprob import band_edge_E0

        assert band_edge_E0(1.0) is None
        assert band_edge_E0(3.0) is None
        with pytest.raises(ValueError):
            band_edge_E0(0.0)

    def test_defining_equation(self):
        """Test lambda*_{E0,1} = 2r E0 at the returned root."""
        from src.theory.freeprob import FreeModelParams, band_edge_E0, support_edge_min

        gamma = 0.05
        e0 = band_edge_E0(gamma)
        assert 0.0 < e0 < 1.0
        assert support_edge_min(FreeModelParams(gamma, 1.0, e0)) == pytest.approx(2 * e0, abs=1e-6)

    def test_matches_grid_scan(self):
        """Test E0 against the first sign change of the gap on a 1e-4 energy grid."""
        from src.theory.freeprob import FreeModelParams, band_edge_E0, support_edge_min

        gamma = 0.01

        def gap(energy):
            return support_edge_min(FreeModelParams(gamma, 1.0, energy)) - 2.0 * energy

        coarse = np.arange(0.02, 1.0, 0.02)
        first = next(i for i, energy in enumerate(coarse) if gap(energy) < 0.0)
        fine = np.arange(coarse[first - 1], coarse[first] + 1e-4, 1e-4)
        crossing = fine[next(i for i, energy in enumerate(fine) if gap(energy) < 0.0)]
        assert band_edge_E0(gamma) == pytest.approx(crossing, abs=1e-4)

    def test_decreasing_in_gamma(self):
        """Test that E0 decreases as gamma grows."""
        from src.theory.freeprob import band_edge_E0

        edges = [band_edge_E0(gamma) for gamma in (0.01, 0.05, 0.1, 0.3)]
        assert all(a > b for a, b in zip(edges, edges[1:]))

    def test_asymptotic_count(self):
        """Test the -inf cases and a finite value below the edge."""
        from src.theory.freeprob import asymptotic_log_crt0, band_edge_E0

        assert asymptotic_log_crt0(0.3, 1.5, 1.0, 20) == float("-inf")
        e0 = band_edge_E0(0.1)
        assert asymptotic_log_crt0(min(0.99, e0 + 0.05), 0.1, 1.0, 20) == float("-inf")
        assert np.isfinite(asymptotic_log_crt0(0.5 * e0, 0.1, 1.0, 20))
        with pytest.raises(ValueError):
            asymptotic_log_crt0(0.0, 0.1, 1.0, 20)


@pytest.mark.slow
class TestSampledSpectra:
    """Full-size comparisons of sampled C(x) spectra with the limiting law."""

    @pytest.mark.parametrize("gamma", [0.1, 0.25])
    @pytest.mark.parametrize("r", [1, 2])
    @pytest.mark.parametrize("x", [0.0, 0.3])
    def test_ks_against_pooled_samples(self, gamma, r, x):
        """Test KS <= 0.05 for 20 pooled draws at p = 512."""
        from src.theory.freeprob import FreeModelParams, density
        from src.theory.randmat import EnsembleParams, spectrum_samples

        p = 512
        params = EnsembleParams(p, p / (2 * gamma), r, x)
        samples = np.concatenate(spectrum_samples("c", params, 20, np.random.default_rng(17)))
        assert density(FreeModelParams(gamma, r, x)).ks_distance(samples) <= 0.05

    def test_marchenko_pastur_degeneration(self):
        """Test sup error <= 1e-6 against the closed form away from the edges."""
        from src.theory.freeprob import FreeModelParams, density_at, mp_closed_form

        for gamma, r in ((0.1, 1.0), (0.25, 2.0)):
            lo, hi = 2 * r * (1 - gamma ** 0.5) ** 2, 2 * r * (1 + gamma ** 0.5) ** 2
            lam = np.linspace(lo, hi, 400)[20:-20]
            computed = density_at(lam, FreeModelParams(gamma, r, 0.0))
            assert np.max(np.abs(computed - mp_closed_form(lam, gamma, scale=2 * r))) <= 1e-6
