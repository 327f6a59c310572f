import numpy as np
import pytest

from patchflow.littlewood_paley import (
    BesovIndex,
    besov_norm,
    chi,
    decompose,
    filter_bank,
    holder_norm,
    multiplier_norm_probe,
    phi,
    probe_family,
)
from patchflow.spectral import Grid2D, ScalarField, band_limited_random, gradient


@pytest.fixture
def grid():
    return Grid2D(128)


@pytest.fixture
def rng():
    return np.random.default_rng(3)


def mode(grid, k):
    return grid.from_function(lambda x, y: np.cos(2.0**k * grid.k0 * x))


class TestProfiles:
    def test_supports(self):
        r = np.linspace(0, 4, 4001)
        assert np.all(chi(r[r <= 1.0]) == 1.0)
        assert np.all(chi(r[r >= 4 / 3]) == 0.0)
        p = phi(r)
        assert np.all(p[(r <= 0.75) | (r >= 8 / 3)] == 0.0)

    def test_inhomogeneous_partition(self):
        r = np.linspace(0, 500, 20001)
        total = chi(r) + sum(phi(r / 2.0**j) for j in range(12))
        assert np.abs(total - 1).max() < 1e-10

    def test_homogeneous_partition(self):
        r = np.geomspace(1e-3, 1e3, 5001)
        total = sum(phi(r / 2.0**j) for j in range(-15, 15))
        assert np.abs(total - 1).max() < 1e-10

    def test_at_most_two_terms(self):
        r = np.geomspace(1e-2, 1e2, 2001)
        nonzero = sum((phi(r / 2.0**j) > 0).astype(int) for j in range(-10, 10))
        assert nonzero.max() <= 2


class TestDecompose:
    def test_reconstruction(self, grid, rng):
        f = band_limited_random(grid, rng, mean_free=False)
        dec = decompose(f)
        assert np.abs(dec.reconstruct().values - f.values).max() <= 1e-10 * f.sup()
        assert len(dec.blocks) == dec.j_max - dec.j_min + 1

    def test_block_supports(self, grid, rng):
        f = band_limited_random(grid, rng)
        dec = decompose(f)
        k = grid.k_abs
        for j, b in dec.blocks.items():
            outside = (k < 0.75 * 2.0**j) | (k > 8 / 3 * 2.0**j)
            assert np.all(b.spectrum[outside] == 0)

    @pytest.mark.parametrize("k", [2, 3, 4, 5])
    def test_single_mode(self, grid, k):
        dec = decompose(mode(grid, k))
        live = [j for j, b in dec.blocks.items() if b.sup() > 1e-12]
        assert live and set(live) <= set(range(k - 2, k + 2))

    def test_constant_in_low_part(self, grid):
        dec = decompose(grid.constant(2.5))
        assert all(b.sup() < 1e-14 for b in dec.blocks.values())
        assert np.allclose(dec.low_part.values, 2.5)

    def test_quasi_orthogonality(self, grid, rng):
        f = band_limited_random(grid, rng)
        bank = filter_bank(grid)
        for j in bank.js:
            for k in bank.js:
                if abs(j - k) >= 2:
                    assert not np.any(bank.phi_mult(j) * bank.phi_mult(k))


class TestBesov:
    def test_single_mode_scaling(self, grid):
        s = 0.7
        vals = [besov_norm(mode(grid, k), BesovIndex(s, np.inf, np.inf)) / 2.0 ** (k * s) for k in (2, 3, 4, 5)]
        assert max(vals) / min(vals) < 2 ** (2 * s)

    def test_dilation_scaling(self):
        g = Grid2D(256, 16.0)
        c = 8.0
        idx = BesovIndex(0.5, 2, 2)

        def bump(lam):
            return g.from_function(lambda x, y: np.exp(-(lam**2) * ((x - c) ** 2 + (y - c) ** 2)))

        ratio = besov_norm(bump(2.0), idx) / besov_norm(bump(1.0), idx)
        expected = 2.0 ** (idx.s - 2 / idx.p)
        assert expected / 2 <= ratio <= expected * 2

    def test_zero(self, grid):
        assert besov_norm(grid.zeros(), BesovIndex(-0.5, 3, 1)) == 0.0

    def test_rejects_mean_for_negative_index(self, grid):
        with pytest.raises(ValueError, match="not in S'_h surrogate"):
            besov_norm(grid.constant(1.0), BesovIndex(-0.5, 2, 1))

    def test_r_monotonicity(self, grid, rng):
        f = band_limited_random(grid, rng)
        assert besov_norm(f, BesovIndex(0.3, 3, 1)) >= besov_norm(f, BesovIndex(0.3, 3, np.inf))

    def test_bernstein(self, grid, rng):
        f = band_limited_random(grid, rng)
        dec = decompose(f)
        for j, b in dec.blocks.items():
            if b.sup() < 1e-12:
                continue
            gmag = gradient(b).magnitude().max()
            assert gmag <= 8 / 3 * 2 * np.pi * 2.0**j * b.sup()

    @pytest.mark.parametrize("p,r", [(0.5, 1), (2, 0)])
    def test_index_validation(self, p, r):
        with pytest.raises(ValueError):
            BesovIndex(0.0, p, r)


def weierstrass_field(grid, K, eps):
    return grid.from_function(
        lambda x, y: sum(2.0 ** (-k * eps) * np.cos(2.0**k * grid.k0 * x) for k in range(2, K + 1)))


class TestHolder:
    def test_weierstrass_uniform_in_depth(self):
        g = Grid2D(1024)
        vals = [holder_norm(weierstrass_field(g, K, 0.5), 0.5) for K in (4, 6, 8)]
        assert max(vals) / min(vals) <= 4

    def test_constant(self, grid):
        assert holder_norm(grid.constant(-2.0), 0.5) == pytest.approx(2.0)

    def test_finite_difference_cross_check(self):
        g = Grid2D(512)
        eps = 0.5
        f = weierstrass_field(g, 7, eps)
        v = f.values
        fd = 0.0
        for m in (1, 2, 4, 8, 16, 32, 64, 128):
            h = m * g.spacing
            fd = max(fd, np.abs(np.roll(v, -m, axis=0) - v).max() / h**eps)
        hn = holder_norm(f, eps)
        assert hn / 10 <= fd <= hn * 10

    def test_rejects_bad_exponent(self, grid):
        with pytest.raises(ValueError):
            holder_norm(grid.constant(1.0), 1.5)


class TestMultiplierProbe:
    def test_identity_multiplier(self, grid, rng):
        idx = BesovIndex(2 / 3 - 1, 3, 1)
        probes = probe_family(grid, rng, per_shell=1)
        assert multiplier_norm_probe(grid.constant(1.0), idx, idx, probes) == pytest.approx(1.0, rel=1e-12)

    def test_zero_multiplier(self, grid, rng):
        idx = BesovIndex(2 / 3 - 1, 3, 1)
        assert multiplier_norm_probe(grid.zeros(), idx, idx, probe_family(grid, rng, per_shell=1)) == 0.0

    def test_no_valid_probes(self, grid):
        idx = BesovIndex(0.0, 2, 2)
        with pytest.raises(ValueError, match="no valid probes"):
            multiplier_norm_probe(grid.constant(1.0), idx, idx, [grid.zeros()])

    def test_disc_indicator_stable(self):
        g = Grid2D(128, 8.0)
        x, y = g.coords
        r = np.hypot(x - 4, y - 4)
        ind = ScalarField(g, 0.5 * (1 - np.tanh((r - 1) / g.spacing)))
        idx = BesovIndex(2 / 3 - 1, 3, 1)
        pts = np.array([[5.0, 4.0], [4.0, 5.0], [3.0, 4.0], [4.0, 3.0]])
        small = multiplier_norm_probe(ind, idx, idx, probe_family(g, np.random.default_rng(0), 2, pts))
        big = multiplier_norm_probe(ind, idx, idx, probe_family(g, np.random.default_rng(1), 6, pts))
        assert np.isfinite(small)
        assert abs(big - small) <= 0.2 * small
