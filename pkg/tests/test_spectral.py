import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from patchflow.spectral import (
    Grid2D,
    ScalarField,
    VectorField2,
    band_limited_random,
    divergence,
    gradient,
    inverse_laplacian,
    laplacian,
    leray_project,
    perp_gradient,
    read_snapshot,
    write_snapshot,
)


@pytest.fixture
def grid():
    return Grid2D(64, 3.0)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


def sin_x(grid):
    return grid.from_function(lambda x, y: np.sin(2 * np.pi * x / grid.length))


class TestGrid:
    @pytest.mark.parametrize("n", [16, 48, 100])
    def test_rejects_bad_sizes(self, n):
        with pytest.raises(ValueError):
            Grid2D(n)

    def test_spacing_and_nyquist(self):
        g = Grid2D(128, 8.0)
        assert g.spacing == 8.0 / 128
        assert g.nyquist == pytest.approx(np.pi * 128 / 8.0)

    def test_odd_multipliers_zero_nyquist(self):
        g = Grid2D(32)
        k1, k2 = g.odd_wavenumbers
        assert np.all(k1[16, :] == 0)
        assert np.all(k2[:, -1] == 0)


class TestScalarField:
    def test_round_trip(self, grid, rng):
        f = ScalarField(grid, rng.standard_normal((64, 64)))
        back = ScalarField.from_spectrum(grid, f.spectrum)
        assert np.abs(back.values - f.values).max() <= 1e-12 * np.abs(f.values).max()

    def test_values_are_read_only(self, grid):
        f = grid.constant(1.0)
        with pytest.raises(ValueError):
            f.values[0, 0] = 2.0

    def test_hermitian_full_spectrum(self, grid, rng):
        f = ScalarField(grid, rng.standard_normal((64, 64)))
        full = np.fft.fft2(f.values)
        assert np.allclose(full[1:, 1:], np.conj(full[1:, 1:][::-1, ::-1]))

    def test_parseval(self, grid, rng):
        f = band_limited_random(grid, rng)
        grid_l2 = f.lp_norm(2)
        full = np.fft.fft2(f.values)
        spec_l2 = np.sqrt((np.abs(full) ** 2).sum() * grid.cell_area / grid.n**2)
        assert grid_l2 == pytest.approx(spec_l2, rel=1e-12)

    def test_mismatched_grids(self, grid):
        with pytest.raises(ValueError):
            grid.constant(1.0) + Grid2D(32, 3.0).constant(1.0)


class TestDifferentialOperators:
    def test_gradient_of_sine(self, grid):
        d1, d2 = gradient(sin_x(grid))
        x, _ = grid.coords
        k = 2 * np.pi / grid.length
        assert np.abs(d1.values - k * np.cos(k * x)).max() < 1e-12
        assert d2.sup() < 1e-12

    def test_gradient_of_product(self, grid):
        k = 2 * np.pi / grid.length
        f = grid.from_function(lambda x, y: np.sin(k * x) * np.sin(k * y))
        x, y = grid.coords
        assert np.abs(gradient(f)[0].values - k * np.cos(k * x) * np.sin(k * y)).max() < 1e-12

    def test_gradient_of_constant(self, grid):
        g = gradient(grid.constant(3.0))
        assert g.sup() == 0.0

    def test_perp_gradient_of_sawtooth(self):
        g = Grid2D(128, 2 * np.pi)
        f = g.from_function(lambda x, y: y - np.pi)
        X = perp_gradient(f)
        _, y = g.coords
        away = (y > 1.0) & (y < 2 * np.pi - 1.0)
        assert np.median(X[0].values[away]) == pytest.approx(-1.0, abs=0.05)

    def test_perp_gradient_tangent_to_level_sets(self, grid):
        c = grid.length / 2
        f = grid.from_function(lambda x, y: np.exp(-((x - c) ** 2 + (y - c) ** 2)))
        X = perp_gradient(f)
        g = gradient(f)
        assert np.abs(X.dot(g).values).max() < 1e-10

    def test_laplacian_of_sine(self, grid):
        k = 2 * np.pi / grid.length
        f = sin_x(grid)
        assert np.abs(laplacian(f).values + k**2 * f.values).max() < 1e-10

    def test_inverse_laplacian_inverts(self, grid, rng):
        f = band_limited_random(grid, rng, mean_free=False)
        back = inverse_laplacian(laplacian(f))
        assert np.abs(back.values - (f.values - f.mean())).max() < 1e-10

    def test_inverse_laplacian_rejects_mean(self, grid):
        with pytest.raises(ValueError, match="nonzero mean"):
            inverse_laplacian(grid.constant(1.0))

    def test_div_perp_gradient(self, grid, rng):
        f = band_limited_random(grid, rng)
        assert divergence(perp_gradient(f)).sup() < 1e-12

    def test_translation_commutes(self, grid, rng):
        f = band_limited_random(grid, rng)
        shifted = ScalarField(grid, np.roll(f.values, (3, -5), axis=(0, 1)))
        lhs = np.roll(laplacian(f).values, (3, -5), axis=(0, 1))
        assert np.abs(laplacian(shifted).values - lhs).max() < 1e-10


class TestLeray:
    def test_gradient_annihilated(self, grid, rng):
        v = gradient(band_limited_random(grid, rng))
        assert leray_project(v).sup() < 1e-12 * max(1.0, v.sup())

    def test_solenoidal_fixed(self, grid, rng):
        v = perp_gradient(band_limited_random(grid, rng))
        assert (leray_project(v) - v).sup() < 1e-12 * v.sup()

    def test_idempotent_and_divergence_free(self, grid, rng):
        v = VectorField2(band_limited_random(grid, rng), band_limited_random(grid, rng))
        p = leray_project(v)
        assert divergence(p).sup() < 1e-12 * 100
        assert (leray_project(p) - p).sup() < 1e-12

    def test_helmholtz_decomposition(self, grid, rng):
        v = VectorField2(band_limited_random(grid, rng), band_limited_random(grid, rng))
        q = inverse_laplacian(divergence(v), atol=1e-10)
        rebuilt = leray_project(v) + gradient(q)
        assert (rebuilt - v).sup() < 1e-11


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), a=st.floats(-3, 3), b=st.floats(-3, 3))
def test_gradient_is_linear(seed, a, b):
    g = Grid2D(32)
    rng = np.random.default_rng(seed)
    f, h = band_limited_random(g, rng), band_limited_random(g, rng)
    lhs = gradient(f * a + h * b)
    rhs = gradient(f) * a + gradient(h) * b
    assert (lhs - rhs).sup() < 1e-11


class TestSnapshot:
    def test_scalar_round_trip(self, tmp_path, grid, rng):
        f = band_limited_random(grid, rng)
        write_snapshot(tmp_path / "f.snap", f, "f", t=0.25)
        back, meta = read_snapshot(tmp_path / "f.snap")
        assert np.array_equal(back.values, f.values)
        assert meta["t"] == 0.25 and meta["name"] == "f"
        assert back.grid == grid

    def test_layout(self, tmp_path, grid):
        v = VectorField2.zeros(grid)
        write_snapshot(tmp_path / "v.snap", v, "v")
        raw = (tmp_path / "v.snap").read_bytes()
        assert raw[:13] == b"PATCHFLOWSNAP"
        assert len(raw) == 16 + 256 + 2 * 64 * 64 * 8

    def test_rejects_garbage(self, tmp_path):
        p = tmp_path / "bad.snap"
        p.write_bytes(b"not a snapshot at all" * 20)
        with pytest.raises(ValueError):
            read_snapshot(p)
