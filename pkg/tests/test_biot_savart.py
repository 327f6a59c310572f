import numpy as np
import pytest

from patchflow.biot_savart import curl, velocity_from_vorticity
from patchflow.experiments import biot_savart_study
from patchflow.spectral import Grid2D, VectorField2, band_limited_random, divergence, leray_project


@pytest.fixture
def grid():
    return Grid2D(128, 5.0)


def test_analytic_sin_sin(grid):
    _, analytic = biot_savart_study(grid)
    assert analytic < 1e-10


def test_zero(grid):
    assert velocity_from_vorticity(grid.zeros()).sup() == 0.0


def test_curl_round_trip(grid):
    rng = np.random.default_rng(0)
    w = band_limited_random(grid, rng)
    u = velocity_from_vorticity(w)
    assert np.abs(curl(u).values - w.values).max() < 1e-10 * w.sup()
    assert divergence(u).sup() < 1e-10 * w.sup()


def test_velocity_round_trip(grid):
    rng = np.random.default_rng(1)
    u = VectorField2(band_limited_random(grid, rng), band_limited_random(grid, rng))
    back = velocity_from_vorticity(curl(u))
    proj = leray_project(u)
    # the solenoidal part of u minus its mean
    target = VectorField2(proj[0] - proj[0].mean(), proj[1] - proj[1].mean())
    assert (back - target).sup() < 1e-10


def test_curl_of_analytic_velocity(grid):
    k = grid.k0
    x, y = grid.coords
    u = VectorField2.from_arrays(grid, -k * np.sin(k * x) * np.cos(k * y), k * np.cos(k * x) * np.sin(k * y))
    expected = -2 * k**2 * np.sin(k * x) * np.sin(k * y)
    assert np.abs(curl(u).values - expected).max() < 1e-10


def test_rejects_total_vorticity(grid):
    with pytest.raises(ValueError, match="nonzero total vorticity"):
        velocity_from_vorticity(grid.constant(1.0))
