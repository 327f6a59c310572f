import math

import numpy as np
import pytest

from patchflow.experiments import relative_l2, windowed_rotation
from patchflow.solver import taylor_green
from patchflow.spectral import Grid2D, ScalarField, VectorField2, divergence, perp_gradient
from patchflow.transport import (
    CFLError,
    FlowMap,
    advance_flow,
    transport_scalar,
    transport_vector_formula,
    transport_vector_pde,
)


@pytest.fixture(scope="module")
def rot_grid():
    return Grid2D(128, 2 * math.pi)


@pytest.fixture(scope="module")
def rotation(rot_grid):
    return windowed_rotation(rot_grid)


def rotate(fm, u, dt, steps):
    for _ in range(steps):
        fm = advance_flow(fm, u, u, dt)
    return fm


@pytest.fixture(scope="module")
def quarter_turn(rot_grid, rotation):
    return rotate(FlowMap.identity(rot_grid), rotation, math.pi / 400, 200)


@pytest.fixture(scope="module")
def rigid_quarter_turn(rot_grid):
    # wide rigid core: Omega = 1 to 1e-4 inside r = 0.6
    u = windowed_rotation(rot_grid, radius=2.0, width=0.25)
    return rotate(FlowMap.identity(rot_grid), u, math.pi / 400, 200)


def bump_field(grid, offset=0.4, width=0.3):
    c = grid.length / 2
    f = grid.from_function(lambda x, y: width * np.exp(-((x - c - offset) ** 2 + (y - c) ** 2) / (2 * width**2)))
    return perp_gradient(f)


class TestFlowMap:
    def test_zero_velocity(self, rot_grid):
        fm = FlowMap.identity(rot_grid)
        z = VectorField2.zeros(rot_grid)
        out = advance_flow(fm, z, z, 0.1)
        assert np.array_equal(out.forward, fm.forward) and out.t == pytest.approx(0.1)

    def test_steady_shear(self):
        g = Grid2D(128, 2 * math.pi)
        x, y = g.coords
        u = VectorField2.from_arrays(g, np.sin(y), np.zeros_like(y))
        fm = FlowMap.identity(g)
        for _ in range(50):
            fm = advance_flow(fm, u, u, 0.02, cfl_safety=1.0)
        assert np.abs(fm.forward[0] - (x + np.sin(y))).max() < 1e-6
        assert np.abs(fm.forward[1] - y).max() < 1e-12

    def test_rigid_rotation(self, rot_grid, rigid_quarter_turn):
        c = rot_grid.length / 2
        x, y = rot_grid.coords
        near = np.hypot(x - c, y - c) < 0.6
        ex, ey = c - (y - c), c + (x - c)
        fwd = rigid_quarter_turn.forward
        err = np.hypot(fwd[0] - ex, fwd[1] - ey)[near].max()
        assert err <= 1e-3 * rot_grid.length

    def test_invariants_cellular_flow(self):
        g = Grid2D(256, 2 * math.pi)
        u = taylor_green(g)
        fm = FlowMap.identity(g)
        for _ in range(82):
            fm = advance_flow(fm, u, u, 1.0 / 82)
        assert fm.composition_error() <= 2 * g.spacing
        assert np.abs(fm.jacobian_determinant() - 1).max() <= 1e-3

    def test_composition_under_rotation(self, rot_grid, quarter_turn):
        # strong differential rotation: the bilinear inverse map diffuses but stays within a few cells
        assert quarter_turn.composition_error() <= 4 * rot_grid.spacing

    def test_cfl(self, rot_grid, rotation):
        with pytest.raises(CFLError) as info:
            advance_flow(FlowMap.identity(rot_grid), rotation, rotation, 1.0)
        assert info.value.suggested < 1.0


class TestScalarTransport:
    def test_identity(self, rot_grid):
        f = rot_grid.from_function(lambda x, y: np.sin(x) * np.cos(2 * y))
        out = transport_scalar(f, FlowMap.identity(rot_grid))
        assert np.abs(out.values - f.values).max() <= 1e-12

    def test_radial_invariance(self, rot_grid, rigid_quarter_turn):
        c = rot_grid.length / 2

        def f0(x, y):
            return np.exp(-((x - c) ** 2 + (y - c) ** 2) / 0.1)

        out = transport_scalar(f0, rigid_quarter_turn)
        x, y = rot_grid.coords
        assert np.abs(out.values - f0(x, y)).max() <= 1e-4

    def test_maximum_principle(self, rot_grid, quarter_turn):
        rng = np.random.default_rng(0)
        f = ScalarField(rot_grid, rng.standard_normal((128, 128)))
        out = transport_scalar(f, quarter_turn)
        assert np.abs(out.values).max() <= np.abs(f.values).max() + 1e-12


class TestVectorTransport:
    def test_formula_identity(self, rot_grid):
        X0 = bump_field(rot_grid)
        out = transport_vector_formula(X0, FlowMap.identity(rot_grid))
        assert (out - X0).sup() <= 1e-12

    def test_formula_rotation(self, rot_grid, rigid_quarter_turn):
        # a quarter turn maps grad_perp of a bump at c + (a, 0) onto grad_perp of the bump at c + (0, a)
        c = rot_grid.length / 2
        a, w = 0.3, 0.15
        X0 = bump_field(rot_grid, offset=a, width=w)
        X = transport_vector_formula(X0, rigid_quarter_turn)
        x, y = rot_grid.coords
        e = w * np.exp(-((x - c) ** 2 + (y - c - a) ** 2) / (2 * w**2))
        assert (X - perp_gradient(ScalarField(rot_grid, e))).sup() <= 1e-3

    def test_formula_shear(self):
        g = Grid2D(128, 2 * math.pi)
        x, y = g.coords
        u = VectorField2.from_arrays(g, np.sin(y), np.zeros_like(y))
        fm = FlowMap.identity(g)
        for _ in range(50):
            fm = advance_flow(fm, u, u, 0.02, cfl_safety=1.0)
        X0 = VectorField2.from_arrays(g, np.zeros_like(y), np.ones_like(y))
        X = transport_vector_formula(X0, fm)
        assert np.abs(X[0].values - np.cos(y)).max() + np.abs(X[1].values - 1).max() <= 1e-4

    def test_pde_zero_velocity(self, rot_grid):
        X0 = bump_field(rot_grid)
        assert transport_vector_pde(X0, VectorField2.zeros(rot_grid), 0.1) is X0

    def test_pde_matches_formula(self, rot_grid, rotation):
        dt = 0.01
        X0 = bump_field(rot_grid)
        X = X0
        fm = FlowMap.identity(rot_grid)
        for _ in range(100):
            X = transport_vector_pde(X, rotation, dt, rotation, order=3)
            fm = advance_flow(fm, rotation, rotation, dt)
        assert relative_l2(X, transport_vector_formula(X0, fm, order=3)) <= 1e-2

    def test_divergence_conserved(self, rot_grid, rotation):
        X = bump_field(rot_grid)
        assert divergence(X).sup() <= 1e-8
        for _ in range(100):
            X = transport_vector_pde(X, rotation, 0.01, rotation, order=3)
        assert divergence(X).sup() <= 1e-3
