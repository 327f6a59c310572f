"""Bony paraproduct, remainder, para-vector field and commutators.

All products are dealiased (2/3 rule).  Since truncation is linear, the Bony
identity holds exactly for dealiased products::

    dealias(u v) = T_u v + T_v u + R(u, v) + mean(u) mean(v)

where the last term is the low-frequency correction coming from the torus
``low_part`` (the zero mode), which no homogeneous block carries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .littlewood_paley import filter_bank, low_pass_values
from .spectral import (
    ScalarField,
    VectorField2,
    dealias,
    divergence,
    gradient,
    ifft2,
    laplacian,
)

__all__ = [
    "ParaConfig",
    "paraproduct",
    "remainder",
    "bony_correction",
    "para_vector_field",
    "para_vector_field_vec",
    "commutator_laplacian",
    "commutator_material",
    "transport_rhs",
]


@dataclass(frozen=True)
class ParaConfig:
    n0: int = 4

    def __post_init__(self):
        if self.n0 < 2:
            raise ValueError(f"n0 must be >= 2, got {self.n0}")


DEFAULT = ParaConfig()


def _same_grid(*fields) -> None:
    g = fields[0].grid
    if any(f.grid != g for f in fields[1:]):
        raise ValueError("fields live on different grids")


def _blocks(f: ScalarField) -> dict[int, np.ndarray]:
    bank = filter_bank(f.grid)
    spec = f.spectrum
    return {j: ifft2(spec * bank.phi_mult(j), f.grid.n) for j in bank.js}


def paraproduct(u: ScalarField, v: ScalarField, cfg: ParaConfig = DEFAULT) -> ScalarField:
    """``T_u v = sum_j S_{j-n0} u * Delta_j v``."""
    _same_grid(u, v)
    bank = filter_bank(u.grid)
    acc = np.zeros((u.grid.n, u.grid.n))
    vspec = v.spectrum
    for j in bank.js:
        vj = ifft2(vspec * bank.phi_mult(j), u.grid.n)
        acc += low_pass_values(u, j - cfg.n0) * vj
    return dealias(ScalarField(u.grid, acc))


def remainder(u: ScalarField, v: ScalarField, cfg: ParaConfig = DEFAULT) -> ScalarField:
    """``R(u, v) = sum_{|j-k| <= n0} Delta_j u * Delta_k v``."""
    _same_grid(u, v)
    ub = _blocks(u)
    vb = _blocks(v)
    js = sorted(ub)
    acc = np.zeros((u.grid.n, u.grid.n))
    for j in js:
        near = np.zeros_like(acc)
        for k in range(j - cfg.n0, j + cfg.n0 + 1):
            if k in vb:
                near += vb[k]
        acc += ub[j] * near
    return dealias(ScalarField(u.grid, acc))


def bony_correction(u: ScalarField, v: ScalarField) -> float:
    """Low-frequency term left over by the torus Bony identity."""
    return u.mean() * v.mean()


def para_vector_field(X: VectorField2, f: ScalarField, cfg: ParaConfig = DEFAULT) -> ScalarField:
    """``T_X f = sum_k T_{X^k} d_k f``."""
    _same_grid(X[0], f)
    d1, d2 = gradient(f)
    return paraproduct(X[0], d1, cfg) + paraproduct(X[1], d2, cfg)


def para_vector_field_vec(X: VectorField2, u: VectorField2, cfg: ParaConfig = DEFAULT) -> VectorField2:
    return VectorField2(para_vector_field(X, u[0], cfg), para_vector_field(X, u[1], cfg))


def commutator_laplacian(X: VectorField2, u: ScalarField, cfg: ParaConfig = DEFAULT) -> ScalarField:
    """``[T_X, Lap] u = T_X(Lap u) - Lap(T_X u)``."""
    _same_grid(X[0], u)
    return para_vector_field(X, laplacian(u), cfg) - laplacian(para_vector_field(X, u, cfg))


def _dealiased_mul(a: ScalarField, b: ScalarField) -> ScalarField:
    return dealias(ScalarField(a.grid, a.values * b.values))


def transport_rhs(X: VectorField2, u: VectorField2) -> VectorField2:
    """``d_t X = -u . grad X + d_X u`` for a vector field carried by ``u``."""
    out = []
    for k in range(2):
        gX = gradient(X[k])
        gu = gradient(u[k])
        adv = u[0].values * gX[0].values + u[1].values * gX[1].values
        stretch = X[0].values * gu[0].values + X[1].values * gu[1].values
        out.append(dealias(ScalarField(X.grid, stretch - adv)))
    return VectorField2(*out)


def commutator_material(X: VectorField2, u: VectorField2, cfg: ParaConfig = DEFAULT,
                        dtX: VectorField2 | None = None, div_tol: float = 1e-8) -> VectorField2:
    """Frozen-time ``[T_X, d_t + u . grad] u`` through the solenoidal rewriting

        - T_{d_t X^k} d_k u + d_l T_X(u^l u) - T_{d_l X}(u^l u) - u^l d_l T_X u

    with ``d_t X`` taken from the transport equation unless supplied.
    """
    _same_grid(X[0], u[0])
    umax = max(1.0, u.sup())
    div_u = divergence(u).sup()
    if div_u > div_tol * umax:
        raise ValueError(f"commutator_material needs div u = 0 (got {div_u:.2e})")
    if dtX is None:
        dtX = transport_rhs(X, u)
    grid = u.grid
    gradX = [gradient(X[k]) for k in range(2)]  # gradX[k][l] = d_l X^k
    out = []
    for i in range(2):
        gui = gradient(u[i])
        r1 = -(paraproduct(dtX[0], gui[0], cfg) + paraproduct(dtX[1], gui[1], cfg))
        acc = r1.values.copy()
        uiu = [_dealiased_mul(u[l], u[i]) for l in range(2)]
        for l in range(2):
            txl = para_vector_field(X, uiu[l], cfg)
            acc += gradient(txl)[l].values
            dlX = VectorField2(gradX[0][l], gradX[1][l])
            acc -= para_vector_field(dlX, uiu[l], cfg).values
        txu = para_vector_field(X, u[i], cfg)
        g = gradient(txu)
        acc -= u[0].values * g[0].values + u[1].values * g[1].values
        out.append(dealias(ScalarField(grid, acc)))
    return VectorField2(*out)
