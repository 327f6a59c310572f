"""Striated-regularity norms and invariant residuals of a simulation state.

Every report is a pure function of the state (probe families are seeded), so
recomputing on the same state reproduces a CSV row exactly.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import pdist

from .littlewood_paley import BesovIndex, holder_norm, multiplier_norm_probe, probe_family, vector_besov_norm
from .paradiff import para_vector_field_vec
from .patch import PatchSplit, boundary_holder, extract_contour
from .solver import SimulationState, kinetic_energy
from .spectral import ScalarField, VectorField2, divergence, gradient
from .transport import interpolate

__all__ = [
    "COLUMNS",
    "DiagnosticsConfig",
    "directional_stretch",
    "striated_report",
    "invariant_report",
    "tangency_residual",
    "density_derivative_residual",
    "support_diameter",
    "report_row",
    "SeriesWriter",
]

COLUMNS = (
    "t", "holder_X", "besov_dXu", "besov_TXu", "bony_residual", "boundary_holder", "div_u",
    "div_X", "tangency", "mass", "energy", "area", "suppX_diam", "multiplier_probe",
)
INTEGRAL_COLUMNS = ("int_besov_dXu", "int_besov_TXu")


@dataclass(frozen=True)
class DiagnosticsConfig:
    eps: float = 0.5
    p: float = 3.0
    seed: int = 0
    probes_per_shell: int = 1
    boundary_probes: int = 4
    support_threshold: float = 1e-3

    @property
    def index(self) -> BesovIndex:
        return BesovIndex(2.0 / self.p + self.eps - 2.0, self.p, 1)

    @property
    def multiplier_index(self) -> BesovIndex:
        return BesovIndex(2.0 / self.p - 1.0, self.p, 1)


def directional_stretch(X: VectorField2, u: VectorField2) -> VectorField2:
    """``d_X u`` with spectral derivatives."""
    out = []
    for k in range(2):
        g = gradient(u[k])
        out.append(ScalarField(u.grid, X[0].values * g[0].values + X[1].values * g[1].values))
    return VectorField2(*out)


def _mean_free(v: VectorField2) -> VectorField2:
    return VectorField2(*(c - c.mean() for c in v))


def _contour_or_none(s: SimulationState):
    if s.level is None:
        return None
    return extract_contour(s.level)


def striated_report(s: SimulationState, cfg: DiagnosticsConfig = DiagnosticsConfig()) -> dict:
    """Holder norm of ``X``, Besov norms of ``d_X u`` and ``T_X u`` and their gap,
    boundary Holder seminorm, and a multiplier-norm lower bound for ``rho - 1``.

    Homogeneous norms with negative index see the fields with their (roundoff
    sized) mean removed.
    """
    idx = cfg.index
    dxu = _mean_free(directional_stretch(s.X, s.u))
    txu = _mean_free(para_vector_field_vec(s.X, s.u))
    rec = {
        "holder_X": holder_norm(s.X, cfg.eps) if np.any(s.X.values) else 0.0,
        "besov_dXu": vector_besov_norm(dxu, idx),
        "besov_TXu": vector_besov_norm(txu, idx),
        "bony_residual": vector_besov_norm(dxu - txu, idx),
    }
    contour = _contour_or_none(s)
    rec["boundary_holder"] = boundary_holder(contour, cfg.eps) if contour is not None else math.nan
    rec["multiplier_probe"] = _multiplier_probe(s, cfg, contour)
    return rec


def _multiplier_probe(s: SimulationState, cfg: DiagnosticsConfig, contour) -> float:
    phi = s.rho - 1.0
    if not np.any(phi.values):
        return 0.0
    rng = np.random.default_rng(cfg.seed)
    pts = None
    if contour is not None and cfg.boundary_probes > 0:
        sel = np.linspace(0, len(contour.points), cfg.boundary_probes, endpoint=False).astype(int)
        pts = contour.points[sel]
    probes = probe_family(s.grid, rng, per_shell=cfg.probes_per_shell, boundary_points=pts)
    idx = cfg.multiplier_index
    return multiplier_norm_probe(phi, idx, idx, probes)


def tangency_residual(X: VectorField2, level: ScalarField, band: float) -> float:
    """``sup |X . grad f_t|`` over grid points with ``|f_t| < band``."""
    g = gradient(level)
    dot = X[0].values * g[0].values + X[1].values * g[1].values
    sel = np.abs(level.values) < band
    return float(np.abs(dot[sel]).max()) if sel.any() else 0.0


def density_derivative_residual(s: SimulationState) -> float:
    """``sup |(d_X rho)(t) o psi_t - d_{X0} rho0|``.

    ``grad rho`` is taken through the chain rule on the smooth level set,
    ``H'(f_t) grad f_t``, so the mollified jump never meets a spectral
    derivative.
    """
    if s.level is None or s.density_fn is None:
        return 0.0
    grid = s.grid

    def d_x_rho(X: VectorField2, level: ScalarField) -> np.ndarray:
        f = level.values
        h = 1e-6 * max(1.0, float(np.abs(f).max()))
        slope = (s.density_fn(f + h) - s.density_fn(f - h)) / (2 * h)
        g = gradient(level)
        return slope * (X[0].values * g[0].values + X[1].values * g[1].values)

    x, y = grid.coords
    level0 = ScalarField(grid, s.level_fn(x, y))
    now = d_x_rho(s.X, s.level)
    pulled = interpolate(now, s.flow.forward[0], s.flow.forward[1], grid)
    return float(np.abs(pulled - d_x_rho(s.X0, level0)).max())


def support_diameter(X: VectorField2, threshold: float = 1e-3) -> float:
    """Diameter of ``{|X| > threshold * sup|X|}`` (convex hull of the grid points)."""
    mag = X.magnitude()
    top = mag.max()
    if top == 0:
        return 0.0
    x, y = X.grid.coords
    sel = mag > threshold * top
    pts = np.column_stack([x[sel], y[sel]])
    if len(pts) < 3:
        return float(pdist(pts).max()) if len(pts) == 2 else 0.0
    try:
        hull = pts[ConvexHull(pts).vertices]
    except QhullError:
        hull = pts
    return float(pdist(hull).max())


def invariant_report(s: SimulationState, band: float | None = None,
                     support_threshold: float = 1e-3) -> dict:
    """Divergence, tangency, mass, energy, area and support residuals."""
    rec = {
        "div_u": divergence(s.u).sup(),
        "div_X": divergence(s.X).sup(),
        "tangency": math.nan,
        "mass": (s.rho - 1.0).integral(),
        "energy": kinetic_energy(s.rho, s.u),
        "area": math.nan,
        "suppX_diam": support_diameter(s.X, support_threshold),
    }
    if s.level is not None:
        if band is not None:
            rec["tangency"] = tangency_residual(s.X, s.level, band)
        try:
            rec["area"] = extract_contour(s.level).area
        except PatchSplit:
            rec["area"] = math.nan
    return rec


def report_row(s: SimulationState, cfg: DiagnosticsConfig = DiagnosticsConfig(),
               band: float | None = None) -> dict:
    rec = {"t": s.t}
    rec.update(striated_report(s, cfg))
    rec.update(invariant_report(s, band, cfg.support_threshold))
    return {k: rec[k] for k in COLUMNS}


class SeriesWriter:
    """Accumulates rows, adds trapezoid time integrals of the two Besov columns, writes CSV."""

    def __init__(self):
        self.rows: list[dict] = []
        self._acc = [0.0, 0.0]

    def append(self, row: dict) -> dict:
        row = dict(row)
        if self.rows:
            prev = self.rows[-1]
            dt = row["t"] - prev["t"]
            self._acc[0] += 0.5 * dt * (row["besov_dXu"] + prev["besov_dXu"])
            self._acc[1] += 0.5 * dt * (row["besov_TXu"] + prev["besov_TXu"])
        row["int_besov_dXu"], row["int_besov_TXu"] = self._acc
        self.rows.append(row)
        return row

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.rows])

    def write(self, path) -> None:
        cols = COLUMNS + INTEGRAL_COLUMNS
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(cols)
            for r in self.rows:
                w.writerow([repr(float(r[c])) for c in cols])
