"""Reference experiments: the patch persistence run, Taylor-Green regression,
scaling check, commutator ratio suites, and the property suites behind
``patchflow verify``.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .biot_savart import velocity_from_vorticity
from .diagnostics import (
    DiagnosticsConfig,
    SeriesWriter,
    density_derivative_residual,
    report_row,
)
from .littlewood_paley import BesovIndex, besov_norm, filter_bank, vector_besov_norm
from .paradiff import (
    bony_correction,
    commutator_laplacian,
    commutator_material,
    para_vector_field,
    para_vector_field_vec,
    paraproduct,
    remainder,
)
from .patch import Patch, PatchSplit, extract_contour, make_patch, patch_vorticity, tangent_field
from .solver import (
    SimulationState,
    SolverConfig,
    initial_state,
    kinetic_energy,
    run,
    step,
    taylor_green,
    taylor_green_exact,
)
from .spectral import (
    Grid2D,
    ScalarField,
    VectorField2,
    band_limited_random,
    curl,
    dealias,
    directional_derivative,
    divergence,
    fft2,
    gradient,
    leray_project,
    perp_gradient,
    write_snapshot,
)
from .transport import FlowMap, advance_flow, transport_vector_formula

__all__ = [
    "Verdict",
    "PatchRunConfig",
    "PatchRun",
    "vorticity_profile",
    "build_patch_state",
    "patch_run",
    "persistence_verdicts",
    "partition_residual",
    "bony_study",
    "biot_savart_study",
    "taylor_green_study",
    "scaling_study",
    "RatioSuite",
    "dxf_suite",
    "laplacian_commutator_suite",
    "material_commutator_suite",
    "kinked_rotation",
    "windowed_rotation",
    "verify_suite",
    "SUITES",
]


@dataclass
class Verdict:
    criterion: str
    check: str
    measured: float
    tolerance: float
    passed: bool
    seconds: float = math.nan

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} [{self.criterion}] {self.check}: measured {self.measured:.4g} (tolerance {self.tolerance:.4g})"


def _le(criterion, check, measured, tol, seconds=math.nan) -> Verdict:
    return Verdict(criterion, check, float(measured), float(tol), bool(measured <= tol), seconds)


# -- patch persistence run ---------------------------------------------------------


@dataclass(frozen=True)
class PatchRunConfig:
    n: int = 256
    L: float = 8.0
    eta: float = 0.05
    shape: str = "perturbed_disc"
    radius: float = 1.0
    semi_axes: tuple[float, float] | None = None
    eps: float = 0.5
    amplitude: float = 0.1
    modes: tuple[int, int] = (1, 4)
    vorticity_amplitude: float = 0.01
    vorticity_profile: str = "linear"
    dt: float = 0.01
    t_end: float = 2.0
    every: int = 20
    p: float = 3.0
    seed: int = 0
    interp_order: int = 3

    @property
    def grid(self) -> Grid2D:
        return Grid2D(self.n, self.L)

    def solver(self) -> SolverConfig:
        return SolverConfig(self.dt, self.t_end, interp_order=self.interp_order)

    def diagnostics(self) -> DiagnosticsConfig:
        return DiagnosticsConfig(eps=self.eps, p=self.p, seed=self.seed)


def vorticity_profile(grid: Grid2D, patch: Patch, kind: str, amplitude: float) -> ScalarField:
    """Smooth profile inside the patch: ``constant``, ``linear`` (``1 + (x - c)/R``) or ``gaussian``."""
    cx, cy = patch.center
    R = patch.radius
    if kind == "constant":
        return grid.constant(amplitude)
    if kind == "linear":
        return grid.from_function(lambda x, y: amplitude * (1.0 + (x - cx) / R))
    if kind == "gaussian":
        return grid.from_function(
            lambda x, y: amplitude * np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (0.5 * R) ** 2))
    raise ValueError(f"unknown vorticity profile {kind!r}")


def build_patch_state(cfg: PatchRunConfig) -> tuple[SimulationState, Patch]:
    grid = cfg.grid
    patch = make_patch(cfg.shape, cfg.eta, grid, radius=cfg.radius, semi_axes=cfg.semi_axes,
                       eps=cfg.eps, amplitude=cfg.amplitude, modes=cfg.modes)
    omega = patch_vorticity(patch, vorticity_profile(grid, patch, cfg.vorticity_profile,
                                                      cfg.vorticity_amplitude))
    u0 = velocity_from_vorticity(omega)
    state = initial_state(u0, X0=tangent_field(patch), level_fn=patch.level_set.fn,
                          density_fn=patch.density_from_level)
    return state, patch


@dataclass
class PatchRun:
    config: PatchRunConfig
    series: SeriesWriter
    step_t: np.ndarray
    step_div_u: np.ndarray
    step_energy: np.ndarray
    step_mass: np.ndarray
    extras: list[dict]
    final: SimulationState
    seconds: float

    def column(self, name: str) -> np.ndarray:
        if name in ("dxrho", "pde_vs_formula", "contour_ok"):
            return np.array([e[name] for e in self.extras], dtype=float)
        return self.series.column(name)


def relative_l2(a: VectorField2, b: VectorField2) -> float:
    den = float((b.values**2).sum())
    return math.sqrt(float(((a.values - b.values) ** 2).sum()) / den) if den > 0 else 0.0


def _contour_ok(state: SimulationState) -> bool:
    try:
        return extract_contour(state.level).is_simple()
    except PatchSplit:
        return False


def patch_run(cfg: PatchRunConfig, outdir=None, progress: Callable[[str], None] | None = None) -> PatchRun:
    """Run the patch experiment, sampling diagnostics every ``cfg.every`` steps.

    With ``outdir``, snapshots of ``u``, ``rho``, ``X`` and ``f_t`` are written
    at every sample, together with ``series.csv``.
    """
    t0 = time.perf_counter()
    state, patch = build_patch_state(cfg)
    dcfg = cfg.diagnostics()
    band = patch.level_set.band
    series = SeriesWriter()
    log = {"t": [], "div_u": [], "energy": [], "mass": []}
    extras = []
    out = Path(outdir) if outdir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    n_steps = cfg.solver().n_steps

    def record(s: SimulationState) -> None:
        log["t"].append(s.t)
        log["div_u"].append(divergence(s.u).sup())
        log["energy"].append(kinetic_energy(s.rho, s.u))
        log["mass"].append((s.rho - 1.0).integral())
        if s.steps % cfg.every and s.steps != n_steps:
            return
        row = series.append(report_row(s, dcfg, band=band))
        extras.append({
            "t": s.t,
            "dxrho": density_derivative_residual(s),
            "pde_vs_formula": relative_l2(s.X, s.X_formula),
            "contour_ok": float(_contour_ok(s)),
        })
        if out is not None:
            tag = f"{s.steps:06d}"
            write_snapshot(out / f"u_{tag}.snap", s.u, "u", s.t)
            write_snapshot(out / f"rho_{tag}.snap", s.rho, "rho", s.t)
            write_snapshot(out / f"X_{tag}.snap", s.X, "X", s.t)
            write_snapshot(out / f"level_{tag}.snap", s.level, "level", s.t)
        if progress is not None:
            progress(f"t={s.t:.3f} holder_X={row['holder_X']:.4g} boundary_holder={row['boundary_holder']:.4g} "
                     f"div_X={row['div_X']:.3g} tangency={row['tangency']:.3g}")

    final = run(state, cfg.solver(), every=1, callback=record)
    if out is not None:
        series.write(out / "series.csv")
    return PatchRun(cfg, series, *(np.array(log[k]) for k in ("t", "div_u", "energy", "mass")),
                    extras, final, time.perf_counter() - t0)


def _series_change(a: np.ndarray, b: np.ndarray) -> float:
    """Largest relative change between two sampled series at matching times."""
    m = min(len(a), len(b))
    a, b = a[:m], b[:m]
    return float(np.max(np.abs(b - a) / np.abs(a)))


def persistence_verdicts(base: PatchRun, fine: PatchRun | None = None) -> list[Verdict]:
    """Verdicts for the transport identities, regularity persistence and X consistency."""
    secs = base.seconds
    out = [
        _le("6", "max div u over steps", base.step_div_u.max(), 1e-8, secs),
        _le("6", "max div X over samples", base.column("div_X").max(), 1e-3),
        _le("6", "max tangency residual on the band", base.column("tangency").max(), 1e-3),
    ]
    area = base.column("area")
    out.append(_le("6", "patch area drift", np.max(np.abs(area / area[0] - 1.0)), 5e-3))
    rises = np.diff(base.step_energy)
    out.append(_le("6", "largest energy increase between steps", max(rises.max(initial=-np.inf), 0.0), 1e-10))
    out.append(_le("6", "(d_X rho)(t) o psi_t - d_X0 rho0", base.column("dxrho").max(), 1e-3))

    bh = base.column("boundary_holder")
    hx = base.column("holder_X")
    out.append(_le("7", "boundary_holder(t) / initial", bh.max() / bh[0], 3.0))
    out.append(_le("7", "holder_X(t) / initial", hx.max() / hx[0], 3.0))
    out.append(Verdict("7", "contour single and simple at every sample",
                       float(base.column("contour_ok").min()), 1.0,
                       bool(base.column("contour_ok").min() == 1.0)))
    if fine is not None:
        out.append(_le("7", f"boundary_holder change at n={fine.config.n}",
                       _series_change(bh, fine.column("boundary_holder")), 0.3, fine.seconds))
        out.append(_le("7", f"holder_X change at n={fine.config.n}",
                       _series_change(hx, fine.column("holder_X")), 0.3))
    out.append(_le("8", f"relative L2 of X (PDE vs formula) at t={base.final.t:.3g}",
                   base.column("pde_vs_formula")[-1], 1e-2))
    return out


# -- spectral and paradifferential identities ------------------------------------


def partition_residual(grid: Grid2D) -> float:
    """``max |low + sum_j phi_j - 1|`` over every lattice frequency."""
    bank = filter_bank(grid)
    total = bank.chi_mult(bank.j_min).astype(float)
    for j in bank.js:
        total = total + bank.phi_mult(j)
    return float(np.abs(total - 1.0).max())


def bony_study(grid: Grid2D, pairs: int = 20, seed: int = 0) -> float:
    """Largest relative Bony residual over random band-limited pairs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(pairs):
        u = band_limited_random(grid, rng, mean_free=False)
        v = band_limited_random(grid, rng, mean_free=False)
        full = dealias(ScalarField(grid, u.values * v.values))
        rest = paraproduct(u, v) + paraproduct(v, u) + remainder(u, v)
        res = full.values - rest.values - bony_correction(u, v)
        worst = max(worst, float(np.abs(res).max() / np.abs(full.values).max()))
    return worst


def biot_savart_study(grid: Grid2D, seed: int = 0) -> tuple[float, float]:
    """(round-trip relative error on a random field, analytic sin-sin error)."""
    rng = np.random.default_rng(seed)
    w = band_limited_random(grid, rng)
    back = curl(velocity_from_vorticity(w))
    round_trip = float(np.abs(back.values - w.values).max() / np.abs(w.values).max())
    x, y = grid.coords
    k = grid.k0
    omega = ScalarField(grid, -2 * k**2 * np.sin(k * x) * np.sin(k * y))
    u = velocity_from_vorticity(omega)
    ex = (-k * np.sin(k * x) * np.cos(k * y), k * np.cos(k * x) * np.sin(k * y))
    analytic = max(float(np.abs(u[i].values - ex[i]).max()) for i in range(2)) / k
    return round_trip, analytic


def taylor_green_study(n: int = 128, dt: float = 1e-3, t_end: float = 1.0,
                       length: float = 2 * math.pi) -> dict:
    """Relative L2 errors at ``dt`` and ``dt / 2`` and the observed order."""
    grid = Grid2D(n, length)
    errs = []
    for d in (dt, dt / 2):
        s = run(initial_state(taylor_green(grid)), SolverConfig(d, t_end))
        errs.append(relative_l2(s.u, taylor_green_exact(grid, s.t)))
    return {"error": errs[0], "error_half": errs[1], "order": math.log2(errs[0] / errs[1])}


def scaling_study(n: int = 128, length: float = 2 * math.pi, lam: float = 2.0, t_end: float = 0.1,
                  dt: float = 1e-3, seed: int = 0, velocity: float = 1.0) -> float:
    """Relative mismatch between the run on ``L`` and the rescaled run on ``L / lam``.

    The rescaled data are ``lam u0(lam x)`` integrated to ``t_end / lam^2``;
    the same grid size keeps grid nodes in correspondence, so
    ``u_small(x_i / lam) = lam u(x_i)`` is compared node by node.
    """
    big = Grid2D(n, length)
    rng = np.random.default_rng(seed)
    w = band_limited_random(big, rng, kmax=8 * big.k0)
    u0 = velocity_from_vorticity(w)
    u0 = u0 * (velocity / u0.sup())
    small = Grid2D(n, length / lam)
    u0s = VectorField2.from_arrays(small, lam * u0[0].values, lam * u0[1].values)
    a = run(initial_state(u0), SolverConfig(dt, t_end))
    b = run(initial_state(u0s), SolverConfig(dt / lam**2, t_end / lam**2))
    mapped = VectorField2.from_arrays(big, b.u[0].values / lam, b.u[1].values / lam)
    return relative_l2(mapped, a.u)


# -- commutator ratio suites --------------------------------------------------------


@dataclass
class RatioSuite:
    name: str
    ratios: dict = field(default_factory=dict)  # scale -> list of ratios

    @property
    def per_scale(self) -> dict:
        return {k: max(v) for k, v in self.ratios.items()}

    @property
    def spread(self) -> float:
        vals = list(self.per_scale.values())
        return max(vals) / min(vals)


def _shell_field(grid: Grid2D, rng, k: float) -> ScalarField:
    mask = (grid.k_abs >= 0.75 * k) & (grid.k_abs <= 1.5 * k) & grid.dealias_mask
    f = ScalarField.from_spectrum(grid, fft2(rng.standard_normal((grid.n, grid.n))) * mask)
    return f / f.sup()


def rough_solenoidal(grid: Grid2D, rng, eps: float) -> VectorField2:
    """Random ``grad_perp psi`` with spectrum decaying like ``|k|^{-(2 + eps)}``: Holder-``eps`` texture on every shell."""
    k = grid.k_abs.copy()
    k[0, 0] = 1.0
    spec = fft2(rng.standard_normal((grid.n, grid.n))) * grid.dealias_mask * k ** (-(2 + eps))
    spec[0, 0] = 0.0
    X = perp_gradient(ScalarField.from_spectrum(grid, spec))
    return X * (1.0 / X.sup())


def _holder_hom(v, s: float) -> float:
    comps = v if isinstance(v, VectorField2) else [v]
    return max(besov_norm(c - c.mean(), BesovIndex(s, np.inf, np.inf)) for c in comps)


def dxf_suite(n: int = 256, scales=(16, 32, 64), samples: int = 3, eps: float = 0.5, p: float = 3.0,
              seed: int = 0) -> RatioSuite:
    """``||(T_X - d_X) f|| / (||f|| ||X||_{C^eps})`` for solenoidal ``X`` and ``f`` on frequency shells."""
    grid = Grid2D(n)
    rng = np.random.default_rng(seed)
    suite = RatioSuite("dXf_TXf")
    for k in scales:
        vals = []
        for _ in range(samples):
            X = rough_solenoidal(grid, rng, eps)
            f = _shell_field(grid, rng, k)
            diff = para_vector_field(X, f) - dealias(directional_derivative(X, f))
            diff = diff - diff.mean()
            num = besov_norm(diff, BesovIndex(2 / p + eps - 2, p, 1))
            den = besov_norm(f, BesovIndex(2 / p - 1, p, 1)) * _holder_hom(X, eps)
            vals.append(num / den)
        suite.ratios[k] = vals
    return suite


def laplacian_commutator_suite(n: int = 256, scales=(16, 32, 64), pairs: int = 51, eps: float = 0.5,
                               p: float = 3.0, seed: int = 0) -> RatioSuite:
    """``||[T_X, Lap] u|| / (||grad X||_{C^{eps-1}} ||grad u||_{B^{2/p}_{p,1}})`` over random pairs."""
    grid = Grid2D(n)
    rng = np.random.default_rng(seed)
    per = -(-pairs // len(scales))
    suite = RatioSuite("commutator_laplacian")
    for k in scales:
        vals = []
        for _ in range(per):
            X = rough_solenoidal(grid, rng, eps)
            u = _shell_field(grid, rng, k)
            num = besov_norm(commutator_laplacian(X, u), BesovIndex(2 / p + eps - 2, p, 1))
            dX = max(_holder_hom(gradient(X[i]), eps - 1) for i in range(2))
            du = vector_besov_norm(gradient(u), BesovIndex(2 / p, p, 1))
            vals.append(num / (dX * du))
        suite.ratios[k] = vals
    return suite


def kinked_rotation(grid: Grid2D, inner: float = 1.0, outer: float = 2.0) -> VectorField2:
    """Rigid rotation inside ``r < inner`` whose angular momentum falls linearly to 0 at ``outer``,
    band-limited to the dealiased band.  The kinks put energy on every resolved shell."""
    c = grid.length / 2
    x, y = grid.coords
    r = np.hypot(x - c, y - c)
    R, R2 = inner, outer
    psi = np.where(r < R, -0.5 * r**2,
                   np.where(r < R2, -0.5 * R**2 - R * (r - R) + R * (r - R) ** 2 / (2 * (R2 - R)),
                            -0.5 * R**2 - 0.5 * R * (R2 - R)))
    return perp_gradient(dealias(ScalarField(grid, psi)))


def windowed_rotation(grid: Grid2D, radius: float = 1.6, width: float = 0.3, omega: float = 1.0) -> VectorField2:
    """Counterclockwise ``Omega(r) (-(y - c), x - c)`` about the torus centre, Leray projected.

    ``Omega = omega (1 - tanh((r - radius) / width)) / 2`` is rigid near the axis
    and negligible at the cell edge.  Any radial angular velocity is solenoidal;
    the projection only removes the tiny mismatch of the tanh tail across the
    periodic boundary.
    """
    c = grid.length / 2
    x, y = grid.coords
    w = 0.5 * omega * (1.0 - np.tanh((np.hypot(x - c, y - c) - radius) / width))
    return leray_project(VectorField2.from_arrays(grid, -w * (y - c), w * (x - c)))


def material_commutator_suite(resolutions=(128, 256, 512), eps: float = 0.5, p: float = 3.0,
                              bump_width: float = 0.3, offset: float = 0.4) -> RatioSuite:
    """Frozen-time ``[T_X, D_t] u`` against the three-term bound.

    ``u`` is :func:`kinked_rotation` and ``X = grad_perp`` of a Gaussian bump
    centred ``offset`` from the rotation axis (a bump on the axis would commute
    with the rotation).
    """
    suite = RatioSuite("commutator_material")
    idx = lambda s, q=p, r=1: BesovIndex(s, q, r)  # noqa: E731
    for n in resolutions:
        grid = Grid2D(n)
        c = grid.length / 2
        x, y = grid.coords
        u = kinked_rotation(grid)
        b = bump_width
        rb = (x - c - offset) ** 2 + (y - c) ** 2
        X = perp_gradient(ScalarField(grid, b * np.exp(-rb / (2 * b * b))))
        num = vector_besov_norm(commutator_material(X, u), idx(2 / p + eps - 2))
        txu = para_vector_field_vec(X, u)
        txu = VectorField2(*(cc - cc.mean() for cc in txu))
        hi = vector_besov_norm(u, idx(2 / p + 1))
        den = (_holder_hom(X, eps) * hi * vector_besov_norm(u, idx(2 / p - 1))
               + _holder_hom(u, -1.0) * vector_besov_norm(txu, idx(2 / p + eps))
               + hi * _holder_hom(txu, eps - 2))
        suite.ratios[n] = [num / den]
    return suite


# -- verify suites --------------------------------------------------------------------


def _timed(fn):
    t0 = time.perf_counter()
    val = fn()
    return val, time.perf_counter() - t0


def _verify_spectral() -> list[Verdict]:
    out = []
    grid = Grid2D(256)
    res, secs = _timed(lambda: partition_residual(grid))
    out.append(_le("1", "partition of unity residual (n=256)", res, 1e-10, secs))
    out.append(_le("1", "partition of unity runtime [s]", secs, 1.0))
    g = Grid2D(64, 3.0)
    f = g.from_function(lambda x, y: np.sin(2 * np.pi * x / 3.0))
    d1, d2 = gradient(f)
    x, _ = g.coords
    err = max(float(np.abs(d1.values - 2 * np.pi / 3.0 * np.cos(2 * np.pi * x / 3.0)).max()), d2.sup())
    out.append(_le("spectral", "gradient of sin", err, 1e-12))
    rng = np.random.default_rng(0)
    w = band_limited_random(g, rng)
    out.append(_le("spectral", "transform round trip", float(np.abs(
        ScalarField.from_spectrum(g, w.spectrum).values - w.values).max()), 1e-12))
    (rt, an), secs = _timed(lambda: biot_savart_study(Grid2D(256)))
    out.append(_le("4", "curl(velocity_from_vorticity(w)) - w, relative", rt, 1e-10, secs))
    out.append(_le("4", "sin-sin Biot-Savart, relative", an, 1e-10))
    out.append(_le("4", "Biot-Savart runtime [s]", secs, 1.0))
    return out


def _verify_paradiff() -> list[Verdict]:
    out = []
    res, secs = _timed(lambda: bony_study(Grid2D(256), pairs=20))
    out.append(_le("2", "Bony residual over 20 pairs (n=256)", res, 1e-9, secs))
    out.append(_le("2", "Bony runtime [s]", secs, 10.0))
    suite, secs = _timed(dxf_suite)
    out.append(_le("3", "(T_X - d_X) f ratio spread across 2^4, 2^5, 2^6", suite.spread, 4.0, secs))
    out.append(_le("3", "dXf suite runtime [s]", secs, 60.0))
    lap, s1 = _timed(laplacian_commutator_suite)
    mat, s2 = _timed(material_commutator_suite)
    out.append(_le("10", "[T_X, Lap] ratio spread across 3 scales", lap.spread, 4.0, s1))
    out.append(_le("10", "[T_X, D_t] ratio spread across 3 resolutions", mat.spread, 4.0, s2))
    out.append(_le("10", "commutator suites runtime [s]", s1 + s2, 120.0))
    return out


def _verify_transport() -> list[Verdict]:
    out = []
    grid = Grid2D(128, 2 * math.pi)
    x, y = grid.coords
    s = np.sin(y)
    u = VectorField2.from_arrays(grid, s, np.zeros_like(s))
    fm = FlowMap.identity(grid)
    dt, t_end = 0.02, 1.0
    for _ in range(int(round(t_end / dt))):
        fm = advance_flow(fm, u, u, dt, cfl_safety=1.0)
    err = float(np.abs(fm.forward[0] - (x + t_end * s)).max() + np.abs(fm.forward[1] - y).max())
    out.append(_le("transport", "steady shear flow map", err, 1e-6))
    X0 = VectorField2.from_arrays(grid, np.zeros_like(s), np.ones_like(s))
    X = transport_vector_formula(X0, fm)
    xerr = float(np.abs(X[0].values - t_end * np.cos(y)).max() + np.abs(X[1].values - 1).max())
    out.append(_le("transport", "shear: X formula vs (t s'(y), 1)", xerr, 1e-4))
    return out


def _verify_solver() -> list[Verdict]:
    out = []
    grid = Grid2D(64)
    s, secs = _timed(lambda: run(initial_state(taylor_green(grid)), SolverConfig(1e-3, 0.1)))
    err = relative_l2(s.u, taylor_green_exact(grid, s.t))
    out.append(_le("solver", "Taylor-Green n=64, t=0.1", err, 1e-5, secs))
    p = make_patch("disc", 0.05, Grid2D(64, 8.0))
    rest = initial_state(VectorField2.zeros(p.grid), level_fn=p.level_set.fn, density_fn=p.density_from_level)
    after = step(step(rest, SolverConfig(0.01, 0.02)), SolverConfig(0.01, 0.02))
    out.append(_le("solver", "rest state stays at rest", after.u.sup() + float(np.abs(after.rho.values - rest.rho.values).max()), 1e-14))
    return out


SUITES = {
    "spectral": _verify_spectral,
    "paradiff": _verify_paradiff,
    "transport": _verify_transport,
    "solver": _verify_solver,
}


def verify_suite(name: str = "all") -> list[Verdict]:
    if name == "all":
        return [v for fn in SUITES.values() for v in fn()]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    return SUITES[name]()


def config_dict(cfg: PatchRunConfig) -> dict:
    return asdict(cfg)
