"""Initial patch data: level set, density, tangent field, vorticity, and the
boundary contour with its tangent-angle Holder seminorm.

Level-set construction.  For a signed distance-like ``d`` (``r - R`` for a
disc, ``r - R (1 + a W(theta))`` for the perturbed disc) the stored level set
is ``F = band * Phi(d / band)`` where ``Phi' = 1`` on ``[-1, 1]`` and decays
smoothly to 0 on ``1 <= |x| <= 2``.  ``F`` is constant away from the interface,
hence periodic, and ``X0 = grad_perp F`` equals ``grad_perp d`` on the band while
vanishing far from it.  Because the cutoff acts through ``F`` itself,
``X0 = grad_perp(F)`` stays exactly divergence-free; no correction is needed
after truncation.

``W(theta) = sum_{k=k_lo}^{k_hi} 2^{-k(1+eps)} cos(2^k theta)`` has exact
``C^{1,eps}`` character over the resolved octaves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from shapely.geometry import LinearRing
from skimage.measure import find_contours

from .littlewood_paley import smooth_step
from .spectral import Grid2D, ScalarField, VectorField2, gradient, perp_gradient

__all__ = [
    "LevelSet",
    "Patch",
    "Contour",
    "PatchTooLarge",
    "PatchSplit",
    "make_patch",
    "tangent_field",
    "patch_vorticity",
    "extract_contour",
    "boundary_holder",
    "weierstrass",
]


class PatchTooLarge(ValueError):
    pass


class PatchSplit(ValueError):
    pass


def _b(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def _ramp(x):
    """C^inf ramp: 0 for ``x <= 0``, 1 for ``x >= 1``."""
    lo, hi = _b(x), _b(1.0 - np.asarray(x, dtype=float))
    return lo / (lo + hi)


_GL_X, _GL_W = leggauss(48)


def _ramp_complement_integral(y):
    """``int_0^y (1 - ramp(t)) dt`` for ``y in [0, 1]``."""
    y = np.clip(np.asarray(y, dtype=float), 0.0, 1.0)
    t = 0.5 * (_GL_X[None, :] + 1.0) * y[..., None]
    vals = 1.0 - _ramp(t)
    return 0.5 * y * (vals * _GL_W).sum(axis=-1)


def _profile(x):
    """Odd profile with slope 1 on ``[-1, 1]`` and constant (``±3/2``) beyond ``|x| = 2``."""
    a = np.abs(x)
    flat = np.minimum(a, 1.0)
    tail = np.zeros_like(a)
    mid = a > 1.0
    if mid.any():
        tail[mid] = _ramp_complement_integral(a[mid] - 1.0)
    return np.sign(x) * (flat + tail)


def weierstrass(theta, eps: float, k_lo: int, k_hi: int, derivative: int = 0):
    """Angular perturbation ``sum_k 2^{-k(1+eps)} cos(2^k theta)`` or its derivatives."""
    theta = np.asarray(theta, dtype=float)
    out = np.zeros_like(theta)
    for k in range(k_lo, k_hi + 1):
        freq = 2.0**k
        amp = 2.0 ** (-k * (1 + eps))
        if derivative == 0:
            out += amp * np.cos(freq * theta)
        elif derivative == 1:
            out -= amp * freq * np.sin(freq * theta)
        else:
            raise ValueError("only derivative 0 or 1")
    return out


@dataclass
class LevelSet:
    f: ScalarField
    band: float
    fn: object = field(repr=False, default=None)  # analytic f(x, y), periodic

    def check(self, min_grad: float = 0.5) -> float:
        """Smallest ``|grad f|`` on grid points with ``|f| < band``; raises if below ``min_grad``."""
        g = gradient(self.f)
        mag = np.hypot(g[0].values, g[1].values)
        sel = np.abs(self.f.values) < self.band
        m = float(mag[sel].min())
        if m < min_grad:
            raise ValueError(f"level set degenerates on the band (|grad f| = {m:.3f})")
        return m


@dataclass
class Patch:
    level_set: LevelSet
    eta: float
    eps: float
    shape: str
    center: tuple[float, float]
    radius: float
    mollify: float
    params: dict = field(default_factory=dict)
    rho: ScalarField | None = None

    @property
    def grid(self) -> Grid2D:
        return self.level_set.f.grid

    def density_from_level(self, f):
        """``1 + eta * H(f)`` with a tanh jump of half-width ``mollify``."""
        return 1.0 + self.eta * 0.5 * (1.0 - np.tanh(np.asarray(f) / self.mollify))

    def density_fn(self, x, y):
        return self.density_from_level(self.level_set.fn(x, y))

    def indicator_from_level(self, f):
        return 0.5 * (1.0 - np.tanh(np.asarray(f) / self.mollify))

    @property
    def contour(self) -> "Contour":
        return extract_contour(self.level_set.f)


def make_patch(shape: str, eta: float, grid: Grid2D, *, radius: float = 1.0,
               semi_axes: tuple[float, float] | None = None, eps: float = 0.5,
               amplitude: float = 0.0, modes: tuple[int, int] = (1, 4),
               band: float | None = None, mollify_cells: float = 1.0) -> Patch:
    """Build a patch centred in the torus.

    ``shape`` is ``"disc"``, ``"ellipse"`` (``semi_axes=(a, b)``) or
    ``"perturbed_disc"`` (``radius``, ``eps``, ``amplitude``, ``modes = (k_lo, k_hi)``).
    The density jump is a tanh of half-width ``mollify_cells`` grid cells.
    """
    if not abs(eta) < 1:
        raise ValueError(f"|eta| must be < 1, got {eta}")
    L = grid.length
    c = (L / 2, L / 2)
    if band is None:
        band = 0.25 * (min(semi_axes) if shape == "ellipse" and semi_axes else radius)

    if shape == "disc" or (shape == "perturbed_disc" and amplitude == 0.0):
        def dist(x, y):
            return np.hypot(x - c[0], y - c[1]) - radius
        extent = radius
    elif shape == "perturbed_disc":
        k_lo, k_hi = modes
        bound = amplitude * sum(2.0 ** (-k * (1 + eps)) for k in range(k_lo, k_hi + 1))

        def dist(x, y):
            r = np.hypot(x - c[0], y - c[1])
            th = np.arctan2(y - c[1], x - c[0])
            return r - radius * (1.0 + amplitude * weierstrass(th, eps, k_lo, k_hi))
        extent = radius * (1 + bound)
    elif shape == "ellipse":
        if semi_axes is None:
            raise ValueError("ellipse needs semi_axes")
        a, b = semi_axes
        scale = np.sqrt(a * b)

        def dist(x, y):
            return scale * (np.hypot((x - c[0]) / a, (y - c[1]) / b) - 1.0)
        extent = max(a, b)
        radius = float(scale)
    else:
        raise ValueError(f"unknown patch shape {shape!r}")

    if extent + 2 * band > L / 4:
        raise PatchTooLarge(
            f"patch too large: extent {extent + 2 * band:.3g} exceeds the central quarter (L/4 = {L / 4:.3g})")

    def fn(x, y):
        x = np.mod(x, L)
        y = np.mod(y, L)
        return band * _profile(dist(x, y) / band)

    f = grid.from_function(fn)
    ls = LevelSet(f, band, fn)
    patch = Patch(ls, float(eta), float(eps), shape, c, float(radius), mollify_cells * grid.spacing,
                  params={"amplitude": amplitude, "modes": tuple(modes), "semi_axes": semi_axes})
    patch.rho = ScalarField(grid, patch.density_from_level(f.values))
    return patch


def tangent_field(p: Patch) -> VectorField2:
    """``X0 = grad_perp f0`` (compactly supported through the level-set profile)."""
    return perp_gradient(p.level_set.f)


def _centroid_bump(p: Patch) -> ScalarField:
    x, y = p.grid.coords
    r = np.hypot(x - p.center[0], y - p.center[1])
    return ScalarField(p.grid, smooth_step(r / (0.5 * p.radius)))


def masked_profile(p: Patch, profile: ScalarField) -> ScalarField:
    """``profile * 1_D`` with the mollified indicator (no mean correction)."""
    return ScalarField(p.grid, profile.values * p.indicator_from_level(p.level_set.f.values))


def patch_vorticity(p: Patch, profile: ScalarField) -> ScalarField:
    """Mean-free ``omega0 = profile * 1_D - c * bump`` with the bump at the centroid."""
    w = masked_profile(p, profile)
    bump = _centroid_bump(p)
    return ScalarField(p.grid, w.values - w.values.mean() / bump.values.mean() * bump.values)


@dataclass
class Contour:
    points: np.ndarray  # (m, 2) physical, closed implicitly, counterclockwise
    ds: float

    @property
    def perimeter(self) -> float:
        return self.ds * len(self.points)

    @property
    def area(self) -> float:
        x, y = self.points[:, 0], self.points[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    def is_simple(self) -> bool:
        return LinearRing(self.points).is_simple


def _resample_closed(pts: np.ndarray, spacing: float) -> tuple[np.ndarray, float]:
    closed = np.vstack([pts, pts[:1]])
    seg = np.hypot(*np.diff(closed, axis=0).T)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    perim = s[-1]
    m = max(8, int(round(perim / spacing)))
    target = np.arange(m) * (perim / m)
    out = np.column_stack([np.interp(target, s, closed[:, 0]), np.interp(target, s, closed[:, 1])])
    return out, perim / m


def extract_contour(f: ScalarField, spacing: float | None = None) -> Contour:
    """Zero level of ``f`` by marching squares, resampled to uniform arclength.

    Raises :class:`PatchSplit` unless there is exactly one closed component.
    """
    grid = f.grid
    comps = find_contours(f.values, 0.0)
    comps = [c for c in comps if len(c) > 2]
    if len(comps) != 1:
        raise PatchSplit(f"patch split: {len(comps)} boundary components")
    c = comps[0]
    if np.hypot(*(c[0] - c[-1])) > 1e-9:
        raise PatchSplit("patch split: boundary contour is not closed")
    pts = c[:-1] * grid.spacing
    # drop repeated vertices produced at saddle cells
    keep = np.hypot(*np.diff(np.vstack([pts, pts[:1]]), axis=0).T) > 1e-14
    pts = pts[keep]
    pts, ds = _resample_closed(pts, spacing or grid.spacing)
    x, y = pts[:, 0], pts[:, 1]
    if np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y) < 0:
        pts = pts[::-1].copy()
    return Contour(pts, ds)


def tangent_angle(contour: Contour) -> np.ndarray:
    """Unwrapped angle of the centred-difference tangent at each sample."""
    p = contour.points
    d = np.roll(p, -1, axis=0) - np.roll(p, 1, axis=0)
    return np.unwrap(np.arctan2(d[:, 1], d[:, 0]))


def boundary_holder(contour: Contour, eps: float) -> float:
    """``C^{0,eps}`` seminorm of the tangent angle as a function of arclength.

    The uniform turning rate ``2 pi / perimeter`` is removed first, so the
    detrended angle is periodic; lags are dyadic multiples of the sample
    spacing up to half the perimeter.
    """
    th = tangent_angle(contour)
    m = len(th)
    s = np.arange(m) * contour.ds
    turning = th[-1] - th[0] + (th[0] - th[-1] + np.pi) % (2 * np.pi) - np.pi
    detr = th - turning * s / contour.perimeter
    best = 0.0
    lag = 1
    while lag <= m // 2:
        diff = np.roll(detr, -lag) - detr
        h = lag * contour.ds
        best = max(best, float(np.abs(diff).max()) / h**eps)
        lag *= 2
    return best
