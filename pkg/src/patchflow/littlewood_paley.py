"""Dyadic (Littlewood-Paley) decomposition and Besov / Holder norms on the torus.

Cutoffs.  With ``b(x) = exp(-1/x)`` for ``x > 0`` (zero otherwise) the smooth step

    step(x) = b(1 - x) / (b(1 - x) + b(x - 3/4))

is identically 1 on ``[0, 3/4]`` and 0 on ``[1, inf)``.  We take
``chi(r) = step(3 r / 4)`` (so ``chi = 1`` for ``r <= 1`` and ``chi = 0`` for
``r >= 4/3``) and ``phi(r) = chi(r / 2) - chi(r)``, supported in
``[1, 8/3] ⊂ [3/4, 8/3]``.  The telescoping definition makes both partitions of
unity exact up to rounding.

Torus surrogate for homogeneous blocks.  Frequencies are physical
(``|xi| = 2 pi |m| / L``).  ``j_min`` is the largest ``j`` whose low-pass
``chi(2^-j D)`` keeps only the zero mode, so ``low_part`` is the mean and the
homogeneous blocks ``j_min .. j_max`` reconstruct the mean-free part exactly.
``j_max`` is the first block past the corner of the frequency lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .spectral import Grid2D, ScalarField, VectorField2, fft2, ifft2, lp_norm

__all__ = [
    "smooth_step",
    "chi",
    "phi",
    "CutoffProfiles",
    "BesovIndex",
    "DyadicDecomposition",
    "FilterBank",
    "filter_bank",
    "decompose",
    "besov_norm",
    "vector_besov_norm",
    "holder_norm",
    "multiplier_norm_probe",
    "probe_family",
]


def _b(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def smooth_step(x) -> np.ndarray:
    """C^inf step: 1 on ``[0, 3/4]``, 0 on ``[1, inf)``."""
    x = np.asarray(x, dtype=float)
    left = _b(1.0 - x)
    right = _b(x - 0.75)
    return left / (left + right)


def chi(r) -> np.ndarray:
    return smooth_step(0.75 * np.abs(np.asarray(r, dtype=float)))


def phi(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    return chi(0.5 * r) - chi(r)


@dataclass(frozen=True)
class CutoffProfiles:
    """The radial pair ``(chi, phi)``; ``support`` bounds are the nominal ones."""

    chi_support: float = 4.0 / 3.0
    phi_support: tuple[float, float] = (3.0 / 4.0, 8.0 / 3.0)

    @staticmethod
    def chi(r):
        return chi(r)

    @staticmethod
    def phi(r):
        return phi(r)


@dataclass(frozen=True)
class BesovIndex:
    s: float
    p: float = 2.0
    r: float = 2.0
    homogeneous: bool = True

    def __post_init__(self):
        if not (self.p >= 1 and self.r >= 1):
            raise ValueError(f"need p, r in [1, inf], got p={self.p}, r={self.r}")

    def __str__(self) -> str:
        kind = "Bdot" if self.homogeneous else "B"
        return f"{kind}^{self.s:g}_{{{self.p:g},{self.r:g}}}"


class FilterBank:
    """Precomputed dyadic multipliers for one grid."""

    def __init__(self, grid: Grid2D):
        self.grid = grid
        k = grid.k_abs
        self.j_min = math.floor(math.log2(0.75 * grid.k0) + 1e-12)
        kmax = float(k.max())
        self.j_max = math.ceil(math.log2(kmax) - 1e-12) - 1
        if self.j_max - self.j_min + 1 < 4:
            raise ValueError("insufficient resolution: fewer than 4 dyadic shells")
        self.js = list(range(self.j_min, self.j_max + 1))
        self._k = k
        self._phi = {j: phi(k * 2.0**-j) for j in self.js}
        self._chi: dict[int, np.ndarray] = {}

    def phi_mult(self, j: int) -> np.ndarray:
        m = self._phi.get(j)
        if m is None:
            m = phi(self._k * 2.0**-j)
        return m

    def chi_mult(self, j: int) -> np.ndarray:
        m = self._chi.get(j)
        if m is None:
            m = chi(self._k * 2.0**-j)
            self._chi[j] = m
        return m

    def inhomogeneous_js(self) -> list[int]:
        top = max(self.j_max, 0)
        return [-1] + list(range(0, top + 1))

    def inhomogeneous_mult(self, j: int) -> np.ndarray:
        return self.chi_mult(0) if j == -1 else self.phi_mult(j)


@lru_cache(maxsize=16)
def _bank(n: int, length: float) -> FilterBank:
    return FilterBank(Grid2D(n, length))


def filter_bank(grid: Grid2D) -> FilterBank:
    return _bank(grid.n, grid.length)


def block_values(f: ScalarField, j: int) -> np.ndarray:
    """Samples of the homogeneous block ``phi(2^-j D) f``."""
    return ifft2(f.spectrum * filter_bank(f.grid).phi_mult(j), f.grid.n)


def low_pass_values(f: ScalarField, j: int) -> np.ndarray:
    """Samples of ``chi(2^-j D) f``."""
    bank = filter_bank(f.grid)
    if j <= bank.j_min:
        return np.full((f.grid.n, f.grid.n), f.mean())
    return ifft2(f.spectrum * bank.chi_mult(j), f.grid.n)


@dataclass
class DyadicDecomposition:
    field: ScalarField
    j_min: int
    j_max: int
    blocks: dict[int, ScalarField]
    low_part: ScalarField
    profiles: CutoffProfiles = field(default_factory=CutoffProfiles)

    def reconstruct(self) -> ScalarField:
        total = self.low_part.values.copy()
        for b in self.blocks.values():
            total += b.values
        return ScalarField(self.field.grid, total)

    def block_norms(self, p: float) -> dict[int, float]:
        area = self.field.grid.cell_area
        return {j: lp_norm(b.values, p, area) for j, b in self.blocks.items()}


def decompose(f: ScalarField) -> DyadicDecomposition:
    bank = filter_bank(f.grid)
    blocks = {
        j: ScalarField.from_spectrum(f.grid, f.spectrum * bank.phi_mult(j)) for j in bank.js
    }
    low = ScalarField.from_spectrum(f.grid, f.spectrum * bank.chi_mult(bank.j_min))
    return DyadicDecomposition(f, bank.j_min, bank.j_max, blocks, low)


def _lr(values, r: float) -> float:
    a = np.asarray(values, dtype=float)
    if a.size == 0:
        return 0.0
    if np.isinf(r):
        return float(a.max())
    return float((a**r).sum() ** (1.0 / r))


def weighted_block_norms(f: ScalarField, idx: BesovIndex) -> dict[int, float]:
    """``j -> 2^{js} ||Delta_j f||_{L^p}`` for the blocks entering ``idx``."""
    bank = filter_bank(f.grid)
    area = f.grid.cell_area
    spec = f.spectrum
    js = bank.js if idx.homogeneous else bank.inhomogeneous_js()
    mult = bank.phi_mult if idx.homogeneous else bank.inhomogeneous_mult
    out = {}
    for j in js:
        m = mult(j)
        if not m.any():
            out[j] = 0.0
            continue
        blk = ifft2(spec * m, f.grid.n)
        out[j] = 2.0 ** (j * idx.s) * lp_norm(blk, idx.p, area)
    return out


def besov_norm(f: ScalarField, idx: BesovIndex) -> float:
    """Discrete ``l^r`` over dyadic shells of ``2^{js} ||Delta_j f||_{L^p}``.

    Homogeneous norms use shells ``j_min .. j_max`` and ignore the mean; for
    ``s <= 0`` a nonzero mean is rejected, since constants have no homogeneous
    counterpart on the torus.
    """
    if idx.homogeneous and idx.s <= 0:
        scale = max(1.0, f.sup())
        if abs(f.mean()) > 1e-10 * scale:
            raise ValueError("field is not in S'_h surrogate (nonzero mean with s <= 0)")
    return _lr(list(weighted_block_norms(f, idx).values()), idx.r)


def vector_besov_norm(v: VectorField2, idx: BesovIndex) -> float:
    """Sum of component norms."""
    return sum(besov_norm(c, idx) for c in v)


def holder_norm(f, eps: float) -> float:
    """``max(||f||_inf, sup_{j >= -1} 2^{j eps} ||Delta_j f||_inf)`` (inhomogeneous blocks).

    Vector fields take the max over components.
    """
    if isinstance(f, VectorField2):
        return max(holder_norm(c, eps) for c in f)
    if not 0 < eps < 1:
        raise ValueError(f"Holder exponent must lie in ]0,1[, got {eps}")
    blocks = weighted_block_norms(f, BesovIndex(eps, np.inf, np.inf, homogeneous=False))
    return max(f.sup(), max(blocks.values(), default=0.0))


def multiplier_norm_probe(phi_field: ScalarField, src: BesovIndex, dst: BesovIndex,
                          probes) -> float:
    """Lower bound for the multiplier norm ``M(src -> dst)`` of ``phi_field``.

    Returns the largest ratio ``||phi u||_dst / ||u||_src`` over the probes.
    Products are raw pointwise products with the zero mode removed (the torus
    surrogate for homogeneous spaces).  Probes with vanishing source norm are
    skipped.
    """
    best = None
    for u in probes:
        u = u - u.mean() if src.homogeneous else u
        den = besov_norm(u, src)
        if not den > 1e-300:
            continue
        prod = ScalarField(u.grid, phi_field.values * u.values)
        if dst.homogeneous:
            prod = prod - prod.mean()
        ratio = besov_norm(prod, dst) / den
        best = ratio if best is None else max(best, ratio)
    if best is None:
        raise ValueError("no valid probes")
    return best


def probe_family(grid: Grid2D, rng: np.random.Generator, per_shell: int = 2,
                 boundary_points=None, shells=None) -> list[ScalarField]:
    """Random band-limited fields per dyadic shell plus localized bumps.

    ``boundary_points`` is an ``(m, 2)`` array of physical positions; a Gaussian
    bump at each of several widths is centred on every point.
    """
    bank = filter_bank(grid)
    cutoff = grid.n / 3.0 * grid.k0
    if shells is None:
        shells = [j for j in bank.js if 2.0**j <= cutoff]
    probes = []
    for j in shells:
        mask = (bank.phi_mult(j) > 0) & grid.dealias_mask
        if not mask.any():
            continue
        for _ in range(per_shell):
            noise = rng.standard_normal((grid.n, grid.n))
            probes.append(ScalarField.from_spectrum(grid, fft2(noise) * mask))
    if boundary_points is not None:
        x, y = grid.coords
        L = grid.length
        for px, py in np.atleast_2d(boundary_points):
            dx = (x - px + L / 2) % L - L / 2
            dy = (y - py + L / 2) % L - L / 2
            r2 = dx * dx + dy * dy
            for width in (2 * grid.spacing, 4 * grid.spacing, 8 * grid.spacing):
                bump = np.exp(-r2 / (2 * width * width))
                probes.append(ScalarField(grid, bump - bump.mean()))
    return probes
