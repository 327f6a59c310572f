"""Periodic grid, FFT transforms and Fourier-space differential operators.

Everything in the package lives on the square torus ``[0, L)^2`` sampled by an
``n x n`` grid with ``ij`` indexing: ``values[i, j]`` is the sample at
``(x, y) = (i * h, j * h)``.  Spectra are stored in the half-plane layout of
``rfft2`` (axis 0 full, axis 1 non-negative), so every spectrum is Hermitian by
construction.
"""

from __future__ import annotations

import json
import os
import struct
from functools import cached_property
from pathlib import Path

import numpy as np
import scipy.fft as sfft

__all__ = [
    "Grid2D",
    "ScalarField",
    "VectorField2",
    "gradient",
    "perp_gradient",
    "divergence",
    "laplacian",
    "inverse_laplacian",
    "leray_project",
    "dealias",
    "product",
    "directional_derivative",
    "curl",
    "band_limited_random",
    "write_snapshot",
    "read_snapshot",
]


def _workers() -> int:
    raw = os.environ.get("PATCHFLOW_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def fft2(a: np.ndarray) -> np.ndarray:
    return sfft.rfft2(a, workers=_workers())


def ifft2(a_hat: np.ndarray, n: int) -> np.ndarray:
    return sfft.irfft2(a_hat, s=(n, n), workers=_workers())


class Grid2D:
    """Square periodic grid with ``n`` points per axis and period ``length``."""

    def __init__(self, n: int, length: float = 2 * np.pi):
        if n < 32 or n & (n - 1):
            raise ValueError(f"grid size must be a power of two >= 32, got {n}")
        if not length > 0:
            raise ValueError(f"grid length must be positive, got {length}")
        self.n = int(n)
        self.length = float(length)

    def __repr__(self) -> str:
        return f"Grid2D(n={self.n}, length={self.length!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Grid2D) and (self.n, self.length) == (other.n, other.length)

    def __hash__(self) -> int:
        return hash((self.n, self.length))

    @property
    def spacing(self) -> float:
        return self.length / self.n

    @property
    def cell_area(self) -> float:
        return self.spacing**2

    @property
    def k0(self) -> float:
        """Lowest nonzero wavenumber ``2 pi / L``."""
        return 2 * np.pi / self.length

    @property
    def nyquist(self) -> float:
        return np.pi * self.n / self.length

    @cached_property
    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        x = np.arange(self.n) * self.spacing
        return np.meshgrid(x, x, indexing="ij")

    @cached_property
    def index_freqs(self) -> tuple[np.ndarray, np.ndarray]:
        """Integer frequency lattice ``(m1, m2)`` broadcastable to the spectrum shape."""
        m1 = np.fft.fftfreq(self.n, d=1.0 / self.n)[:, None]
        m2 = np.fft.rfftfreq(self.n, d=1.0 / self.n)[None, :]
        return m1, m2

    @cached_property
    def wavenumbers(self) -> tuple[np.ndarray, np.ndarray]:
        m1, m2 = self.index_freqs
        return self.k0 * m1, self.k0 * m2

    @cached_property
    def odd_wavenumbers(self) -> tuple[np.ndarray, np.ndarray]:
        """Wavenumbers with the Nyquist row/column zeroed, for odd-order multipliers."""
        m1, m2 = self.index_freqs
        half = self.n // 2
        k1 = np.where(np.abs(m1) == half, 0.0, self.k0 * m1)
        k2 = np.where(np.abs(m2) == half, 0.0, self.k0 * m2)
        return k1, k2

    @cached_property
    def k_squared(self) -> np.ndarray:
        k1, k2 = self.wavenumbers
        return k1**2 + k2**2

    @cached_property
    def k_abs(self) -> np.ndarray:
        return np.sqrt(self.k_squared)

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """2/3-rule mask: keep modes with ``|m_i| < n/3`` on both axes."""
        m1, m2 = self.index_freqs
        cut = self.n / 3.0
        return (np.abs(m1) < cut) & (np.abs(m2) < cut)

    def zeros(self) -> "ScalarField":
        return ScalarField(self, np.zeros((self.n, self.n)))

    def constant(self, c: float) -> "ScalarField":
        return ScalarField(self, np.full((self.n, self.n), float(c)))

    def from_function(self, fn) -> "ScalarField":
        x, y = self.coords
        return ScalarField(self, np.broadcast_to(fn(x, y), (self.n, self.n)))

    def from_spectrum(self, spectrum: np.ndarray) -> "ScalarField":
        return ScalarField.from_spectrum(self, spectrum)


class ScalarField:
    """Immutable real samples on a :class:`Grid2D` with a lazily cached spectrum."""

    __slots__ = ("grid", "_values", "_spectrum")

    def __init__(self, grid: Grid2D, values, spectrum: np.ndarray | None = None):
        arr = np.array(values, dtype=float, copy=True)
        if arr.shape != (grid.n, grid.n):
            raise ValueError(f"expected shape {(grid.n, grid.n)}, got {arr.shape}")
        arr.flags.writeable = False
        self.grid = grid
        self._values = arr
        self._spectrum = spectrum

    @classmethod
    def from_spectrum(cls, grid: Grid2D, spectrum: np.ndarray) -> "ScalarField":
        spec = np.array(spectrum, dtype=complex, copy=True)
        spec.flags.writeable = False
        return cls(grid, ifft2(spec, grid.n), spectrum=spec)

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def spectrum(self) -> np.ndarray:
        if self._spectrum is None:
            spec = fft2(self._values)
            spec.flags.writeable = False
            self._spectrum = spec
        return self._spectrum

    def mean(self) -> float:
        return float(self._values.mean())

    def integral(self) -> float:
        return float(self._values.sum() * self.grid.cell_area)

    def sup(self) -> float:
        return float(np.abs(self._values).max())

    def lp_norm(self, p: float) -> float:
        """Grid quadrature of the ``L^p`` norm (``p = inf`` gives the max)."""
        return lp_norm(self._values, p, self.grid.cell_area)

    def _check(self, other: "ScalarField") -> None:
        if other.grid != self.grid:
            raise ValueError("fields live on different grids")

    def __add__(self, other):
        if isinstance(other, ScalarField):
            self._check(other)
            return ScalarField(self.grid, self._values + other._values)
        return ScalarField(self.grid, self._values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, ScalarField):
            self._check(other)
            return ScalarField(self.grid, self._values - other._values)
        return ScalarField(self.grid, self._values - other)

    def __rsub__(self, other):
        return ScalarField(self.grid, other - self._values)

    def __mul__(self, other):
        if isinstance(other, ScalarField):
            self._check(other)
            return ScalarField(self.grid, self._values * other._values)
        return ScalarField(self.grid, self._values * other)

    __rmul__ = __mul__

    def __neg__(self):
        return ScalarField(self.grid, -self._values)

    def __truediv__(self, c: float):
        return ScalarField(self.grid, self._values / c)

    def __repr__(self) -> str:
        return f"ScalarField({self.grid!r}, sup={self.sup():.3g})"


class VectorField2:
    """Pair of :class:`ScalarField` components on one grid."""

    __slots__ = ("components",)

    def __init__(self, c1: ScalarField, c2: ScalarField):
        if c1.grid != c2.grid:
            raise ValueError("vector components must share one grid")
        self.components = (c1, c2)

    @classmethod
    def from_arrays(cls, grid: Grid2D, a1, a2) -> "VectorField2":
        return cls(ScalarField(grid, a1), ScalarField(grid, a2))

    @classmethod
    def zeros(cls, grid: Grid2D) -> "VectorField2":
        return cls(grid.zeros(), grid.zeros())

    @property
    def grid(self) -> Grid2D:
        return self.components[0].grid

    def __getitem__(self, k: int) -> ScalarField:
        return self.components[k]

    def __iter__(self):
        return iter(self.components)

    @property
    def values(self) -> np.ndarray:
        """Stacked samples of shape ``(2, n, n)``."""
        return np.stack([c.values for c in self.components])

    def magnitude(self) -> np.ndarray:
        a, b = self.components
        return np.hypot(a.values, b.values)

    def sup(self) -> float:
        return float(self.magnitude().max())

    def l2_norm(self) -> float:
        return float(np.sqrt((self.magnitude() ** 2).sum() * self.grid.cell_area))

    def dot(self, other: "VectorField2") -> ScalarField:
        return self[0] * other[0] + self[1] * other[1]

    def __add__(self, other: "VectorField2") -> "VectorField2":
        return VectorField2(self[0] + other[0], self[1] + other[1])

    def __sub__(self, other: "VectorField2") -> "VectorField2":
        return VectorField2(self[0] - other[0], self[1] - other[1])

    def __mul__(self, c) -> "VectorField2":
        return VectorField2(self[0] * c, self[1] * c)

    __rmul__ = __mul__

    def __neg__(self) -> "VectorField2":
        return VectorField2(-self[0], -self[1])

    def __repr__(self) -> str:
        return f"VectorField2({self.grid!r}, sup={self.sup():.3g})"


def lp_norm(values: np.ndarray, p: float, cell_area: float) -> float:
    a = np.abs(values)
    if np.isinf(p):
        return float(a.max())
    if p == 1:
        return float(a.sum() * cell_area)
    if p == 2:
        return float(np.sqrt((a * a).sum() * cell_area))
    return float(((a**p).sum() * cell_area) ** (1.0 / p))


def gradient(f: ScalarField) -> VectorField2:
    k1, k2 = f.grid.odd_wavenumbers
    g = f.grid
    return VectorField2(
        ScalarField.from_spectrum(g, 1j * k1 * f.spectrum),
        ScalarField.from_spectrum(g, 1j * k2 * f.spectrum),
    )


def perp_gradient(f: ScalarField) -> VectorField2:
    """``(-d2 f, d1 f)``."""
    d1, d2 = gradient(f)
    return VectorField2(-d2, d1)


def divergence(v: VectorField2) -> ScalarField:
    k1, k2 = v.grid.odd_wavenumbers
    return ScalarField.from_spectrum(v.grid, 1j * (k1 * v[0].spectrum + k2 * v[1].spectrum))


def curl(v: VectorField2) -> ScalarField:
    """Scalar vorticity ``d1 v2 - d2 v1``."""
    k1, k2 = v.grid.odd_wavenumbers
    return ScalarField.from_spectrum(v.grid, 1j * (k1 * v[1].spectrum - k2 * v[0].spectrum))


def laplacian(f: ScalarField) -> ScalarField:
    return ScalarField.from_spectrum(f.grid, -f.grid.k_squared * f.spectrum)


def inverse_laplacian(f: ScalarField, *, atol: float = 1e-12) -> ScalarField:
    """Solve ``Lap q = f`` for mean-free ``q``; ``f`` must be mean-free."""
    scale = max(1.0, f.sup())
    if abs(f.mean()) > atol * scale:
        raise ValueError(f"inverse_laplacian: nonzero mean {f.mean():.3e}")
    return ScalarField.from_spectrum(f.grid, _inv_lap_spectrum(f.grid, f.spectrum))


def _inv_lap_spectrum(grid: Grid2D, spec: np.ndarray) -> np.ndarray:
    k2 = grid.k_squared.copy()
    k2[0, 0] = 1.0
    out = -spec / k2
    out[0, 0] = 0.0
    return out


def leray_project(v: VectorField2) -> VectorField2:
    g = v.grid
    a, b = _leray_spectra(g, v[0].spectrum, v[1].spectrum)
    return VectorField2(ScalarField.from_spectrum(g, a), ScalarField.from_spectrum(g, b))


def _leray_spectra(grid: Grid2D, a: np.ndarray, b: np.ndarray):
    k1, k2 = grid.odd_wavenumbers
    kk = k1**2 + k2**2
    kk[kk == 0] = 1.0
    dot = (k1 * a + k2 * b) / kk
    return a - k1 * dot, b - k2 * dot


def dealias(f: ScalarField) -> ScalarField:
    return ScalarField.from_spectrum(f.grid, f.spectrum * f.grid.dealias_mask)


def product(u: ScalarField, v: ScalarField) -> ScalarField:
    """Pointwise product followed by 2/3-rule truncation."""
    if u.grid != v.grid:
        raise ValueError("fields live on different grids")
    return dealias(ScalarField(u.grid, u.values * v.values))


def directional_derivative(X: VectorField2, f: ScalarField) -> ScalarField:
    """``X . grad f`` with spectral derivatives (no dealiasing)."""
    d1, d2 = gradient(f)
    return ScalarField(f.grid, X[0].values * d1.values + X[1].values * d2.values)


def band_limited_random(grid: Grid2D, rng: np.random.Generator, kmin: float = 0.0,
                        kmax: float | None = None, mean_free: bool = True) -> ScalarField:
    """Gaussian random field with spectrum supported in ``kmin <= |xi| <= kmax``.

    ``kmax`` defaults to the 2/3-dealiased cutoff.  Amplitude is normalised to
    unit sup norm.
    """
    mask = grid.dealias_mask & (grid.k_abs >= kmin)
    if kmax is not None:
        mask &= grid.k_abs <= kmax
    if mean_free:
        mask = mask.copy()
        mask[0, 0] = False
    noise = rng.standard_normal((grid.n, grid.n))
    spec = fft2(noise) * mask
    f = ScalarField.from_spectrum(grid, spec)
    s = f.sup()
    if s == 0:
        return f
    return ScalarField.from_spectrum(grid, spec / s)


# -- snapshot files -------------------------------------------------------------

SNAPSHOT_MAGIC = b"PATCHFLOWSNAP\x00"
SNAPSHOT_VERSION = 1
_HEADER_TEXT_BYTES = 256


def write_snapshot(path, field, name: str, t: float = 0.0) -> None:
    """Write a scalar or vector field.

    Layout: 14-byte magic, little-endian uint16 version (16 bytes total), a
    256-byte space-padded UTF-8 JSON header, then row-major little-endian
    float64 samples, one ``n x n`` block per component.
    """
    if isinstance(field, ScalarField):
        blocks = [field.values]
    else:
        blocks = [c.values for c in field]
    grid = field.grid
    header = json.dumps(
        {"n": grid.n, "L": grid.length, "name": name, "t": float(t), "components": len(blocks)},
        sort_keys=True,
    ).encode("utf-8")
    if len(header) > _HEADER_TEXT_BYTES:
        raise ValueError("snapshot header too long; shorten the field name")
    with open(path, "wb") as fh:
        fh.write(SNAPSHOT_MAGIC + struct.pack("<H", SNAPSHOT_VERSION))
        fh.write(header.ljust(_HEADER_TEXT_BYTES, b" "))
        for b in blocks:
            fh.write(np.ascontiguousarray(b, dtype="<f8").tobytes())


def read_snapshot(path):
    """Return ``(field, meta)`` where ``field`` is scalar or vector per the header."""
    raw = Path(path).read_bytes()
    if raw[:14] != SNAPSHOT_MAGIC:
        raise ValueError(f"{path}: not a patchflow snapshot")
    (version,) = struct.unpack("<H", raw[14:16])
    if version != SNAPSHOT_VERSION:
        raise ValueError(f"{path}: unsupported snapshot version {version}")
    meta = json.loads(raw[16 : 16 + _HEADER_TEXT_BYTES].decode("utf-8").strip())
    n = meta["n"]
    grid = Grid2D(n, meta["L"])
    data = np.frombuffer(raw[16 + _HEADER_TEXT_BYTES :], dtype="<f8")
    ncomp = meta.get("components", 1)
    if data.size != ncomp * n * n:
        raise ValueError(f"{path}: truncated payload")
    blocks = [ScalarField(grid, data[k * n * n : (k + 1) * n * n].reshape(n, n)) for k in range(ncomp)]
    field = blocks[0] if ncomp == 1 else VectorField2(*blocks)
    return field, meta
