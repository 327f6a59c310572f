"""Velocity from vorticity on the torus via the stream function."""

from __future__ import annotations

from .spectral import ScalarField, VectorField2, curl, inverse_laplacian, perp_gradient

__all__ = ["velocity_from_vorticity", "stream_function", "curl"]


def stream_function(omega: ScalarField, atol: float = 1e-12) -> ScalarField:
    """Mean-free ``psi`` with ``Lap psi = omega``."""
    if abs(omega.mean()) > atol * max(1.0, omega.sup()):
        raise ValueError(f"nonzero total vorticity on torus (mean {omega.mean():.3e})")
    return inverse_laplacian(omega, atol=atol)


def velocity_from_vorticity(omega: ScalarField, atol: float = 1e-12) -> VectorField2:
    """``u = grad_perp psi``; divergence-free with ``curl u = omega``."""
    return perp_gradient(stream_function(omega, atol))
