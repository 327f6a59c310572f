"""Pseudo-spectral density-patch simulator for inhomogeneous incompressible
Navier-Stokes, with Littlewood-Paley and paradifferential analysis tools."""

from .spectral import Grid2D, ScalarField, VectorField2
from .patch import make_patch, tangent_field
from .solver import SimulationState, SolverConfig, initial_state, run, step

__all__ = [
    "Grid2D",
    "ScalarField",
    "VectorField2",
    "make_patch",
    "tangent_field",
    "SimulationState",
    "SolverConfig",
    "initial_state",
    "run",
    "step",
]

__version__ = "0.1.0"
