"""Periodic traveling waves of the Gardner-Ostrovsky equation.

Spectral steady solver with amplitude continuation, regularity and symmetry
diagnostics, explicit highest waves, and a pseudospectral time stepper.
"""
__version__ = "0.1.0"

from .analysis import DiagnosticsReport, amplitude_check, diagnose, singular_levels
from .evolution import EvolutionConfig, evolve, traveling_error
from .exact_waves import ExactWave, hamiltonian, ode_flow, verify_exact
from .fourier import TorusGrid, WaveProfile
from .model import CriticalGardner, ModelParams, bifurcation_speed, residual
from .solver import Branch, BranchPoint, ContinuationSettings, continue_branch, newton_solve

__all__ = [
    "Branch",
    "BranchPoint",
    "ContinuationSettings",
    "CriticalGardner",
    "DiagnosticsReport",
    "EvolutionConfig",
    "ExactWave",
    "ModelParams",
    "TorusGrid",
    "WaveProfile",
    "amplitude_check",
    "bifurcation_speed",
    "continue_branch",
    "diagnose",
    "evolve",
    "hamiltonian",
    "newton_solve",
    "ode_flow",
    "residual",
    "singular_levels",
    "traveling_error",
    "verify_exact",
]
