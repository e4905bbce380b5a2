"""Desk laboratory for the 1-D Zakharov-Rubenchik / Benney-Roskes system.

Split-step pseudospectral integration with exact sub-flows, conserved-
quantity and virial diagnostics, solitary-wave construction, and a
config-driven experiment harness for integrability-trend and far-field
decay verification.
"""

from .diagnostics import ConservedTriple, conserved_triple, energy, mass, momentum
from .dynamics import SplitStepper, measure_convergence_order
from .grid import Grid, SimState, boundary_mass_monitor, h_s_norm, quadrature
from .model import DerivedConstants, ModelParams, derive_constants, validate_params
from .scalings import FarFieldScaling, ScalingSet, dynamic_scalings, paper_scalings
from .solitons import build_soliton_state, soliton_coefficients

__version__ = "0.1.0"

__all__ = [
    "ConservedTriple",
    "DerivedConstants",
    "FarFieldScaling",
    "Grid",
    "ModelParams",
    "ScalingSet",
    "SimState",
    "SplitStepper",
    "boundary_mass_monitor",
    "build_soliton_state",
    "conserved_triple",
    "derive_constants",
    "dynamic_scalings",
    "energy",
    "h_s_norm",
    "mass",
    "measure_convergence_order",
    "momentum",
    "paper_scalings",
    "quadrature",
    "soliton_coefficients",
    "validate_params",
    "__version__",
]
