"""Pseudospectral simulation and verification of 2D deep-water gravity waves
with constant vorticity, written in holomorphic coordinates."""

from .errors import (
    ConfigError,
    GridMismatch,
    HolowaveError,
    InterfaceSingularity,
    NaNDetected,
    NonZeroMean,
    StabilityViolation,
)
from .spectral import Field, Grid, Params, deriv, hilbert, holomorphic_part, proj_P, proj_Pbar
from .paradiff import LPBasis, ParaTriple, lp_basis, paraproducts
from .norms import ControlNorms, control_norms, sobolev_norm
from .waterwave import AuxBundle, DiffState, State, clean_state, compute_aux, derive, identity_residuals, rhs_wq
from .conserved import energy, linear_energy, momentum
from .normal_form import CONVENTIONS, nf_residual, nf_transform
from .linearized import LinState, rhs_linearized
from .timestepper import StepConfig, dispersion_test, integrate

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "GridMismatch",
    "HolowaveError",
    "InterfaceSingularity",
    "NaNDetected",
    "NonZeroMean",
    "StabilityViolation",
    "Field",
    "Grid",
    "Params",
    "deriv",
    "hilbert",
    "holomorphic_part",
    "proj_P",
    "proj_Pbar",
    "LPBasis",
    "ParaTriple",
    "lp_basis",
    "paraproducts",
    "ControlNorms",
    "control_norms",
    "sobolev_norm",
    "AuxBundle",
    "DiffState",
    "State",
    "clean_state",
    "compute_aux",
    "derive",
    "identity_residuals",
    "rhs_wq",
    "energy",
    "linear_energy",
    "momentum",
    "CONVENTIONS",
    "nf_residual",
    "nf_transform",
    "LinState",
    "rhs_linearized",
    "StepConfig",
    "dispersion_test",
    "integrate",
]
