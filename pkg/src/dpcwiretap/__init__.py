"""Capacity formulas, bounds and finite-length simulation for wiretap
channels whose transmitter knows the channel state non-causally."""

__version__ = "0.1.0"

from .deterministic import (
    DetWiretapParams,
    det_dpc_capacity,
    det_secret_key_capacity,
    det_secrecy_capacity_cases,
    det_secrecy_capacity_rank,
)
from .errors import (
    BudgetExceededError,
    DegenerateMIError,
    ExistenceError,
    InvalidShiftError,
    ModelError,
    ShapeError,
    UndefinedRateError,
)
from .gaussian import GaussWiretapParams, secret_key_bounds, secrecy_bounds
from .gf2 import Gf2Matrix, rank, solve_in_affine

__all__ = [
    "__version__",
    "BudgetExceededError",
    "DegenerateMIError",
    "DetWiretapParams",
    "ExistenceError",
    "GaussWiretapParams",
    "Gf2Matrix",
    "InvalidShiftError",
    "ModelError",
    "ShapeError",
    "UndefinedRateError",
    "det_dpc_capacity",
    "det_secret_key_capacity",
    "det_secrecy_capacity_cases",
    "det_secrecy_capacity_rank",
    "rank",
    "secret_key_bounds",
    "secrecy_bounds",
    "solve_in_affine",
]
