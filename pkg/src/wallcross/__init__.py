"""Exact wall-crossing computations in truncated quantum and classical tori."""
from ._backend import KERNEL_BACKEND, RATIONAL_BACKEND
from .arith import GaussRational, PoleRemains, Q, Rational, VPoly, VRatFunc
from .dt import kronecker_dt, kronecker_quantum
from .engine import StabilityData, assemble, factorize, quasiclassical, transport
from .lattice import Charge, SkewLattice, Truncation
from .series import Flavor, TorusSeries

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "RATIONAL_BACKEND",
    "GaussRational",
    "PoleRemains",
    "Q",
    "Rational",
    "VPoly",
    "VRatFunc",
    "kronecker_dt",
    "kronecker_quantum",
    "StabilityData",
    "assemble",
    "factorize",
    "quasiclassical",
    "transport",
    "Charge",
    "SkewLattice",
    "Truncation",
    "Flavor",
    "TorusSeries",
]
