"""Exact construction and verification of Mathon's 21-line perp-system of PG(5,3)."""
from ._kernels import BACKEND
from .forms import AlternatingForm, QuadraticForm, QuadricType, perp, perp_bound, verify_perp_system
from .gf import Matrix
from .pipeline import LineSet, complement_analysis, construct, find_epsilon_polarities, mathon, recover_f5
from .projective import AmbientSpace, Subspace, canonicalize, meet, span

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "AlternatingForm", "QuadraticForm", "QuadricType", "perp", "perp_bound",
    "verify_perp_system", "Matrix", "LineSet", "complement_analysis", "construct",
    "find_epsilon_polarities", "mathon", "recover_f5", "AmbientSpace", "Subspace",
    "canonicalize", "meet", "span",
]
