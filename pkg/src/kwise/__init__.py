"""Exact k-wise independent Rademacher measures and Khintchine-type LPs."""

__version__ = "0.1.0"

from .constructions import antipodal, balanced, extremal_pairwise, independent
from .core import (
    AtomicMeasure,
    OrbitMeasure,
    correlation,
    is_kwise_independent,
    moment,
    orbit_to_atomic,
    symmetrize,
)
from .extremal import (
    build_full_lp,
    build_orbit_lp,
    khintchine_cell,
    paper_certificate,
    quartic_decompose,
    verify_certificate,
)
from .simplex import LPProblem, LPSolution, solve_lp

__all__ = [
    "AtomicMeasure",
    "LPProblem",
    "LPSolution",
    "OrbitMeasure",
    "antipodal",
    "balanced",
    "build_full_lp",
    "build_orbit_lp",
    "correlation",
    "extremal_pairwise",
    "independent",
    "is_kwise_independent",
    "khintchine_cell",
    "moment",
    "orbit_to_atomic",
    "paper_certificate",
    "quartic_decompose",
    "solve_lp",
    "symmetrize",
    "verify_certificate",
]
