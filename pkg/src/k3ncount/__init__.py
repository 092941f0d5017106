"""Connected components of polarized moduli of K3^[n]-type manifolds, counted
through isometry classes of marked rank two lattices."""

from .counting import (
    CountReport,
    DerivedInvariants,
    LevelMismatch,
    closed_form_count,
    cross_check,
    derive_invariants,
    determines_polarization_type,
    glue_count,
    lattice_count_direct,
    lattice_count_via_glue,
    search_disconnected,
)
from .estimator import ComponentCounter
from .query import InvalidQuery, ModuliQuery

__version__ = "0.1.0"

__all__ = [
    "ComponentCounter",
    "CountReport",
    "DerivedInvariants",
    "InvalidQuery",
    "LevelMismatch",
    "ModuliQuery",
    "closed_form_count",
    "cross_check",
    "derive_invariants",
    "determines_polarization_type",
    "glue_count",
    "lattice_count_direct",
    "lattice_count_via_glue",
    "search_disconnected",
]
