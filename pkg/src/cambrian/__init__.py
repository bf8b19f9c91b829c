"""Finite Coxeter groups, Cambrian lattices, sortable elements and Cambrian fans."""
from .coxeter import (
    CoxeterSystem,
    GroupElement,
    build_system,
    enumerate_group,
    group_order,
    parse_label,
    reduced_word,
    weak_le,
)
from .errors import CambrianError
from .lattice import (
    HasseLattice,
    congruence_from_edges,
    is_lattice,
    local_forcing_closure,
    polygonal_intervals,
    quotient,
)
from .sortable import (
    c_vectors,
    cambrian_congruence,
    cambrian_lattice,
    is_sortable,
    is_sortable_recursive,
    parse_coxeter_element,
    sortable_elements,
    sorting_word,
)

__version__ = "0.1.0"

__all__ = [
    "CambrianError",
    "CoxeterSystem",
    "GroupElement",
    "HasseLattice",
    "build_system",
    "c_vectors",
    "cambrian_congruence",
    "cambrian_lattice",
    "congruence_from_edges",
    "enumerate_group",
    "group_order",
    "is_lattice",
    "is_sortable",
    "is_sortable_recursive",
    "local_forcing_closure",
    "parse_coxeter_element",
    "parse_label",
    "polygonal_intervals",
    "quotient",
    "reduced_word",
    "sortable_elements",
    "sorting_word",
    "weak_le",
]
