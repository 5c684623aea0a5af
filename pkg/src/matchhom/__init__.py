"""Exact homology of matching complexes.

Builds matching complexes of labeled graphs, computes their reduced
simplicial homology over Z, Q, and finite fields by sparse integer Smith
normal form, realizes a family of long exact sequences at chain level and
verifies them mechanically, constructs explicit torsion cycles, and
certifies elementary collapses.
"""

from .graphs import (
    Graph,
    complete_bipartite,
    complete_graph,
    delete_edges,
    graph,
    induced_subgraph,
    near_matching_deleted_graph,
)
from .complexes import (
    ComplexPair,
    MatchingComplex,
    complex_on_vertices,
    delete_zero_cell,
    empty_complex,
    filtration_level,
    join,
    matching_complex,
    void_complex,
)
from .chains import (
    Chain,
    SparseIntMatrix,
    apply_boundary,
    boundary_matrix,
    chain_of,
    is_cycle,
    relabel,
    wedge,
)
from .homology import (
    GroupDescriptor,
    class_order,
    classes_generate,
    homology,
    relative_homology,
    uct_dimension_check,
)
from .snf import smith_normal_form

__all__ = [
    "Graph", "complete_graph", "complete_bipartite", "near_matching_deleted_graph",
    "induced_subgraph", "delete_edges", "graph",
    "MatchingComplex", "ComplexPair", "matching_complex", "delete_zero_cell",
    "filtration_level", "join", "complex_on_vertices", "void_complex", "empty_complex",
    "Chain", "SparseIntMatrix", "chain_of", "wedge", "relabel",
    "boundary_matrix", "apply_boundary", "is_cycle",
    "GroupDescriptor", "homology", "relative_homology", "class_order",
    "classes_generate", "uct_dimension_check", "smith_normal_form",
]

__version__ = "0.1.0"
