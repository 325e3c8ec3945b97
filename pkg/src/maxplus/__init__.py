"""Exact max-plus linear algebra and CSR expansions of matrix powers."""

from .tropical import (
    EPSILON,
    UNIT,
    DiagonalScaling,
    DimensionMismatchError,
    PositiveCircuitError,
    TropicalMatrix,
    TropicalScalar,
    as_value,
    diag_conjugate,
    kleene_star,
    matrix_add,
    matrix_mul,
    matrix_power,
)
from .digraph import (
    CircuitRecord,
    CriticalGraph,
    CyclicityClasses,
    WeightedDigraph,
    build_graph,
    critical_graph,
    cyclicity_classes,
    karp_max_cycle_mean,
    principal_eigenvectors,
)
from .charpoly import (
    ChiEvaluation,
    Mmcs,
    MultiCircuit,
    characteristic_roots,
    chi_eval,
    extract_mmcs,
)
from .partition import NodePartition, partition_nodes
from .visualize import (
    GroupVisualization,
    InvariantViolationError,
    VisualizationResult,
    dijkstra_single_sink,
    visualize_all,
)
from .csr import (
    CsrExpansion,
    CsrTerm,
    ExtendedGraph,
    build_extended_graph,
    build_s,
    compute_cr_pair,
    evaluate_expansion,
    expand,
    reduce_term,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
