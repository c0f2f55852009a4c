"""Exact solving toolkit for bicolored P3 deletion.

Work with two-edge-colored graphs (:mod:`bpd.graph`), locate forbidden
structures (:mod:`bpd.detect`), shrink instances (:mod:`bpd.kernel`),
solve them exactly (:mod:`bpd.solve`), and build test instances
(:mod:`bpd.generate`).  The ``bpd`` console script fronts all of it.
"""

from .detect import (
    ForbiddenStructure,
    InstanceClass,
    StructureKind,
    classify,
    count_bicolored_p3,
    enumerate_bicolored_k3,
    enumerate_bicolored_p3,
    enumerate_diamonds,
    enumerate_endangered_k3,
    enumerate_hourglasses,
    enumerate_mono_k3,
    enumerate_mono_p3,
    enumerate_multi_conflict_edges,
    find_branch_structure,
    find_endangered_k3,
    first_bicolored_p3,
    is_nice,
    p3_partners,
    p3_witness_vertices,
)
from .generate import (
    GADGET_KINDS,
    CnfFormula,
    FormulaError,
    ReductionLayout,
    gadget,
    parse_dimacs,
    random_formula,
    random_instance,
    reduce_sat_to_bpd,
    sat_brute_force,
    to_dimacs,
)
from .graph import (
    Color,
    ColoredGraph,
    Edge,
    FormatError,
    Instance,
    InstanceStats,
    edge_key,
    format_bpd,
    instance_stats,
    parse_bpd,
    read_bpd,
    write_bpd,
)
from .kernel import (
    KernelTrace,
    kernel_size_bound,
    kernelize,
    lift_solution,
    replay_trace,
    trivial_yes_check,
)
from .solve import (
    ConflictGraph,
    InternalConsistencyError,
    PreconditionError,
    SearchStats,
    SolveResult,
    bipartite_min_vertex_cover,
    build_conflict_graph,
    max_disjoint_p3_packing,
    oracle_min_deletions,
    solve_auto,
    solve_branching,
    solve_degree_two,
    solve_endangered_free,
    solve_mono_free,
    solve_nice,
    verify_solution,
)

__version__ = "0.1.0"
