"""Fractional triangle decompositions: gadget solver, LP oracle, experiments.

The names most callers need are re-exported here; each submodule keeps
the full surface (file formats, capacity constants, diagnostics).
"""

from ftdkit.errors import (
    CapacityError,
    FtdkitError,
    GadgetMissingError,
    NoTrianglesError,
    OracleInconclusiveError,
    PatternDomainError,
)
from ftdkit.experiments import (
    ScanConfig,
    convergence_profile,
    emit_plot,
    hitting_time_trials,
    threshold_scan,
)
from ftdkit.gadgets import (
    BowtieEmbedding,
    PinwheelEmbedding,
    RootedPattern,
    apply_F,
    bowtie_balance,
    bowtie_count,
    build_family,
    index_sets,
    naive_adjust,
    pinwheel_count,
    rooted_extension_count,
    stage_diagnostics,
)
from ftdkit.graphs import (
    Graph,
    build_triangle_index,
    complete_graph,
    gen_gnp,
    gen_process,
    graph_stats,
    triangle_density_threshold,
    uncovered_edges,
)
from ftdkit.oracle import FeasibilityResult, decide_ftd, verify_certificate
from ftdkit.solver import (
    FTD_FOUND,
    GADGET_MISSING,
    MAX_ITERS,
    STALLED,
    UNCOVERED_EDGE,
    SolveOptions,
    SolveReport,
    solve,
)
from ftdkit.verifier import (
    check_alpha,
    is_k_degenerate,
    max_root_density,
    verify_paper_suite,
)
from ftdkit.weighting import Weighting, is_ftd, report, uniform_weighting

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "FtdkitError",
    "CapacityError",
    "GadgetMissingError",
    "NoTrianglesError",
    "OracleInconclusiveError",
    "PatternDomainError",
    "Graph",
    "gen_gnp",
    "gen_process",
    "complete_graph",
    "build_triangle_index",
    "uncovered_edges",
    "graph_stats",
    "triangle_density_threshold",
    "Weighting",
    "uniform_weighting",
    "report",
    "is_ftd",
    "BowtieEmbedding",
    "PinwheelEmbedding",
    "RootedPattern",
    "bowtie_count",
    "bowtie_balance",
    "pinwheel_count",
    "apply_F",
    "naive_adjust",
    "rooted_extension_count",
    "build_family",
    "index_sets",
    "stage_diagnostics",
    "solve",
    "SolveOptions",
    "SolveReport",
    "FTD_FOUND",
    "STALLED",
    "GADGET_MISSING",
    "UNCOVERED_EDGE",
    "MAX_ITERS",
    "decide_ftd",
    "verify_certificate",
    "FeasibilityResult",
    "max_root_density",
    "check_alpha",
    "is_k_degenerate",
    "verify_paper_suite",
    "ScanConfig",
    "threshold_scan",
    "hitting_time_trials",
    "convergence_profile",
    "emit_plot",
]
