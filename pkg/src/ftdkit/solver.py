"""Three-stage construction of fractional triangle decompositions.

Stage 1 weights every triangle uniformly, stage 2 removes vertex defects
with bowtie averaging, stage 3 drives the edge discrepancies to zero by
iterating an averaging operator (octagonal pinwheels by default, plain
per-edge spreading as the ``naive`` alternative).

Termination is a practical add-on: the iteration stops once the maximum
edge discrepancy reaches ``eps_stop``, gives up after ``max_iters``
rounds, and reports STALLED when ten consecutive rounds fail to improve
the discrepancy by at least one percent.
"""

import csv
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import GadgetMissingError
from .gadgets import apply_F, bowtie_balance, naive_adjust, pinwheel_data, stage_diagnostics  # noqa: F401
from .graphs import build_triangle_index, uncovered_edges
from .weighting import (
    Weighting,
    edge_sums,
    is_ftd,
    report,
    uniform_weighting,
    vertex_defects,
)

FTD_FOUND = "FTD_FOUND"
STALLED = "STALLED"
GADGET_MISSING = "GADGET_MISSING"
UNCOVERED_EDGE = "UNCOVERED_EDGE"
MAX_ITERS = "MAX_ITERS"

OPERATORS = ("pinwheel", "naive")

TRAJECTORY_COLUMNS = ("iter", "delta_inf", "min_weight", "max_vertex_defect", "total_weight")

# STALLED when delta_inf improves by less than this over STALL_WINDOW rounds
STALL_WINDOW = 10
STALL_FACTOR = 0.99


@dataclass
class SolveOptions:
    k: int = 4
    eps_stop: float = 1e-9
    eps_neg: float = 1e-9
    max_iters: int = 200
    operator: str = "pinwheel"
    record_trajectory: bool = False
    cycle_budget: int = int(1e9)

    def __post_init__(self):
        if self.eps_stop <= 0:
            raise ValueError("eps_stop must be positive")
        if self.eps_neg < 0:
            raise ValueError("eps_neg must be nonnegative")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.k < 2:
            raise ValueError("wheel half-length k must be >= 2")
        if self.operator not in OPERATORS:
            raise ValueError(f"operator must be one of {OPERATORS}")


@dataclass
class TrajectoryRow:
    iter: int
    delta_inf: float
    min_weight: float
    max_vertex_defect: float
    total_weight: float
    step_inf: float = float("nan")  # ||sigma_t - sigma_{t-1}||_inf, nan at iter 0


@dataclass
class SolveReport:
    status: str
    weighting: "Weighting | None"
    index: "object | None"
    iterations: int
    delta_inf: float
    witness: "tuple | None" = None
    trajectory: list = field(default_factory=list)
    wall_time: float = 0.0

    def ok(self):
        return self.status == FTD_FOUND


def _row(sigma, it, step_inf=float("nan")):
    rep = report(sigma)
    return TrajectoryRow(
        iter=it,
        delta_inf=rep.delta_inf,
        min_weight=rep.min_weight,
        max_vertex_defect=rep.max_vertex_defect,
        total_weight=rep.total_weight,
        step_inf=step_inf,
    )


def solve(graph, opts=None):
    """Run the three stages on ``graph`` and report how far they got.

    All instance-level failures (an uncovered edge, a vertex pair without
    bowties, an edge without pinwheels) come back as statuses with a
    witness, not exceptions; capacity overruns still raise.
    """
    opts = opts or SolveOptions()
    t0 = time.perf_counter()
    index = build_triangle_index(graph)

    bare = uncovered_edges(graph, index)
    if len(bare):
        u, v = (int(x) for x in graph.edges[int(bare[0])])
        return SolveReport(
            status=UNCOVERED_EDGE,
            weighting=None,
            index=index,
            iterations=0,
            delta_inf=float("inf"),
            witness=(u, v),
            wall_time=time.perf_counter() - t0,
        )

    sigma = uniform_weighting(graph, index)

    # Stage 2: skip when stage 1 is already vertex balanced (K_n, empty, ...)
    defects = vertex_defects(sigma)
    if len(defects) and np.abs(defects).max() > opts.eps_stop:
        try:
            sigma = bowtie_balance(graph, index, sigma)
        except GadgetMissingError as exc:
            return SolveReport(
                status=GADGET_MISSING,
                weighting=sigma,
                index=index,
                iterations=0,
                delta_inf=float(np.abs(edge_sums(sigma) - 1.0).max()) if graph.m else 0.0,
                witness=exc.witness,
                wall_time=time.perf_counter() - t0,
            )

    trajectory = []
    delta_inf = float(np.abs(edge_sums(sigma) - 1.0).max()) if graph.m else 0.0
    if opts.record_trajectory:
        trajectory.append(_row(sigma, 0))
    history = [delta_inf]

    def finish(status, its, witness=None):
        return SolveReport(
            status=status,
            weighting=sigma,
            index=index,
            iterations=its,
            delta_inf=delta_inf,
            witness=witness,
            trajectory=trajectory,
            wall_time=time.perf_counter() - t0,
        )

    def converged_status():
        return FTD_FOUND if is_ftd(sigma, opts.eps_stop + opts.eps_neg) else STALLED

    if delta_inf <= opts.eps_stop:
        return finish(converged_status(), 0)

    # gadget aggregates are built once; the graph never changes underneath
    pin = None
    if opts.operator == "pinwheel":
        pin = pinwheel_data(graph, index, opts.k, cycle_budget=opts.cycle_budget)
        missing = np.flatnonzero(pin.counts == 0)
        if len(missing):
            u, v = (int(x) for x in graph.edges[int(missing[0])])
            return finish(GADGET_MISSING, 0, witness=(u, v))

    for it in range(1, opts.max_iters + 1):
        prev = sigma.values
        if opts.operator == "pinwheel":
            sigma = apply_F(graph, index, sigma, k=opts.k, pin=pin)
        else:
            sigma = naive_adjust(graph, index, sigma)
        delta_inf = float(np.abs(edge_sums(sigma) - 1.0).max())
        history.append(delta_inf)
        if opts.record_trajectory:
            trajectory.append(_row(sigma, it, float(np.abs(sigma.values - prev).max())))
        if delta_inf <= opts.eps_stop:
            return finish(converged_status(), it)
        if len(history) > STALL_WINDOW and history[-1] > STALL_FACTOR * history[-1 - STALL_WINDOW]:
            return finish(STALLED, it)
    return finish(MAX_ITERS, opts.max_iters)


def neighborhood_discrepancy(graph, sigma):
    """max over edges uv of |sum over common neighbors z of delta_uz|.

    A diagnostic mirror of the proof's I3 quantity; not used for stopping.
    """
    n = graph.n
    if not graph.m:
        return 0.0
    delta = edge_sums(sigma) - 1.0
    d = np.zeros((n, n))
    eu = graph.edges[:, 0]
    ev = graph.edges[:, 1]
    d[eu, ev] = delta
    d[ev, eu] = delta
    adj = graph.adjacency_matrix().astype(np.float64)
    s = d @ adj  # s[u, v] = sum_z delta_uz over z adjacent to v
    both = np.maximum(np.abs(s[eu, ev]), np.abs(s[ev, eu]))
    return float(both.max())


def write_trajectory(path, solve_report):
    """CSV export with the fixed column set, one row per recorded iteration."""
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(TRAJECTORY_COLUMNS)
        for row in solve_report.trajectory:
            wr.writerow(
                [
                    row.iter,
                    f"{row.delta_inf:.17g}",
                    f"{row.min_weight:.17g}",
                    f"{row.max_vertex_defect:.17g}",
                    f"{row.total_weight:.17g}",
                ]
            )


def read_trajectory(path):
    """Rows back as TrajectoryRow (step_inf is not stored in the file)."""
    out = []
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        head = next(rd)
        if tuple(head) != TRAJECTORY_COLUMNS:
            raise ValueError(f"unexpected trajectory header {head!r}")
        for rec in rd:
            out.append(
                TrajectoryRow(
                    iter=int(rec[0]),
                    delta_inf=float(rec[1]),
                    min_weight=float(rec[2]),
                    max_vertex_defect=float(rec[3]),
                    total_weight=float(rec[4]),
                )
            )
    return out
