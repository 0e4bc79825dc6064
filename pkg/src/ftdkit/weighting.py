"""Triangle weightings and their discrepancy functionals.

A Weighting is a dense real vector over the triangles of a fixed
TriangleIndex.  The functionals here are the quantities the solver steers
by: per-vertex defects delta(v) = sigma(v) - deg(v)/2, per-edge
discrepancies delta_e = sigma(e) - 1, and their extremes.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoTrianglesError

__all__ = [
    "Weighting",
    "DiscrepancyReport",
    "uniform_weighting",
    "vertex_weights",
    "vertex_defect",
    "vertex_defects",
    "edge_discrepancy",
    "edge_sums",
    "report",
    "is_ftd",
    "write_weighting",
    "read_weighting",
]


@dataclass
class Weighting:
    """Real weights aligned with the triangle ids of ``index``."""

    index: "TriangleIndex"
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.index.t,):
            raise ValueError("weight vector length must equal the triangle count")
        if v.size and not np.isfinite(v).all():
            raise ValueError("weights must be finite")
        self.values = v

    def copy(self):
        return Weighting(self.index, self.values.copy())


def uniform_weighting(graph, index):
    """The constant weighting e(G) / (3 |T(G)|).

    Its total weight is e(G)/3, the value any FTD must have.  A graph with
    edges but no triangles has no such weighting (NoTrianglesError); the
    empty graph gets the empty weighting.
    """
    if index.t == 0:
        if graph.m > 0:
            raise NoTrianglesError(
                f"graph has {graph.m} edges but no triangles; no uniform weighting exists"
            )
        return Weighting(index, np.zeros(0))
    value = graph.m / (3.0 * index.t)
    return Weighting(index, np.full(index.t, value))


def vertex_weights(w):
    """sigma(v) = sum of weights over triangles containing v, for all v."""
    g = w.index.graph
    if w.index.t == 0:
        return np.zeros(g.n)
    flat = w.index.triangles.reshape(-1).astype(np.int64)
    return np.bincount(flat, weights=np.repeat(w.values, 3), minlength=g.n)


def vertex_defects(w):
    """delta(v) = sigma(v) - deg(v)/2 for all vertices at once."""
    g = w.index.graph
    return vertex_weights(w) - 0.5 * g.degrees


def vertex_defect(w, v):
    if not 0 <= v < w.index.graph.n:
        raise ValueError(f"vertex {v} out of range")
    tri = w.index.vertex_incidence(v)
    return math.fsum(w.values[tri]) - 0.5 * float(w.index.graph.degrees[v])


def edge_sums(w):
    """sigma(e) = sum of weights over triangles containing e, for all edges."""
    g = w.index.graph
    if w.index.t == 0:
        return np.zeros(g.m)
    return w.index.edge_triangle_matrix() @ w.values


def edge_discrepancy(w, e):
    """delta_e = sigma(e) - 1 for a single edge (id or pair)."""
    g = w.index.graph
    eid = int(e) if isinstance(e, (int, np.integer)) else g.edge_id(*e)
    if not 0 <= eid < g.m:
        raise KeyError(e)
    tri = w.index.edge_incidence(eid)
    return math.fsum(w.values[tri]) - 1.0


@dataclass
class DiscrepancyReport:
    """One-pass summary of a weighting's distance from an FTD."""

    delta_inf: float
    max_vertex_defect: float
    total_weight: float
    min_weight: float
    sum_edge_disc: float


def report(w):
    g = w.index.graph
    ew = edge_sums(w)
    delta_inf = float(np.abs(ew - 1.0).max()) if g.m else 0.0
    vd = vertex_defects(w)
    max_vd = float(np.abs(vd).max()) if g.n else 0.0
    total = math.fsum(w.values.tolist())
    min_w = float(w.values.min()) if w.index.t else 0.0
    sum_disc = math.fsum(ew.tolist()) - g.m
    return DiscrepancyReport(
        delta_inf=delta_inf,
        max_vertex_defect=max_vd,
        total_weight=total,
        min_weight=min_w,
        sum_edge_disc=sum_disc,
    )


def is_ftd(w, tol):
    """True iff w is a fractional triangle decomposition within ``tol``.

    Requires min weight >= -tol, every edge weight within tol of 1, and no
    edge outside all triangles.
    """
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    counts = w.index.edge_incidence_counts()
    if (counts == 0).any():
        return False
    r = report(w)
    return r.min_weight >= -tol and r.delta_inf <= tol


def write_weighting(path, w, header_comments=()):
    """Text format: line 1 ``n t``, then ``u v w value`` rows in id order.

    Values are printed with 17 significant digits, enough to round-trip
    float64 exactly.
    """
    g = w.index.graph
    with open(path, "w", newline="\n") as fh:
        for line in header_comments:
            fh.write(f"# {line}\n")
        fh.write(f"{g.n} {w.index.t}\n")
        for tid in range(w.index.t):
            u, v, x = w.index.triangles[tid]
            fh.write(f"{u} {v} {x} {w.values[tid]:.17g}\n")


def read_weighting(path, index):
    """Parse a weighting file and align it against ``index``.

    The header and every triangle triple must match the index exactly
    (same n, same count, same lexicographic order).
    """
    g = index.graph
    rows = []
    header = None
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if header is None:
                if len(parts) != 2:
                    raise ValueError("expected header 'n t'")
                header = (int(parts[0]), int(parts[1]))
                continue
            if len(parts) != 4:
                raise ValueError(f"expected 'u v w value', got {line!r}")
            rows.append((int(parts[0]), int(parts[1]), int(parts[2]), float(parts[3])))
    if header is None:
        raise ValueError("empty weighting file")
    n, t = header
    if n != g.n:
        raise ValueError(f"weighting is for n={n}, index has n={g.n}")
    if t != index.t or len(rows) != t:
        raise ValueError(f"weighting has {len(rows)}/{t} triangles, index has {index.t}")
    values = np.empty(t)
    for tid, (u, v, x, val) in enumerate(rows):
        if (u, v, x) != tuple(int(y) for y in index.triangles[tid]):
            raise ValueError(f"triangle row {tid} is ({u},{v},{x}), index expects "
                             f"{tuple(int(y) for y in index.triangles[tid])}")
        values[tid] = val
    return Weighting(index, values)
