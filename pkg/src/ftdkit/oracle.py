"""LP feasibility oracle for fractional triangle decompositions.

A graph has an FTD exactly when {A rho = 1, rho >= 0} is solvable, where
A is the edge-by-triangle incidence matrix.  ``decide_ftd`` settles that
system and always hands back checkable evidence: a weighting for
FEASIBLE, a Farkas vector y (per-triangle sums <= 0, positive total) for
INFEASIBLE, or a bare edge for UNCOVERED.  ``verify_certificate``
re-checks the evidence with independent arithmetic.

The float path projects the uniform weighting onto the solution set by
accelerated projected gradient on  min ||A rho - 1||^2, rho >= 0.  At
the minimum the residual r = 1 - A rho is either ~0 (the iterate is the
witness) or a Farkas direction by the KKT conditions (A'r <= 0 and
sum r = ||r||^2 > 0).  Instances that stall fall back to an explicit
phase-one LP  min 1's  s.t.  A rho + s = 1  whose duals at a positive
optimum give the same kind of vector.  The exact path (n <= 12) runs a
rational Bland phase-one simplex, so float verdicts can be audited
against ground truth.  Every verdict must pass ``verify_certificate``
before it is returned; a decision that cannot be certified raises
OracleInconclusiveError rather than guessing.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog
from scipy.sparse.linalg import lsqr

from .errors import CapacityError, OracleInconclusiveError
from ._simplex import solve_phase_one
from .graphs import build_triangle_index, uncovered_edges
from .weighting import Weighting

__all__ = [
    "FEASIBLE",
    "INFEASIBLE",
    "UNCOVERED",
    "MAX_LP_TRIANGLES",
    "EXACT_MAX_N",
    "FeasibilityResult",
    "decide_ftd",
    "verify_certificate",
    "write_certificate",
    "read_certificate",
]

FEASIBLE = "FEASIBLE"
INFEASIBLE = "INFEASIBLE"
UNCOVERED = "UNCOVERED"

MODES = ("float", "exact")

# Desk-scale guard: threshold-scan instances at n = 300 top out near
# 5e4 triangles, and the dense phase-one LP is not meant to grow past that.
MAX_LP_TRIANGLES = 60_000
EXACT_MAX_N = 12

FEAS_TOL = 1e-9     # max |A rho - 1| and -min rho accepted for FEASIBLE
CERT_TOL = 1e-12    # max per-triangle sum accepted for a Farkas vector
CERT_MARGIN = 1e-9  # headroom added so sum(y) >= 1 survives float summation


@dataclass
class FeasibilityResult:
    """Verdict plus the evidence backing it.

    Exactly one evidence field is set: ``weighting`` for FEASIBLE,
    ``certificate`` (length-m float vector over edge ids) for INFEASIBLE,
    ``edge`` (vertex pair) for UNCOVERED.
    """

    verdict: str
    weighting: Optional[Weighting] = None
    certificate: Optional[np.ndarray] = None
    edge: Optional[tuple] = None
    mode: str = "float"

    @property
    def feasible(self):
        return self.verdict == FEASIBLE


def _incidence_columns(graph, index):
    """Per triangle, the ascending edge ids of its three edges."""
    cols = [[] for _ in range(index.t)]
    for eid in range(graph.m):
        for tid in index.edge_incidence(eid):
            cols[int(tid)].append(eid)
    return cols


def _edge_sums_brute(graph, index, values):
    out = np.empty(graph.m)
    for eid in range(graph.m):
        out[eid] = math.fsum(float(values[t]) for t in index.edge_incidence(eid))
    return out


def _repair_farkas(y, aT):
    """Normalize a raw Farkas direction so the stated invariant holds.

    Rescales to total 1, shifts all entries down just enough to push every
    per-triangle sum to <= 0 (each triangle has three edges, so subtracting
    c everywhere lowers each sum by 3c), renormalizes, and finally scales
    by 1 + CERT_MARGIN so the total stays >= 1 under float summation.
    Returns None when the direction collapses, meaning the duals were junk.
    """
    total = math.fsum(y)
    if not math.isfinite(total) or abs(total) <= 1e-12:
        return None
    if total < 0:
        y = -y
        total = -total
    y = y / total
    cols = aT @ y
    viol = float(cols.max(initial=0.0))
    if viol > 0.0:
        y = y - viol / 3.0
        total = math.fsum(y)
        if total <= 1e-6:
            return None
        y = y / total
    return y * (1.0 + CERT_MARGIN)


def _uncovered_indicator(graph, eid):
    y = np.zeros(graph.m)
    y[eid] = 1.0 + CERT_MARGIN
    return y


def decide_ftd(graph, index=None, mode="float", uncovered_fast_path=True):
    """Decide whether ``graph`` admits an FTD.

    An edge in no triangle settles the question combinatorially; with the
    fast path on, the verdict is UNCOVERED naming that edge, and with it
    off, the same fact is packaged as an INFEASIBLE certificate (the
    indicator of the bare edge).  Otherwise the phase-one LP decides.
    ``mode`` "exact" replays the decision in rational arithmetic
    (n <= EXACT_MAX_N only).  Every returned result passes
    ``verify_certificate``; a result that would not raises
    OracleInconclusiveError instead.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if index is None:
        index = build_triangle_index(graph)
    if graph.m == 0:
        return FeasibilityResult(FEASIBLE, weighting=Weighting(index, np.zeros(index.t)), mode=mode)
    bare = uncovered_edges(graph, index)
    if bare.size:
        eid = int(bare[0])
        u, v = (int(x) for x in graph.edges[eid])
        if uncovered_fast_path:
            return FeasibilityResult(UNCOVERED, edge=(u, v), mode=mode)
        return FeasibilityResult(INFEASIBLE, certificate=_uncovered_indicator(graph, eid), mode=mode)
    if index.t > MAX_LP_TRIANGLES:
        raise CapacityError(
            f"{index.t} triangles exceeds the LP guard of {MAX_LP_TRIANGLES}"
        )
    if mode == "exact":
        return _decide_exact(graph, index)
    return _decide_float(graph, index)


# Projection schedule: momentum restarts keep the iteration monotone
# enough that a verdict usually lands within a few hundred steps; the cap
# bounds the worst case before the LP fallback takes over.
PROJ_ITER_CAP = 50_000
PROJ_CHECK_EVERY = 100
PROJ_STALL_CHECKS = 20
LP_DUAL_SIMPLEX_MAX_T = 4_000


def _decide_float(graph, index):
    A = index.edge_triangle_matrix().tocsr()
    result = _projection_verdict(graph, index, A)
    if result is None:
        result = _phase_one_verdict(graph, index, A)
    if result is None:
        raise OracleInconclusiveError(
            "neither the projection solve nor the phase-one LP produced a "
            "verdict that passes verification"
        )
    return result


def _feasible_if_verified(graph, index, rho):
    rho = np.array(rho, dtype=np.float64, copy=True)
    np.copyto(rho, 0.0, where=(rho < 0) & (rho >= -1e-12))
    if rho.size and rho.min() < 0:
        return None
    result = FeasibilityResult(FEASIBLE, weighting=Weighting(index, rho), mode="float")
    return result if verify_certificate(graph, index, result) else None


def _infeasible_if_verified(graph, index, direction, aT):
    y = _repair_farkas(np.asarray(direction, dtype=np.float64), aT)
    if y is None:
        return None
    result = FeasibilityResult(INFEASIBLE, certificate=y, mode="float")
    return result if verify_certificate(graph, index, result) else None


def _projection_verdict(graph, index, A):
    """Run the accelerated projection and try to certify either verdict.

    Returns a verified FeasibilityResult, or None when the iteration cap
    passes without a certifiable iterate (the caller then falls back).
    """
    m, t = graph.m, index.t
    aT = A.T.tocsr()
    ones = np.ones(m)
    v = np.full(t, 1.0 / math.sqrt(t))
    for _ in range(30):
        w = aT @ (A @ v)
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return None
        v = w / norm
    step = 1.0 / (norm * 1.01)
    at_ones = aT @ ones
    x = np.full(t, m / (3.0 * t))
    y = x.copy()
    theta = 1.0
    best = math.inf
    stalled_checks = 0
    k = 0
    while True:
        r = ones - A @ x
        rinf = float(np.abs(r).max(initial=0.0))
        if rinf <= 1e-12:
            out = _feasible_if_verified(graph, index, x)
            if out is not None:
                return out
        if rinf < 0.5 * best:
            best = rinf
            stalled_checks = 0
        else:
            stalled_checks += 1
        total = math.fsum(r)
        if total > 1e-8:
            viol = float((aT @ r).max(initial=0.0))
            # the repair shift removes m*viol/(3*total) of the normalized
            # total; demand that stays below 1/4 so the certificate survives
            if viol < 0.75 * total / m:
                out = _infeasible_if_verified(graph, index, r, aT)
                if out is not None:
                    return out
        if stalled_checks >= PROJ_STALL_CHECKS:
            if rinf <= 1e-10:
                out = _feasible_if_verified(graph, index, x)
                if out is not None:
                    return out
            if rinf <= 1e-4:
                out = _polish_support(graph, index, A, x)
                if out is not None:
                    return out
            return None
        if k >= PROJ_ITER_CAP:
            return None
        for _ in range(PROJ_CHECK_EVERY):
            grad = aT @ (A @ y) - at_ones
            xn = np.maximum(y - step * grad, 0.0)
            if float(np.dot(grad, xn - x)) > 0.0:
                theta = 1.0
                y = xn.copy()
            else:
                theta_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * theta * theta))
                y = xn + ((theta - 1.0) / theta_next) * (xn - x)
                theta = theta_next
            x = xn
        k += PROJ_CHECK_EVERY


def _polish_support(graph, index, A, x):
    """Least-squares resolve on the positive support of a near-witness."""
    support = np.flatnonzero(x > 1e-9)
    if support.size == 0:
        return None
    sub = A.tocsc()[:, support]
    xs = lsqr(sub, np.ones(graph.m), atol=1e-14, btol=1e-14)[0]
    cand = np.zeros(index.t)
    cand[support] = xs
    return _feasible_if_verified(graph, index, cand)


def _phase_one_verdict(graph, index, A):
    """Explicit phase-one LP fallback; method picked by instance size."""
    m, t = graph.m, index.t
    A_eq = sp.hstack([A, sp.identity(m, format="csc")], format="csc")
    c = np.concatenate([np.zeros(t), np.ones(m)])
    method = "highs-ds" if t <= LP_DUAL_SIMPLEX_MAX_T else "highs-ipm"
    res = linprog(c, A_eq=A_eq, b_eq=np.ones(m), bounds=(0, None), method=method)
    if res.status != 0:
        return None
    if res.fun <= FEAS_TOL:
        rho = np.maximum(res.x[:t], 0.0)
        out = _feasible_if_verified(graph, index, rho)
        if out is None:
            out = _polish_support(graph, index, A, rho)
        return out
    if res.eqlin is None:
        return None
    return _infeasible_if_verified(graph, index, res.eqlin.marginals, A.T.tocsr())


def _decide_exact(graph, index):
    if graph.n > EXACT_MAX_N:
        raise CapacityError(
            f"exact mode handles n <= {EXACT_MAX_N}, got n = {graph.n}"
        )
    cols = _incidence_columns(graph, index)
    optimum, x, y = solve_phase_one(cols, graph.m)
    if optimum == 0:
        rho = np.array([float(v) for v in x])
        result = FeasibilityResult(FEASIBLE, weighting=Weighting(index, rho), mode="exact")
    else:
        total = sum(y, Fraction(0))
        y = [v / total for v in y]
        cert = np.array([float(v) for v in y]) * (1.0 + CERT_MARGIN)
        result = FeasibilityResult(INFEASIBLE, certificate=cert, mode="exact")
    if not verify_certificate(graph, index, result):
        raise OracleInconclusiveError("exact result failed float re-verification")
    return result


def verify_certificate(graph, index, result):
    """Independently re-check the evidence in ``result``.

    FEASIBLE: every edge's covering weights sum to 1 within FEAS_TOL and
    no weight is below -FEAS_TOL.  INFEASIBLE: every triangle's three
    certificate entries sum to <= CERT_TOL and the certificate total is
    >= 1.  UNCOVERED: the named edge exists and lies in no triangle.
    Sums use compensated summation, not the solver's matrix products.
    """
    if result.verdict == UNCOVERED:
        if result.edge is None or len(result.edge) != 2:
            return False
        try:
            eid = graph.edge_id(int(result.edge[0]), int(result.edge[1]))
        except KeyError:
            return False
        return len(index.edge_incidence(eid)) == 0
    if result.verdict == FEASIBLE:
        w = result.weighting
        if w is None or w.index is not index or w.values.shape != (index.t,):
            return False
        if w.values.size and float(w.values.min()) < -FEAS_TOL:
            return False
        sums = _edge_sums_brute(graph, index, w.values)
        return bool(np.all(np.abs(sums - 1.0) <= FEAS_TOL)) if graph.m else True
    if result.verdict == INFEASIBLE:
        y = result.certificate
        if y is None or y.shape != (graph.m,) or not np.isfinite(y).all():
            return False
        if math.fsum(y) < 1.0:
            return False
        if index.t:
            tris = index.triangles
            e1 = graph.edge_ids(tris[:, [0, 1]])
            e2 = graph.edge_ids(tris[:, [0, 2]])
            e3 = graph.edge_ids(tris[:, [1, 2]])
            for tid in range(index.t):
                s = math.fsum((float(y[e1[tid]]), float(y[e2[tid]]), float(y[e3[tid]])))
                if s > CERT_TOL:
                    return False
        return True
    return False


def write_certificate(path, graph, y, header_comments=()):
    """Text format: optional comments, ``farkas n``, nonzero ``u v y`` rows."""
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (graph.m,):
        raise ValueError("certificate length must equal the edge count")
    with open(path, "w", newline="\n") as fh:
        for line in header_comments:
            fh.write(f"# {line}\n")
        fh.write(f"farkas {graph.n}\n")
        for eid in range(graph.m):
            if y[eid] != 0.0:
                u, v = graph.edges[eid]
                fh.write(f"{u} {v} {y[eid]:.17g}\n")


def read_certificate(path, graph):
    """Parse a certificate file back into a length-m vector for ``graph``."""
    y = np.zeros(graph.m)
    header = None
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if header is None:
                parts = line.split()
                if len(parts) != 2 or parts[0] != "farkas":
                    raise ValueError(f"expected 'farkas n' header, got {line!r}")
                if int(parts[1]) != graph.n:
                    raise ValueError(
                        f"certificate is for n = {parts[1]}, graph has n = {graph.n}"
                    )
                header = parts
                continue
            u_s, v_s, val = line.split()
            y[graph.edge_id(int(u_s), int(v_s))] = float(val)
    if header is None:
        raise ValueError("missing 'farkas n' header")
    return y
