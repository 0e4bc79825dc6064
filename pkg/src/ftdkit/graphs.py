"""Graph construction, random models, and the triangle index.

Graphs are immutable once built: vertices are the dense range ``0..n-1``,
edges are stored as a lexicographically sorted ``(m, 2)`` array with
``u < v``, and adjacency is kept both as sorted neighbor arrays and as
per-vertex bitsets (Python integers, one bit per vertex).  Files that
reference vertices outside ``0..n-1`` are rejected rather than relabeled.
"""

import math
from dataclasses import dataclass

import numpy as np

from .rng import stream

__all__ = [
    "Graph",
    "TriangleIndex",
    "ProcessTrace",
    "GraphStats",
    "gen_gnp",
    "gen_process",
    "complete_graph",
    "build_triangle_index",
    "uncovered_edges",
    "graph_stats",
    "read_graph",
    "write_graph",
    "read_process_trace",
    "write_process_trace",
    "triangle_density_threshold",
]


class Graph:
    """Undirected simple graph on vertices ``0..n-1``.

    Parameters
    ----------
    n : int
        Number of vertices.
    edges : array-like of shape (m, 2)
        Edge list; each row is an unordered pair.  Rows are normalized to
        ``u < v`` and sorted lexicographically.  Duplicate edges, loops and
        out-of-range endpoints raise ``ValueError``.
    """

    def __init__(self, n, edges):
        n = int(n)
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if arr.size:
            lo = np.minimum(arr[:, 0], arr[:, 1])
            hi = np.maximum(arr[:, 0], arr[:, 1])
            if lo.min() < 0 or hi.max() >= n:
                raise ValueError("edge endpoint outside 0..n-1")
            if (lo == hi).any():
                raise ValueError("loops are not allowed")
            keys = lo * n + hi
            order = np.argsort(keys, kind="stable")
            keys = keys[order]
            if keys.size > 1 and (np.diff(keys) == 0).any():
                raise ValueError("duplicate edge in input")
            arr = np.stack([lo[order], hi[order]], axis=1)
        else:
            arr = np.empty((0, 2), dtype=np.int64)
            keys = np.empty(0, dtype=np.int64)
        self.n = n
        self.m = arr.shape[0]
        self.edges = arr.astype(np.int32)
        self.edge_keys = keys  # sorted; key = u*n + v
        both = np.concatenate([arr, arr[:, ::-1]], axis=0) if self.m else arr
        deg = np.zeros(n, dtype=np.int64)
        if self.m:
            deg = np.bincount(both[:, 0], minlength=n)
        self.degrees = deg
        order = np.lexsort((both[:, 1], both[:, 0])) if self.m else np.empty(0, np.int64)
        sorted_nbrs = both[order, 1] if self.m else np.empty(0, np.int64)
        splits = np.cumsum(deg)[:-1] if n else []
        self.neighbors = [a.astype(np.int32) for a in np.split(sorted_nbrs, splits)] if n else []
        self._bits = None
        self._adj = None

    @property
    def bits(self):
        """Per-vertex adjacency bitsets (list of Python ints)."""
        if self._bits is None:
            bits = []
            for v in range(self.n):
                b = 0
                for w in self.neighbors[v]:
                    b |= 1 << int(w)
                bits.append(b)
            self._bits = bits
        return self._bits

    def adjacency_matrix(self):
        """Dense boolean adjacency matrix (cached)."""
        if self._adj is None:
            a = np.zeros((self.n, self.n), dtype=bool)
            if self.m:
                a[self.edges[:, 0], self.edges[:, 1]] = True
                a[self.edges[:, 1], self.edges[:, 0]] = True
            self._adj = a
        return self._adj

    def has_edge(self, u, v):
        if u == v:
            return False
        u, v = (u, v) if u < v else (v, u)
        i = np.searchsorted(self.edge_keys, u * self.n + v)
        return i < self.m and self.edge_keys[i] == u * self.n + v

    def edge_id(self, u, v):
        """Index of edge ``{u, v}`` in the sorted edge list."""
        if u == v:
            raise KeyError((u, v))
        a, b = (u, v) if u < v else (v, u)
        key = a * self.n + b
        i = int(np.searchsorted(self.edge_keys, key))
        if i >= self.m or self.edge_keys[i] != key:
            raise KeyError((u, v))
        return i

    def edge_ids(self, pairs):
        """Vectorized ``edge_id`` for an ``(k, 2)`` array of pairs."""
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        keys = lo * self.n + hi
        idx = np.searchsorted(self.edge_keys, keys)
        bad = (idx >= self.m) | (self.edge_keys[np.minimum(idx, max(self.m - 1, 0))] != keys)
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            raise KeyError((int(pairs[k, 0]), int(pairs[k, 1])))
        return idx

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def complete_graph(n):
    """K_n."""
    iu = np.triu_indices(n, 1)
    return Graph(n, np.stack(iu, axis=1))


def gen_gnp(n, p, seed):
    """Sample G(n, p) deterministically from ``seed``.

    Each of the C(n,2) vertex pairs, taken in lexicographic order, is kept
    independently with probability ``p`` using one uniform draw from a
    Philox stream keyed by ``seed``.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if n < 0:
        raise ValueError("n must be nonnegative")
    rng = stream(seed)
    total = n * (n - 1) // 2
    mask = rng.random(total) < p
    iu = np.triu_indices(n, 1)
    pairs = np.stack(iu, axis=1)[mask]
    return Graph(n, pairs)


@dataclass
class ProcessTrace:
    """A full run of the random graph process.

    ``order`` lists all C(n,2) edges in insertion order; ``tau`` is the
    first index ``i`` such that every edge of the i-edge graph lies in a
    triangle (1-based, equal to the number of edges present).
    """

    n: int
    order: np.ndarray
    tau: int

    def graph_at(self, i):
        """Graph after the first ``i`` insertions."""
        if not 0 <= i <= len(self.order):
            raise ValueError("step out of range")
        return Graph(self.n, self.order[:i])


def gen_process(n, seed):
    """Run the random graph process: insert all edges in uniform order.

    Returns a ProcessTrace whose ``tau`` is the hitting time of the
    "every edge lies in a triangle" property.  Requires ``n >= 3`` (the
    property is never reached on fewer vertices).
    """
    if n < 3:
        raise ValueError("the triangle-cover hitting time needs n >= 3")
    rng = stream(seed)
    iu = np.triu_indices(n, 1)
    pairs = np.stack(iu, axis=1)
    perm = rng.permutation(len(pairs))
    order = pairs[perm]
    bits = [0] * n
    uncovered = set()
    tau = None
    for i in range(len(order)):
        u, v = int(order[i, 0]), int(order[i, 1])
        common = bits[u] & bits[v]
        if common:
            w = common
            while w:
                b = w & (-w)
                w ^= b
                x = b.bit_length() - 1
                uncovered.discard((min(u, x), max(u, x)))
                uncovered.discard((min(v, x), max(v, x)))
        else:
            uncovered.add((min(u, v), max(u, v)))
        bits[u] |= 1 << v
        bits[v] |= 1 << u
        if tau is None and not uncovered:
            tau = i + 1
    return ProcessTrace(n=n, order=order.astype(np.int32), tau=tau)


class TriangleIndex:
    """Triangles of a graph plus edge/vertex incidence.

    Triangle ids follow lexicographic order of the sorted triple
    ``(u, v, w)``.  Incidence lists are ascending.  Built once per graph
    and treated as immutable.
    """

    def __init__(self, graph, triangles):
        self.graph = graph
        t = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
        self.triangles = t.astype(np.int32)
        self.t = t.shape[0]
        n = graph.n
        self.tri_keys = (t[:, 0] * n + t[:, 1]) * n + t[:, 2] if self.t else np.empty(0, np.int64)
        m = graph.m
        if self.t:
            pairs = np.concatenate([t[:, [0, 1]], t[:, [0, 2]], t[:, [1, 2]]], axis=0)
            eids = graph.edge_ids(pairs)
            tids = np.tile(np.arange(self.t, dtype=np.int64), 3)
            order = np.lexsort((tids, eids))
            self.edge_tris = tids[order].astype(np.int32)
            self.edge_indptr = np.zeros(m + 1, dtype=np.int64)
            np.cumsum(np.bincount(eids, minlength=m), out=self.edge_indptr[1:])
            vids = t.reshape(-1)
            tvids = np.repeat(np.arange(self.t, dtype=np.int64), 3)
            order = np.lexsort((tvids, vids))
            self.vertex_tris = tvids[order].astype(np.int32)
            self.vertex_indptr = np.zeros(n + 1, dtype=np.int64)
            np.cumsum(np.bincount(vids, minlength=n), out=self.vertex_indptr[1:])
        else:
            self.edge_tris = np.empty(0, np.int32)
            self.edge_indptr = np.zeros(m + 1, dtype=np.int64)
            self.vertex_tris = np.empty(0, np.int32)
            self.vertex_indptr = np.zeros(n + 1, dtype=np.int64)
        self._edge_tri_matrix = None

    def edge_incidence(self, eid):
        """Ids of triangles containing edge ``eid`` (ascending)."""
        return self.edge_tris[self.edge_indptr[eid]:self.edge_indptr[eid + 1]]

    def vertex_incidence(self, v):
        """Ids of triangles containing vertex ``v`` (ascending)."""
        return self.vertex_tris[self.vertex_indptr[v]:self.vertex_indptr[v + 1]]

    def edge_incidence_counts(self):
        return np.diff(self.edge_indptr)

    def triangle_id(self, u, v, w):
        a, b, c = sorted((int(u), int(v), int(w)))
        key = (a * self.graph.n + b) * self.graph.n + c
        i = int(np.searchsorted(self.tri_keys, key))
        if i >= self.t or self.tri_keys[i] != key:
            raise KeyError((u, v, w))
        return i

    def edge_triangle_matrix(self):
        """Sparse edge-by-triangle incidence matrix (CSR, float64, cached)."""
        if self._edge_tri_matrix is None:
            import scipy.sparse as sp

            self._edge_tri_matrix = sp.csr_matrix(
                (np.ones(len(self.edge_tris)), self.edge_tris, self.edge_indptr),
                shape=(self.graph.m, self.t),
            )
        return self._edge_tri_matrix

    def __repr__(self):
        return f"TriangleIndex(t={self.t}, graph={self.graph!r})"


def build_triangle_index(graph):
    """Enumerate all triangles of ``graph`` in lexicographic order."""
    bits = graph.bits
    tris = []
    n = graph.n
    full = (1 << n) - 1
    for eid in range(graph.m):
        u = int(graph.edges[eid, 0])
        v = int(graph.edges[eid, 1])
        above = full ^ ((1 << (v + 1)) - 1)
        m = bits[u] & bits[v] & above
        while m:
            b = m & (-m)
            m ^= b
            tris.append((u, v, b.bit_length() - 1))
    return TriangleIndex(graph, np.array(tris, dtype=np.int64).reshape(-1, 3))


def uncovered_edges(graph, index):
    """Edge ids lying in no triangle."""
    return np.flatnonzero(index.edge_incidence_counts() == 0)


@dataclass
class GraphStats:
    """Degree/codegree extremes and concentration flags at a reference p."""

    n: int
    m: int
    p: float
    min_degree: int
    max_degree: int
    max_degree_deviation: float
    degree_flag: bool
    min_codegree: int
    max_codegree: int
    max_codegree_deviation: float
    codegree_flag: bool


def graph_stats(graph, p):
    """Degree and codegree statistics against the G(n,p) expectations.

    The flags test ``|deg - np| <= n^{-0.2} np`` for every vertex and
    ``|codeg - np^2| <= n^{-0.1} np^2`` for every vertex pair.  Deviations
    are reported relative to the expectation (0 when both sides are 0).
    """
    n = graph.n
    deg = graph.degrees
    mean_deg = n * p
    if n:
        dev = np.abs(deg - mean_deg)
        max_deg_dev = float(dev.max() / mean_deg) if mean_deg > 0 else (float("inf") if dev.max() > 0 else 0.0)
        degree_flag = bool(dev.max() <= n ** (-0.2) * mean_deg) if mean_deg > 0 else bool(dev.max() == 0)
        min_d, max_d = int(deg.min()), int(deg.max())
    else:
        max_deg_dev, degree_flag, min_d, max_d = 0.0, True, 0, 0
    if n >= 2:
        a = graph.adjacency_matrix().astype(np.float64)
        codeg = a @ a
        off = ~np.eye(n, dtype=bool)
        comin = int(codeg[off].min())
        comax = int(codeg[off].max())
        mean_co = n * p * p
        lo = abs(comin - mean_co)
        hi = abs(comax - mean_co)
        worst = max(lo, hi)
        max_co_dev = float(worst / mean_co) if mean_co > 0 else (float("inf") if worst > 0 else 0.0)
        codeg_flag = bool(worst <= n ** (-0.1) * mean_co) if mean_co > 0 else bool(worst == 0)
    else:
        comin = comax = 0
        max_co_dev, codeg_flag = 0.0, True
    return GraphStats(
        n=n,
        m=graph.m,
        p=float(p),
        min_degree=min_d,
        max_degree=max_d,
        max_degree_deviation=max_deg_dev,
        degree_flag=degree_flag,
        min_codegree=comin,
        max_codegree=comax,
        max_codegree_deviation=max_co_dev,
        codegree_flag=codeg_flag,
    )


def write_graph(path, graph, header_comments=()):
    """Write the plain-text edge-list format: ``n m`` then sorted ``u v`` lines."""
    with open(path, "w", newline="\n") as fh:
        for line in header_comments:
            fh.write(f"# {line}\n")
        fh.write(f"{graph.n} {graph.m}\n")
        for u, v in graph.edges:
            fh.write(f"{u} {v}\n")


def read_graph(path):
    """Parse the edge-list format; malformed or out-of-range input raises."""
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
                    raise ValueError("expected header 'n m'")
                header = (int(parts[0]), int(parts[1]))
                continue
            if len(parts) != 2:
                raise ValueError(f"expected an edge line 'u v', got {line!r}")
            rows.append((int(parts[0]), int(parts[1])))
    if header is None:
        raise ValueError("empty graph file")
    n, m = header
    if len(rows) != m:
        raise ValueError(f"header promises {m} edges, file has {len(rows)}")
    for u, v in rows:
        if not 0 <= u < v < n:
            raise ValueError(f"edge ({u}, {v}) violates 0 <= u < v < n = {n}")
    return Graph(n, np.array(rows, dtype=np.int64).reshape(-1, 2))


def write_process_trace(path, trace):
    """Write a ProcessTrace: ``n``, then ``step u v`` lines, then ``tau``."""
    with open(path, "w", newline="\n") as fh:
        fh.write(f"{trace.n}\n")
        for i, (u, v) in enumerate(trace.order, start=1):
            fh.write(f"{i} {u} {v}\n")
        fh.write(f"tau {trace.tau if trace.tau is not None else 'none'}\n")


def read_process_trace(path):
    with open(path) as fh:
        lines = [ln.split("#", 1)[0].strip() for ln in fh]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty trace file")
    n = int(lines[0])
    total = n * (n - 1) // 2
    if len(lines) != total + 2:
        raise ValueError("trace line count does not match C(n,2)")
    order = np.empty((total, 2), dtype=np.int32)
    for i in range(total):
        step, u, v = lines[1 + i].split()
        if int(step) != i + 1:
            raise ValueError("trace steps must be 1..C(n,2) in order")
        order[i] = (int(u), int(v))
    tail = lines[-1].split()
    if tail[0] != "tau":
        raise ValueError("missing tau line")
    tau = None if tail[1] == "none" else int(tail[1])
    return ProcessTrace(n=n, order=order, tau=tau)


def triangle_density_threshold(n):
    """The triangle-coverage critical probability sqrt(3 log n / (2 n))."""
    if n < 2:
        raise ValueError("threshold needs n >= 2")
    return math.sqrt(3.0 * math.log(n) / (2.0 * n))
