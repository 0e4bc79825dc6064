"""Aggregated bowtie counting and vertex-defect balancing.

A labeled (u,v)-bowtie is (c, ordered edge in N(u) cap N(c) avoiding v,
ordered edge in N(v) cap N(c) avoiding the a-side vertices).  Summing the
bowtie functions over a whole family never requires listing embeddings:
for a fixed (u, c) and an edge {x, y} of G[N(u) cap N(c)], the number of
compatible b-side choices is 4 e(S_{v,c} minus {u,x,y}), and that induced
edge count follows from inclusion-exclusion over at most three removed
vertices.  Both passes below walk the same (u, c, {x,y}, v) space: the
first accumulates the counts |B_{u,v}|, the second accumulates the
weighted triangle corrections that balance the vertex defects.

The inclusion-exclusion tables are cubic in n, which is what caps the
supported size (the guard lives in gadgets.bowtie_balance).
"""

import numpy as np

__all__ = ["common_edge_lists", "exclusion_tables", "count_pass", "balance_pass"]

_JITTED = {}


def _get(name, pyfunc):
    if name not in _JITTED:
        try:
            import numba

            _JITTED[name] = numba.njit(cache=True)(pyfunc)
        except Exception:
            _JITTED[name] = pyfunc
    return _JITTED[name]


def common_edge_lists(graph):
    """CSR over ordered vertex pairs (w, c): the edges of G[N(w) cap N(c)].

    Returns (indptr, ex, ey) with indptr of length n*n + 1; the slice for
    pair (w, c) lists edge endpoints x < y with {x, y} inside the common
    neighborhood.
    """
    n = graph.n
    adj = graph.adjacency_matrix()
    pair_ids = []
    exs = []
    eys = []
    for eid in range(graph.m):
        x = int(graph.edges[eid, 0])
        y = int(graph.edges[eid, 1])
        common = np.flatnonzero(adj[x] & adj[y]).astype(np.int64)
        k = len(common)
        if k < 2:
            continue
        w = np.repeat(common, k)
        c = np.tile(common, k)
        keep = w != c
        pid = w[keep] * n + c[keep]
        pair_ids.append(pid)
        exs.append(np.full(len(pid), x, np.int32))
        eys.append(np.full(len(pid), y, np.int32))
    if not pair_ids:
        return np.zeros(n * n + 1, np.int64), np.empty(0, np.int32), np.empty(0, np.int32)
    pid = np.concatenate(pair_ids)
    ex = np.concatenate(exs)
    ey = np.concatenate(eys)
    order = np.argsort(pid, kind="stable")
    pid, ex, ey = pid[order], ex[order], ey[order]
    indptr = np.zeros(n * n + 1, np.int64)
    np.cumsum(np.bincount(pid, minlength=n * n), out=indptr[1:])
    return indptr, ex, ey


def exclusion_tables(graph):
    """D3[v, c, z] = |N(z) cap N(v) cap N(c)| and E2[v, c] = e(N(v) cap N(c))."""
    n = graph.n
    adj = graph.adjacency_matrix()
    af = adj.astype(np.float32)
    d3 = np.empty((n, n, n), np.int32)
    e2 = np.empty((n, n), np.int64)
    for c in range(n):
        cols = np.flatnonzero(adj[c])
        if len(cols) == 0:
            d3[:, c, :] = 0
            e2[:, c] = 0
            continue
        ac = af[:, cols]
        d3c = (ac @ ac.T).astype(np.int32)
        d3[:, c, :] = d3c
        member = adj & adj[c][None, :]
        e2[:, c] = (d3c * member).sum(axis=1) // 2
    return d3, e2


def _count_pass_py(n, adj, indptr, ex, ey, d3, e2, out):
    for w in range(n):
        base = w * n
        for c in range(n):
            s = indptr[base + c]
            t = indptr[base + c + 1]
            if s == t:
                continue
            for v in range(n):
                if v == w or v == c:
                    continue
                mw = adj[v, w] & adj[c, w]
                acc = 0
                for i in range(s, t):
                    x = ex[i]
                    y = ey[i]
                    if v == x or v == y:
                        continue
                    mx = adj[v, x]
                    my = adj[v, y]
                    q = (
                        e2[v, c]
                        - mx * d3[v, c, x]
                        - my * d3[v, c, y]
                        - mw * d3[v, c, w]
                        + mx * my
                        + mw * mx
                        + mw * my
                    )
                    acc += q
                out[w, v] += 4 * acc
    return


def _balance_pass_py(n, adj, indptr, ex, ey, d3, e2, lam, tri_keys, delta_tri):
    for w in range(n):
        base = w * n
        for c in range(n):
            s = indptr[base + c]
            t = indptr[base + c + 1]
            if s == t:
                continue
            for i in range(s, t):
                x = ex[i]
                y = ey[i]
                # triangle ids for {w,x,y} and {c,x,y}; x < y always
                a0, a1, a2 = x, y, w
                if a2 < a0:
                    a0, a1, a2 = w, x, y
                elif a2 < a1:
                    a0, a1, a2 = x, w, y
                key_w = (a0 * n + a1) * n + a2
                tw = np.searchsorted(tri_keys, key_w)
                b0, b1, b2 = x, y, c
                if b2 < b0:
                    b0, b1, b2 = c, x, y
                elif b2 < b1:
                    b0, b1, b2 = x, c, y
                key_c = (b0 * n + b1) * n + b2
                tc = np.searchsorted(tri_keys, key_c)
                for v in range(n):
                    if v == w or v == c or v == x or v == y:
                        continue
                    lv = lam[w, v]
                    if lv == 0.0:
                        continue
                    mw = adj[v, w] & adj[c, w]
                    mx = adj[v, x]
                    my = adj[v, y]
                    q = (
                        e2[v, c]
                        - mx * d3[v, c, x]
                        - my * d3[v, c, y]
                        - mw * d3[v, c, w]
                        + mx * my
                        + mw * mx
                        + mw * my
                    )
                    if q == 0:
                        continue
                    val = 4.0 * q * lv
                    delta_tri[tw] += val
                    delta_tri[tc] -= val
    return


def count_pass(graph, indptr, ex, ey, d3, e2):
    """All ordered-pair labeled bowtie counts as an (n, n) int64 matrix."""
    n = graph.n
    out = np.zeros((n, n), np.int64)
    adj = graph.adjacency_matrix().astype(np.uint8)
    fn = _get("count", _count_pass_py)
    fn(n, adj, indptr, ex, ey, d3, e2, out)
    return out


def balance_pass(graph, index, indptr, ex, ey, d3, e2, lam):
    """Accumulated triangle correction sum_(u,v) Lambda-weighted bowtie mass."""
    n = graph.n
    adj = graph.adjacency_matrix().astype(np.uint8)
    delta_tri = np.zeros(index.t, np.float64)
    fn = _get("balance", _balance_pass_py)
    fn(n, adj, indptr, ex, ey, d3, e2, lam, index.tri_keys, delta_tri)
    return delta_tri
