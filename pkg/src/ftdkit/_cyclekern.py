"""Exactly-once enumeration of 2k-cycles inside vertex neighborhoods.

This is the computational core of the pinwheel operator.  For each center
c, every undirected 2k-cycle in G[N(c)] is visited once (canonical form:
started at its minimum local vertex, oriented so the second vertex is
smaller than the last).  Visiting a cycle adds the position-parity sign
(-1)^(a+b) to a dense pair-count matrix over the local edges; the matrix
diagonal is the per-edge cycle-through count.

Two interchangeable passes share the algorithm: a numba-compiled int64
bitmask version for local degree <= 62, and a plain-Python big-integer
version for larger neighborhoods.
"""

import numpy as np

__all__ = ["cycle_pair_matrix", "signed_pinwheel_matrix"]

_JIT = None
_JIT_FAILED = False


def _cycle_pair_pass(d, adjmask, eslot, two_k, mloc):
    # int64-bitmask pass, d <= 62 (vertex shifts stay below the sign bit)
    L = two_k
    path = np.empty(L, np.int64)
    cand = np.empty(L + 1, np.int64)
    dist = np.empty(d, np.int64)
    queue = np.empty(d, np.int64)
    distmask = np.empty(L + 1, np.int64)
    slots = np.empty(L, np.int64)
    total = 0
    for r in range(d - L + 1, -1, -1):
        # r is the smallest local index on the cycle
        ge_mask = np.int64(0)
        for v in range(r + 1, d):
            ge_mask |= np.int64(1) << v
        for v in range(d):
            dist[v] = 127
        dist[r] = 0
        qh, qt = 0, 0
        queue[qt] = r
        qt += 1
        while qh < qt:
            u = queue[qh]
            qh += 1
            du = dist[u] + 1
            if du > L:
                continue
            m = adjmask[u] & ge_mask
            while m != 0:
                b = m & (-m)
                m ^= b
                v = 0
                bb = b
                if bb & np.int64(0xFFFFFFFF) == 0:
                    v += 32
                    bb >>= 32
                if bb & np.int64(0xFFFF) == 0:
                    v += 16
                    bb >>= 16
                if bb & np.int64(0xFF) == 0:
                    v += 8
                    bb >>= 8
                if bb & np.int64(0xF) == 0:
                    v += 4
                    bb >>= 4
                if bb & np.int64(0x3) == 0:
                    v += 2
                    bb >>= 2
                if bb & np.int64(0x1) == 0:
                    v += 1
                if dist[v] > du:
                    dist[v] = du
                    queue[qt] = v
                    qt += 1
        for s in range(L + 1):
            dm = np.int64(0)
            for v in range(r + 1, d):
                if dist[v] <= s:
                    dm |= np.int64(1) << v
            distmask[s] = dm
        path[0] = r
        adj_r = adjmask[r]
        visited = np.int64(1) << r
        j = 1
        cand[1] = adj_r & ge_mask & distmask[L - 1]
        while j >= 1:
            m = cand[j]
            if m == 0:
                j -= 1
                if j >= 1:
                    visited &= ~(np.int64(1) << path[j])
                continue
            b = m & (-m)
            cand[j] = m ^ b
            v = 0
            bb = b
            if bb & np.int64(0xFFFFFFFF) == 0:
                v += 32
                bb >>= 32
            if bb & np.int64(0xFFFF) == 0:
                v += 16
                bb >>= 16
            if bb & np.int64(0xFF) == 0:
                v += 8
                bb >>= 8
            if bb & np.int64(0xF) == 0:
                v += 4
                bb >>= 4
            if bb & np.int64(0x3) == 0:
                v += 2
                bb >>= 2
            if bb & np.int64(0x1) == 0:
                v += 1
            if j == L - 1:
                path[j] = v
                total += 1
                for a in range(L - 1):
                    slots[a] = eslot[path[a], path[a + 1]]
                slots[L - 1] = eslot[path[L - 1], path[0]]
                for a in range(L):
                    ea = slots[a]
                    for bq in range(a, L):
                        eb = slots[bq]
                        if ((a ^ bq) & 1) == 0:
                            mloc[ea, eb] += 1
                        else:
                            mloc[ea, eb] -= 1
                continue
            path[j] = v
            visited |= b
            nxt = adjmask[v] & ge_mask & ~visited & distmask[L - 1 - j]
            if j + 1 == L - 1:
                nxt &= adj_r
                # canonical direction: closing vertex larger than path[1]
                lo = path[1]
                gt = np.int64(0)
                for w in range(lo + 1, d):
                    gt |= np.int64(1) << w
                nxt &= gt
            cand[j + 1] = nxt
            j += 1
    return total


def _cycle_pair_pass_bigint(d, adjbits, eslot, two_k, mloc):
    # same walk with Python integers; no degree cap
    L = two_k
    path = [0] * L
    cand = [0] * (L + 1)
    slots = [0] * L
    total = 0
    for r in range(d - L, -1, -1):
        ge_mask = ((1 << d) - 1) ^ ((1 << (r + 1)) - 1)
        dist = [L + 2] * d
        dist[r] = 0
        queue = [r]
        qh = 0
        while qh < len(queue):
            u = queue[qh]
            qh += 1
            du = dist[u] + 1
            if du > L:
                continue
            m = adjbits[u] & ge_mask
            while m:
                b = m & (-m)
                m ^= b
                v = b.bit_length() - 1
                if dist[v] > du:
                    dist[v] = du
                    queue.append(v)
        distmask = []
        for s in range(L + 1):
            dm = 0
            for v in range(r + 1, d):
                if dist[v] <= s:
                    dm |= 1 << v
            distmask.append(dm)
        path[0] = r
        adj_r = adjbits[r]
        visited = 1 << r
        j = 1
        cand[1] = adj_r & ge_mask & distmask[L - 1]
        while j >= 1:
            m = cand[j]
            if m == 0:
                j -= 1
                if j >= 1:
                    visited &= ~(1 << path[j])
                continue
            b = m & (-m)
            cand[j] = m ^ b
            v = b.bit_length() - 1
            if j == L - 1:
                path[j] = v
                total += 1
                for a in range(L - 1):
                    slots[a] = eslot[path[a], path[a + 1]]
                slots[L - 1] = eslot[path[L - 1], path[0]]
                for a in range(L):
                    ea = slots[a]
                    for bq in range(a, L):
                        if ((a ^ bq) & 1) == 0:
                            mloc[ea, slots[bq]] += 1
                        else:
                            mloc[ea, slots[bq]] -= 1
                continue
            path[j] = v
            visited |= b
            nxt = adjbits[v] & ge_mask & ~visited & distmask[L - 1 - j]
            if j + 1 == L - 1:
                nxt &= adj_r
                gt = ((1 << d) - 1) ^ ((1 << (path[1] + 1)) - 1)
                nxt &= gt
            cand[j + 1] = nxt
            j += 1
    return total


def _jit_pass():
    global _JIT, _JIT_FAILED
    if _JIT is None and not _JIT_FAILED:
        try:
            import numba

            _JIT = numba.njit(cache=True)(_cycle_pair_pass)
        except Exception:
            _JIT_FAILED = True
    return _JIT


def cycle_pair_matrix(sub, two_k):
    """Signed pair counts for one neighborhood subgraph.

    ``sub`` is the boolean adjacency matrix of G[N(c)].  Returns
    (eslot, mloc, total): local edge slot matrix, symmetric pair-count
    matrix over local edges, and the number of 2k-cycles found.
    """
    d = sub.shape[0]
    ne = 0
    eslot = np.full((d, d), -1, np.int64)
    for i in range(d):
        for j in range(i + 1, d):
            if sub[i, j]:
                eslot[i, j] = ne
                eslot[j, i] = ne
                ne += 1
    mloc = np.zeros((ne, ne), np.int64)
    if d < two_k or ne < two_k:
        return eslot, mloc, 0
    fn = _jit_pass()
    if d <= 62 and fn is not None:
        adjmask = np.zeros(d, np.int64)
        for i in range(d):
            adjmask[i] = int.from_bytes(
                np.packbits(sub[i], bitorder="little").tobytes(), "little"
            )
        total = fn(d, adjmask, eslot, two_k, mloc)
    else:
        adjbits = []
        for i in range(d):
            adjbits.append(
                int.from_bytes(np.packbits(sub[i], bitorder="little").tobytes(), "little")
            )
        total = _cycle_pair_pass_bigint(d, adjbits, eslot, two_k, mloc)
    full = mloc + mloc.T
    np.fill_diagonal(full, np.diag(mloc))
    return eslot, full, total


def signed_pinwheel_matrix(graph, index, k):
    """Aggregate all centers into the global signed pair-count structure.

    Returns (N, s_counts): N is a sparse (t x m) integer-valued matrix
    whose (T, e) entry sums (-1)^(i+j) over all (center, 2k-cycle)
    incidences placing T at position i and e at position j; s_counts[e]
    is |S(e)|, twice the number of (center, cycle) pairs through e.
    """
    import scipy.sparse as sp

    if k < 2:
        raise ValueError("wheel half-length k must be >= 2")
    n = graph.n
    adj = graph.adjacency_matrix()
    tri_keys = index.tri_keys
    s_counts = np.zeros(graph.m, dtype=np.int64)
    rows, cols, vals = [], [], []
    for c in range(n):
        loc = np.flatnonzero(adj[c]).astype(np.int64)
        d = len(loc)
        if d < 2 * k:
            continue
        sub = adj[np.ix_(loc, loc)]
        eslot, full, total = cycle_pair_matrix(sub, 2 * k)
        if total == 0:
            continue
        li, lj = np.nonzero(np.triu(eslot >= 0))
        order = np.argsort(eslot[li, lj])
        li, lj = li[order], lj[order]  # slot id order
        gx, gy = loc[li], loc[lj]  # gx < gy since loc ascends
        gedge = np.searchsorted(graph.edge_keys, gx * n + gy)
        trip = np.sort(np.stack([np.full(len(gx), c, np.int64), gx, gy], axis=1), axis=1)
        keys = (trip[:, 0] * n + trip[:, 1]) * n + trip[:, 2]
        gtri = np.searchsorted(tri_keys, keys)
        s_counts[gedge] += 2 * np.diag(full)
        nz_r, nz_c = np.nonzero(full)
        rows.append(gtri[nz_r])
        cols.append(gedge[nz_c])
        vals.append(full[nz_r, nz_c])
    if rows:
        data = np.concatenate(vals).astype(np.float64)
        coo = sp.coo_matrix(
            (data, (np.concatenate(rows), np.concatenate(cols))),
            shape=(index.t, graph.m),
        )
        mat = coo.tocsr()
    else:
        mat = sp.csr_matrix((index.t, graph.m))
    return mat, s_counts
