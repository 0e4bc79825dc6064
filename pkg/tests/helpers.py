"""Shared brute-force oracles for the test suite.

Everything here is written for clarity, not speed: triple loops and
itertools over labeled tuples.  Tests compare the library's vectorized
implementations against these.
"""

import itertools

import numpy as np

from ftdkit.graphs import Graph


def brute_triangles(graph):
    """All triangles as sorted tuples, by triple loop over vertex triples."""
    a = graph.adjacency_matrix()
    out = []
    for u in range(graph.n):
        for v in range(u + 1, graph.n):
            if not a[u, v]:
                continue
            for w in range(v + 1, graph.n):
                if a[u, w] and a[v, w]:
                    out.append((u, v, w))
    return out


def brute_uncovered(graph):
    """Edges (as sorted pairs) lying in no triangle."""
    a = graph.adjacency_matrix()
    out = []
    for u, v in graph.edges:
        u, v = int(u), int(v)
        if not any(a[u, w] and a[v, w] for w in range(graph.n)):
            out.append((u, v))
    return out


def graph_from_pairs(n, pairs):
    return Graph(n, np.array(list(pairs), dtype=np.int64).reshape(-1, 2))


def petersen_graph():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return graph_from_pairs(10, outer + spokes + inner)


def edge_set(graph):
    return {(int(u), int(v)) for u, v in graph.edges}


def induced_edge_count(graph, vertices):
    vs = sorted(set(vertices))
    es = edge_set(graph)
    return sum(1 for a, b in itertools.combinations(vs, 2) if (a, b) in es)


# ---------------------------------------------------------------------------
# explicit gadget enumeration (the slow, obviously-correct reference)


def enumerate_bowties(graph, u, v):
    """All labeled (u,v)-bowties as (u,v,a1,a2,b1,b2,c) tuples."""
    adj = graph.adjacency_matrix()
    n = graph.n
    for c in range(n):
        if c in (u, v):
            continue
        a_pool = [z for z in range(n) if adj[u, z] and adj[c, z] and z != v]
        for a1, a2 in itertools.permutations(a_pool, 2):
            if not adj[a1, a2]:
                continue
            b_pool = [
                z
                for z in range(n)
                if adj[v, z] and adj[c, z] and z != u and z != a1 and z != a2
            ]
            for b1, b2 in itertools.permutations(b_pool, 2):
                if adj[b1, b2]:
                    yield (u, v, a1, a2, b1, b2, c)


def _paths_via(adj, inside, cur, target, left, path, acc):
    if left == 1:
        if adj[cur][target]:
            acc.append(tuple(path) + (target,))
        return
    for w in inside:
        if w != target and w not in path and adj[cur][w]:
            path.append(w)
            _paths_via(adj, inside, w, target, left - 1, path, acc)
            path.pop()


def enumerate_pinwheels(graph, u, v, k=4):
    """All labeled pinwheels with w_0 = u, w_{2k-1} = v, as (center, perimeter)."""
    adj = graph.adjacency_matrix()
    n = graph.n
    out = []
    for c in range(n):
        if c in (u, v) or not (adj[c, u] and adj[c, v]):
            continue
        inside = [z for z in range(n) if adj[c, z]]
        acc = []
        _paths_via(adj, inside, u, v, 2 * k - 1, [u], acc)
        for per in acc:
            out.append((c, per))
    return out


def brute_apply_F(graph, index, w, k=4):
    """Literal F: enumerate every labeled pinwheel of every edge and average."""
    from ftdkit.weighting import edge_sums

    tid = {tuple(int(x) for x in t): i for i, t in enumerate(index.triangles)}
    es = edge_sums(w)
    vals = w.values.copy()
    L = 2 * k
    for eid in range(graph.m):
        u, v = (int(x) for x in graph.edges[eid])
        fam = enumerate_pinwheels(graph, u, v, k) + enumerate_pinwheels(graph, v, u, k)
        assert fam, f"edge ({u},{v}) has no pinwheels; pick a denser test graph"
        delta = es[eid] - 1.0
        phi = {}
        for c, per in fam:
            for i in range(L):
                tri = tuple(sorted((c, per[i], per[(i + 1) % L])))
                phi[tri] = phi.get(tri, 0.0) + (-1.0) ** (i + 1)
        for tri, coeff in phi.items():
            vals[tid[tri]] -= delta * coeff / len(fam)
    return vals


def brute_bowtie_balance(graph, index, w):
    """Literal Stage-2 correction from per-pair bowtie enumeration."""
    from ftdkit.weighting import vertex_defects

    delta = vertex_defects(w)
    n = graph.n
    tid = {tuple(int(x) for x in t): i for i, t in enumerate(index.triangles)}
    out = w.values.copy()
    for u in range(n):
        if delta[u] == 0:
            continue
        for v in range(n):
            if v == u:
                continue
            fam = list(enumerate_bowties(graph, u, v))
            assert fam, f"pair ({u},{v}) has no bowties; pick a denser test graph"
            sc = delta[u] / (n * len(fam))
            for (uu, vv, a1, a2, b1, b2, c) in fam:
                out[tid[tuple(sorted((uu, a1, a2)))]] -= sc
                out[tid[tuple(sorted((c, b1, b2)))]] -= sc
                out[tid[tuple(sorted((c, a1, a2)))]] += sc
                out[tid[tuple(sorted((vv, b1, b2)))]] += sc
    return out


def brute_rooted_extension_count(pattern, graph, phi):
    """Count injective extensions by trying every assignment of free vertices."""
    h = pattern.graph
    free = pattern.free_vertices()
    hedges = [
        (int(a), int(b))
        for a, b in h.edges
        if not (int(a) in pattern.roots and int(b) in pattern.roots)
    ]
    adj = graph.adjacency_matrix()
    used = set(phi.values())
    pool = [x for x in range(graph.n) if x not in used]
    count = 0
    for images in itertools.permutations(pool, len(free)):
        psi = dict(phi)
        psi.update(zip(free, images))
        if all(adj[psi[a], psi[b]] for a, b in hedges):
            count += 1
    return count
