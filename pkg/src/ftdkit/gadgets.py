"""Bowtie and pinwheel gadgets, rooted patterns, and the pattern families.

The two gadget operations the solver relies on are implemented in
aggregated form: bowtie_balance never lists individual bowties and
apply_F never lists individual pinwheels.  Both are exact reformulations
of the per-embedding averages and are cross-checked against explicit
enumeration in the test suite.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _bowtiekern
from ._cyclekern import signed_pinwheel_matrix
from .errors import CapacityError, GadgetMissingError, PatternDomainError
from .graphs import Graph
from .weighting import Weighting, edge_sums, vertex_defects

__all__ = [
    "BowtieEmbedding",
    "PinwheelEmbedding",
    "RootedPattern",
    "PinwheelData",
    "StageDiagnostics",
    "bowtie_count",
    "bowtie_count_all",
    "bowtie_balance",
    "pinwheel_count",
    "pinwheel_data",
    "apply_F",
    "naive_adjust",
    "rooted_extension_count",
    "rooted_extensions",
    "build_family",
    "index_sets",
    "stage_diagnostics",
    "write_pattern",
    "read_pattern",
]

BALANCE_MAX_N = 350  # the exclusion tables are n^3 int32


@dataclass
class BowtieEmbedding:
    """Labeled (u,v)-bowtie: apexes u,v, a/b triangle pairs, shared center c."""

    u: int
    v: int
    a1: int
    a2: int
    b1: int
    b2: int
    c: int

    def vertices(self):
        return (self.u, self.v, self.a1, self.a2, self.b1, self.b2, self.c)

    def assert_valid(self, graph):
        vs = self.vertices()
        if len(set(vs)) != 7:
            raise ValueError("bowtie vertices must be distinct")
        for a, b in [
            (self.u, self.a1), (self.u, self.a2), (self.a1, self.a2),
            (self.a1, self.c), (self.a2, self.c), (self.v, self.b1),
            (self.v, self.b2), (self.b1, self.b2), (self.b1, self.c),
            (self.b2, self.c),
        ]:
            if not graph.has_edge(a, b):
                raise ValueError(f"bowtie edge ({a},{b}) missing in graph")

    def weight_function(self):
        """The four-triangle signed indicator: +u-side apex, +center b-side."""
        return {
            tuple(sorted((self.u, self.a1, self.a2))): 1.0,
            tuple(sorted((self.c, self.b1, self.b2))): 1.0,
            tuple(sorted((self.c, self.a1, self.a2))): -1.0,
            tuple(sorted((self.v, self.b1, self.b2))): -1.0,
        }


@dataclass
class PinwheelEmbedding:
    """Labeled (u,v)-pinwheel: center c, perimeter w_0 = u, ..., w_{2k-1} = v."""

    center: int
    perimeter: tuple

    @property
    def k(self):
        return len(self.perimeter) // 2

    def assert_valid(self, graph):
        per = self.perimeter
        L = len(per)
        if L % 2 or L < 4:
            raise ValueError("perimeter length must be an even number >= 4")
        if len(set(per)) != L or self.center in per:
            raise ValueError("pinwheel vertices must be distinct")
        for i in range(L):
            if not graph.has_edge(per[i], per[(i + 1) % L]):
                raise ValueError("perimeter cycle edge missing")
            if not graph.has_edge(self.center, per[i]):
                raise ValueError("spoke edge missing")

    def weight_function(self):
        """Signed triangle indicator, base triangle (c, w_0, w_{2k-1}) at +1."""
        per = self.perimeter
        L = len(per)
        out = {}
        for i in range(L):
            tri = tuple(sorted((self.center, per[i], per[(i + 1) % L])))
            out[tri] = out.get(tri, 0.0) + (-1.0) ** (i + 1)
        return out


def bowtie_count(graph, u, v):
    """Number of labeled (u,v)-bowties (ordered a-pair, ordered b-pair)."""
    if u == v:
        raise ValueError("bowtie apexes must be distinct")
    n = graph.n
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError("vertex out of range")
    bits = graph.bits
    total = 0
    for c in range(n):
        if c == u or c == v:
            continue
        a = bits[u] & bits[c] & ~(1 << v)
        b = bits[v] & bits[c] & ~(1 << u)
        if a == 0 or b == 0:
            continue
        ea = eb = eab = 0
        cross = 0
        ab = a & b
        m = a
        while m:
            z = m & (-m)
            m ^= z
            zi = z.bit_length() - 1
            da = (bits[zi] & a).bit_count()
            ea += da
            if z & b:
                db = (bits[zi] & b).bit_count()
                cross += da * db
                eab += (bits[zi] & ab).bit_count()
        mm = b
        while mm:
            z = mm & (-mm)
            mm ^= z
            eb += (bits[z.bit_length() - 1] & b).bit_count()
        ea //= 2
        eb //= 2
        eab //= 2
        total += 4 * (ea * eb - cross + eab)
    return total


def _common_structures(graph):
    indptr, ex, ey = _bowtiekern.common_edge_lists(graph)
    d3, e2 = _bowtiekern.exclusion_tables(graph)
    return indptr, ex, ey, d3, e2


def bowtie_count_all(graph):
    """All ordered-pair bowtie counts at once; (n, n) matrix, zero diagonal."""
    if graph.n > BALANCE_MAX_N:
        raise CapacityError(
            f"bowtie tables need n^3 working memory; n = {graph.n} exceeds {BALANCE_MAX_N}"
        )
    indptr, ex, ey, d3, e2 = _common_structures(graph)
    return _bowtiekern.count_pass(graph, indptr, ex, ey, d3, e2)


def bowtie_balance(graph, index, sigma):
    """Remove vertex defects by averaging over all (u,v)-bowtie families.

    Computes phi0 = sigma - (1/n) sum_u delta(u) sum_{v != u}
    |B_{u,v}|^{-1} sum_{psi in B_{u,v}} psi, in aggregated form.  Output
    vertex defects all equal the mean input defect (zero whenever the
    input defects sum to zero, e.g. any uniform weighting).
    """
    n = graph.n
    delta = vertex_defects(sigma)
    if n == 0 or not delta.any():
        return sigma.copy()
    if n > BALANCE_MAX_N:
        raise CapacityError(
            f"bowtie balancing needs n^3 working memory; n = {n} exceeds {BALANCE_MAX_N}"
        )
    indptr, ex, ey, d3, e2 = _common_structures(graph)
    counts = _bowtiekern.count_pass(graph, indptr, ex, ey, d3, e2)
    need = delta != 0.0
    off = ~np.eye(n, dtype=bool)
    bad = need[:, None] & off & (counts == 0)
    if bad.any():
        u, v = np.argwhere(bad)[0]
        raise GadgetMissingError(
            f"no (u,v)-bowties for pair ({u},{v}) with nonzero defect at {u}",
            witness=(int(u), int(v)),
        )
    lam = np.zeros((n, n))
    safe = counts > 0
    diff = delta[:, None] - delta[None, :]
    lam[safe] = diff[safe] / (n * counts[safe])
    corr = _bowtiekern.balance_pass(graph, index, indptr, ex, ey, d3, e2, lam)
    return Weighting(index, sigma.values - corr)


def pinwheel_count(graph, e, k=4):
    """|S(e)|: labeled 2k-pinwheels with base edge e, both orientations."""
    if k < 2:
        raise ValueError("wheel half-length k must be >= 2")
    u, v = (int(e[0]), int(e[1])) if not isinstance(e, (int, np.integer)) else (
        int(graph.edges[e, 0]), int(graph.edges[e, 1]))
    graph.edge_id(u, v)  # raises KeyError when e is not an edge
    bits = graph.bits
    L = 2 * k
    centers = bits[u] & bits[v]
    total = 0
    for cbit_holder in _iter_bits(centers):
        c = cbit_holder
        inside = bits[c]
        # BFS distances to v inside N(c), for remaining-length pruning
        dist = {v: 0}
        frontier = 1 << v
        seen = 1 << v
        r = 0
        while frontier:
            r += 1
            nxt = 0
            m = frontier
            while m:
                b = m & (-m)
                m ^= b
                nxt |= bits[b.bit_length() - 1]
            nxt &= inside & ~seen
            seen |= nxt
            mm = nxt
            while mm:
                b = mm & (-mm)
                mm ^= b
                dist[b.bit_length() - 1] = r
            frontier = nxt
            if r > L:
                break
        if dist.get(u, L + 9) > L - 1:
            continue
        total += _count_paths(bits, inside, u, v, L - 1, 1 << u, dist)
    return 2 * total


def _iter_bits(mask):
    while mask:
        b = mask & (-mask)
        mask ^= b
        yield b.bit_length() - 1


def _count_paths(bits, inside, cur, target, steps, visited, dist):
    if steps == 1:
        return 1 if (bits[cur] >> target) & 1 else 0
    count = 0
    cand = bits[cur] & inside & ~visited & ~(1 << target)
    for w in _iter_bits(cand):
        if dist.get(w, 1 << 30) <= steps - 1:
            count += _count_paths(bits, inside, w, target, steps - 1, visited | (1 << w), dist)
    return count


@dataclass
class PinwheelData:
    """Per-graph pinwheel aggregates reused across solver iterations."""

    k: int
    counts: np.ndarray  # |S(e)| per edge id
    matrix: "scipy.sparse.csr_matrix"  # (t x m) signed pair counts
    cycles: int = 0


def pinwheel_data(graph, index, k=4, cycle_budget=int(1e9)):
    """Build the aggregated pinwheel structure (one pass over all centers).

    ``cycle_budget`` caps the estimated number of 2k-cycles enumerated;
    graphs denser than the balancing regime are refused rather than left
    to run for hours.
    """
    if k < 2:
        raise ValueError("wheel half-length k must be >= 2")
    est = _cycle_estimate(graph, k)
    if est > cycle_budget:
        raise CapacityError(
            f"estimated {est:.2e} {2*k}-cycles across neighborhoods exceeds "
            f"budget {cycle_budget:.0e}; this graph is denser than the supported regime"
        )
    mat, counts = signed_pinwheel_matrix(graph, index, k)
    cycles = int(counts.sum()) // (4 * k) if graph.m else 0
    return PinwheelData(k=k, counts=counts, matrix=mat, cycles=cycles)


def _cycle_estimate(graph, k):
    # crude mean-field bound: d_c * (mean local degree)^(2k-1) / (4k) per center
    adj = graph.adjacency_matrix()
    est = 0.0
    deg = graph.degrees
    for c in range(graph.n):
        d = int(deg[c])
        if d < 2 * k:
            continue
        loc = np.flatnonzero(adj[c])
        e_loc = int(adj[np.ix_(loc, loc)].sum()) // 2
        if e_loc < 2 * k:
            continue
        mean_deg = 2.0 * e_loc / d
        est += d * mean_deg ** (2 * k - 1) / (4 * k)
    return est


def apply_F(graph, index, sigma, k=4, pin=None):
    """One step of the discrepancy-averaging operator F.

    F(sigma) = sigma - sum_e delta_e(sigma) Phi_e, with Phi_e the average
    of the signed pinwheel functions based at e (base triangle +1, signs
    alternating around the perimeter).  ``pin`` is the precomputed
    PinwheelData; omit it for one-off calls.
    """
    if pin is None:
        pin = pinwheel_data(graph, index, k)
    elif pin.k != k:
        raise ValueError(f"pinwheel data was built for k={pin.k}, not k={k}")
    zero = np.flatnonzero(pin.counts == 0)
    if len(zero):
        eid = int(zero[0])
        u, v = (int(x) for x in graph.edges[eid])
        raise GadgetMissingError(
            f"edge ({u},{v}) lies in no {2*k}-pinwheel", witness=(u, v)
        )
    delta = edge_sums(sigma) - 1.0
    d = 2.0 * delta / pin.counts
    return Weighting(index, sigma.values - pin.matrix @ d)


def naive_adjust(graph, index, sigma):
    """Spread each edge discrepancy uniformly over its covering triangles."""
    counts = index.edge_incidence_counts()
    zero = np.flatnonzero(counts == 0)
    if len(zero):
        eid = int(zero[0])
        u, v = (int(x) for x in graph.edges[eid])
        raise GadgetMissingError(f"edge ({u},{v}) lies in no triangle", witness=(u, v))
    delta = edge_sums(sigma) - 1.0
    spread = delta / counts
    return Weighting(index, sigma.values - index.edge_triangle_matrix().T @ spread)


# ---------------------------------------------------------------------------
# rooted patterns


@dataclass
class RootedPattern:
    """A small pattern graph with a distinguished root set.

    ``labels`` maps human-readable vertex names (including identification
    aliases like the b-side names of W(i)) to vertex ids; ``names`` gives
    one primary name per vertex.  ``classes`` optionally partitions the
    vertices into the five color classes R/G/O/P/B; ``marks`` optionally
    names special edges (sigma, beta).
    """

    name: str
    graph: Graph
    roots: frozenset
    labels: dict = field(default_factory=dict)
    names: list = field(default_factory=list)
    classes: dict = field(default_factory=dict)
    marks: dict = field(default_factory=dict)

    def __post_init__(self):
        if not all(0 <= r < self.graph.n for r in self.roots):
            raise PatternDomainError("root outside the pattern's vertex range")
        if self.classes:
            allv = sorted(v for vs in self.classes.values() for v in vs)
            if allv != list(range(self.graph.n)):
                raise PatternDomainError("classes must partition the vertex set")

    def vertex(self, label):
        """Vertex id for a label (or pass through an integer id)."""
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < self.graph.n:
                raise PatternDomainError(f"vertex id {label} out of range")
            return int(label)
        try:
            return self.labels[label]
        except KeyError:
            raise PatternDomainError(f"unknown vertex label {label!r}") from None

    def with_roots(self, *labels):
        """Same pattern re-rooted at the given labels/ids."""
        roots = frozenset(self.vertex(x) for x in labels)
        return RootedPattern(
            name=self.name,
            graph=self.graph,
            roots=roots,
            labels=self.labels,
            names=self.names,
            classes=self.classes,
            marks=self.marks,
        )

    def free_vertices(self):
        return [v for v in range(self.graph.n) if v not in self.roots]


def rooted_extensions(pattern, graph, phi):
    """Yield every injective extension of ``phi`` preserving the non-root edges.

    Edges of the pattern with both endpoints in the root set are exempt;
    every other pattern edge must map to an edge of ``graph``.
    """
    h = pattern.graph
    roots = pattern.roots
    if set(phi) != set(roots):
        raise ValueError("phi must be defined exactly on the root set")
    images = list(phi.values())
    if len(set(images)) != len(images):
        raise ValueError("phi must be injective")
    free = pattern.free_vertices()
    # order free vertices greedily by anchored-neighbor count (static)
    order = []
    placed = set(roots)
    remaining = set(free)
    while remaining:
        best = max(
            remaining,
            key=lambda w: (sum(1 for x in h.neighbors[w] if x in placed), -w),
        )
        order.append(best)
        placed.add(best)
        remaining.discard(best)
    nbrs_in_order = []
    for idx, w in enumerate(order):
        before = set(roots) | set(order[:idx])
        nbrs_in_order.append([x for x in h.neighbors[w] if int(x) in before])
    gbits = graph.bits
    full = (1 << graph.n) - 1
    mapping = dict(phi)
    used = 0
    for gv in phi.values():
        used |= 1 << gv

    def rec(i, used):
        if i == len(order):
            yield dict(mapping)
            return
        w = order[i]
        cand = full
        for x in nbrs_in_order[i]:
            cand &= gbits[mapping[int(x)]]
        cand &= ~used
        m = cand
        while m:
            b = m & (-m)
            m ^= b
            gv = b.bit_length() - 1
            mapping[w] = gv
            yield from rec(i + 1, used | b)
            del mapping[w]

    yield from rec(0, used)


def rooted_extension_count(pattern, graph, phi):
    """X(H, G, S, phi): the number of injective rooted extensions."""
    h = pattern.graph
    roots = pattern.roots
    if set(phi) != set(roots):
        raise ValueError("phi must be defined exactly on the root set")
    images = list(phi.values())
    if len(set(images)) != len(images):
        raise ValueError("phi must be injective")
    free = pattern.free_vertices()
    order = []
    placed = set(roots)
    remaining = set(free)
    while remaining:
        best = max(
            remaining,
            key=lambda w: (sum(1 for x in h.neighbors[w] if x in placed), -w),
        )
        order.append(best)
        placed.add(best)
        remaining.discard(best)
    nbrs_in_order = []
    for idx, w in enumerate(order):
        before = set(roots) | set(order[:idx])
        nbrs_in_order.append([int(x) for x in h.neighbors[w] if int(x) in before])
    gbits = graph.bits
    full = (1 << graph.n) - 1
    mapping = {}
    for kk, vv in phi.items():
        mapping[kk] = vv
    used0 = 0
    for gv in phi.values():
        used0 |= 1 << gv

    def rec(i, used):
        if i == len(order):
            return 1
        w = order[i]
        cand = full
        for x in nbrs_in_order[i]:
            cand &= gbits[mapping[x]]
        cand &= ~used
        total = 0
        m = cand
        while m:
            b = m & (-m)
            m ^= b
            mapping[w] = b.bit_length() - 1
            total += rec(i + 1, used | b)
        return total

    return rec(0, used0)


# ---------------------------------------------------------------------------
# pattern families


def _wheel_edges(k):
    L = 2 * k
    edges = [(i, (i + 1) % L) for i in range(L)]
    edges += [(i, L) for i in range(L)]
    return edges


def build_family(name, *params):
    """Construct a named pattern family member with its standard labeling.

    Families: ``wheel`` (k) -> W_{2k} rooted at {w_0, w_{2k-1}};
    ``wheel_segment`` (t) -> W_8 rooted at Q_t; ``W`` (i) or (i, j) -> the
    double wheel W(i) (unrooted) or triple wheel W(i,j) for (i,j) in T
    (unrooted); ``bowtie`` -> the 7-vertex bowtie graph (unrooted).
    Re-root with ``with_roots``.
    """
    if name == "wheel":
        (k,) = params or (4,)
        if k < 2:
            raise PatternDomainError("wheel needs k >= 2")
        L = 2 * k
        g = Graph(L + 1, _wheel_edges(k))
        labels = {f"w{i}": i for i in range(L)}
        labels["c"] = L
        names = [f"w{i}" for i in range(L)] + ["c"]
        return RootedPattern(f"W_{L}", g, frozenset({0, L - 1}), labels, names)
    if name == "wheel_segment":
        (t,) = params
        if not 1 <= t <= 6:
            raise PatternDomainError("Q_t needs t in [6]")
        base = build_family("wheel", 4)
        roots = {base.labels["w7"], base.labels["w0"], base.labels["c"]}
        roots |= {base.labels[f"w{i}"] for i in range(1, t)}
        return RootedPattern(f"Q_{t}", base.graph, frozenset(roots), base.labels, base.names)
    if name == "W" and len(params) == 1:
        (i,) = params
        return _build_w(i)
    if name == "W" and len(params) == 2:
        i, j = params
        return _build_wij(i, j)
    if name == "bowtie":
        edges = [
            (0, 2), (0, 3), (2, 3), (2, 6), (3, 6),
            (1, 4), (1, 5), (4, 5), (4, 6), (5, 6),
        ]
        g = Graph(7, edges)
        labels = {"u": 0, "v": 1, "a1": 2, "a2": 3, "b1": 4, "b2": 5, "c": 6}
        names = ["u", "v", "a1", "a2", "b1", "b2", "c"]
        return RootedPattern("bowtie", g, frozenset(), labels, names)
    raise PatternDomainError(f"unknown pattern family {name!r} with params {params!r}")


def _build_w(i):
    if not 1 <= i <= 7:
        raise PatternDomainError("W(i) needs i in [7]")
    # a-wheel: a_0..a_7 -> 0..7, c_a -> 8; b-wheel glued at b_7 = a_i,
    # b_0 = a_{i-1}; new b_1..b_6 -> 9..14, c_b -> 15; d -> 16
    b = {0: i - 1, 7: i}
    for s in range(1, 7):
        b[s] = 8 + s
    cb = 15
    d = 16
    edges = set()
    for x, y in _wheel_edges(4):
        xx = x if x < 8 else 8
        yy = y if y < 8 else 8
        edges.add((min(xx, yy), max(xx, yy)))
    for s in range(8):
        x, y = b[s], b[(s + 1) % 8]
        edges.add((min(x, y), max(x, y)))
        edges.add((min(b[s], cb), max(b[s], cb)))
    edges.add((0, d))
    edges.add((7, d))
    g = Graph(17, sorted(edges))
    labels = {f"a{s}": s for s in range(8)}
    labels["ca"] = 8
    for s in range(8):
        labels[f"b{s}"] = b[s]
    labels["cb"] = cb
    labels["d"] = d
    names = [f"a{s}" for s in range(8)] + ["ca"] + [f"b{s}" for s in range(1, 7)] + ["cb", "d"]
    return RootedPattern(f"W({i})", g, frozenset(), labels, names)


def _build_wij(i, j):
    if (i, j) not in {(1, 2), (1, 7)}:
        raise PatternDomainError("W(i,j) is defined for (i,j) in T = {(1,2),(1,7)}")
    base = _build_w(i)
    # theta-wheel glued at theta_7 = b_j, theta_0 = b_{j-1};
    # new theta_1..theta_6 -> 17..22, c_theta -> 23
    th = {7: base.labels[f"b{j}"], 0: base.labels[f"b{j-1}"]}
    for s in range(1, 7):
        th[s] = 16 + s
    ct = 23
    edges = {(int(u), int(v)) for u, v in base.graph.edges}
    for s in range(8):
        x, y = th[s], th[(s + 1) % 8]
        edges.add((min(x, y), max(x, y)))
        edges.add((min(th[s], ct), max(th[s], ct)))
    g = Graph(24, sorted(edges))
    labels = dict(base.labels)
    for s in range(8):
        labels[f"th{s}"] = th[s]
    labels["ct"] = ct
    names = list(base.names) + [f"th{s}" for s in range(1, 7)] + ["ct"]
    return RootedPattern(f"W({i},{j})", g, frozenset(), labels, names)


def index_sets():
    """The index sets T, V, P over [6] x [7] and the triple set Q."""
    t_set = [(1, 2), (1, 7)]
    v_set = [(1, 1), (2, 1), (6, 7)]
    p_set = [
        (i, j)
        for i in range(1, 7)
        for j in range(1, 8)
        if (i, j) not in set(t_set) | set(v_set)
    ]
    q_set = [(1, 2, m) for m in range(2, 8)] + [(1, 7, m) for m in range(1, 7)]
    return {"T": t_set, "V": v_set, "P": p_set, "Q": q_set}


# ---------------------------------------------------------------------------
# diagnostics


@dataclass
class StageDiagnostics:
    """Observed gadget abundances against the G(n,p) first-order formulas."""

    n: int
    p: float
    k: int
    bowtie_min: int
    bowtie_max: int
    bowtie_formula: float
    bowtie_max_rel_dev: float
    pinwheel_min: int
    pinwheel_max: int
    pinwheel_formula: float
    pinwheel_max_rel_dev: float


def stage_diagnostics(graph, p, k=4, index=None):
    """Min/max bowtie and pinwheel counts vs n^5 p^10 and 2 n^7 p^15."""
    from .graphs import build_triangle_index

    n = graph.n
    counts = bowtie_count_all(graph)
    off = ~np.eye(n, dtype=bool) if n else np.zeros((0, 0), bool)
    bmin = int(counts[off].min()) if n > 1 else 0
    bmax = int(counts[off].max()) if n > 1 else 0
    bform = n**5 * p**10
    bdev = max(abs(bmin - bform), abs(bmax - bform)) / bform if bform > 0 else float("inf")
    if index is None:
        index = build_triangle_index(graph)
    if graph.m:
        pin = pinwheel_data(graph, index, k)
        pmin = int(pin.counts.min())
        pmax = int(pin.counts.max())
    else:
        pmin = pmax = 0
    pform = 2.0 * n**7 * p ** (4 * k - 1)
    pdev = max(abs(pmin - pform), abs(pmax - pform)) / pform if pform > 0 else float("inf")
    return StageDiagnostics(
        n=n,
        p=float(p),
        k=k,
        bowtie_min=bmin,
        bowtie_max=bmax,
        bowtie_formula=bform,
        bowtie_max_rel_dev=float(bdev),
        pinwheel_min=pmin,
        pinwheel_max=pmax,
        pinwheel_formula=pform,
        pinwheel_max_rel_dev=float(pdev),
    )


# ---------------------------------------------------------------------------
# pattern file format


def write_pattern(path, pattern, header_comments=()):
    """Text format: name; n m; edge lines; S: roots; class/mark lines."""
    with open(path, "w", newline="\n") as fh:
        for line in header_comments:
            fh.write(f"# {line}\n")
        fh.write(f"{pattern.name}\n")
        fh.write(f"{pattern.graph.n} {pattern.graph.m}\n")
        for u, v in pattern.graph.edges:
            fh.write(f"{u} {v}\n")
        fh.write("S: " + " ".join(str(r) for r in sorted(pattern.roots)) + "\n")
        for cls in ("R", "G", "O", "P", "B"):
            if cls in pattern.classes:
                ids = " ".join(str(v) for v in sorted(pattern.classes[cls]))
                fh.write(f"class {cls}: {ids}\n")
        for mark in ("sigma", "beta"):
            if mark in pattern.marks:
                a, b = pattern.marks[mark]
                fh.write(f"mark {mark}: {a} {b}\n")


def read_pattern(path):
    lines = []
    with open(path) as fh:
        for raw in fh:
            s = raw.split("#", 1)[0].rstrip("\n").strip()
            if s:
                lines.append(s)
    if len(lines) < 2:
        raise ValueError(f"pattern file {path} is too short")
    name = lines[0]
    try:
        n, m = (int(x) for x in lines[1].split())
    except ValueError as exc:
        raise ValueError(f"pattern file {path}: bad size line {lines[1]!r}") from exc
    if len(lines) < 2 + m + 1:
        raise ValueError(f"pattern file {path}: expected {m} edges plus a root line")
    edges = []
    for row in lines[2:2 + m]:
        parts = row.split()
        if len(parts) != 2:
            raise ValueError(f"pattern file {path}: bad edge line {row!r}")
        edges.append((int(parts[0]), int(parts[1])))
    g = Graph(n, np.array(edges, dtype=np.int64).reshape(-1, 2))
    roots = frozenset()
    classes = {}
    marks = {}
    for row in lines[2 + m:]:
        if row.startswith("S:"):
            ids = row[2:].split()
            roots = frozenset(int(x) for x in ids)
        elif row.startswith("class "):
            head, _, rest = row.partition(":")
            cls = head.split()[1]
            if cls not in ("R", "G", "O", "P", "B"):
                raise ValueError(f"pattern file {path}: unknown class {cls!r}")
            classes[cls] = frozenset(int(x) for x in rest.split())
        elif row.startswith("mark "):
            head, _, rest = row.partition(":")
            mk = head.split()[1]
            if mk not in ("sigma", "beta"):
                raise ValueError(f"pattern file {path}: unknown mark {mk!r}")
            a, b = (int(x) for x in rest.split())
            marks[mk] = (a, b)
        else:
            raise ValueError(f"pattern file {path}: unrecognized line {row!r}")
    return RootedPattern(name, g, roots, {}, [], classes, marks)
