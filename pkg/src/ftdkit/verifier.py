"""Exact density and degeneracy checks for rooted patterns.

Everything in this module is integer or rational arithmetic; no floats
enter any verdict.  ``max_root_density`` enumerates all subsets of the
free vertices (capped at 24), ``is_k_degenerate`` runs the greedy
minimum-back-degree peeling, which is complete for that property, and
``verify_paper_suite`` evaluates the whole built-in case table plus any
typical-configuration pattern files supplied alongside it.
"""

import csv
import os
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import PatternDomainError
from .gadgets import RootedPattern, build_family, index_sets, read_pattern
from .graphs import Graph

__all__ = [
    "MAX_FREE_VERTICES",
    "ALPHA",
    "CaseResult",
    "SuiteReport",
    "max_root_density",
    "check_alpha",
    "is_k_degenerate",
    "built_in_cases",
    "evaluate_case",
    "verify_paper_suite",
]

MAX_FREE_VERTICES = 24  # subset table is 2^f int32

ALPHA = Fraction(11, 4)


def _free_vertices(pattern):
    return [v for v in range(pattern.graph.n) if v not in pattern.roots]


def max_root_density(pattern):
    """Maximum of e(W, W u S) / |W| over nonempty free sets W.

    Returns ``(density, witness)`` with the density as an exact
    ``Fraction`` and the witness as the optimal W, a sorted tuple of
    vertex ids.  Ties go to the smallest W, then to the
    lexicographically smallest vertex tuple.
    """
    g = pattern.graph
    free = _free_vertices(pattern)
    f = len(free)
    if f == 0:
        raise PatternDomainError("pattern has no free vertices")
    if f > MAX_FREE_VERTICES:
        raise PatternDomainError(
            f"{f} free vertices exceed the exhaustive limit of {MAX_FREE_VERTICES}"
        )
    pos = {v: i for i, v in enumerate(free)}
    adj = np.zeros(f, dtype=np.int64)
    root_deg = np.zeros(f, dtype=np.int32)
    for u, v in g.edges:
        u, v = int(u), int(v)
        iu, iv = pos.get(u), pos.get(v)
        if iu is not None and iv is not None:
            adj[iu] |= 1 << iv
            adj[iv] |= 1 << iu
        elif iu is not None:
            root_deg[iu] += 1
        elif iv is not None:
            root_deg[iv] += 1

    # val[mask] = number of edges with both ends in W(mask), plus edges
    # from W(mask) to the roots; built by stripping the lowest bit, so
    # the bit loop runs high to low (the remainder has higher bits only).
    val = np.zeros(1 << f, dtype=np.int32)
    for i in reversed(range(f)):
        rest = np.arange(1 << (f - i - 1), dtype=np.int64) << (i + 1)
        val[rest | (1 << i)] = (
            val[rest]
            + np.bitwise_count(rest & adj[i]).astype(np.int32)
            + root_deg[i]
        )

    masks = np.arange(1 << f, dtype=np.int64)
    sizes = np.bitwise_count(masks)
    best = None
    best_mask = 0
    for k in range(1, f + 1):
        sel = np.flatnonzero(sizes == k)
        vals = val[sel]
        top = int(vals.max())
        ratio = Fraction(top, k)
        if best is None or ratio > best:
            winners = sel[vals == top]
            best_mask = int(winners[_lex_min_pos(winners, f)])
            best = ratio
    witness = tuple(free[i] for i in range(f) if best_mask >> i & 1)
    return best, witness


def _lex_min_pos(winner_masks, f):
    """Position of the mask whose ascending vertex tuple is lex-smallest.

    Reversing the bit order turns that comparison into a plain maximum.
    """
    rev = np.zeros(len(winner_masks), dtype=np.int64)
    for i in range(f):
        rev |= ((winner_masks >> i) & 1) << (f - 1 - i)
    return int(np.argmax(rev))


def _as_exact(alpha):
    if isinstance(alpha, (float, np.floating)):
        raise PatternDomainError(
            "alpha must be exact: a Fraction, an integer, or a 'p/q' string"
        )
    if isinstance(alpha, str):
        return Fraction(alpha)
    return Fraction(alpha)


def check_alpha(pattern, alpha):
    """True when every nonempty free set W has e(W, W u S) <= alpha |W|."""
    bound = _as_exact(alpha)
    density, _ = max_root_density(pattern)
    return density <= bound


def is_k_degenerate(pattern, k):
    """Ordering witnessing k-degeneracy over the roots, or None.

    The returned list orders the free vertices so that each has at most
    k neighbours among the roots and the vertices before it.  Greedy
    minimum-back-degree peeling decides this exactly: if any ordering
    works, peeling free vertices of minimum remaining degree (smallest
    id on ties) finds one.  A pattern with no free vertices yields [].
    """
    k = int(k)
    if k < 0:
        raise PatternDomainError("k must be nonnegative")
    g = pattern.graph
    neigh = [set(int(u) for u in g.neighbors[v]) for v in range(g.n)]
    remaining = set(_free_vertices(pattern))
    active = set(range(g.n))
    peeled = []
    while remaining:
        pick, pick_deg = None, None
        for v in sorted(remaining):
            d = len(neigh[v] & active) - (v in neigh[v])
            if pick_deg is None or d < pick_deg:
                pick, pick_deg = v, d
        if pick_deg > k:
            return None
        remaining.discard(pick)
        active.discard(pick)
        peeled.append(pick)
    return peeled[::-1]


# ---------------------------------------------------------------------------
# the built-in case table


@dataclass
class CaseResult:
    """One row of the verification report."""

    case: str
    family: str
    roots: tuple
    kind: str  # "density" or "degeneracy"
    bound: str
    verdict: str  # "PASS", "FAIL", or "SKIPPED"
    witness: tuple = ()
    density: Fraction = None
    ordering: tuple = None
    note: str = ""


@dataclass
class SuiteReport:
    rows: list

    @property
    def failed(self):
        return [r for r in self.rows if r.verdict == "FAIL"]

    @property
    def skipped(self):
        return [r for r in self.rows if r.verdict == "SKIPPED"]

    @property
    def all_passed(self):
        return not self.failed

    def format_table(self):
        head = ("case", "family", "roots", "bound", "verdict", "witness")
        body = [
            (
                r.case,
                r.family,
                " ".join(r.roots),
                r.bound,
                r.verdict,
                " ".join(r.witness) if r.witness else (r.note or "-"),
            )
            for r in self.rows
        ]
        widths = [max(len(row[i]) for row in [head] + body) for i in range(6)]
        lines = [
            "  ".join(h.ljust(w) for h, w in zip(head, widths)),
            "  ".join("-" * w for w in widths),
        ]
        for row in body:
            lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
        return "\n".join(lines)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(["case", "family", "roots", "bound", "verdict", "witness"])
            for r in self.rows:
                out.writerow(
                    [
                        r.case,
                        r.family,
                        " ".join(r.roots),
                        r.bound,
                        r.verdict,
                        " ".join(r.witness),
                    ]
                )


def _name_of(pattern, v):
    if pattern.names and v < len(pattern.names):
        return pattern.names[v]
    return str(v)


def _names(pattern, vertices):
    return tuple(_name_of(pattern, v) for v in sorted(vertices))


def _induced_rooted(pattern, keep, roots, name):
    """Induced subpattern on ``keep`` (vertex ids), re-rooted at ``roots``."""
    keep = sorted(int(v) for v in keep)
    remap = {v: i for i, v in enumerate(keep)}
    edges = [
        (remap[int(u)], remap[int(v)])
        for u, v in pattern.graph.edges
        if int(u) in remap and int(v) in remap
    ]
    labels = {lab: remap[v] for lab, v in pattern.labels.items() if v in remap}
    names = [_name_of(pattern, v) for v in keep]
    return RootedPattern(
        name=name,
        graph=Graph(len(keep), edges),
        roots=frozenset(remap[int(v)] for v in roots),
        labels=labels,
        names=names,
    )


def built_in_cases():
    """The built-in (case id, kind, pattern, bound) table, in report order.

    Density rows carry a Fraction bound; an ``exact`` flag marks the one
    row whose maximum must equal the bound rather than sit below it.
    Degeneracy rows carry an integer k.
    """
    cases = []

    bowtie = build_family("bowtie")
    for triple in (("u", "a1", "a2"), ("c", "a1", "a2"), ("c", "b1", "b2"), ("v", "b1", "b2")):
        cases.append(
            (
                "bowtie-deg-" + "-".join(triple),
                "degeneracy",
                bowtie.with_roots(*triple),
                2,
                False,
            )
        )

    wheel = build_family("wheel", 4)
    cases.append(("wheel-density", "density", wheel, Fraction(15, 7), True))

    for t in range(1, 6):
        cases.append(
            (
                f"wheel-rooted-Q{t}",
                "density",
                build_family("wheel_segment", t),
                ALPHA,
                False,
            )
        )

    for t in range(1, 7):
        seg = build_family("wheel_segment", t)
        induced = _induced_rooted(
            seg,
            seg.roots,
            [seg.vertex("w0"), seg.vertex("w7")],
            f"Q_{t}",
        )
        cases.append((f"segment-Q{t}-deg", "degeneracy", induced, 2, False))

    sets = index_sets()
    for i, j in sets["P"]:
        double = build_family("W", i).with_roots("d", "a7", f"b{j-1}", f"b{j}")
        cases.append((f"double-{i}-{j}", "density", double, ALPHA, False))

    for i, j, m in sets["Q"]:
        triple = build_family("W", i, j).with_roots("d", "a7", f"th{m-1}", f"th{m}")
        cases.append((f"triple-{i}-{j}-{m}", "density", triple, ALPHA, False))

    return cases


def evaluate_case(case, kind, pattern, bound, exact=False):
    """One CaseResult for a (pattern, bound) pair of either kind."""
    if kind == "density":
        return _run_density(case, pattern, _as_exact(bound), exact)
    if kind == "degeneracy":
        return _run_degeneracy(case, pattern, int(bound))
    raise ValueError(f"unknown case kind {kind!r}")


def _run_density(case, pattern, bound, exact):
    density, witness = max_root_density(pattern)
    ok = density == bound if exact else density <= bound
    return CaseResult(
        case=case,
        family=pattern.name,
        roots=_names(pattern, pattern.roots),
        kind="density",
        bound=("=" if exact else "<=") + str(bound),
        verdict="PASS" if ok else "FAIL",
        witness=_names(pattern, witness),
        density=density,
    )


def _run_degeneracy(case, pattern, k):
    ordering = is_k_degenerate(pattern, k)
    return CaseResult(
        case=case,
        family=pattern.name,
        roots=_names(pattern, pattern.roots),
        kind="degeneracy",
        bound=f"k={k}",
        verdict="PASS" if ordering is not None else "FAIL",
        witness=tuple(_name_of(pattern, v) for v in ordering or ()),
        ordering=tuple(ordering) if ordering is not None else None,
    )


def _typical_rows(i, path):
    """The two rows for one typical-configuration file, or skip markers."""
    deg_case = f"typical-H{i}-deg"
    den_case = f"typical-H{i}-density"
    if path is None:
        note = f"H{i}.pattern not supplied"
        return [
            CaseResult(deg_case, f"H{i}", (), "degeneracy", "k=2", "SKIPPED", note=note),
            CaseResult(den_case, f"H{i}", (), "density", "<=" + str(ALPHA), "SKIPPED", note=note),
        ]
    pattern = read_pattern(path)
    for cls in ("R", "G", "O"):
        if cls not in pattern.classes:
            raise ValueError(f"pattern file {path}: missing vertex class {cls}")
    reds = pattern.classes["R"]
    greens = pattern.classes["G"]
    oranges = pattern.classes["O"]
    rows = []

    inner = _induced_rooted(pattern, reds | greens, reds, pattern.name + "[R+G]")
    rows.append(_run_degeneracy(deg_case, inner, 2))

    outer_roots = reds | greens | oranges
    rooted = RootedPattern(
        name=pattern.name,
        graph=pattern.graph,
        roots=frozenset(outer_roots),
        labels=pattern.labels,
        names=pattern.names,
        classes=pattern.classes,
        marks=pattern.marks,
    )
    try:
        rows.append(_run_density(den_case, rooted, ALPHA, False))
    except PatternDomainError as exc:
        rows.append(
            CaseResult(
                den_case,
                pattern.name,
                _names(rooted, outer_roots),
                "density",
                "<=" + str(ALPHA),
                "FAIL",
                note=str(exc),
            )
        )
    return rows


def verify_paper_suite(pattern_dir=None):
    """Run every built-in case plus any H1..H6 pattern files.

    ``pattern_dir`` may hold files named ``H1.pattern`` .. ``H6.pattern``
    with R/G/O vertex classes; each contributes a degeneracy row on the
    red-green core over the red roots and a density row over the
    red-green-orange roots.  Missing files become SKIPPED rows with a
    warning; malformed files raise ValueError naming the file.
    """
    rows = []
    for case, kind, pattern, bound, exact in built_in_cases():
        if kind == "density":
            rows.append(_run_density(case, pattern, bound, exact))
        else:
            rows.append(_run_degeneracy(case, pattern, bound))

    for i in range(1, 7):
        path = None
        if pattern_dir is not None:
            candidate = os.path.join(os.fspath(pattern_dir), f"H{i}.pattern")
            if os.path.exists(candidate):
                path = candidate
        if path is None and pattern_dir is not None:
            warnings.warn(f"H{i}.pattern not found in {pattern_dir}; rows skipped")
        if path is None:
            rows.extend(_typical_rows(i, None))
        else:
            rows.extend(_typical_rows(i, path))
    return SuiteReport(rows)
