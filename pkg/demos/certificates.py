"""
Feasibility verdicts you can check by hand
==========================================

The oracle never asks to be trusted: FEASIBLE comes with a nonnegative
weighting meeting every edge, INFEASIBLE with a Farkas vector y whose
triangle sums are all nonpositive while sum(y) > 0.  Both are rechecked
against the incidence structure before the verdict is returned.
"""

import numpy as np

from ftdkit import (
    Graph,
    build_triangle_index,
    complete_graph,
    decide_ftd,
    verify_certificate,
)
from ftdkit.weighting import edge_sums

# K_6: every edge lies in 4 triangles, the uniform weight 1/4 works.
g = complete_graph(6)
index = build_triangle_index(g)
res = decide_ftd(g, index)
print(f"K_6: {res.verdict}")
sums = edge_sums(res.weighting)
print(f"  edge sums in [{sums.min():.12f}, {sums.max():.12f}]")
print(f"  independently verified: {verify_certificate(g, index, res)}")

# Two triangles glued on an edge.  The shared edge sits in both
# triangles, the outer edges in one each, and no balance is possible.
diamond = Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
index = build_triangle_index(diamond)
res = decide_ftd(diamond, index)
print(f"diamond: {res.verdict}")
y = res.certificate
print(f"  Farkas vector by edge id: {np.round(y, 4)}")
A = index.edge_triangle_matrix()
print(f"  triangle sums (all <= 0): {np.round(A.T @ y, 12)}")
print(f"  sum(y) = {y.sum():.4f} > 0")
print(f"  independently verified: {verify_certificate(diamond, index, res)}")

# The same small instance in exact rational arithmetic.
res_exact = decide_ftd(diamond, index, mode="exact")
print(f"diamond, exact mode: {res_exact.verdict}")

# An edge in no triangle short-circuits everything: the indicator of
# that edge is already a certificate.
pendant = Graph(4, [(0, 1), (0, 2), (1, 2), (0, 3)])
index = build_triangle_index(pendant)
res = decide_ftd(pendant, index)
print(f"pendant: {res.verdict}, witness edge {res.edge}")
