import math

import numpy as np
import pytest

from ftdkit.errors import NoTrianglesError
from ftdkit.graphs import Graph, build_triangle_index, complete_graph, gen_gnp
from ftdkit.weighting import (
    Weighting,
    edge_discrepancy,
    edge_sums,
    is_ftd,
    read_weighting,
    report,
    uniform_weighting,
    vertex_defect,
    vertex_defects,
    write_weighting,
)

from helpers import graph_from_pairs


def _triangle():
    g = graph_from_pairs(3, [(0, 1), (0, 2), (1, 2)])
    return g, build_triangle_index(g)


def test_uniform_k4():
    g = complete_graph(4)
    ti = build_triangle_index(g)
    w = uniform_weighting(g, ti)
    assert (w.values == 0.5).all()
    assert (edge_sums(w) == 1.0).all()
    r = report(w)
    assert r.total_weight == 2.0
    assert r.delta_inf == 0.0
    assert r.max_vertex_defect == 0.0
    assert is_ftd(w, 1e-12)


def test_uniform_k5():
    g = complete_graph(5)
    ti = build_triangle_index(g)
    w = uniform_weighting(g, ti)
    assert (w.values == 1 / 3).all()  # same correctly rounded double


def test_uniform_no_triangles():
    c5 = graph_from_pairs(5, [(i, (i + 1) % 5) for i in range(5)])
    with pytest.raises(NoTrianglesError):
        uniform_weighting(c5, build_triangle_index(c5))
    empty = Graph(0, [])
    w = uniform_weighting(empty, build_triangle_index(empty))
    assert w.values.shape == (0,)
    assert is_ftd(w, 0.0)


def test_single_triangle_values():
    g, ti = _triangle()
    ones = Weighting(ti, np.ones(1))
    zeros = Weighting(ti, np.zeros(1))
    for v in range(3):
        assert vertex_defect(ones, v) == 0.0
        assert vertex_defect(zeros, v) == -1.0
    assert edge_discrepancy(ones, (0, 1)) == 0.0
    assert edge_discrepancy(zeros, (0, 1)) == -1.0
    r1 = report(ones)
    assert r1.total_weight == 1.0 and r1.min_weight == 1.0 and r1.delta_inf == 0.0
    assert is_ftd(ones, 0.0)
    half = Weighting(ti, np.full(1, 0.5))
    assert report(half).delta_inf == 0.5


def test_edge_discrepancy_invalid_edge():
    g, ti = _triangle()
    w = Weighting(ti, np.ones(1))
    with pytest.raises(KeyError):
        edge_discrepancy(w, (0, 4))


def test_pendant_edge_never_ftd():
    g = graph_from_pairs(4, [(0, 1), (0, 2), (1, 2), (2, 3)])
    ti = build_triangle_index(g)
    w = Weighting(ti, np.ones(ti.t))
    assert not is_ftd(w, 10.0)


def test_weighting_validates_shape_and_finiteness():
    g, ti = _triangle()
    with pytest.raises(ValueError):
        Weighting(ti, np.ones(2))
    with pytest.raises(ValueError):
        Weighting(ti, np.array([np.nan]))


def test_uniform_vertex_defects_sum_to_zero():
    for seed in range(15):
        g = gen_gnp(18, 0.45, seed)
        ti = build_triangle_index(g)
        if ti.t == 0:
            continue
        w = uniform_weighting(g, ti)
        assert math.fsum(vertex_defects(w).tolist()) == pytest.approx(0.0, abs=1e-10)


def test_linearity_of_edge_weight():
    rng = np.random.default_rng(7)
    g = gen_gnp(16, 0.5, 11)
    ti = build_triangle_index(g)
    s1 = Weighting(ti, rng.normal(size=ti.t))
    s2 = Weighting(ti, rng.normal(size=ti.t))
    for a, b in [(1.0, 1.0), (0.25, -2.0), (3.5, 0.0)]:
        combo = Weighting(ti, a * s1.values + b * s2.values)
        for eid in range(0, g.m, 7):
            lhs = edge_discrepancy(combo, eid) + 1.0
            rhs = a * (edge_discrepancy(s1, eid) + 1.0) + b * (edge_discrepancy(s2, eid) + 1.0)
            assert lhs == pytest.approx(rhs, abs=1e-10)


def test_vertex_balance_implies_edge_sum_identity():
    # when every vertex defect vanishes, sum of edge discrepancies vanishes
    # and the total weight is e(G)/3: check on graphs where uniform is balanced
    for n in (4, 6, 9):
        g = complete_graph(n)
        ti = build_triangle_index(g)
        w = uniform_weighting(g, ti)
        r = report(w)
        assert r.max_vertex_defect <= 1e-12
        assert abs(r.sum_edge_disc) <= 1e-9
        assert r.total_weight == pytest.approx(g.m / 3.0, abs=1e-9)


def test_report_identity_random():
    # sum_edge_disc = 3 total_weight - e(G) for any weighting
    rng = np.random.default_rng(3)
    for seed in range(8):
        g = gen_gnp(15, 0.5, seed)
        ti = build_triangle_index(g)
        w = Weighting(ti, rng.normal(size=ti.t))
        r = report(w)
        assert r.sum_edge_disc == pytest.approx(3.0 * r.total_weight - g.m, abs=1e-9)


def test_weighting_file_roundtrip(tmp_path):
    rng = np.random.default_rng(12)
    g = gen_gnp(14, 0.5, 2)
    ti = build_triangle_index(g)
    w = Weighting(ti, rng.normal(size=ti.t) * 1e-3 + 1 / 3)
    path = tmp_path / "w.txt"
    write_weighting(path, w, header_comments=["source=test"])
    back = read_weighting(path, ti)
    assert np.array_equal(back.values, w.values)  # bit-exact via 17 digits
    first = path.read_text().splitlines()
    assert first[0] == "# source=test"
    assert first[1] == f"{g.n} {ti.t}"


def test_weighting_file_mismatch(tmp_path):
    g = complete_graph(4)
    ti = build_triangle_index(g)
    w = uniform_weighting(g, ti)
    path = tmp_path / "w.txt"
    write_weighting(path, w)
    g5 = complete_graph(5)
    ti5 = build_triangle_index(g5)
    with pytest.raises(ValueError):
        read_weighting(path, ti5)
