import math

import numpy as np
import pytest

from ftdkit.graphs import Graph, build_triangle_index, complete_graph, gen_gnp
from ftdkit.solver import (
    FTD_FOUND,
    GADGET_MISSING,
    MAX_ITERS,
    STALLED,
    UNCOVERED_EDGE,
    SolveOptions,
    neighborhood_discrepancy,
    read_trajectory,
    solve,
    stage_diagnostics,
    write_trajectory,
)
from ftdkit.weighting import edge_sums, is_ftd, uniform_weighting, vertex_defects

from helpers import graph_from_pairs


def test_complete_graphs_solve_exactly():
    for n in range(4, 13):
        r = solve(complete_graph(n))
        assert r.status == FTD_FOUND
        assert r.ok()
        assert r.iterations == 0
        assert (r.weighting.values == 1.0 / (n - 2)).all()
        assert r.delta_inf <= 1e-12
        assert is_ftd(r.weighting, 2e-9)


def test_pendant_edge_is_reported_uncovered():
    g = graph_from_pairs(4, [(0, 1), (0, 2), (1, 2), (0, 3)])
    r = solve(g)
    assert r.status == UNCOVERED_EDGE
    assert r.witness == (0, 3)
    assert r.weighting is None
    assert r.iterations == 0


def test_missing_bowtie_pair_ends_stage_two():
    r = solve(gen_gnp(10, 0.62, 7))
    assert r.status == GADGET_MISSING
    assert r.witness == (3, 6)
    assert r.iterations == 0
    assert r.weighting is not None  # the stage-1 uniform weighting comes back


def test_missing_pinwheel_edge_ends_stage_three():
    r = solve(gen_gnp(11, 0.60, 1))
    assert r.status == GADGET_MISSING
    assert r.witness == (0, 3)
    assert r.iterations == 0
    # stage 2 did run: the returned weighting is already vertex balanced
    assert np.abs(vertex_defects(r.weighting)).max() <= 1e-9


def test_seeded_instance_converges_with_conserved_invariants():
    g = gen_gnp(50, 0.40, 0)
    r = solve(g, SolveOptions(record_trajectory=True))
    # delta_inf reaches the stopping threshold but the weighting has gone
    # negative, which is typical at this scale; the report must say so
    assert r.delta_inf <= 1e-9
    assert r.status == STALLED
    assert not is_ftd(r.weighting, 2e-9)
    assert float(r.weighting.values.min()) < -1e-9
    assert 0 < r.iterations <= 100
    assert len(r.trajectory) == r.iterations + 1

    target = g.m / 3.0
    hist = [row.delta_inf for row in r.trajectory]
    assert all(b < a for a, b in zip(hist, hist[1:]))
    for row in r.trajectory:
        assert abs(row.total_weight - target) <= 1e-8 * target
        assert row.max_vertex_defect <= 1e-8
    # geometric decay from iteration 2 onward
    assert all(b <= 0.9 * a for a, b in zip(hist[2:], hist[3:]))
    # per-step movement bound, with slack for the asymptotic constant
    np2 = 50 * 0.40**2
    for prev, row in zip(r.trajectory, r.trajectory[1:]):
        assert row.step_inf <= prev.delta_inf * (50.0 / np2) * 3.0


def test_naive_operator_stalls_honestly():
    g = gen_gnp(12, 0.6, 3)
    r = solve(g, SolveOptions(operator="naive", record_trajectory=True))
    assert r.status == STALLED
    assert r.delta_inf > 1e-9
    hist = [row.delta_inf for row in r.trajectory]
    assert len(hist) == r.iterations + 1
    assert hist[-1] > 0.99 * hist[-11]


def test_max_iters_status():
    r = solve(gen_gnp(50, 0.40, 0), SolveOptions(max_iters=3))
    assert r.status == MAX_ITERS
    assert r.iterations == 3
    assert r.delta_inf > 1e-9


def test_trivial_graphs():
    assert solve(Graph(0, [])).status == FTD_FOUND
    assert solve(Graph(5, [])).status == FTD_FOUND
    tri = Graph(3, [(0, 1), (0, 2), (1, 2)])
    r = solve(tri)
    assert r.status == FTD_FOUND
    assert r.iterations == 0
    assert r.weighting.values.tolist() == [1.0]


def test_option_validation():
    with pytest.raises(ValueError):
        SolveOptions(eps_stop=0.0)
    with pytest.raises(ValueError):
        SolveOptions(eps_neg=-1e-9)
    with pytest.raises(ValueError):
        SolveOptions(max_iters=0)
    with pytest.raises(ValueError):
        SolveOptions(k=1)
    with pytest.raises(ValueError):
        SolveOptions(operator="magic")


def test_trajectory_csv_roundtrip(tmp_path):
    g = gen_gnp(40, 0.45, 11)
    r = solve(g, SolveOptions(record_trajectory=True, max_iters=5))
    assert len(r.trajectory) >= 2
    path = tmp_path / "traj.csv"
    write_trajectory(path, r)
    text = path.read_text().splitlines()
    assert text[0] == "iter,delta_inf,min_weight,max_vertex_defect,total_weight"
    back = read_trajectory(path)
    assert len(back) == len(r.trajectory)
    for a, b in zip(r.trajectory, back):
        assert a.iter == b.iter
        assert a.delta_inf == b.delta_inf
        assert a.min_weight == b.min_weight
        assert a.max_vertex_defect == b.max_vertex_defect
        assert a.total_weight == b.total_weight


def test_trajectory_reader_rejects_other_files(tmp_path):
    path = tmp_path / "not_traj.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_trajectory(path)


def test_neighborhood_discrepancy_metric():
    g = gen_gnp(9, 0.7, 2)
    ti = build_triangle_index(g)
    w = uniform_weighting(g, ti)
    delta = edge_sums(w) - 1.0
    adj = g.adjacency_matrix()
    want = 0.0
    for u, v in g.edges:
        u, v = int(u), int(v)
        for a, b in ((u, v), (v, u)):
            s = math.fsum(
                delta[g.edge_id(a, z)] for z in range(9) if adj[a, z] and adj[b, z]
            )
            want = max(want, abs(s))
    assert neighborhood_discrepancy(g, w) == pytest.approx(want, rel=1e-12)

    k6 = complete_graph(6)
    tk = build_triangle_index(k6)
    assert neighborhood_discrepancy(k6, uniform_weighting(k6, tk)) == 0.0
    assert neighborhood_discrepancy(Graph(4, []), None) == 0.0


def test_stage_diagnostics_reachable_from_solver():
    d = stage_diagnostics(complete_graph(7), 1.0)
    assert d.bowtie_min == 120
