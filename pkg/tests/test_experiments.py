import csv
import hashlib

import numpy as np
import pytest

from ftdkit.errors import CapacityError
from ftdkit.experiments import (
    HITTING_COLUMNS,
    PROFILE_COLUMNS,
    SCAN_COLUMNS,
    SCAN_TRIANGLE_CAP,
    ScanConfig,
    ScanRow,
    convergence_profile,
    emit_plot,
    expected_triangles,
    hitting_time_trials,
    threshold_scan,
    write_hitting_csv,
    write_profile_csv,
    write_scan_csv,
)
from ftdkit.oracle import FEASIBLE
from ftdkit.solver import FTD_FOUND, GADGET_MISSING, STALLED, UNCOVERED_EDGE


def bucket_triples(rows):
    return [(r.count_uncovered, r.count_ftd, r.count_anomaly) for r in rows]


# ---------------------------------------------------------------------------
# threshold_scan


def test_scan_config_validation():
    with pytest.raises(ValueError):
        ScanConfig(n=30, c_grid=(1.0,), trials=0, base_seed=1)
    with pytest.raises(ValueError):
        ScanConfig(n=30, c_grid=(), trials=1, base_seed=1)
    with pytest.raises(ValueError):
        ScanConfig(n=30, c_grid=(0.0, 1.0), trials=1, base_seed=1)
    with pytest.raises(ValueError):
        ScanConfig(n=30, c_grid=(1.0,), trials=1, base_seed=1, method="guess")
    with pytest.raises(ValueError):
        ScanConfig(n=30, c_grid=(1.0,), trials=1, base_seed=1, workers=0)


def test_scan_row_partition_guard():
    with pytest.raises(ValueError):
        ScanRow(c=1.0, p=0.3, trials=5, count_uncovered=1, count_ftd=1, count_anomaly=1, mean_secs=0.0)


def test_scan_buckets_partition_and_repeat():
    cfg = ScanConfig(n=60, c_grid=(0.8, 1.0, 1.3), trials=5, base_seed=7)
    rows = threshold_scan(cfg)
    assert len(rows) == 3
    for row in rows:
        assert row.count_uncovered + row.count_ftd + row.count_anomaly == row.trials
    again = threshold_scan(ScanConfig(n=60, c_grid=(0.8, 1.0, 1.3), trials=5, base_seed=7))
    assert bucket_triples(rows) == bucket_triples(again)
    # trials own their streams, so parallel assembly cannot change counts
    wide = threshold_scan(
        ScanConfig(n=60, c_grid=(0.8, 1.0, 1.3), trials=5, base_seed=7, workers=3)
    )
    assert bucket_triples(rows) == bucket_triples(wide)


def test_scan_methods_agree():
    grid = (1.2,)
    by_method = {}
    for method in ("lp", "solver", "both"):
        rows = threshold_scan(
            ScanConfig(n=40, c_grid=grid, trials=3, base_seed=11, method=method)
        )
        by_method[method] = bucket_triples(rows)
    assert by_method["lp"] == by_method["solver"] == by_method["both"]


def test_scan_capacity_refusal():
    cfg = ScanConfig(n=900, c_grid=(1.3,), trials=2, base_seed=1)
    assert expected_triangles(900, 1.3 * 0.12) > SCAN_TRIANGLE_CAP
    with pytest.raises(CapacityError, match="exceeds"):
        threshold_scan(cfg)


def test_scan_rejects_probability_above_one():
    cfg = ScanConfig(n=30, c_grid=(9.0,), trials=1, base_seed=1)
    with pytest.raises(ValueError, match="above 1"):
        threshold_scan(cfg)


def test_scan_csv_stable_apart_from_timing(tmp_path):
    cfg = ScanConfig(n=50, c_grid=(0.9, 1.2), trials=3, base_seed=3)
    paths = []
    for i in range(2):
        rows = threshold_scan(cfg)
        path = tmp_path / f"scan{i}.csv"
        write_scan_csv(path, cfg, rows)
        paths.append(path)
    contents = []
    for path in paths:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == list(SCAN_COLUMNS)
        contents.append([r[:-1] for r in rows])  # drop the secs column
    assert contents[0] == contents[1]


# ---------------------------------------------------------------------------
# hitting_time_trials


def test_hitting_n3_is_always_feasible_at_tau():
    records = hitting_time_trials(3, 2, 5, deltas=(10, 50))
    for rec in records:
        assert rec.tau == 3
        assert rec.verdict == FEASIBLE
        # past the end of the process the graph is still K_3
        assert rec.after == {10: FEASIBLE, 50: FEASIBLE}


def test_hitting_is_deterministic():
    a = hitting_time_trials(30, 4, 9)
    b = hitting_time_trials(30, 4, 9)
    assert [(r.seed, r.tau, r.verdict) for r in a] == [
        (r.seed, r.tau, r.verdict) for r in b
    ]
    assert [r.trial for r in a] == [0, 1, 2, 3]


def test_hitting_rejects_unknown_deltas_and_bad_counts():
    with pytest.raises(ValueError):
        hitting_time_trials(20, 2, 1, deltas=(7,))
    with pytest.raises(ValueError):
        hitting_time_trials(20, 0, 1)


def test_hitting_capacity_guard():
    with pytest.raises(CapacityError):
        hitting_time_trials(600, 1, 0)


def test_hitting_csv_columns(tmp_path):
    records = hitting_time_trials(25, 3, 2, deltas=(10,))
    path = tmp_path / "hit.csv"
    write_hitting_csv(path, 25, records, deltas=(10,))
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == list(HITTING_COLUMNS) + ["verdict_tau_plus_10"]
    assert len(rows) == 4
    assert [int(r[1]) for r in rows[1:]] == [0, 1, 2]


# ---------------------------------------------------------------------------
# convergence_profile


def test_profile_complete_graph_needs_no_iterations(tmp_path):
    results = convergence_profile(12, 1.0, [5], path=tmp_path / "k12.csv")
    seed, rep = results[0]
    assert rep.status == FTD_FOUND
    assert rep.iterations == 0
    assert len(rep.trajectory) == 1
    assert rep.trajectory[0].delta_inf <= 1e-12
    with open(tmp_path / "k12.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == list(PROFILE_COLUMNS)
    assert len(rows) == 2


def test_profile_g50_converges_within_sixty_iterations():
    # five seeds whose G(50, 0.40) covers every edge
    results = convergence_profile(50, 0.40, [0, 2, 3, 4, 5])
    for seed, rep in results:
        assert rep.status in (FTD_FOUND, STALLED), seed
        assert rep.iterations <= 60
        assert rep.delta_inf <= 1e-9
        deltas = [r.delta_inf for r in rep.trajectory]
        assert all(b <= a for a, b in zip(deltas, deltas[1:])), seed


def test_profile_warns_below_regime_and_records_failures():
    with pytest.warns(UserWarning, match="np\\^2"):
        results = convergence_profile(40, 0.30, [0, 1, 2])
    for _, rep in results:
        assert rep.status in (FTD_FOUND, STALLED, UNCOVERED_EDGE, GADGET_MISSING)
        if rep.status in (UNCOVERED_EDGE, GADGET_MISSING):
            assert rep.witness is not None


# ---------------------------------------------------------------------------
# emit_plot


def test_scan_plot_and_determinism(tmp_path):
    cfg = ScanConfig(n=50, c_grid=(0.9, 1.2), trials=3, base_seed=3)
    rows = threshold_scan(cfg)
    csv_path = tmp_path / "scan.csv"
    write_scan_csv(csv_path, cfg, rows, header_comments=["n=50 trials=3"])
    digests = []
    for i in range(2):
        out = tmp_path / f"scan{i}.svg"
        assert emit_plot(csv_path, "scan", out) == out
        digests.append(hashlib.sha256(out.read_bytes()).hexdigest())
    assert digests[0] == digests[1]
    head = (tmp_path / "scan0.svg").read_text()[:200]
    assert "<?xml" in head and "svg" in head


def test_trajectory_plot(tmp_path):
    results = convergence_profile(50, 0.40, [0, 2], path=tmp_path / "prof.csv")
    out = emit_plot(tmp_path / "prof.csv", "trajectory")
    assert str(out).endswith("prof.svg")
    assert (tmp_path / "prof.svg").exists()


def test_plot_rejects_bad_inputs(tmp_path):
    good = tmp_path / "t.csv"
    good.write_text("n,p,seed,status,iter,delta_inf\n12,1,5,FTD_FOUND,0,0.5\n")
    with pytest.raises(ValueError):
        emit_plot(good, "histogram")

    bad_field = tmp_path / "bad.csv"
    bad_field.write_text("n,p,seed,status,iter,delta_inf\n12,1,5,FTD_FOUND,zero,0.5\n")
    with pytest.raises(ValueError, match="line 2"):
        emit_plot(bad_field, "trajectory", tmp_path / "bad.svg")
    assert not (tmp_path / "bad.svg").exists()

    wrong_header = tmp_path / "head.csv"
    wrong_header.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError, match="header"):
        emit_plot(wrong_header, "scan", tmp_path / "head.svg")

    empty = tmp_path / "empty.csv"
    empty.write_text(",".join(SCAN_COLUMNS) + "\n")
    with pytest.raises(ValueError, match="no data rows"):
        emit_plot(empty, "scan", tmp_path / "empty.svg")
    assert not (tmp_path / "empty.svg").exists()


def test_plot_skips_comment_lines(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text(
        "# provenance: n=12\n"
        "n,p,seed,status,iter,delta_inf\n"
        "12,1,5,FTD_FOUND,0,1e-16\n"
    )
    out = emit_plot(path, "trajectory", tmp_path / "c.svg")
    assert (tmp_path / "c.svg").exists()
