"""Desk-scale random-graph experiments around the triangle-cover threshold.

Three drivers: ``threshold_scan`` samples G(n, c.p_threshold) over a grid
of c and buckets each sample as uncovered / ftd / anomaly, ``hitting_time_trials``
runs the random graph process and decides feasibility at the moment every
edge first lies in a triangle, and ``convergence_profile`` records the
solver's per-iteration distance from exactness.  Every trial derives its
own Philox key as ``base_seed XOR trial_index``, so runs are reproducible
regardless of parallelism width.  CSV output is deterministic given the
config, apart from the wall-clock ``secs`` column.
"""

import csv
import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import CapacityError
from .graphs import (
    build_triangle_index,
    gen_gnp,
    gen_process,
    triangle_density_threshold,
    uncovered_edges,
)
from .oracle import FEASIBLE, decide_ftd
from .solver import SolveOptions, solve

__all__ = [
    "SCAN_TRIANGLE_CAP",
    "SCAN_COLUMNS",
    "HITTING_COLUMNS",
    "PROFILE_COLUMNS",
    "METHODS",
    "HITTING_DELTAS",
    "ScanConfig",
    "ScanRow",
    "HittingRecord",
    "expected_triangles",
    "threshold_scan",
    "write_scan_csv",
    "hitting_time_trials",
    "write_hitting_csv",
    "convergence_profile",
    "write_profile_csv",
    "emit_plot",
]

SCAN_TRIANGLE_CAP = 50_000  # expected-triangle refusal threshold per cell

METHODS = ("lp", "solver", "both")

HITTING_DELTAS = (10, 50)

SCAN_COLUMNS = ("n", "c", "p", "trials", "uncovered", "ftd", "anomaly", "seed", "secs")
HITTING_COLUMNS = ("n", "trial", "seed", "tau", "verdict")
PROFILE_COLUMNS = ("n", "p", "seed", "status", "iter", "delta_inf")

BUCKETS = ("uncovered", "ftd", "anomaly")


def expected_triangles(n, p):
    """First-order expected triangle count of G(n, p)."""
    return math.comb(n, 3) * p**3


def _capacity_guard(n, p, what):
    t_exp = expected_triangles(n, p)
    if t_exp > SCAN_TRIANGLE_CAP:
        raise CapacityError(
            f"{what}: expected {t_exp:.0f} triangles at n={n}, p={p:.4f} "
            f"exceeds the per-cell cap of {SCAN_TRIANGLE_CAP}; shrink n or c"
        )


@dataclass
class ScanConfig:
    """Grid description for ``threshold_scan``."""

    n: int
    c_grid: tuple
    trials: int
    base_seed: int
    method: str = "lp"
    workers: int = 1

    def __post_init__(self):
        self.c_grid = tuple(float(c) for c in self.c_grid)
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.c_grid:
            raise ValueError("c_grid must be nonempty")
        if any(c <= 0 for c in self.c_grid):
            raise ValueError("every c must be positive")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


@dataclass
class ScanRow:
    """One grid point: trial counts bucketed by outcome."""

    c: float
    p: float
    trials: int
    count_uncovered: int
    count_ftd: int
    count_anomaly: int
    mean_secs: float

    def __post_init__(self):
        total = self.count_uncovered + self.count_ftd + self.count_anomaly
        if total != self.trials:
            raise ValueError("bucket counts must partition the trials")


def _classify(graph, method):
    """Bucket one sample.  The anomaly call always rests on the oracle."""
    index = build_triangle_index(graph)
    if len(uncovered_edges(graph, index)):
        return "uncovered"
    solver_found = False
    if method in ("solver", "both"):
        try:
            solver_found = solve(graph).ok()
        except CapacityError:
            solver_found = False
    if method == "solver" and solver_found:
        return "ftd"
    res = decide_ftd(graph, index=index)
    if solver_found and res.verdict != FEASIBLE:
        raise RuntimeError("solver produced an FTD on an oracle-infeasible graph")
    return "ftd" if res.verdict == FEASIBLE else "anomaly"


def threshold_scan(cfg):
    """Sample ``trials`` copies of G(n, c.p_threshold) per grid point.

    Returns one ScanRow per c, in grid order.  Each trial is classified
    as exactly one of uncovered / ftd / anomaly; anomaly means every edge
    lies in a triangle yet no fractional decomposition exists.
    """
    p_thresh = triangle_density_threshold(cfg.n)
    cells = []
    for ci, c in enumerate(cfg.c_grid):
        p = c * p_thresh
        if p > 1.0:
            raise ValueError(f"c={c} puts the edge probability {p:.4f} above 1")
        _capacity_guard(cfg.n, p, f"scan cell c={c}")
        cells.append((ci, c, p))

    rows = []
    for ci, c, p in cells:
        def one_trial(trial, p=p, ci=ci):
            seed = cfg.base_seed ^ (ci * cfg.trials + trial)
            g = gen_gnp(cfg.n, p, seed)
            t0 = time.perf_counter()
            bucket = _classify(g, cfg.method)
            return bucket, time.perf_counter() - t0

        if cfg.workers > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                outcomes = list(pool.map(one_trial, range(cfg.trials)))
        else:
            outcomes = [one_trial(t) for t in range(cfg.trials)]

        counts = {b: 0 for b in BUCKETS}
        for bucket, _ in outcomes:
            counts[bucket] += 1
        rows.append(
            ScanRow(
                c=c,
                p=p,
                trials=cfg.trials,
                count_uncovered=counts["uncovered"],
                count_ftd=counts["ftd"],
                count_anomaly=counts["anomaly"],
                mean_secs=math.fsum(dt for _, dt in outcomes) / cfg.trials,
            )
        )
    return rows


def write_scan_csv(path, cfg, rows, header_comments=()):
    with open(path, "w", newline="") as fh:
        for line in header_comments:
            fh.write(f"# {line}\n")
        wr = csv.writer(fh)
        wr.writerow(SCAN_COLUMNS)
        for row in rows:
            wr.writerow(
                [
                    cfg.n,
                    f"{row.c:.17g}",
                    f"{row.p:.17g}",
                    row.trials,
                    row.count_uncovered,
                    row.count_ftd,
                    row.count_anomaly,
                    cfg.base_seed,
                    f"{row.mean_secs:.6f}",
                ]
            )


@dataclass
class HittingRecord:
    """One run of the random graph process, decided at the cover time."""

    trial: int
    seed: int
    tau: int
    verdict: str
    after: dict  # extra verdicts keyed by the offset past tau


def hitting_time_trials(n, trials, base_seed, deltas=(), workers=1):
    """Decide feasibility at the moment the graph first covers its edges.

    ``deltas`` may list offsets from ``HITTING_DELTAS``; each adds a
    verdict on the graph ``delta`` steps after tau (clamped to the end of
    the process).  Records come back in trial order.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    deltas = tuple(int(d) for d in deltas)
    for d in deltas:
        if d not in HITTING_DELTAS:
            raise ValueError(f"delta {d} not in {HITTING_DELTAS}")
    _capacity_guard(n, triangle_density_threshold(n), "hitting-time run")
    total_steps = n * (n - 1) // 2

    def one_trial(trial):
        seed = base_seed ^ trial
        trace = gen_process(n, seed)
        tau = trace.tau
        verdict = decide_ftd(trace.graph_at(tau)).verdict
        after = {}
        for d in deltas:
            g = trace.graph_at(min(tau + d, total_steps))
            after[d] = decide_ftd(g).verdict
        return HittingRecord(trial=trial, seed=seed, tau=tau, verdict=verdict, after=after)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one_trial, range(trials)))
    return [one_trial(t) for t in range(trials)]


def write_hitting_csv(path, n, records, deltas=(), header_comments=()):
    deltas = tuple(int(d) for d in deltas)
    cols = HITTING_COLUMNS + tuple(f"verdict_tau_plus_{d}" for d in deltas)
    with open(path, "w", newline="") as fh:
        for line in header_comments:
            fh.write(f"# {line}\n")
        wr = csv.writer(fh)
        wr.writerow(cols)
        for rec in records:
            row = [n, rec.trial, rec.seed, rec.tau, rec.verdict]
            row.extend(rec.after[d] for d in deltas)
            wr.writerow(row)


def convergence_profile(n, p, seeds, path=None, opts=None):
    """Run the staged solver per seed with trajectory recording.

    Returns ``[(seed, SolveReport), ...]``.  Runs that stop early (an
    uncovered edge, a missing gadget) keep their status in the report and
    simply contribute fewer or no trajectory rows.  Writes the long-form
    CSV to ``path`` when given.
    """
    npp = n * p * p
    if npp < 4:
        warnings.warn(f"np^2 = {npp:.2f} is below 4; outside the balancing regime")
    if opts is None:
        opts = SolveOptions(record_trajectory=True)
    elif not opts.record_trajectory:
        opts = replace(opts, record_trajectory=True)
    results = []
    for seed in seeds:
        g = gen_gnp(n, p, int(seed))
        results.append((int(seed), solve(g, opts)))
    if path is not None:
        write_profile_csv(path, n, p, results)
    return results


def write_profile_csv(path, n, p, results, header_comments=()):
    with open(path, "w", newline="") as fh:
        for line in header_comments:
            fh.write(f"# {line}\n")
        wr = csv.writer(fh)
        wr.writerow(PROFILE_COLUMNS)
        for seed, rep in results:
            for row in rep.trajectory:
                wr.writerow(
                    [n, f"{p:.17g}", seed, rep.status, row.iter, f"{row.delta_inf:.17g}"]
                )


# ---------------------------------------------------------------------------
# plotting


def _read_csv_rows(path, columns):
    """Rows as (lineno, fields), validated against the expected header."""
    rows = []
    header_seen = False
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            s = raw.strip()
            if not s or s.startswith("#"):
                continue
            fields = next(csv.reader([raw]))
            if not header_seen:
                got = tuple(f.strip() for f in fields)
                if got != tuple(columns):
                    raise ValueError(
                        f"{path} line {lineno}: expected header "
                        f"{','.join(columns)}, got {','.join(got)}"
                    )
                header_seen = True
                continue
            if len(fields) != len(columns):
                raise ValueError(
                    f"{path} line {lineno}: expected {len(columns)} fields, "
                    f"got {len(fields)}"
                )
            rows.append((lineno, fields))
    if not header_seen:
        raise ValueError(f"{path}: no header line found")
    return rows


def _field(path, lineno, name, raw, conv):
    try:
        return conv(raw)
    except ValueError:
        raise ValueError(f"{path} line {lineno}: bad {name} value {raw!r}") from None


def emit_plot(csv_path, kind, out_path=None):
    """Render a scan or trajectory CSV to a self-contained SVG.

    The CSV is fully parsed and validated before any file is created, so
    a malformed or empty input never leaves a partial plot behind.
    """
    if kind not in ("scan", "trajectory"):
        raise ValueError("kind must be 'scan' or 'trajectory'")
    if out_path is None:
        base = str(csv_path)
        out_path = (base[:-4] if base.endswith(".csv") else base) + ".svg"

    if kind == "scan":
        data = []
        for lineno, f in _read_csv_rows(csv_path, SCAN_COLUMNS):
            c = _field(csv_path, lineno, "c", f[1], float)
            trials = _field(csv_path, lineno, "trials", f[3], int)
            unc = _field(csv_path, lineno, "uncovered", f[4], int)
            ftd = _field(csv_path, lineno, "ftd", f[5], int)
            anom = _field(csv_path, lineno, "anomaly", f[6], int)
            n = _field(csv_path, lineno, "n", f[0], int)
            data.append((c, trials, unc, ftd, anom, n))
        if not data:
            raise ValueError(f"{csv_path}: no data rows to plot")
        _plot_scan(data, out_path)
    else:
        data = []
        for lineno, f in _read_csv_rows(csv_path, PROFILE_COLUMNS):
            seed = _field(csv_path, lineno, "seed", f[2], int)
            it = _field(csv_path, lineno, "iter", f[4], int)
            delta = _field(csv_path, lineno, "delta_inf", f[5], float)
            data.append((seed, it, delta))
        if not data:
            raise ValueError(f"{csv_path}: no data rows to plot")
        _plot_trajectory(data, out_path)
    return out_path


def _figure():
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "ftdkit"
    import matplotlib.pyplot as plt

    return plt


def _save(plt, fig, out_path):
    # a fixed hashsalt plus no date stamp makes the SVG a pure function
    # of the data
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _plot_scan(data, out_path):
    plt = _figure()
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    xs = np.arange(len(data))
    unc = np.array([row[2] / row[1] for row in data])
    ftd = np.array([row[3] / row[1] for row in data])
    anom = np.array([row[4] / row[1] for row in data])
    ax.bar(xs, unc, color="#b4656f", label="uncovered edge")
    ax.bar(xs, anom, bottom=unc, color="#e3b448", label="covered, no ftd")
    ax.bar(xs, ftd, bottom=unc + anom, color="#5b8c85", label="ftd")
    ax.set_xticks(xs)
    ax.set_xticklabels([f"{row[0]:g}" for row in data])
    ax.set_xlabel("c  (edge probability c * p_threshold)")
    ax.set_ylabel("fraction of trials")
    ax.set_ylim(0, 1)
    ax.set_title(f"triangle-cover scan, n={data[0][5]}, {data[0][1]} trials per point")
    ax.legend(loc="center left", bbox_to_anchor=(1.0, 0.5), frameon=False)
    fig.tight_layout()
    _save(plt, fig, out_path)


def _plot_trajectory(data, out_path):
    plt = _figure()
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    by_seed = {}
    for seed, it, delta in data:
        by_seed.setdefault(seed, []).append((it, delta))
    floor = 1e-17  # keeps exact zeros visible on the log axis
    for seed in sorted(by_seed):
        pts = sorted(by_seed[seed])
        xs = [q[0] for q in pts]
        ys = [max(q[1], floor) for q in pts]
        ax.plot(xs, ys, marker="o", markersize=2.5, linewidth=1.0, label=f"seed {seed}")
    ax.set_yscale("log")
    ax.set_xlabel("iteration")
    ax.set_ylabel("max edge discrepancy")
    ax.set_title("solver convergence")
    ax.legend(loc="upper right", frameon=False, fontsize=8)
    fig.tight_layout()
    _save(plt, fig, out_path)
