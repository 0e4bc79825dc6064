"""Command-line front end: one subcommand per capability.

Exit codes: 0 when a result or verdict was delivered, 1 on usage or
input errors, 2 when a capacity or regime guard refused the request.
Numeric flags are echoed as `# key=value` header lines on stdout and
into every written artifact that supports comments, so output files
carry their own provenance.
"""

import argparse
import os
import sys
from fractions import Fraction

import numpy as np

from .errors import CapacityError, FtdkitError, OracleInconclusiveError
from .experiments import (
    HITTING_DELTAS,
    METHODS,
    ScanConfig,
    convergence_profile,
    emit_plot,
    hitting_time_trials,
    threshold_scan,
    write_hitting_csv,
    write_profile_csv,
    write_scan_csv,
)
from .gadgets import read_pattern, stage_diagnostics
from .graphs import (
    build_triangle_index,
    gen_gnp,
    gen_process,
    graph_stats,
    read_graph,
    triangle_density_threshold,
    write_graph,
    write_process_trace,
)
from .oracle import FEASIBLE, INFEASIBLE, UNCOVERED, decide_ftd, write_certificate
from .solver import OPERATORS, SolveOptions, solve, write_trajectory
from .verifier import (
    SuiteReport,
    built_in_cases,
    check_alpha,
    evaluate_case,
    is_k_degenerate,
    max_root_density,
    verify_paper_suite,
)
from .weighting import is_ftd, read_weighting, report, write_weighting

FAMILY_PREFIXES = {
    "all": "",
    "bowtie": "bowtie-",
    "wheel": "wheel-",
    "segment": "segment-",
    "P": "double-",
    "Q": "triple-",
    "H": "typical-",
}


class _Parser(argparse.ArgumentParser):
    # spec'd exit codes: argparse's default usage-error status is 2,
    # which this tool reserves for capacity refusals
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _echo(args, keys):
    parts = []
    for key in keys:
        val = getattr(args, key.replace("-", "_"), None)
        if val is not None:
            parts.append(f"{key}={val}")
    line = " ".join(parts)
    print(f"# {line}")
    return line


def _outdir(args):
    path = args.out_dir or "."
    os.makedirs(path, exist_ok=True)
    return path


def _load_graph(args):
    if args.graph is not None:
        return read_graph(args.graph), f"graph={args.graph}"
    if args.n is None or args.p is None:
        raise ValueError("give either --graph FILE or both --n and --p")
    g = gen_gnp(args.n, args.p, args.seed)
    return g, f"n={args.n} p={args.p} seed={args.seed}"


def _cmd_gen(args):
    provenance = _echo(args, ["n", "p", "seed", "process"])
    if args.process:
        trace = gen_process(args.n, args.seed)
        write_process_trace(args.out, trace)
        print(f"process trace: n={args.n} tau={trace.tau} -> {args.out}")
    else:
        if args.p is None:
            raise ValueError("--p is required unless --process is given")
        g = gen_gnp(args.n, args.p, args.seed)
        write_graph(args.out, g, header_comments=[provenance])
        print(f"graph: n={g.n} m={g.m} -> {args.out}")
    return 0


def _cmd_solve(args):
    g, provenance = _load_graph(args)
    _echo(args, ["k", "eps-stop", "eps-neg", "max-iters", "operator", "cycle-budget"])
    opts = SolveOptions(
        k=args.k,
        eps_stop=args.eps_stop,
        eps_neg=args.eps_neg,
        max_iters=args.max_iters,
        operator=args.operator,
        record_trajectory=True,
        cycle_budget=args.cycle_budget,
    )
    rep = solve(g, opts)
    print(f"status: {rep.status}")
    print(f"iterations: {rep.iterations}")
    print(f"delta_inf: {rep.delta_inf:.17g}")
    if rep.witness is not None:
        print(f"witness: {rep.witness}")
    out = _outdir(args)
    if rep.weighting is not None:
        wpath = os.path.join(out, "weighting.txt")
        write_weighting(wpath, rep.weighting, header_comments=[provenance])
        print(f"min_weight: {float(rep.weighting.values.min()):.17g}")
        print(f"weighting -> {wpath}")
    tpath = os.path.join(out, "trajectory.csv")
    write_trajectory(tpath, rep)
    print(f"trajectory -> {tpath}")
    return 0


def _cmd_check(args):
    _echo(args, ["graph", "weighting", "tol"])
    g = read_graph(args.graph)
    index = build_triangle_index(g)
    w = read_weighting(args.weighting, index)
    rep = report(w)
    print(f"delta_inf: {rep.delta_inf:.17g}")
    print(f"max_vertex_defect: {rep.max_vertex_defect:.17g}")
    print(f"total_weight: {rep.total_weight:.17g}")
    print(f"min_weight: {rep.min_weight:.17g}")
    print(f"is_ftd: {is_ftd(w, args.tol)}")
    return 0


def _cmd_oracle(args):
    g, provenance = _load_graph(args)
    _echo(args, ["mode"])
    res = decide_ftd(g, mode=args.mode)
    print(f"verdict: {res.verdict}")
    out = _outdir(args)
    if res.verdict == FEASIBLE and res.weighting is not None:
        wpath = os.path.join(out, "oracle_weighting.txt")
        write_weighting(wpath, res.weighting, header_comments=[provenance])
        print(f"weighting -> {wpath}")
    elif res.verdict == INFEASIBLE:
        cpath = os.path.join(out, "farkas.txt")
        write_certificate(cpath, g, res.certificate, header_comments=[provenance])
        print(f"certificate -> {cpath}")
    elif res.verdict == UNCOVERED:
        print(f"uncovered edge: {res.edge}")
    return 0


def _cmd_verify(args):
    _echo(args, ["family", "alpha", "k", "pattern", "pattern-dir"])
    if args.pattern is not None:
        pat = read_pattern(args.pattern)
        if args.k is not None:
            order = is_k_degenerate(pat, args.k)
            if order is None:
                print(f"k={args.k}: no degeneracy ordering")
            else:
                print(f"k={args.k}: ordering {order}")
            return 0
        density, witness = max_root_density(pat)
        print(f"max_root_density: {density} at W={sorted(witness)}")
        if args.alpha is not None:
            print(f"alpha={args.alpha}: {check_alpha(pat, args.alpha)}")
        return 0

    prefix = FAMILY_PREFIXES[args.family]
    if args.family in ("all", "H"):
        rep = verify_paper_suite(args.pattern_dir)
        rows = [r for r in rep.rows if r.case.startswith(prefix)]
    else:
        rows = []
        for case, kind, pattern, bound, exact in built_in_cases():
            if not case.startswith(prefix):
                continue
            if kind == "density" and args.alpha is not None:
                bound, exact = Fraction(args.alpha), False
            elif kind == "degeneracy" and args.k is not None:
                bound = args.k
            rows.append(evaluate_case(case, kind, pattern, bound, exact))
    out_rep = SuiteReport(rows)
    print(out_rep.format_table())
    print(f"{len(rows)} rows: {sum(r.verdict == 'PASS' for r in rows)} pass, "
          f"{len(out_rep.failed)} fail, {len(out_rep.skipped)} skipped")
    if args.csv is not None:
        out_rep.to_csv(args.csv)
        print(f"csv -> {args.csv}")
    return 0


def _cmd_scan(args):
    provenance = _echo(args, ["n", "c", "trials", "seed", "method", "threads"])
    grid = tuple(float(x) for x in args.c.split(","))
    cfg = ScanConfig(
        n=args.n,
        c_grid=grid,
        trials=args.trials,
        base_seed=args.seed,
        method=args.method,
        workers=args.threads,
    )
    rows = threshold_scan(cfg)
    for r in rows:
        print(
            f"c={r.c:g} p={r.p:.4f}: uncovered={r.count_uncovered} "
            f"ftd={r.count_ftd} anomaly={r.count_anomaly} "
            f"mean_secs={r.mean_secs:.3f}"
        )
    path = os.path.join(_outdir(args), "scan.csv")
    write_scan_csv(path, cfg, rows, header_comments=[provenance])
    print(f"csv -> {path}")
    return 0


def _cmd_hitting(args):
    provenance = _echo(args, ["n", "trials", "seed", "deltas", "threads"])
    deltas = tuple(int(x) for x in args.deltas.split(",")) if args.deltas else ()
    records = hitting_time_trials(
        args.n, args.trials, args.seed, deltas=deltas, workers=args.threads
    )
    feasible = sum(rec.verdict == FEASIBLE for rec in records)
    for rec in records:
        extra = "".join(f" +{d}:{v}" for d, v in sorted(rec.after.items()))
        print(f"trial {rec.trial} seed {rec.seed} tau={rec.tau} {rec.verdict}{extra}")
    print(f"feasible at tau: {feasible}/{len(records)}")
    path = os.path.join(_outdir(args), "hitting.csv")
    write_hitting_csv(path, args.n, records, deltas=deltas, header_comments=[provenance])
    print(f"csv -> {path}")
    return 0


def _cmd_profile(args):
    provenance = _echo(args, ["n", "p", "seeds"])
    seeds = [int(x) for x in args.seeds.split(",")]
    results = convergence_profile(args.n, args.p, seeds)
    for seed, rep in results:
        print(
            f"seed {seed}: status={rep.status} iterations={rep.iterations} "
            f"delta_inf={rep.delta_inf:.3e}"
        )
    path = os.path.join(_outdir(args), "profile.csv")
    write_profile_csv(path, args.n, args.p, results, header_comments=[provenance])
    print(f"csv -> {path}")
    return 0


def _cmd_plot(args):
    _echo(args, ["csv", "kind", "out"])
    out = emit_plot(args.csv, args.kind, args.out)
    print(f"plot -> {out}")
    return 0


def _cmd_stats(args):
    g, _ = _load_graph(args)
    _echo(args, ["p0", "k"])
    p_ref = args.p0 if args.p0 is not None else (args.p if args.p is not None else None)
    if p_ref is None:
        raise ValueError("give --p0 (or --p) as the reference density")
    st = graph_stats(g, p_ref)
    print(f"n={st.n} m={st.m} p={st.p:g}")
    print(f"degree: min={st.min_degree} max={st.max_degree} "
          f"max_rel_dev={st.max_degree_deviation:.4f} concentrated={st.degree_flag}")
    print(f"codegree: min={st.min_codegree} max={st.max_codegree} "
          f"max_rel_dev={st.max_codegree_deviation:.4f} concentrated={st.codegree_flag}")
    diag = stage_diagnostics(g, p_ref, k=args.k)
    print(f"bowties: min={diag.bowtie_min} max={diag.bowtie_max} "
          f"formula={diag.bowtie_formula:.3e} max_rel_dev={diag.bowtie_max_rel_dev:.3f}")
    print(f"pinwheels: min={diag.pinwheel_min} max={diag.pinwheel_max} "
          f"formula={diag.pinwheel_formula:.3e} max_rel_dev={diag.pinwheel_max_rel_dev:.3f}")
    return 0


def _add_graph_source(sub):
    sub.add_argument("--graph", help="edge-list file (overrides --n/--p/--seed)")
    sub.add_argument("--n", type=int, help="vertex count for G(n,p)")
    sub.add_argument("--p", type=float, help="edge probability for G(n,p)")
    sub.add_argument("--seed", type=int, default=0, help="generator seed")


def build_parser():
    parser = _Parser(prog="ftdkit", description=__doc__)
    subs = parser.add_subparsers(dest="command", metavar="SUBCOMMAND")

    sp = subs.add_parser("gen", parents=[], help="sample a graph or a graph process")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--process", action="store_true", help="emit a full process trace")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_gen)

    sp = subs.add_parser("solve", help="run the three-stage construction")
    _add_graph_source(sp)
    sp.add_argument("--k", type=int, default=4, help="pinwheel half-length")
    sp.add_argument("--eps-stop", type=float, default=1e-9)
    sp.add_argument("--eps-neg", type=float, default=1e-9)
    sp.add_argument("--max-iters", type=int, default=200)
    sp.add_argument("--operator", choices=OPERATORS, default="pinwheel")
    sp.add_argument("--cycle-budget", type=int, default=int(1e9))
    sp.add_argument("--out-dir")
    sp.set_defaults(func=_cmd_solve)

    sp = subs.add_parser("check", help="report how far a weighting is from an FTD")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--weighting", required=True)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.set_defaults(func=_cmd_check)

    sp = subs.add_parser("oracle", help="decide FTD feasibility with certificates")
    _add_graph_source(sp)
    sp.add_argument("--mode", choices=("float", "exact"), default="float")
    sp.add_argument("--out-dir")
    sp.set_defaults(func=_cmd_oracle)

    sp = subs.add_parser("verify", help="density/degeneracy checks for rooted patterns")
    sp.add_argument("--family", choices=sorted(FAMILY_PREFIXES), default="all")
    sp.add_argument("--alpha", help="density bound as an exact 'p/q' string")
    sp.add_argument("--k", type=int, help="degeneracy bound")
    sp.add_argument("--pattern", help="check one pattern file instead of the suite")
    sp.add_argument("--pattern-dir", help="directory holding H1..H6 pattern files")
    sp.add_argument("--csv", help="also write the report rows to this file")
    sp.set_defaults(func=_cmd_verify)

    sp = subs.add_parser("scan", help="threshold scan over a grid of c multipliers")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--c", required=True, help="comma-separated multipliers of p_threshold")
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--method", choices=METHODS, default="lp")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--out-dir")
    sp.set_defaults(func=_cmd_scan)

    sp = subs.add_parser("hitting", help="decide feasibility at the cover time")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--deltas", help=f"comma-separated offsets from {HITTING_DELTAS}")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--out-dir")
    sp.set_defaults(func=_cmd_hitting)

    sp = subs.add_parser("profile", help="per-iteration solver convergence records")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--seeds", required=True, help="comma-separated seed list")
    sp.add_argument("--out-dir")
    sp.set_defaults(func=_cmd_profile)

    sp = subs.add_parser("plot", help="render a scan or trajectory CSV to SVG")
    sp.add_argument("--csv", required=True)
    sp.add_argument("--kind", choices=("scan", "trajectory"), required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_plot)

    sp = subs.add_parser("stats", help="degree/codegree and gadget abundance summary")
    _add_graph_source(sp)
    sp.add_argument("--p0", type=float, help="reference density (defaults to --p)")
    sp.add_argument("--k", type=int, default=4)
    sp.set_defaults(func=_cmd_stats)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "func", None) is None:
        parser.print_help()
        return 1
    try:
        return args.func(args)
    except (CapacityError, OracleInconclusiveError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except (FtdkitError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
