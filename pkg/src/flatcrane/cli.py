"""Batch command-line front-end.

Subcommands:
    plan      optimize one operation, write pareto.csv and trajectory.csv
    sweep     deterministic grid sweep producing the dense oracle front
    compare   repeated seeded runs of gde3 vs co-gde3 with statistics
    validate  check a trajectory file against limits and the swing oracle

Exit codes: 0 success, 1 infeasible problem or failed validation, 2 bad
configuration.  All CSV output uses 9 significant digits, comma delimiters
and LF line endings so reruns with the same seed are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .afmf import afmf_select
from .config import ConfigError, PlanConfig, load_config
from .crane import trolley_states_from_flat, slew_states_from_flat
from .metrics import ParetoFront, aggregate_stats, fe_to_converge, hyperarea, spacing
from .moea import MoeaConfig, gde3_run
from .motop import (
    InfeasibleProblemError,
    SamplingConfig,
    make_problem,
    sweep_grid,
)
from .oracle import integrate_trolley_swings, slew_consistency_report
from .trajectory import build_slew_flats, build_trolley_flat

ALGORITHMS = {"gde3": "random", "co-gde3": "collective"}

TROLLEY_COLUMNS = ("t", "d_T", "d_T_vel", "d_T_acc", "alpha_h", "alpha_l",
                   "alpha_h_vel", "alpha_l_vel", "alpha_h_acc", "alpha_l_acc")
SLEW_COLUMNS = ("t", "theta_S", "theta_S_vel", "theta_S_acc",
                "alpha_h", "beta_h", "alpha_l", "beta_l")


def fmt(value: float) -> str:
    """Format a number with 9 significant digits, normalizing -0."""
    v = float(value)
    if v == 0.0:
        v = 0.0
    return f"{v:.9g}"


def write_csv(path: Path, header: tuple[str, ...], rows) -> None:
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([cell if isinstance(cell, str) else fmt(cell)
                             for cell in row])


def thread_count() -> int:
    """Worker cap from FLATCRANE_THREADS (default 1, serial)."""
    raw = os.environ.get("FLATCRANE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def sample_trajectory(cfg: PlanConfig, t_op: float) -> dict[str, np.ndarray]:
    """Sample the planned states of the configured operation at ~dt spacing."""
    op = cfg.operation
    n = max(2, int(round(t_op / cfg.sampling.dt)))
    t = np.linspace(0.0, t_op, n + 1)
    problem = make_problem(op, cfg.limits, cfg.params, cfg.sampling)
    if op.kind == "trolley":
        flat = build_trolley_flat(op.start, op.goal, t_op)
        state = trolley_states_from_flat(flat.eval_derivs(t, 6), problem.params)
        return {
            "t": t, "d_T": state.d_t, "d_T_vel": state.d_t_vel,
            "d_T_acc": state.d_t_acc, "alpha_h": state.alpha_h,
            "alpha_l": state.alpha_l, "alpha_h_vel": state.alpha_h_vel,
            "alpha_l_vel": state.alpha_l_vel, "alpha_h_acc": state.alpha_h_acc,
            "alpha_l_acc": state.alpha_l_acc,
        }
    flats = build_slew_flats(op.start, op.goal, op.d_t, t_op)
    state = slew_states_from_flat(
        flats.x_h.eval_derivs(t, 2), flats.y_h.eval_derivs(t, 2),
        flats.x_l.eval_derivs(t, 6), flats.y_l.eval_derivs(t, 2),
        op.d_t, problem.params)
    return {
        "t": t, "theta_S": state.theta_s, "theta_S_vel": state.theta_s_vel,
        "theta_S_acc": state.theta_s_acc, "alpha_h": state.alpha_h,
        "beta_h": state.beta_h, "alpha_l": state.alpha_l, "beta_l": state.beta_l,
    }


def write_trajectory_csv(path: Path, cols: dict[str, np.ndarray]) -> None:
    names = TROLLEY_COLUMNS if "d_T" in cols else SLEW_COLUMNS
    rows = zip(*(cols[name] for name in names))
    write_csv(path, names, rows)


def write_pareto_csv(path: Path, points: np.ndarray, decisions: np.ndarray,
                     selection) -> None:
    header = ("t_op", "f1", "f2", "lambda1", "lambda2", "Lambda", "selected")
    scores = selection.scores
    rows = []
    for i, (obj, dec) in enumerate(zip(points, decisions)):
        rows.append((dec[0], obj[0], obj[1], selection.lambda1[i],
                     selection.lambda2[i], scores[i],
                     "1" if i == selection.index else "0"))
    write_csv(path, header, rows)


def cmd_plan(args) -> int:
    cfg = load_config(args.config, seed_override=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    problem = make_problem(cfg.operation, cfg.limits, cfg.params, cfg.sampling)
    result = gde3_run(problem, cfg.moea, init=ALGORITHMS[args.algorithm])
    if result.front_points.shape[0] == 0:
        print("plan: no feasible solution within the operating-time bound",
              file=sys.stderr)
        return 1
    front = ParetoFront(result.front_points)
    selection = afmf_select(front)
    write_pareto_csv(out / "pareto.csv", front.points,
                     result.front_decisions, selection)
    t_sel = float(result.front_decisions[selection.index][0])
    cols = sample_trajectory(cfg, t_sel)
    write_trajectory_csv(out / "trajectory.csv", cols)

    f_sel = front.points[selection.index]
    print(f"algorithm: {args.algorithm}  seed: {cfg.seed}")
    print(f"front size: {len(front)}  evaluations: {result.evaluations}")
    print(f"selected: t_op = {fmt(t_sel)} s, f2 = {fmt(f_sel[1])}, "
          f"Lambda = {fmt(selection.score)}")
    print(f"wrote {out / 'pareto.csv'} and {out / 'trajectory.csv'}")

    if not args.no_plots:
        from . import plots
        plots.plot_front(front.points, selection.index, out / "pareto_front.png",
                         title=f"{cfg.operation.kind} front ({args.algorithm})")
        if cfg.operation.kind == "trolley":
            plots.plot_trolley_trajectory(cols, cfg.limits, out / "trajectory.png")
        else:
            plots.plot_slew_trajectory(cols, cfg.limits, out / "trajectory.png")
    return 0


def cmd_sweep(args) -> int:
    cfg = load_config(args.config, seed_override=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    t, f, cv = sweep_grid(cfg.operation, cfg.limits, cfg.params, cfg.sampling,
                          resolution=args.resolution)
    write_csv(out / "sweep.csv", ("t_op", "f1", "f2", "violation"),
              zip(t, f[:, 0], f[:, 1], cv))
    feasible = cv == 0.0
    if not np.any(feasible):
        print("sweep: no feasible operating time on the grid", file=sys.stderr)
        return 1
    from .metrics import nondominated
    front = ParetoFront(nondominated(f[feasible]))
    selection = afmf_select(front)
    sel = front.points[selection.index]
    t_min = float(t[feasible][0])
    print(f"grid resolution: {fmt(args.resolution)} s "
          f"({t.size} points, {int(feasible.sum())} feasible)")
    print(f"min feasible time: {fmt(t_min)} s with f2 = {fmt(f[feasible][0, 1])}")
    print(f"f2 at t_max {fmt(t[feasible][-1])} s: {fmt(f[feasible][-1, 1])}")
    print(f"AFMF: Lambda_max = {fmt(selection.score)} at "
          f"({fmt(sel[0])} s, {fmt(sel[1])})")
    print(f"wrote {out / 'sweep.csv'}")
    if not args.no_plots:
        from . import plots
        plots.plot_sweep(t, f[:, 1], feasible, out / "sweep.png")
    return 0


def _compare_one(payload) -> tuple[str, int, float, float, int]:
    """One seeded optimizer run; returns (algorithm, run, ha, sp, fe)."""
    cfg, algorithm, run_index = payload
    run_seed = int(np.random.SeedSequence([cfg.seed, run_index])
                   .generate_state(1, dtype=np.uint64)[0])
    moea = MoeaConfig(cr=cfg.moea.cr, f=cfg.moea.f,
                      population=cfg.moea.population,
                      max_evaluations=cfg.moea.max_evaluations, seed=run_seed)
    problem = make_problem(cfg.operation, cfg.limits, cfg.params, cfg.sampling)
    result = gde3_run(problem, moea, init=ALGORITHMS[algorithm])
    front = ParetoFront(result.front_points)
    ha = hyperarea(front, scale=cfg.normalization)
    sp = spacing(front, scale=cfg.normalization)
    fe = fe_to_converge(result.history, scale=cfg.normalization,
                        epsilon=cfg.epsilon)
    return algorithm, run_index, ha, sp, fe


def cmd_compare(args) -> int:
    cfg = load_config(args.config, seed_override=args.seed)
    if args.runs < 2:
        print("compare: need at least 2 runs", file=sys.stderr)
        return 2
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    algorithms = [args.algorithm] if args.algorithm else list(ALGORITHMS)
    jobs = [(cfg, algo, run) for algo in algorithms for run in range(args.runs)]
    workers = thread_count()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_compare_one, jobs))
    else:
        results = [_compare_one(job) for job in jobs]

    per_algo: dict[str, dict[str, list[float]]] = {
        a: {"HA": [], "SP": [], "FE": []} for a in algorithms}
    run_rows = []
    for algorithm, run, ha, sp, fe in results:
        per_algo[algorithm]["HA"].append(ha)
        per_algo[algorithm]["SP"].append(sp)
        per_algo[algorithm]["FE"].append(fe)
        run_rows.append((algorithm, str(run), ha, sp, fe))
    run_rows.sort(key=lambda r: (r[0], int(r[1])))
    write_csv(out / "runs.csv", ("algorithm", "run", "HA", "SP", "FE"), run_rows)

    header = ("metric", "algorithm", "problem", "mean", "std",
              "q0", "q1", "q2", "q3", "q4")
    stats_rows = []
    for metric in ("HA", "SP", "FE"):
        for algorithm in algorithms:
            s = aggregate_stats(per_algo[algorithm][metric])
            stats_rows.append((metric, algorithm, cfg.operation.kind,
                               s.mean, s.std, s.q0, s.q1, s.q2, s.q3, s.q4))
            print(f"{metric:>3} {algorithm:>8}: mean={fmt(s.mean)} "
                  f"std={fmt(s.std)} median={fmt(s.q2)}")
    write_csv(out / "stats.csv", header, stats_rows)
    print(f"wrote {out / 'stats.csv'} ({args.runs} runs per algorithm)")

    if not args.no_plots:
        from . import plots
        metric_values = {m: {a: per_algo[a][m] for a in algorithms}
                         for m in ("HA", "SP", "FE")}
        plots.plot_compare_box(metric_values, out / "compare_box.png",
                               title=f"{cfg.operation.kind}, {args.runs} runs")
    return 0


def _read_trajectory(path: Path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [list(map(float, row)) for row in reader if row]
    data = np.array(rows)
    if data.shape[0] < 2 or data.shape[1] != len(header):
        raise ValueError("trajectory file too short or malformed")
    return {name: data[:, i] for i, name in enumerate(header)}


def cmd_validate(args) -> int:
    cfg = load_config(args.config, seed_override=args.seed)
    try:
        cols = _read_trajectory(Path(args.trajectory))
    except (OSError, ValueError) as exc:
        print(f"validate: cannot read trajectory: {exc}", file=sys.stderr)
        return 2
    expected = TROLLEY_COLUMNS if cfg.operation.kind == "trolley" else SLEW_COLUMNS
    if tuple(cols.keys()) != expected:
        print(f"validate: trajectory columns do not match a "
              f"{cfg.operation.kind} plan", file=sys.stderr)
        return 2

    lim = cfg.limits
    if cfg.operation.kind == "trolley":
        checks = [
            ("trolley_vel", np.max(np.abs(cols["d_T_vel"])), lim.trolley_vel),
            ("trolley_acc", np.max(np.abs(cols["d_T_acc"])), lim.trolley_acc),
            ("alpha_h", np.max(np.abs(cols["alpha_h"])), lim.alpha_h),
            ("alpha_l", np.max(np.abs(cols["alpha_l"])), lim.alpha_l),
        ]
    else:
        checks = [
            ("slew_vel", np.max(np.abs(cols["theta_S_vel"])), lim.slew_vel),
            ("slew_acc", np.max(np.abs(cols["theta_S_acc"])), lim.slew_acc),
            ("alpha_h", np.max(np.abs(cols["alpha_h"])), lim.alpha_h),
            ("beta_h", np.max(np.abs(cols["beta_h"])), lim.beta_h),
            ("alpha_l", np.max(np.abs(cols["alpha_l"])), lim.alpha_l),
            ("beta_l", np.max(np.abs(cols["beta_l"])), lim.beta_l),
        ]

    report_rows = []
    failed = []
    for name, peak, limit in checks:
        ratio = peak / limit
        status = "ok" if ratio <= 1.0 + 1e-9 else "exceeded"
        if status == "exceeded":
            failed.append(name)
        report_rows.append((name, peak, limit, ratio, status))

    extras: list[tuple[str, float]] = []
    t = cols["t"]
    if cfg.operation.kind == "trolley":
        dt = float(t[1] - t[0])
        trace = integrate_trolley_swings(cols["d_T_acc"], _op_params(cfg), dt)
        dev_h = float(np.max(np.abs(trace.alpha_h - cols["alpha_h"])))
        dev_l = float(np.max(np.abs(trace.alpha_l - cols["alpha_l"])))
        extras.append(("max_sim_deviation_alpha_h", dev_h))
        extras.append(("max_sim_deviation_alpha_l", dev_l))
        extras.append(("terminal_alpha_h", abs(float(cols["alpha_h"][-1]))))
        extras.append(("terminal_alpha_l", abs(float(cols["alpha_l"][-1]))))
        extras.append(("terminal_alpha_h_vel", abs(float(cols["alpha_h_vel"][-1]))))
        extras.append(("terminal_alpha_l_vel", abs(float(cols["alpha_l_vel"][-1]))))
        extras.append(("terminal_sim_alpha_h", abs(float(trace.alpha_h[-1]))))
        extras.append(("terminal_sim_alpha_l", abs(float(trace.alpha_l[-1]))))
    else:
        flats = build_slew_flats(cfg.operation.start, cfg.operation.goal,
                                 cfg.operation.d_t, float(t[-1]))
        report = slew_consistency_report(flats, _op_params(cfg), cfg.operation.d_t,
                                         cfg.sampling.n_samples)
        extras.append(("x_projection_residual", report.x_residual))
        extras.append(("y_projection_residual", report.y_residual))
        extras.append(("terminal_alpha_h", abs(float(cols["alpha_h"][-1]))))
        extras.append(("terminal_alpha_l", abs(float(cols["alpha_l"][-1]))))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = [(name, peak, limit, ratio, status)
            for name, peak, limit, ratio, status in report_rows]
    rows += [(name, value, "", "", "info") for name, value in extras]
    write_csv(out / "validation.csv",
              ("quantity", "value", "limit", "ratio", "status"), rows)

    for name, peak, limit, ratio, status in report_rows:
        print(f"{name:>12}: peak {fmt(peak)} / limit {fmt(limit)} "
              f"(ratio {fmt(ratio)}) {status}")
    for name, value in extras:
        print(f"{name:>28}: {fmt(value)}")
    if failed:
        print(f"FAIL: limits exceeded: {', '.join(failed)}")
        return 1
    print("PASS: all limits satisfied")
    return 0


def _op_params(cfg: PlanConfig):
    """Crane parameters with the operation's hoist length in effect."""
    from .crane import CraneParams
    return CraneParams(cfg.params.m_h, cfg.params.m_l, cfg.operation.d_h,
                       cfg.params.d_l, cfg.params.g)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flatcrane",
        description="Anti-swing trajectory planning for double-pendulum "
                    "tower crane operations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="JSON configuration file")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
        p.add_argument("--out", default="out", help="output directory")

    p = sub.add_parser("plan", help="optimize one operation and export the plan")
    common(p)
    p.add_argument("--algorithm", choices=list(ALGORITHMS), default="co-gde3")
    p.add_argument("--no-plots", action="store_true", help="skip figure rendering")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("sweep", help="deterministic grid sweep of operating times")
    common(p)
    p.add_argument("--resolution", type=float, default=0.01,
                   help="grid spacing in seconds")
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="statistical comparison of the optimizers")
    common(p)
    p.add_argument("--runs", type=int, default=25, help="runs per algorithm")
    p.add_argument("--algorithm", choices=list(ALGORITHMS), default=None,
                   help="restrict to one algorithm (default: both)")
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("validate", help="check a trajectory file against limits")
    common(p)
    p.add_argument("--trajectory", required=True, help="trajectory.csv to check")
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleProblemError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
