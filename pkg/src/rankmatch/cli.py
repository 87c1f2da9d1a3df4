"""Command-line interface: solve / dynamics / sweep / analytic / oracle / btapp.

Every subcommand emits CSV (stdout by default, `--out FILE` otherwise;
relative paths are joined onto $RANKMATCH_OUT_DIR when set) and echoes
its parameters as one stderr line.  Exit codes: 0 success, 2 usage
error, 1 runtime error.  All randomness is controlled by explicit seed
flags; multi-seed work derives per-run seeds as base+index, so results
are reproducible regardless of --jobs.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import analytic, btapp, dynamics, structure
from .core import (
    Instance,
    Ranking,
    SlotCapacities,
    read_acceptance_graph,
    read_capacities,
    write_edge_list,
)
from .generators import (
    gen_complete,
    gen_erdos_renyi,
    sample_capacities_constant,
    sample_capacities_normal,
)
from .solver import stable_configuration


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankmatch",
        description="Stable b-matching of globally ranked peers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute the stable configuration")
    _instance_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("dynamics", help="initiative trajectories")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=float, required=True,
                   help="expected acceptance degree")
    p.add_argument("--b", type=int, default=1,
                   help="slots per peer (trajectories need 1)")
    p.add_argument("--strategy", default="best_mate",
                   choices=["best_mate", "decremental", "random"])
    p.add_argument("--churn-rate", type=float, default=0.0,
                   help="expected arrivals+departures per base unit")
    p.add_argument("--victim", type=int, default=None,
                   help="remove this rank from the stable configuration")
    p.add_argument("--seeds", default="0",
                   help="run seeds: '7', '0,3,9', or '0:50'")
    p.add_argument("--graph-seed", type=int, default=0)
    p.add_argument("--max-units", type=int, default=50)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_dynamics)

    p = sub.add_parser("sweep", help="cluster size and MMO vs sigma")
    p.add_argument("--bbar", type=float, required=True)
    p.add_argument("--sigmas", required=True,
                   help="comma-separated sigma values")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seeds", default="10",
                   help="seed count, list, or range (see dynamics)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("analytic", help="pairing probabilities")
    p.add_argument("--n", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--p", type=float, default=None)
    group.add_argument("--d", type=float, default=None,
                       help="expected degree; sets p = d/(n-1)")
    p.add_argument("--b0", type=int, default=1)
    p.add_argument("--rows", default="all",
                   help="'all' or comma-separated peer ranks")
    p.add_argument("--mass", action="store_true",
                   help="emit per-peer total matching mass instead")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_analytic)

    p = sub.add_parser("oracle",
                       help="exact / Monte Carlo / recurrence comparison")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--b0", type=int, default=1)
    p.add_argument("--draws", type=int, default=0,
                   help="Monte Carlo draws (0 = skip)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("btapp", help="expected share-ratio curve")
    p.add_argument("--cdf", default="sample",
                   help="bandwidth CDF file, or 'sample' for the shipped one")
    p.add_argument("--b0", type=int, default=3)
    p.add_argument("--d", type=float, default=20.0)
    p.add_argument("--n", type=int, default=btapp.DEFAULT_RESOLUTION)
    p.add_argument("--upload-slots", type=int, default=None,
                   help="divide partner upload by this many slots "
                        "(default b0)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_btapp)
    return parser


def _instance_flags(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--complete", type=int, metavar="N")
    src.add_argument("--erdos", type=int, metavar="N")
    src.add_argument("--graph", metavar="FILE")
    p.add_argument("--d", type=float, default=None,
                   help="expected degree for --erdos")
    p.add_argument("--graph-seed", type=int, default=0)
    cap = p.add_mutually_exclusive_group(required=True)
    cap.add_argument("--b", type=int, metavar="B0")
    cap.add_argument("--b-normal", nargs=2, type=float,
                     metavar=("MEAN", "SIGMA"))
    cap.add_argument("--caps", metavar="FILE")
    p.add_argument("--caps-seed", type=int, default=0)


def _load_instance(args) -> Instance:
    if args.complete is not None:
        graph = gen_complete(args.complete)
    elif args.erdos is not None:
        if args.d is None:
            raise ValueError("--erdos needs --d")
        graph = gen_erdos_renyi(args.erdos, args.d, args.graph_seed)
    else:
        with open(args.graph) as fh:
            graph = read_acceptance_graph(fh)
    n = graph.n
    if args.b is not None:
        caps = sample_capacities_constant(n, args.b)
    elif args.b_normal is not None:
        caps = sample_capacities_normal(
            n, args.b_normal[0], args.b_normal[1], args.caps_seed)
    else:
        with open(args.caps) as fh:
            caps = read_capacities(fh)
    return Instance(graph, Ranking(n), caps)


def _parse_seeds(spec: str) -> list[int]:
    spec = spec.strip()
    if ":" in spec:
        lo, hi = spec.split(":")
        return list(range(int(lo), int(hi)))
    return [int(x) for x in spec.split(",") if x.strip()]


def _open_out(path: str | None):
    if path is None:
        return sys.stdout, False
    out_dir = os.environ.get("RANKMATCH_OUT_DIR")
    if out_dir and not os.path.isabs(path):
        path = os.path.join(out_dir, path)
    return open(path, "w"), True


def _echo(args, **kv) -> None:
    pairs = " ".join(f"{k}={v}" for k, v in kv.items())
    print(f"# {args.command} {pairs}", file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_solve(args) -> int:
    instance = _load_instance(args)
    config = stable_configuration(
        instance.graph, instance.ranking, instance.caps)
    unfilled = instance.caps.total - 2 * config.num_edges
    _echo(args, n=instance.n, edges=config.num_edges, unfilled=unfilled)
    fh, close = _open_out(args.out)
    try:
        write_edge_list(config, fh)
    finally:
        if close:
            fh.close()
    print(f"edges={config.num_edges} unfilled={unfilled}", file=sys.stderr)
    return 0


def _dynamics_one(params) -> list[tuple]:
    kind, n, d, strategy, rate, victim, graph_seed, max_units, seed = params
    graph = gen_erdos_renyi(n, d, graph_seed)
    instance = Instance(graph, Ranking(n), SlotCapacities.constant(n, 1))
    if kind == "churn":
        traj = dynamics.run_churn(
            instance, dynamics.ChurnSpec(rate, n, seed), max_units)
    elif kind == "removal":
        traj = dynamics.run_removal(instance, victim, max_units, seed)
    else:
        from .core import Configuration
        traj = dynamics.run_convergence(
            instance, strategy, Configuration.empty(n), max_units, seed)
    return [(seed,) + row for row in traj.rows()]


def _cmd_dynamics(args) -> int:
    if args.b != 1:
        raise ValueError("trajectory runs need --b 1 "
                         "(the disorder metric is for 1-matchings)")
    if args.victim is not None and args.churn_rate > 0:
        raise ValueError("--victim and --churn-rate are exclusive")
    seeds = _parse_seeds(args.seeds)
    kind = ("churn" if args.churn_rate > 0
            else "removal" if args.victim is not None else "convergence")
    _echo(args, mode=kind, n=args.n, d=args.d, strategy=args.strategy,
          churn_rate=args.churn_rate, victim=args.victim, seeds=args.seeds,
          graph_seed=args.graph_seed, max_units=args.max_units)
    tasks = [(kind, args.n, args.d, args.strategy, args.churn_rate,
              args.victim, args.graph_seed, args.max_units, s) for s in seeds]
    results = _map_tasks(_dynamics_one, tasks, args.jobs)
    fh, close = _open_out(args.out)
    try:
        multi = len(seeds) > 1
        header = "unit,disorder,active_count,population"
        fh.write(("seed," if multi else "") + header + "\n")
        for rows in results:
            for seed, t, dis, act, pop in rows:
                prefix = f"{seed}," if multi else ""
                fh.write(f"{prefix}{t},{dis:.10g},{act},{pop}\n")
    finally:
        if close:
            fh.close()
    return 0


def _sweep_cell(params) -> tuple:
    bbar, sigma, n, seed = params
    cell = structure.sigma_sweep(bbar, [sigma], n, [seed])[0]
    return sigma, cell.mean_cluster, cell.mean_mmo


def _cmd_sweep(args) -> int:
    sigmas = [float(x) for x in args.sigmas.split(",") if x.strip()]
    seeds = _parse_seeds(args.seeds) if not args.seeds.isdigit() \
        else list(range(int(args.seeds)))
    _echo(args, bbar=args.bbar, sigmas=args.sigmas, n=args.n,
          seeds=len(seeds))
    tasks = [(args.bbar, sig, args.n, s) for sig in sigmas for s in seeds]
    cells = _map_tasks(_sweep_cell, tasks, args.jobs)
    fh, close = _open_out(args.out)
    try:
        fh.write("sigma,mean_cluster,mmo,seed_count\n")
        for sig in sigmas:
            rows = [c for c in cells if c[0] == sig]
            mc = float(np.mean([r[1] for r in rows]))
            mm = float(np.mean([r[2] for r in rows]))
            fh.write(f"{sig:.10g},{mc:.10g},{mm:.10g},{len(rows)}\n")
    finally:
        if close:
            fh.close()
    return 0


def _cmd_analytic(args) -> int:
    p = args.p if args.p is not None else args.d / (args.n - 1)
    _echo(args, n=args.n, p=p, b0=args.b0, rows=args.rows, mass=args.mass)
    fh, close = _open_out(args.out)
    try:
        if args.b0 == 1:
            dist = analytic.independent_1matching(args.n, p)
        else:
            dist = analytic.independent_b0matching(args.n, p, args.b0)
        if args.mass:
            fh.write("i,mass\n")
            for i, mass in enumerate(analytic.mass_profile(dist), start=1):
                fh.write(f"{i},{mass:.10g}\n")
            return 0
        rows = (range(1, args.n + 1) if args.rows == "all"
                else [int(x) for x in args.rows.split(",")])
        if args.b0 == 1:
            fh.write("i,j,prob\n")
            for i in rows:
                for j in range(i + 1, args.n + 1):
                    fh.write(f"{i},{j},{dist.prob(i, j):.10g}\n")
        else:
            fh.write("c,i,j,prob\n")
            for c in range(1, args.b0 + 1):
                for i in rows:
                    for j in range(1, args.n + 1):
                        if j == i:
                            continue
                        fh.write(
                            f"{c},{i},{j},{dist.choice_prob(c, i, j):.10g}\n")
    finally:
        if close:
            fh.close()
    return 0


def _tv_rows(a: np.ndarray, b: np.ndarray) -> float:
    """Max over leading axes of the total variation along the last axis."""
    return float(0.5 * np.abs(a - b).sum(axis=-1).max())


def _cmd_oracle(args) -> int:
    _echo(args, n=args.n, p=args.p, b0=args.b0, draws=args.draws,
          seed=args.seed)
    caps = SlotCapacities.constant(args.n, args.b0)
    if args.b0 == 1:
        approx = analytic.independent_1matching(args.n, args.p).d
    else:
        approx = analytic.independent_b0matching(args.n, args.p, args.b0).dc
    lines = []
    if args.n <= analytic.EXACT_MAX_PEERS:
        exact = analytic.exact_distribution_oracle(args.n, args.p, caps)
        ex = exact.d if args.b0 == 1 else exact.dc
        lines.append(("exact_vs_recurrence", "max_abs_err",
                      float(np.abs(ex - approx).max())))
        lines.append(("exact_vs_recurrence", "total_variation", _tv_rows(ex, approx)))
    if args.draws > 0:
        mc = analytic.monte_carlo_distribution(
            args.n, args.p, caps, args.draws, args.seed)
        emp = mc.d if args.b0 == 1 else mc.dc
        lines.append(("mc_vs_recurrence", "max_abs_err",
                      float(np.abs(emp - approx).max())))
        lines.append(("mc_vs_recurrence", "total_variation",
                      _tv_rows(emp, approx)))
        if args.n <= analytic.EXACT_MAX_PEERS:
            lines.append(("mc_vs_exact", "max_abs_err",
                          float(np.abs(emp - ex).max())))
    if not lines:
        raise ValueError("nothing to compare: n > 6 and --draws 0")
    fh, close = _open_out(args.out)
    try:
        fh.write("comparison,metric,value\n")
        for comparison, metric, value in lines:
            fh.write(f"{comparison},{metric},{value:.10g}\n")
    finally:
        if close:
            fh.close()
    return 0


def _cmd_btapp(args) -> int:
    if args.cdf == "sample":
        profile = btapp.load_sample_cdf(n=args.n)
    else:
        with open(args.cdf) as fh:
            profile = btapp.load_bandwidth_cdf(fh, n=args.n)
    _echo(args, cdf=args.cdf, b0=args.b0, d=args.d, n=args.n,
          upload_slots=args.upload_slots or args.b0)
    curve = btapp.share_ratio_curve(
        profile, args.b0, args.d, n=args.n, upload_slots=args.upload_slots)
    fh, close = _open_out(args.out)
    try:
        fh.write("rank,quantile,upload_kbps,expected_download_kbps,"
                 "share_ratio,mass\n")
        for rank, q, u, e, r, m in curve.rows():
            fh.write(f"{rank},{q:.6g},{u:.10g},{e:.10g},{r:.10g},{m:.10g}\n")
    finally:
        if close:
            fh.close()
    return 0


def _map_tasks(fn, tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


if __name__ == "__main__":
    raise SystemExit(main())
