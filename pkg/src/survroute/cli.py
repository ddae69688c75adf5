"""Command-line front end.

Subcommands: route, critical-links, upgrade, generate, experiment, oracle.
Single results print as pretty JSON with sorted keys; sweeps print CSV.
Exit codes: 0 success, 1 infeasible problem instance, 2 input/usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .critical import iawspl
from .harness import ExperimentConfig, render_csv, run_experiment
from .network import NetworkFormatError, parse_network_file, serialize_network
from .oracle import OracleCapExceeded, oracle_solve
from .paths import shortest_path
from .routing import RoutingAnswer, csmmq_2approx, max_path_weight, qamsc, tscmq
from .topology import (
    DEFAULT_P_MAX,
    LinkAttrConfig,
    TopologyConfig,
    assign_attrs,
    endpoints_for,
    gen_topology,
)
from .upgrade import design_pipeline

ROUTE_PROBLEMS = ("co-qamsc", "ct-qamsc", "co-tscmq", "ct-tscmq", "csmmq")
ORACLE_PROBLEMS = ROUTE_PROBLEMS + ("rwsc",)


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, out_path: str | None) -> None:
    _emit(json.dumps(obj, indent=2, sort_keys=True) + "\n", out_path)


def _say(message: str, quiet: bool) -> None:
    if not quiet:
        print(message, file=sys.stderr)


def _load_net(path: str):
    with open(path, "rb") as fh:
        return parse_network_file(fh.read())


def _answer_json(problem: str, ans: RoutingAnswer, net) -> dict:
    return {
        "problem": problem,
        "first_path": list(ans.connection.first.nodes),
        "second_path": list(ans.connection.second.nodes),
        "survivability": ans.survivability,
        "co_weight": ans.co_weight,
        "ct_weight": ans.ct_weight,
        "max_path_weight": max_path_weight(net, ans.connection),
        "simple_paths": ans.simple_paths,
    }


def _cmd_route(args: argparse.Namespace) -> int:
    doc = _load_net(args.net)
    problem = args.problem
    needs_bound = problem.endswith("qamsc")
    if needs_bound and args.bound is None:
        raise SystemExit2(f"{problem} needs --bound")
    if not needs_bound and args.surv is None:
        raise SystemExit2(f"{problem} needs --surv")
    net, s, t = doc.network, doc.source, doc.target
    if problem == "csmmq":
        ans = csmmq_2approx(net, s, t, args.surv, epsilon=args.epsilon)
    elif needs_bound:
        ans = qamsc(net, s, t, args.bound, variant=problem[:2], epsilon=args.epsilon)
    else:
        ans = tscmq(net, s, t, args.surv, variant=problem[:2],
                    epsilon=args.epsilon, quanta=args.quanta)
    if ans is None:
        print("infeasible", file=sys.stderr)
        return 1
    payload = _answer_json(problem, ans, net)
    if needs_bound:
        payload["bound"] = args.bound
    else:
        payload["level"] = args.surv
    if args.epsilon is not None:
        payload["epsilon"] = args.epsilon
    _emit_json(payload, args.out)
    return 0


def _cmd_critical(args: argparse.Namespace) -> int:
    doc = _load_net(args.net)
    if shortest_path(doc.network, doc.source, doc.target) is None:
        print("infeasible: target unreachable", file=sys.stderr)
        return 1
    cands = iawspl(doc.network, doc.source, doc.target)
    _emit_json({
        "source": doc.source,
        "target": doc.target,
        "base_shortest_weight": cands.base_shortest_weight,
        "links": [[u, v] for u, v in cands.links],
    }, args.out)
    return 0


def _cmd_upgrade(args: argparse.Namespace) -> int:
    doc = _load_net(args.net)
    if shortest_path(doc.network, doc.source, doc.target) is None:
        print("infeasible: target unreachable", file=sys.stderr)
        return 1
    cands, vec, factor = design_pipeline(
        doc.network, doc.source, doc.target, args.budget, args.mode)
    _emit_json({
        "mode": args.mode,
        "budget": args.budget,
        "links": [[u, v] for u, v in cands.links],
        "fail_probs": [doc.network.link(u, v).fail_prob for u, v in cands.links],
        "upgrades": list(vec.upgrades),
        "residual_budget": vec.residual_budget,
        "water_level": vec.water_level,
        "survivability_factor": factor,
    }, args.out)
    return 0


def _cmd_generate(args: argparse.Namespace) -> int:
    cfg = TopologyConfig(args.model, args.nodes, args.seed)
    net = gen_topology(cfg)
    net = assign_attrs(net, LinkAttrConfig(
        omega=args.omega, seed=args.seed + 1, p_max=args.p_max))
    source, target = endpoints_for(net, args.model)
    _emit(serialize_network(net, source, target), args.out)
    _say(f"generated {args.model}: {len(net.nodes)} nodes, {len(net.links)} links, "
         f"endpoints {source}->{target}", args.quiet)
    return 0


def _cmd_experiment(args: argparse.Namespace) -> int:
    with open(args.config, "rb") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise NetworkFormatError(f"config is not valid JSON: {exc}") from exc
    try:
        cfg = ExperimentConfig.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise NetworkFormatError(f"bad experiment config: {exc}") from exc
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    if args.workers is not None:
        cfg = dataclasses.replace(cfg, workers=args.workers)
    records, stats = run_experiment(cfg, quiet=args.quiet)
    _emit(render_csv(records), args.out)
    if not args.quiet:
        for (model, omega, level), mean in stats["aggregate"].items():
            print(f"[aggregate] {model} omega={omega} S={level:.3f} "
                  f"mean_delay_ratio={mean:.4f}", file=sys.stderr)
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    doc = _load_net(args.net)
    problem = args.problem
    bound = args.bound
    level = args.surv
    if problem.endswith("qamsc") and bound is None:
        raise SystemExit2(f"{problem} needs --bound")
    if problem in ("co-tscmq", "ct-tscmq", "csmmq") and level is None:
        if bound is not None:
            level = bound  # --bound doubles as the level for these problems
        else:
            raise SystemExit2(f"{problem} needs --surv (or --bound as the level)")
    if problem == "rwsc" and (bound is None or level is None):
        raise SystemExit2("rwsc needs both --bound and --surv")
    res = oracle_solve(doc.network, doc.source, doc.target, problem,
                       bound=bound, level=level, cap=args.cap)
    _emit_json({
        "problem": problem,
        "objective": res.objective,
        "paths_enumerated": res.paths_enumerated,
        "pairs_evaluated": res.pairs_evaluated,
        "connections": [
            {"first_path": list(c.first.nodes), "second_path": list(c.second.nodes)}
            for c in res.connections
        ],
    }, args.out)
    return 0


class SystemExit2(Exception):
    """Usage-level error discovered after argparse (exit code 2)."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="survroute",
        description="Survivable path-pair routing: tunable survivability vs. weight.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write primary output to this file instead of stdout")
    common.add_argument("--quiet", action="store_true", help="suppress diagnostics")

    p = sub.add_parser("route", parents=[common], help="solve a routing problem")
    p.add_argument("--net", required=True, help="network JSON file")
    p.add_argument("--problem", required=True, choices=ROUTE_PROBLEMS)
    p.add_argument("--bound", type=float, help="weight budget (qamsc problems)")
    p.add_argument("--surv", type=float, help="survivability level (tscmq/csmmq)")
    p.add_argument("--epsilon", type=float, default=None,
                   help="approximation factor; omit for the exact solver")
    p.add_argument("--quanta", type=int, default=1000,
                   help="time-grid cells per link for the exact level solver")
    p.set_defaults(fn=_cmd_route)

    p = sub.add_parser("critical-links", parents=[common],
                       help="links on every min-weight path")
    p.add_argument("--net", required=True)
    p.set_defaults(fn=_cmd_critical)

    p = sub.add_parser("upgrade", parents=[common],
                       help="budgeted reliability upgrade of the critical links")
    p.add_argument("--net", required=True)
    p.add_argument("--budget", type=float, required=True)
    p.add_argument("--mode", required=True, choices=("additive", "multiplicative"))
    p.set_defaults(fn=_cmd_upgrade)

    p = sub.add_parser("generate", parents=[common], help="generate a random network file")
    p.add_argument("--model", required=True, choices=("powerlaw", "waxman"))
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--omega", type=float, default=0.6, help="fast-link probability")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p-max", type=float, default=DEFAULT_P_MAX, dest="p_max")
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("experiment", parents=[common], help="run a survivability sweep")
    p.add_argument("--config", required=True, help="experiment config JSON")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel workers (env SURVROUTE_WORKERS overrides)")
    p.set_defaults(fn=_cmd_experiment)

    p = sub.add_parser("oracle", parents=[common], help="brute-force reference answers")
    p.add_argument("--net", required=True)
    p.add_argument("--problem", required=True, choices=ORACLE_PROBLEMS)
    p.add_argument("--bound", type=float, default=None)
    p.add_argument("--surv", type=float, default=None)
    p.add_argument("--cap", type=int, default=20000, help="simple-path enumeration cap")
    p.set_defaults(fn=_cmd_oracle)
    return parser


def dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NetworkFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OracleCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv: list[str] | None = None) -> int:
    return dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())
