"""Survivability-sweep experiment protocol.

Per instance: generate a topology, assign link attributes, check whether a
fully protected (disjoint-pair) connection exists at all — only such
*admissible* instances are solved — then find the cheapest
survivability-constrained connection (twice-counted delay) at every grid
level and record the delay ratio against the fully protected optimum D(1).

Aggregates average delay ratios per (model, omega, level) over admissible
instances only.  Inadmissible instances keep their rows (blank delay) so a
run is a complete log of everything it generated.
"""

from __future__ import annotations

import csv
import io
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .paths import edsp
from .routing import tscmq_sweep
from .topology import (
    DEFAULT_P_MAX,
    LinkAttrConfig,
    TopologyConfig,
    assign_attrs,
    endpoints_for,
    gen_topology,
)

CSV_COLUMNS = ("instance_id", "model", "omega", "seed", "s_level",
               "delay", "feasible", "admissible", "delay_ratio")

WORKERS_ENV = "SURVROUTE_WORKERS"

# Per-instance seed derivation: documented, collision-free for sane configs.
_SEED_STRIDE = 1_000_003
_OMEGA_STRIDE = 10_007
_ATTR_OFFSET = 500_009


def default_s_grid() -> tuple[float, ...]:
    """1.0 down to 0.9 in steps of 0.005 (descending, 21 levels)."""
    return tuple((180 + k) / 200.0 for k in range(20, -1, -1))


@dataclass(frozen=True)
class ExperimentConfig:
    model: str
    n_nodes: int
    instances: int
    omegas: tuple[float, ...]
    seed: int
    s_levels: tuple[float, ...] = field(default_factory=default_s_grid)
    epsilon: float | None = 0.01
    p_max: float = DEFAULT_P_MAX
    workers: int = 1
    quanta: int = 1000

    def __post_init__(self) -> None:
        if self.instances < 1 or self.n_nodes < 2:
            raise ValueError("need at least one instance of at least two nodes")
        if not self.omegas:
            raise ValueError("need at least one omega")
        for s in self.s_levels:
            if not (0.0 < s <= 1.0):
                raise ValueError(f"grid level {s} outside (0, 1]")

    @staticmethod
    def from_json(obj: Mapping) -> "ExperimentConfig":
        keys = set(obj)
        known = {"model", "n_nodes", "instances", "omegas", "seed", "s_levels",
                 "epsilon", "p_max", "workers", "quanta"}
        unknown = keys - known
        if unknown:
            raise ValueError(f"unknown experiment config keys: {sorted(unknown)}")
        kwargs = dict(
            model=obj["model"],
            n_nodes=int(obj["n_nodes"]),
            instances=int(obj["instances"]),
            omegas=tuple(float(w) for w in obj["omegas"]),
            seed=int(obj["seed"]),
        )
        if "s_levels" in obj:
            kwargs["s_levels"] = tuple(float(s) for s in obj["s_levels"])
        if "epsilon" in obj:
            kwargs["epsilon"] = None if obj["epsilon"] is None else float(obj["epsilon"])
        if "p_max" in obj:
            kwargs["p_max"] = float(obj["p_max"])
        if "workers" in obj:
            kwargs["workers"] = int(obj["workers"])
        if "quanta" in obj:
            kwargs["quanta"] = int(obj["quanta"])
        return ExperimentConfig(**kwargs)


@dataclass(frozen=True)
class ExperimentRecord:
    instance_id: str
    model: str
    omega: float
    seed: int
    s_level: float
    delay: int | None
    feasible: bool
    admissible: bool
    delay_ratio: float | None


def instance_seed(base: int, omega_idx: int, inst_idx: int) -> int:
    return base * _SEED_STRIDE + omega_idx * _OMEGA_STRIDE + inst_idx


def _run_instance(task: tuple) -> tuple[list[ExperimentRecord], bool, int]:
    """Worker body: one instance, all grid levels.

    Returns (records, any non-simple reconstruction?, infeasible row count).
    """
    (model, n_nodes, omega, omega_idx, inst_idx, base_seed,
     levels, epsilon, p_max, quanta) = task
    iseed = instance_seed(base_seed, omega_idx, inst_idx)
    topo = gen_topology(TopologyConfig(model, n_nodes, iseed))
    attr_cfg = LinkAttrConfig(omega=omega, seed=iseed + _ATTR_OFFSET, p_max=p_max)
    net = assign_attrs(topo, attr_cfg)
    source, target = endpoints_for(net, model)
    inst_id = f"{model}-o{omega_idx}-i{inst_idx:05d}"
    admissible = source != target and edsp(net, source, target) is not None

    def record(level: float, delay: int | None, feasible: bool, ratio: float | None):
        return ExperimentRecord(inst_id, model, omega, iseed, level,
                                delay, feasible, admissible, ratio)

    if not admissible:
        return [record(s, None, False, None) for s in levels], False, 0

    work_levels = list(levels)
    if 1.0 not in work_levels:
        work_levels = [1.0] + work_levels  # ratio denominator
    answers = tscmq_sweep(net, source, target, work_levels,
                          variant="ct", epsilon=epsilon, quanta=quanta)
    by_level = dict(zip(work_levels, answers))
    base = by_level[1.0]
    assert base is not None, "admissible instances always solve at level 1"
    d1 = base.ct_weight
    rows: list[ExperimentRecord] = []
    flagged = False
    infeasible_rows = 0
    for s in levels:
        ans = by_level[s]
        if ans is None:  # defensive: cannot happen when a disjoint pair exists
            rows.append(record(s, None, False, None))
            infeasible_rows += 1
            continue
        flagged = flagged or not ans.simple_paths
        rows.append(record(s, ans.ct_weight, True, ans.ct_weight / d1))
    return rows, flagged, infeasible_rows


def resolve_workers(requested: int) -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return max(1, requested)


def run_experiment(
    cfg: ExperimentConfig, quiet: bool = True
) -> tuple[list[ExperimentRecord], dict]:
    """Run the full sweep; returns (records, stats).

    stats carries the aggregate mean delay ratios keyed by
    (model, omega, s_level) plus instance counters.
    """
    tasks = [
        (cfg.model, cfg.n_nodes, omega, oi, ii, cfg.seed,
         tuple(cfg.s_levels), cfg.epsilon, cfg.p_max, cfg.quanta)
        for oi, omega in enumerate(cfg.omegas)
        for ii in range(cfg.instances)
    ]
    workers = resolve_workers(cfg.workers)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_instance, tasks, chunksize=8))
    else:
        outcomes = [_run_instance(t) for t in tasks]
    records: list[ExperimentRecord] = []
    flagged = 0
    infeasible_rows = 0
    for rows, was_flagged, bad_rows in outcomes:
        records.extend(rows)
        flagged += int(was_flagged)
        infeasible_rows += bad_rows
    records.sort(key=lambda r: (r.instance_id, -r.s_level))
    admissible_ids = {r.instance_id for r in records if r.admissible}
    stats = {
        "instances": len(tasks),
        "admissible": len(admissible_ids),
        "flagged_instances": flagged,
        "infeasible_rows": infeasible_rows,
        "aggregate": aggregate(records),
    }
    if not quiet:
        frac = stats["admissible"] / max(1, stats["instances"])
        print(
            f"[experiment] {stats['instances']} instances, "
            f"{stats['admissible']} admissible ({frac:.1%}), "
            f"{flagged} flagged, {infeasible_rows} infeasible rows dropped",
            file=sys.stderr,
        )
    return records, stats


def aggregate(records: Iterable[ExperimentRecord]) -> dict[tuple[str, float, float], float]:
    """Mean delay ratio per (model, omega, s_level) over rows that have one."""
    sums: dict[tuple[str, float, float], list[float]] = {}
    for r in records:
        if r.delay_ratio is None:
            continue
        sums.setdefault((r.model, r.omega, r.s_level), []).append(r.delay_ratio)
    return {key: math.fsum(vals) / len(vals) for key, vals in sorted(sums.items())}


def _format_row(r: ExperimentRecord) -> list[str]:
    # repr() floats round-trip exactly and stay byte-stable across runs.
    return [
        r.instance_id,
        r.model,
        repr(r.omega),
        str(r.seed),
        repr(r.s_level),
        "" if r.delay is None else str(r.delay),
        "true" if r.feasible else "false",
        "true" if r.admissible else "false",
        "" if r.delay_ratio is None else repr(r.delay_ratio),
    ]


def write_csv(records: Sequence[ExperimentRecord], path_or_file) -> None:
    """Fixed column set, '\\n' line endings, byte-stable for equal inputs."""
    own = isinstance(path_or_file, (str, os.PathLike))
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow(_format_row(r))
    finally:
        if own:
            fh.close()


def render_csv(records: Sequence[ExperimentRecord]) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def read_csv(path_or_file) -> list[ExperimentRecord]:
    """Inverse of ``write_csv`` (floats re-parsed; blanks become None)."""
    own = isinstance(path_or_file, (str, os.PathLike))
    fh = open(path_or_file, "r", newline="") if own else path_or_file
    try:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header: {header}")
        out = []
        for row in reader:
            (inst, model, omega, seed, s_level, delay, feas, adm, ratio) = row
            out.append(ExperimentRecord(
                inst, model, float(omega), int(seed), float(s_level),
                None if delay == "" else int(delay),
                feas == "true", adm == "true",
                None if ratio == "" else float(ratio),
            ))
        return out
    finally:
        if own:
            fh.close()
