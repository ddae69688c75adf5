"""Survivable path-pair routing with tunable survivability/weight trade-offs.

The public surface, by theme:

* networks — :mod:`survroute.network` (types, metrics, parsing);
* path machinery — :mod:`survroute.paths` (shortest paths, disjoint pairs);
* two-metric engines — :mod:`survroute.rsp`;
* connection routing — :mod:`survroute.routing`;
* critical links and upgrades — :mod:`survroute.critical`, :mod:`survroute.upgrade`;
* generators, brute force, experiments — :mod:`survroute.topology`,
  :mod:`survroute.oracle`, :mod:`survroute.harness`.
"""

from .critical import CriticalCandidateSet, iawspl
from .harness import (
    ExperimentConfig,
    ExperimentRecord,
    aggregate,
    default_s_grid,
    read_csv,
    run_experiment,
    write_csv,
)
from .network import (
    Link,
    Network,
    NetworkFile,
    NetworkFormatError,
    Path,
    SurvivableConnection,
    co_weight,
    ct_weight,
    node_split_transform,
    parse_network,
    parse_network_file,
    path_weight,
    s_min_bound,
    serialize_network,
    split_endpoints,
    survivability_level,
)
from .oracle import (
    OracleCapExceeded,
    OracleResult,
    count_simple_paths,
    enumerate_simple_paths,
    oracle_solve,
    pair_profile,
)
from .paths import Edsp, dijkstra, edsp, shortest_path
from .routing import (
    RoutingAnswer,
    TransformedNetwork,
    build_transformed,
    csmmq_2approx,
    max_path_weight,
    qamsc,
    reconstruct,
    rwsc_decide,
    tscmq,
    tscmq_sweep,
)
from .rsp import BiLink, BiMetricGraph, RspSolution, TimeGrid, rsp_exact, rsp_fptas
from .topology import (
    LinkAttrConfig,
    TopologyConfig,
    assign_attrs,
    endpoints_for,
    gen_power_law,
    gen_topology,
    gen_waxman,
    partition_endpoints,
    partition_instance,
)
from .upgrade import (
    UpgradeVector,
    additive_upgrade,
    design_pipeline,
    multiplicative_upgrade,
    upgraded_factor,
)

__version__ = "0.1.0"
