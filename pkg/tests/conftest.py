"""Shared fixtures: the two hand-built example networks, random-network
builders used across test modules, and the acceptance-criteria reporter."""

from __future__ import annotations

import json
from pathlib import Path as FsPath

import numpy as np
import pytest

from survroute import Link, Network, parse_network_file

DATA = FsPath(__file__).parent / "data"

_ACCEPTANCE_LINES: list[str] = []


def record_criterion(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def svd():
    """Seven-link network with a four-node backbone; endpoints s -> t."""
    return parse_network_file((DATA / "svd.json").read_text())


@pytest.fixture(scope="session")
def intro():
    """Five-node chain-with-detour network where no disjoint s->t pair exists."""
    return parse_network_file((DATA / "intro.json").read_text())


@pytest.fixture(scope="session")
def svd_json():
    return str(DATA / "svd.json")


@pytest.fixture(scope="session")
def intro_json():
    return str(DATA / "intro.json")


def random_network(
    seed: int,
    n_lo: int = 5,
    n_hi: int = 9,
    extra_per_node: float = 1.8,
    p_max: float = 0.05,
    w_hi: int = 10,
) -> tuple[Network, str, str]:
    """A connected-enough random digraph with its endpoint pair.

    A random backbone path from v0 to v{n-1} guarantees reachability; extra
    links are sprinkled uniformly.  Weights are integers in [1, w_hi] and
    failure probabilities uniform in (0, p_max].
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    n = int(rng.integers(n_lo, n_hi + 1))
    names = [f"v{i}" for i in range(n)]
    middle = list(range(1, n - 1))
    rng.shuffle(middle)
    backbone = [0] + middle[: int(rng.integers(0, len(middle) + 1))] + [n - 1]
    pairs: set[tuple[int, int]] = set()
    for a, b in zip(backbone, backbone[1:]):
        pairs.add((a, b))
    extra = int(extra_per_node * n)
    for _ in range(20 * extra):
        if len(pairs) >= len(backbone) - 1 + extra:
            break
        u, v = int(rng.integers(n)), int(rng.integers(n))
        if u != v:
            pairs.add((u, v))
    links = [
        Link(
            names[u],
            names[v],
            int(rng.integers(1, w_hi + 1)),
            float(p_max * (1.0 - rng.random())),
        )
        for u, v in sorted(pairs)
    ]
    return Network(names, links, p_max), names[0], names[n - 1]


@pytest.fixture
def tiny_experiment_config(tmp_path):
    # Power-law at this size reliably yields admissible (disjointly
    # connectable) endpoint pairs; small Waxman graphs usually don't.
    cfg = {
        "model": "powerlaw",
        "n_nodes": 14,
        "instances": 4,
        "omegas": [0.6],
        "seed": 3,
        "s_levels": [1.0, 0.95, 0.9],
        "epsilon": 0.01,
    }
    path = tmp_path / "exp.json"
    path.write_text(json.dumps(cfg))
    return str(path)
