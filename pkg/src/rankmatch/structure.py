"""Structural analysis of stable configurations.

Measures how the collaboration graph fragments into clusters of
nearby-ranked peers and how far (in rank) a peer's furthest partner
sits: connected components, average cluster size, the mean max offset
(MMO) and its closed form for constant slot counts, plus the sweep over
the slot-count spread that exposes the cluster-size phase transition.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import Configuration, Ranking
from .generators import gen_complete, sample_capacities_normal
from .solver import stable_configuration


def connected_components(config: Configuration) -> list[list[int]]:
    """Components of the collaboration graph; isolated peers are singletons.

    Returned as sorted peer lists, ordered by their best member.
    """
    n = config.n
    parent = list(range(n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p, q in config.edge_set():
        rp, rq = find(p), find(q)
        if rp != rq:
            parent[rq] = rp
    groups: dict[int, list[int]] = {}
    for p in range(1, n + 1):
        groups.setdefault(find(p), []).append(p)
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


def average_cluster_size(config: Configuration) -> float:
    """Mean size of the non-trivial components (>= 2 peers).

    Isolated peers are not clusters; with no non-trivial component at
    all the result is 0 with a warning.
    """
    sizes = [len(c) for c in connected_components(config) if len(c) >= 2]
    if not sizes:
        warnings.warn("no component with 2+ peers; cluster size undefined")
        return 0.0
    return float(np.mean(sizes))


def mmo(config: Configuration, ranking: Ranking) -> float:
    """Mean over matched peers of the rank gap to their furthest partner."""
    if ranking.n != config.n:
        raise ValueError("ranking disagrees with configuration on n")
    worst = np.zeros(config.n + 1, dtype=np.int64)
    for p, q in config.edge_set():
        gap = q - p
        if gap > worst[p]:
            worst[p] = gap
        if gap > worst[q]:
            worst[q] = gap
    matched = worst[1:][worst[1:] > 0]
    if matched.size == 0:
        warnings.warn("no matched peer; max offset undefined")
        return 0.0
    return float(matched.mean())


def mmo_closed_form(b0: int) -> float:
    """MMO of one (b0+1)-clique of consecutive ranks.

    Position k in the clique (0-based) reaches max(k, b0-k) ranks away;
    the mean over the clique tends to (3/4) b0 for large b0.
    """
    if b0 < 1:
        raise ValueError(f"slot count must be >= 1, got {b0}")
    total = sum(max(k, b0 - k) for k in range(b0 + 1))
    return total / (b0 + 1)


@dataclass(frozen=True)
class SweepCell:
    """Averages over seeds for one slot-count spread value."""

    sigma: float
    mean_cluster: float
    mean_mmo: float
    seed_count: int


def sigma_sweep(b_mean: float, sigmas, n: int, seeds) -> list[SweepCell]:
    """Cluster size and MMO of the stable configuration on a complete graph,
    slot counts drawn from Normal(b_mean, sigma^2), averaged over seeds."""
    if isinstance(seeds, int):
        seeds = range(seeds)
    seeds = list(seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    graph = gen_complete(n)
    ranking = Ranking(n)
    out = []
    for sigma in sigmas:
        clusters = []
        offsets = []
        for seed in seeds:
            caps = sample_capacities_normal(n, b_mean, sigma, seed)
            config = stable_configuration(graph, ranking, caps)
            clusters.append(average_cluster_size(config))
            offsets.append(mmo(config, ranking))
        out.append(SweepCell(float(sigma), float(np.mean(clusters)),
                             float(np.mean(offsets)), len(seeds)))
    return out
