"""Central computation of the unique stable configuration.

Under a global ranking the stable configuration is unique and a single
greedy pass builds it: peers are visited best first, and each one
connects to its best acceptable partners that still have a free slot.
An exhaustive oracle (small instances only) double-checks both the
stability and the uniqueness of the result.
"""

from __future__ import annotations

import numpy as np

from .backend import kernels
from .core import (
    AcceptanceGraph,
    Configuration,
    Instance,
    Ranking,
    SlotCapacities,
    is_stable,
)

ORACLE_MAX_PEERS = 12
ORACLE_MAX_EDGES = 20


def stable_configuration(graph: AcceptanceGraph, ranking: Ranking,
                         caps: SlotCapacities) -> Configuration:
    """The unique stable configuration of the instance.

    Greedy pass in rank order: peer i connects to acceptable j > i while
    both sides have remaining slots.
    """
    if not (graph.n == ranking.n == caps.n):
        raise ValueError("graph, ranking and capacities disagree on n")
    ei, ej = _greedy_events(graph, caps)
    return Configuration(
        graph.n, ((int(a) + 1, int(b) + 1) for a, b in zip(ei, ej)))


def solve_instance(instance: Instance) -> Configuration:
    return stable_configuration(
        instance.graph, instance.ranking, instance.caps)


def replay_optimal_schedule(graph: AcceptanceGraph, ranking: Ranking,
                            caps: SlotCapacities) -> list[tuple[int, int]]:
    """The greedy pass's connect events as an initiative schedule.

    Applying the events in order to the empty configuration yields the
    stable configuration; the schedule length is at most B/2 because
    every event consumes two slot endpoints.
    """
    if not (graph.n == ranking.n == caps.n):
        raise ValueError("graph, ranking and capacities disagree on n")
    ei, ej = _greedy_events(graph, caps)
    return [(int(a) + 1, int(b) + 1) for a, b in zip(ei, ej)]


def _greedy_events(graph: AcceptanceGraph,
                   caps: SlotCapacities) -> tuple[np.ndarray, np.ndarray]:
    b = caps.as_array()
    if graph.complete:
        return kernels.greedy_complete(b)
    indptr, indices = graph.to_csr()
    return kernels.greedy_csr(b, indptr, indices)


def oracle_stable(graph: AcceptanceGraph,
                  caps: SlotCapacities) -> list[Configuration]:
    """Every stable configuration, by exhausting degree-bounded subgraphs.

    Exponential in the edge count; refuses instances beyond
    ORACLE_MAX_PEERS peers or ORACLE_MAX_EDGES edges.  Under a global
    ranking the returned list always has exactly one element.
    """
    if graph.n > ORACLE_MAX_PEERS:
        raise ValueError(
            f"oracle limited to {ORACLE_MAX_PEERS} peers, got {graph.n}")
    if graph.num_edges > ORACLE_MAX_EDGES:
        raise ValueError(
            f"oracle limited to {ORACLE_MAX_EDGES} edges, "
            f"got {graph.num_edges}")
    edges = list(graph.edges())
    b = [caps.of(p) for p in range(1, graph.n + 1)]
    degree = [0] * (graph.n + 1)
    chosen: list[tuple[int, int]] = []
    found: list[Configuration] = []

    def recurse(k: int) -> None:
        if k == len(edges):
            config = Configuration(graph.n, chosen)
            if is_stable(config, graph, caps):
                found.append(config)
            return
        recurse(k + 1)  # skip edge k
        p, q = edges[k]
        if degree[p] < b[p - 1] and degree[q] < b[q - 1]:
            degree[p] += 1
            degree[q] += 1
            chosen.append((p, q))
            recurse(k + 1)
            chosen.pop()
            degree[p] -= 1
            degree[q] -= 1

    recurse(0)
    return found
