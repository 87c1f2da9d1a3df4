import numpy as np
import pytest

from rankmatch.core import AcceptanceGraph, Instance, Ranking, SlotCapacities


@pytest.fixture
def rng():
    return np.random.RandomState(20240817)


def random_instance(rs, n_min=2, n_max=6, cap_max=3, p=0.5):
    """A random small instance: G(n, p) graph, uniform capacities 0..cap_max."""
    n = int(rs.randint(n_min, n_max + 1))
    edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
             if rs.random_sample() < p]
    caps = SlotCapacities(tuple(int(rs.randint(0, cap_max + 1))
                                for _ in range(n)))
    return Instance(AcceptanceGraph(n, edges), Ranking(n), caps)


def random_one_matching(rs, n):
    """A random partial 1-matching on n peers."""
    peers = list(rs.permutation(np.arange(1, n + 1)))
    edges = []
    while len(peers) >= 2:
        p = peers.pop()
        if rs.random_sample() < 0.6:
            q = peers.pop(int(rs.randint(len(peers))))
            edges.append((int(p), int(q)))
    from rankmatch.core import Configuration
    return Configuration(n, edges)
