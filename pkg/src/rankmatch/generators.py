"""Acceptance-graph and slot-capacity generators.

All randomness goes through `numpy.random.RandomState(seed)`, so the
same (parameters, seed) always reproduce the same object, bit for bit,
on any platform.
"""

from __future__ import annotations

import numpy as np

from .core import AcceptanceGraph, SlotCapacities


def gen_complete(n: int) -> AcceptanceGraph:
    """All-to-all acceptance (implicit representation, no edge storage)."""
    return AcceptanceGraph(n, complete=True)


def gen_erdos_renyi(n: int, d: float, seed: int) -> AcceptanceGraph:
    """Random acceptance graph where each pair exists with probability d/(n-1).

    `d` is the expected degree, 0 <= d <= n-1.
    """
    if n < 1:
        raise ValueError(f"peer count must be >= 1, got {n}")
    if n == 1:
        if d != 0:
            raise ValueError("a single peer admits no edges (need d = 0)")
        return AcceptanceGraph(1, ())
    if not 0 <= d <= n - 1:
        raise ValueError(f"expected degree {d} outside [0, {n - 1}]")
    p = d / (n - 1)
    rs = np.random.RandomState(seed)
    edges = []
    for i in range(1, n):
        coins = rs.random_sample(n - i)
        hits = np.nonzero(coins < p)[0]
        edges.extend((i, i + 1 + int(k)) for k in hits)
    return AcceptanceGraph(n, edges)


def sample_capacities_constant(n: int, b0: int) -> SlotCapacities:
    """Every peer gets the same b0 slots."""
    if b0 < 0:
        raise ValueError(f"slot count must be >= 0, got {b0}")
    return SlotCapacities.constant(n, b0)


def sample_capacities_normal(n: int, mean: float, sigma: float,
                             seed: int) -> SlotCapacities:
    """Slots drawn from Normal(mean, sigma^2), rounded to a positive integer.

    Rounding is half-up to the nearest integer, then clamped to >= 1.
    """
    if mean <= 0:
        raise ValueError(f"mean slot count must be > 0, got {mean}")
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    rs = np.random.RandomState(seed)
    draws = rs.normal(mean, sigma, size=n)
    rounded = np.floor(draws + 0.5).astype(np.int64)
    return SlotCapacities.from_array(np.maximum(rounded, 1))
