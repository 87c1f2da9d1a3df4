"""Pairing-probability models on random acceptance graphs.

Peers 1..n (rank order) accept each other independently with
probability p.  `independent_1matching` and `independent_b0matching`
fill the matching-probability distributions under the assumption that
the two sides of a candidate pair are blocked independently; the exact
law (tiny n) and Monte Carlo sampling provide the reference points to
measure that approximation against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .backend import kernels
from .core import SlotCapacities

EXACT_MAX_PEERS = 6


@dataclass
class MatchDistribution1:
    """D(i,j): probability that peers i and j end up matched (one slot each)."""

    n: int
    p: float
    d: np.ndarray  # (n, n), symmetric, zero diagonal
    draws: int | None = None  # set when empirical

    def prob(self, i: int, j: int) -> float:
        return float(self.d[i - 1, j - 1])

    def row(self, i: int) -> np.ndarray:
        """Distribution of the mate of peer i (entry j-1 is peer j)."""
        return self.d[i - 1]


@dataclass
class MatchDistributionB:
    """Choice-indexed matching probabilities for b0 slots per peer.

    dc[c-1, i-1, j-1] is the probability that the c-th best partner of
    peer i is peer j.  dcc, when kept, holds the joint event that j is
    choice ci of i AND i is choice cj of j; choice 0 plays the role of a
    virtual slot that is always matched better than anyone (its partial
    sums are pinned to one inside the recurrence).
    """

    n: int
    p: float
    b0: int
    dc: np.ndarray  # (b0, n, n)
    dcc: np.ndarray | None = None  # (b0, b0, n, n) when kept
    draws: int | None = None

    def choice_prob(self, c: int, i: int, j: int) -> float:
        return float(self.dc[c - 1, i - 1, j - 1])

    def choice_row(self, c: int, i: int) -> np.ndarray:
        return self.dc[c - 1, i - 1]

    def pair_choice_prob(self, ci: int, cj: int, i: int, j: int) -> float:
        if self.dcc is None:
            raise ValueError("pair-choice tensor was not kept; "
                             "pass keep_pair_tensor=True")
        return float(self.dcc[ci - 1, cj - 1, i - 1, j - 1])

    def total(self) -> np.ndarray:
        """M(i,j) = sum over choices of dc: total matching mass per pair."""
        return self.dc.sum(axis=0)


def independent_1matching(n: int, p: float) -> MatchDistribution1:
    """Fill D by the independence recurrence, best pairs first.

    D(i,j) = p (1 - sum_{k<j} D(i,k)) (1 - sum_{k<i} D(j,k)), evaluated
    for i ascending and j ascending past i with running partial sums;
    O(n^2).  Entries are independent of n on shared indices.
    """
    _check_np(n, p)
    return MatchDistribution1(n, p, kernels.pair_probs_1m(n, p))


def independent_b0matching(n: int, p: float, b0: int,
                           keep_pair_tensor: bool = False) -> MatchDistributionB:
    """Choice-indexed analogue of `independent_1matching` for b0 slots.

    Per pair (i, j), the weight of choice ci of peer i is the
    probability that choices 1..ci-1 went to peers better than j while
    choice ci is still open, i.e. the difference of two running partial
    sums; the pair probability multiplies the two sides' weights by p.
    Partial sums are cached, so the fill is O(n^2 b0).  The (ci, cj)
    pair tensor costs O(n^2 b0^2) memory and is only stored on request.
    """
    _check_np(n, p)
    if b0 < 1:
        raise ValueError(f"slot count must be >= 1, got {b0}")
    dc, dcc = kernels.pair_probs_b0(n, p, b0, keep_pair_tensor)
    return MatchDistributionB(
        n, p, b0, dc, dcc if keep_pair_tensor else None)


def exact_distribution_oracle(
        n: int, p: float, caps: SlotCapacities
) -> MatchDistribution1 | MatchDistributionB:
    """The exact matching law by enumerating all 2^(n(n-1)/2) graphs.

    Every graph is weighted p^|E| (1-p)^(pairs-|E|), solved greedily in
    rank order, and its matches accumulated.  Refuses n > 6.
    """
    _check_np(n, p)
    if caps.n != n:
        raise ValueError("capacities disagree on n")
    if n > EXACT_MAX_PEERS:
        raise ValueError(
            f"exact enumeration limited to {EXACT_MAX_PEERS} peers, got {n}")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    npairs = len(pairs)
    b = list(caps.b)
    b0 = max(1, max(b, default=1))
    dc = np.zeros((b0, n, n))
    dcc = np.zeros((b0, b0, n, n))
    for mask in range(1 << npairs):
        nedges = mask.bit_count()
        w = p ** nedges * (1.0 - p) ** (npairs - nedges)
        if w == 0.0:
            continue
        adj = [[] for _ in range(n)]
        for k, (i, j) in enumerate(pairs):
            if mask >> k & 1:
                adj[i].append(j)
                adj[j].append(i)
        a = b[:]
        for i in range(n):
            if a[i] <= 0:
                continue
            for j in adj[i]:
                if j <= i:
                    continue
                if a[i] <= 0:
                    break
                if a[j] > 0:
                    ci = b[i] - a[i]
                    cj = b[j] - a[j]
                    dc[ci, i, j] += w
                    dc[cj, j, i] += w
                    dcc[ci, cj, i, j] += w
                    dcc[cj, ci, j, i] += w
                    a[i] -= 1
                    a[j] -= 1
    if b0 == 1 and all(x <= 1 for x in b):
        return MatchDistribution1(n, p, dc[0])
    return MatchDistributionB(n, p, b0, dc, dcc)


def monte_carlo_distribution(
        n: int, p: float, caps: SlotCapacities, draws: int, seed: int,
        keep_pair_tensor: bool = False
) -> MatchDistribution1 | MatchDistributionB:
    """Empirical matching frequencies over independent random graphs.

    Each draw samples edges lazily while the greedy pass runs (each pair
    is inspected at most once, so this equals materializing the graph).
    """
    _check_np(n, p)
    if caps.n != n:
        raise ValueError("capacities disagree on n")
    if draws < 1:
        raise ValueError(f"need at least one draw, got {draws}")
    kernels.seed_rng(seed)
    counts, cc = kernels.mc_choice_counts(
        caps.as_array(), p, draws, keep_pair_tensor)
    dc = counts / draws
    if int(caps.as_array().max(initial=1)) <= 1:
        return MatchDistribution1(n, p, dc[0], draws=draws)
    b0 = dc.shape[0]
    return MatchDistributionB(
        n, p, b0, dc, cc / draws if keep_pair_tensor else None, draws=draws)


def mass_profile(dist: MatchDistribution1 | MatchDistributionB) -> np.ndarray:
    """Per-peer total matching mass (raw row sums; up to b0 for b0 slots)."""
    if isinstance(dist, MatchDistribution1):
        return dist.d.sum(axis=1)
    return dist.dc.sum(axis=(0, 2))


def fluid_density(beta, d: float):
    """Continuum density of scaled mate offsets for the best peer: d e^(-beta d)."""
    if d <= 0:
        raise ValueError(f"mean degree must be > 0, got {d}")
    beta_arr = np.asarray(beta, dtype=np.float64)
    if np.any(beta_arr < 0):
        raise ValueError("offsets must be >= 0")
    out = d * np.exp(-beta_arr * d)
    return float(out) if np.isscalar(beta) else out


def _check_np(n: int, p: float) -> None:
    if n < 1:
        raise ValueError(f"peer count must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability {p} outside [0, 1]")
