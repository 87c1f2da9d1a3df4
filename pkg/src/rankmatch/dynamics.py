"""Decentralized evolution of a 1-matching by peer initiatives.

A peer "takes the initiative" when it probes its acceptance list for a
blocking mate; finding one re-pairs both sides (each drops its worst
current mate if at capacity).  Time is counted in base units of one
expected initiative per peer.  `take_initiative` is the single-step,
any-capacity reference implementation; the `run_*` drivers simulate
whole trajectories on flat arrays through the kernel backend (1-matching
only, which is what the disorder metric is defined for).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .backend import kernels
from .core import (
    AcceptanceGraph,
    Configuration,
    Instance,
    is_blocking_pair,
)
from .solver import solve_instance


# ---------------------------------------------------------------------------
# initiative strategies
# ---------------------------------------------------------------------------

class InitiativeStrategy:
    """How a peer scans its acceptance list for a blocking mate."""

    code: int = -1
    name: str = ""

    def find_blocking_mate(self, config: Configuration, instance: Instance,
                           p: int, rng: np.random.RandomState | None = None,
                           present: set[int] | None = None) -> int | None:
        raise NotImplementedError


class BestMate(InitiativeStrategy):
    """Pick the best (lowest rank index) blocking mate, if any."""

    code = 0
    name = "best_mate"

    def find_blocking_mate(self, config, instance, p, rng=None, present=None):
        for q in instance.graph.neighbors(p):
            if present is not None and q not in present:
                continue
            if is_blocking_pair(config, instance.graph, instance.caps, p, q):
                return q
        return None


class Decremental(InitiativeStrategy):
    """Scan the acceptance list circularly from the last asked peer.

    The per-peer cursor persists across initiatives and always indexes
    into the peer's acceptance list.
    """

    code = 1
    name = "decremental"

    def __init__(self):
        self.cursors: dict[int, int] = {}

    def find_blocking_mate(self, config, instance, p, rng=None, present=None):
        neighbors = instance.graph.neighbors(p)
        if present is not None:
            neighbors = [q for q in neighbors if q in present]
        deg = len(neighbors)
        if deg == 0:
            return None
        start = self.cursors.get(p, 0) % deg
        for k in range(deg):
            off = (start + k) % deg
            q = neighbors[off]
            if is_blocking_pair(config, instance.graph, instance.caps, p, q):
                self.cursors[p] = (off + 1) % deg
                return q
        return None


class RandomProbe(InitiativeStrategy):
    """Test one uniformly chosen acceptable peer; a miss wastes the turn."""

    code = 2
    name = "random"

    def find_blocking_mate(self, config, instance, p, rng=None, present=None):
        if rng is None:
            raise ValueError("the random strategy needs an rng")
        neighbors = instance.graph.neighbors(p)
        if present is not None:
            neighbors = [q for q in neighbors if q in present]
        if not neighbors:
            return None
        q = neighbors[int(rng.random_sample() * len(neighbors))]
        if is_blocking_pair(config, instance.graph, instance.caps, p, q):
            return q
        return None


_STRATEGIES = {cls.name: cls for cls in (BestMate, Decremental, RandomProbe)}


def make_strategy(spec: InitiativeStrategy | str) -> InitiativeStrategy:
    if isinstance(spec, InitiativeStrategy):
        return spec
    try:
        return _STRATEGIES[spec]()
    except KeyError:
        raise ValueError(
            f"unknown strategy {spec!r}; choose from {sorted(_STRATEGIES)}")


# ---------------------------------------------------------------------------
# single initiative (any capacities)
# ---------------------------------------------------------------------------

def take_initiative(config: Configuration, instance: Instance, p: int,
                    strategy: InitiativeStrategy | str,
                    rng: np.random.RandomState | None = None,
                    present: set[int] | None = None
                    ) -> tuple[Configuration, bool]:
    """One initiative by peer p; returns (new config, active flag).

    When a blocking mate q is found the pair (p, q) forms and each side
    at capacity drops its worst current mate.  An unsuccessful
    initiative returns the configuration object unchanged.
    """
    if not 1 <= p <= config.n:
        raise ValueError(f"peer rank {p} outside 1..{config.n}")
    if present is not None and p not in present:
        raise ValueError(f"peer {p} is not present")
    strategy = make_strategy(strategy)
    q = strategy.find_blocking_mate(config, instance, p, rng, present)
    if q is None:
        return config, False
    edges = set(config.edge_set())
    caps = instance.caps
    for side, other in ((p, q), (q, p)):
        mates = config.mates(side)
        if len(mates) >= caps.of(side):
            worst = mates[-1]
            edges.discard((side, worst) if side < worst else (worst, side))
    edges.add((p, q) if p < q else (q, p))
    return Configuration(config.n, edges), True


# ---------------------------------------------------------------------------
# trajectories
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChurnSpec:
    """Arrival/departure pressure: `rate` expected events per base unit
    of a system with target population n."""

    rate: float
    n: int
    seed: int = 0

    def __post_init__(self):
        if self.rate < 0:
            raise ValueError(f"churn rate must be >= 0, got {self.rate}")
        if self.n < 2:
            raise ValueError(f"target population must be >= 2, got {self.n}")


@dataclass
class Trajectory:
    """Per-base-unit record of a run."""

    times: list[int] = field(default_factory=list)
    disorder: list[float] = field(default_factory=list)
    active: list[int] = field(default_factory=list)
    population: list[int] = field(default_factory=list)

    def append(self, t: int, dis: float, act: int, pop: int) -> None:
        if self.times and t <= self.times[-1]:
            raise ValueError("trajectory times must be strictly increasing")
        self.times.append(t)
        self.disorder.append(dis)
        self.active.append(act)
        self.population.append(pop)

    def rows(self):
        return zip(self.times, self.disorder, self.active, self.population)

    @property
    def peak_disorder(self) -> float:
        return max(self.disorder)

    @property
    def final_disorder(self) -> float:
        return self.disorder[-1]

    def converged(self) -> bool:
        return self.final_disorder == 0.0

    def __len__(self):
        return len(self.times)


def _require_one_matching_caps(instance: Instance) -> None:
    if any(x != 1 for x in instance.caps.b):
        raise ValueError("trajectory runs need one slot per peer "
                         "(the disorder metric is for 1-matchings)")


def _mate_disorder(mate_a: np.ndarray, mate_b: np.ndarray, pos: np.ndarray,
                   ids: np.ndarray, m: int) -> float:
    """Distance between two mate arrays over the present peers.

    `pos` maps id -> 0-based rank among present peers; an extra slot at
    index n_cap holds the unmated sentinel m.
    """
    ma = mate_a[ids]
    mb = mate_b[ids]
    sa = pos[np.where(ma < 0, pos.size - 1, ma)]
    sb = pos[np.where(mb < 0, pos.size - 1, mb)]
    return float(np.abs(sa - sb).sum() * 2.0 / (m * (m + 1)))


def run_convergence(instance: Instance, strategy: InitiativeStrategy | str,
                    initial: Configuration, max_units: int,
                    seed: int) -> Trajectory:
    """Initiative dynamics on a static instance, one unit = n initiatives.

    Per base unit every peer takes one initiative, in a fresh uniform
    random order (shuffled round robin: one initiative per peer per
    unit).  Disorder against the stable configuration is recorded every
    unit; the run stops early once it hits zero.
    """
    _require_one_matching_caps(instance)
    initial.validate_against(instance.graph, instance.caps)
    code = make_strategy(strategy).code
    n = instance.n
    indptr, indices = instance.graph.to_csr()
    stable_mate = solve_instance(instance).mate_vector()
    mate = initial.mate_vector()
    cursor = np.zeros(n, dtype=np.int64)
    present_ids = np.arange(n, dtype=np.int64)
    pos = np.concatenate([np.arange(n), [n]]).astype(np.int64)
    kernels.seed_rng(seed)
    traj = Trajectory()
    dis = _mate_disorder(mate, stable_mate, pos, present_ids, n)
    traj.append(0, dis, 0, n)
    for unit in range(1, max_units + 1):
        if dis == 0.0:
            break
        act = kernels.static_unit(
            indptr, indices, present_ids, mate, cursor, code)
        dis = _mate_disorder(mate, stable_mate, pos, present_ids, n)
        traj.append(unit, dis, int(act), n)
    return traj


def run_removal(instance: Instance, victim: int, max_units: int,
                seed: int) -> Trajectory:
    """Remove one peer from the stable configuration and heal (best mate).

    Disorder is measured against the stable configuration of the
    reduced instance; ranks keep their original labels, the victim is
    simply absent.
    """
    _require_one_matching_caps(instance)
    n = instance.n
    if not 1 <= victim <= n:
        raise ValueError(f"victim rank {victim} outside 1..{n}")
    mate = solve_instance(instance).mate_vector()
    v = victim - 1
    if mate[v] >= 0:
        mate[mate[v]] = -1
        mate[v] = -1
    reduced = Instance(instance.graph.without_peer(victim),
                       instance.ranking, instance.caps)
    stable_mate = solve_instance(reduced).mate_vector()
    indptr, indices = reduced.graph.to_csr()
    m = n - 1
    present_ids = np.array(
        [x for x in range(n) if x != v], dtype=np.int64)
    pos = np.empty(n + 1, dtype=np.int64)
    pos[:n] = np.arange(n)
    pos[v + 1:n] -= 1
    pos[n] = m
    pos[v] = m  # never read: the victim is unmated in both configurations
    cursor = np.zeros(n, dtype=np.int64)
    kernels.seed_rng(seed)
    traj = Trajectory()
    dis = _mate_disorder(mate, stable_mate, pos, present_ids, m)
    traj.append(0, dis, 0, m)
    for unit in range(1, max_units + 1):
        if dis == 0.0:
            break
        act = kernels.static_unit(
            indptr, indices, present_ids, mate, cursor, BestMate.code)
        dis = _mate_disorder(mate, stable_mate, pos, present_ids, m)
        traj.append(unit, dis, int(act), m)
    return traj


def run_churn(instance_template: Instance, churn: ChurnSpec,
              max_units: int) -> Trajectory:
    """Best-mate initiatives under continuous arrivals/departures.

    Scheduling is the same shuffled round robin as `run_convergence`;
    per elementary step an event fires with probability rate/n first,
    a fair coin picking arrival or departure.  An arriving peer lands
    at a uniform random rank position, wires to each present peer with
    the template graph's empirical edge density, and starts acting the
    next unit.  Disorder is measured against the instant stable
    configuration of the current instance, normalized by the current
    population.
    """
    _require_one_matching_caps(instance_template)
    n = instance_template.n
    if churn.n != n:
        raise ValueError("churn target population disagrees with template")
    if n < 2:
        raise ValueError("need at least two peers")
    expected_events = churn.rate * max_units
    slack = 64 + math.ceil(8.0 * math.sqrt(max(1.0, expected_events)))
    n_cap = n + slack
    adj = np.zeros((n_cap, n_cap), dtype=np.uint8)
    for p, q in instance_template.graph.edges():
        adj[p - 1, q - 1] = 1
        adj[q - 1, p - 1] = 1
    p_edge = 2.0 * instance_template.graph.num_edges / (n * (n - 1))
    mark = np.zeros(n_cap, dtype=np.float64)
    mark[:n] = np.arange(1, n + 1) / (n + 1.0)
    present = np.zeros(n_cap, dtype=np.bool_)
    present[:n] = True
    present_ids = np.empty(n_cap, dtype=np.int64)
    present_ids[:n] = np.arange(n)
    free_ids = np.empty(n_cap, dtype=np.int64)  # holds up to every id
    free_ids[:slack] = np.arange(n_cap - 1, n - 1, -1, dtype=np.int64)
    nfree = slack
    mate = np.full(n_cap, -1, dtype=np.int64)
    m = n
    p_event = churn.rate / n
    kernels.seed_rng(churn.seed)
    traj = Trajectory()
    dis = _churn_disorder(adj, mark, present_ids, m, mate, n_cap)
    traj.append(0, dis, 0, m)
    for unit in range(1, max_units + 1):
        if churn.rate == 0.0 and dis == 0.0:
            break
        m, nfree, act, status = kernels.churn_unit(
            adj, mark, present, present_ids, m, mate, free_ids, nfree,
            p_event, p_edge)
        if status != 0:
            raise RuntimeError(
                "peer id pool exhausted; the arrival excess exceeded the "
                f"provisioned slack of {slack}")
        dis = _churn_disorder(adj, mark, present_ids, m, mate, n_cap)
        traj.append(unit, dis, int(act), int(m))
    return traj


def _churn_disorder(adj, mark, present_ids, m, mate, n_cap) -> float:
    ids = present_ids[:m]
    order = ids[np.argsort(mark[ids])]
    stable_mate = kernels.greedy_1m_order(order, adj, n_cap)
    pos = np.empty(n_cap + 1, dtype=np.int64)
    pos[order] = np.arange(m)
    pos[n_cap] = m
    return _mate_disorder(mate, stable_mate, pos, ids, m)
