"""Domain types: rankings, slot capacities, acceptance graphs, configurations.

Peers are identified by their rank index 1..n; rank 1 is the best peer.
Identity-as-rank makes the preference order a strict total order by
construction (no ties are representable).  All types are immutable after
construction and all operations are pure, so everything here is safe to
share across parallel workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

import numpy as np

UNMATED = -1  # internal 0-based sentinel
_CSR_COMPLETE_LIMIT = 4096


@dataclass(frozen=True)
class Ranking:
    """Strict total order over n peers; peer p's rank IS its identifier p."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"peer count must be >= 1, got {self.n}")


@dataclass(frozen=True)
class SlotCapacities:
    """Per-peer collaboration slot counts b(p); B = sum of all slots."""

    b: tuple[int, ...]

    def __post_init__(self):
        if any(x < 0 for x in self.b):
            raise ValueError("slot capacities must be non-negative")

    @classmethod
    def constant(cls, n: int, b0: int) -> "SlotCapacities":
        return cls((b0,) * n)

    @classmethod
    def from_array(cls, arr) -> "SlotCapacities":
        return cls(tuple(int(x) for x in arr))

    @property
    def n(self) -> int:
        return len(self.b)

    @property
    def total(self) -> int:
        """B, the maximal number of connection endpoints."""
        return sum(self.b)

    def of(self, p: int) -> int:
        _check_rank(p, self.n)
        return self.b[p - 1]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.b, dtype=np.int64)


class AcceptanceGraph:
    """Symmetric loopless graph of peer pairs willing to collaborate.

    Complete graphs are represented implicitly (no edge storage), which
    keeps large all-to-all instances cheap.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] | None = None,
                 complete: bool = False):
        if n < 1:
            raise ValueError(f"peer count must be >= 1, got {n}")
        self.n = n
        self.complete = complete
        if complete:
            self._edges = None
        else:
            norm = set()
            for p, q in edges or ():
                _check_rank(p, n)
                _check_rank(q, n)
                if p == q:
                    raise ValueError(f"loop edge ({p},{p}) not allowed")
                norm.add((p, q) if p < q else (q, p))
            self._edges = frozenset(norm)
        self._csr: tuple[np.ndarray, np.ndarray] | None = None

    @property
    def num_edges(self) -> int:
        if self.complete:
            return self.n * (self.n - 1) // 2
        return len(self._edges)

    def has_edge(self, p: int, q: int) -> bool:
        _check_rank(p, self.n)
        _check_rank(q, self.n)
        if p == q:
            return False
        if self.complete:
            return True
        return ((p, q) if p < q else (q, p)) in self._edges

    def edges(self) -> Iterator[tuple[int, int]]:
        """All edges as (p, q) with p < q, sorted."""
        if self.complete:
            for p in range(1, self.n + 1):
                for q in range(p + 1, self.n + 1):
                    yield (p, q)
        else:
            yield from sorted(self._edges)

    def edge_set(self) -> frozenset[tuple[int, int]]:
        if self.complete:
            return frozenset(self.edges())
        return self._edges

    def neighbors(self, p: int) -> list[int]:
        """Acceptable peers of p, best rank first."""
        _check_rank(p, self.n)
        if self.complete:
            return [q for q in range(1, self.n + 1) if q != p]
        indptr, indices = self.to_csr()
        return [int(x) + 1 for x in indices[indptr[p - 1]:indptr[p]]]

    def to_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """0-based CSR adjacency, neighbors sorted ascending (best first)."""
        if self._csr is None:
            if self.complete:
                if self.n > _CSR_COMPLETE_LIMIT:
                    raise ValueError(
                        f"refusing to materialize a complete graph on "
                        f"{self.n} peers as CSR (limit {_CSR_COMPLETE_LIMIT})")
                row = np.arange(self.n, dtype=np.int64)
                indptr = np.arange(self.n + 1, dtype=np.int64) * (self.n - 1)
                indices = np.concatenate(
                    [np.delete(row, i) for i in range(self.n)])
                self._csr = (indptr, indices)
                return self._csr
            deg = np.zeros(self.n, dtype=np.int64)
            for p, q in self._edges:
                deg[p - 1] += 1
                deg[q - 1] += 1
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(deg, out=indptr[1:])
            indices = np.empty(indptr[-1], dtype=np.int64)
            fill = indptr[:-1].copy()
            for p, q in sorted(self._edges):
                indices[fill[p - 1]] = q - 1
                fill[p - 1] += 1
                indices[fill[q - 1]] = p - 1
                fill[q - 1] += 1
            for p in range(self.n):
                indices[indptr[p]:indptr[p + 1]].sort()
            self._csr = (indptr, indices)
        return self._csr

    def without_peer(self, victim: int) -> "AcceptanceGraph":
        """Same peer labels, all edges at `victim` removed."""
        _check_rank(victim, self.n)
        if self.complete:
            edges = ((p, q) for p, q in self.edges()
                     if p != victim and q != victim)
            return AcceptanceGraph(self.n, edges)
        return AcceptanceGraph(
            self.n, (e for e in self._edges if victim not in e))

    def __eq__(self, other):
        if not isinstance(other, AcceptanceGraph):
            return NotImplemented
        if self.n != other.n:
            return False
        return self.edge_set() == other.edge_set()

    def __repr__(self):
        kind = "complete" if self.complete else f"{self.num_edges} edges"
        return f"AcceptanceGraph(n={self.n}, {kind})"


class Configuration:
    """The current collaboration subgraph; degrees bounded by slot counts.

    Immutable: mutating operations return a new Configuration.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 1:
            raise ValueError(f"peer count must be >= 1, got {n}")
        self.n = n
        norm = set()
        for p, q in edges:
            _check_rank(p, n)
            _check_rank(q, n)
            if p == q:
                raise ValueError(f"loop edge ({p},{p}) not allowed")
            norm.add((p, q) if p < q else (q, p))
        self._edges = frozenset(norm)
        adj: list[list[int]] = [[] for _ in range(n)]
        for p, q in norm:
            adj[p - 1].append(q)
            adj[q - 1].append(p)
        self._adj = tuple(tuple(sorted(a)) for a in adj)

    @classmethod
    def empty(cls, n: int) -> "Configuration":
        return cls(n)

    def mates(self, p: int) -> tuple[int, ...]:
        _check_rank(p, self.n)
        return self._adj[p - 1]

    def degree(self, p: int) -> int:
        return len(self.mates(p))

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return self._edges

    def edges(self) -> list[tuple[int, int]]:
        return sorted(self._edges)

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def has_edge(self, p: int, q: int) -> bool:
        return ((p, q) if p < q else (q, p)) in self._edges

    def with_edge(self, p: int, q: int) -> "Configuration":
        e = (p, q) if p < q else (q, p)
        return Configuration(self.n, self._edges | {e})

    def without_edge(self, p: int, q: int) -> "Configuration":
        e = (p, q) if p < q else (q, p)
        return Configuration(self.n, self._edges - {e})

    def is_one_matching(self) -> bool:
        return all(len(a) <= 1 for a in self._adj)

    def mate_vector(self) -> np.ndarray:
        """0-based mate array for 1-matchings; UNMATED where unmated."""
        if not self.is_one_matching():
            raise ValueError("configuration has a peer with degree > 1")
        v = np.full(self.n, UNMATED, dtype=np.int64)
        for p, q in self._edges:
            v[p - 1] = q - 1
            v[q - 1] = p - 1
        return v

    @classmethod
    def from_mate_vector(cls, mate: np.ndarray) -> "Configuration":
        edges = [(i + 1, int(mate[i]) + 1)
                 for i in range(mate.size) if mate[i] > i]
        return cls(mate.size, edges)

    def validate_against(self, graph: AcceptanceGraph,
                         caps: SlotCapacities) -> None:
        """Raise if not a degree-bounded subgraph of the acceptance graph."""
        if graph.n != self.n or caps.n != self.n:
            raise ValueError("mismatched peer counts")
        for p, q in self._edges:
            if not graph.has_edge(p, q):
                raise ValueError(f"edge ({p},{q}) not in the acceptance graph")
        for p in range(1, self.n + 1):
            if self.degree(p) > caps.of(p):
                raise ValueError(f"peer {p} exceeds its {caps.of(p)} slots")

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.n == other.n and self._edges == other._edges

    def __hash__(self):
        return hash((self.n, self._edges))

    def __repr__(self):
        return f"Configuration(n={self.n}, edges={sorted(self._edges)})"


@dataclass(frozen=True)
class Instance:
    """A matching problem: acceptance graph + ranking + slot capacities."""

    graph: AcceptanceGraph
    ranking: Ranking = field(default=None)  # type: ignore[assignment]
    caps: SlotCapacities = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.ranking is None:
            object.__setattr__(self, "ranking", Ranking(self.graph.n))
        if self.caps is None:
            object.__setattr__(
                self, "caps", SlotCapacities.constant(self.graph.n, 1))
        if not (self.graph.n == self.ranking.n == self.caps.n):
            raise ValueError("graph, ranking and capacities disagree on n")

    @property
    def n(self) -> int:
        return self.graph.n


# ---------------------------------------------------------------------------
# stability predicates
# ---------------------------------------------------------------------------

def _accepts(config: Configuration, caps: SlotCapacities, p: int, q: int) -> bool:
    """p has a free slot or currently holds a mate worse than q."""
    mates = config.mates(p)
    if len(mates) < caps.of(p):
        return True
    return bool(mates) and mates[-1] > q


def is_blocking_pair(config: Configuration, graph: AcceptanceGraph,
                     caps: SlotCapacities, p: int, q: int) -> bool:
    """True iff p and q are acceptable, unmatched together, and each one
    either has a free slot or holds a mate worse than the other."""
    _check_rank(p, config.n)
    _check_rank(q, config.n)
    if p == q:
        raise ValueError("a blocking pair needs two distinct peers")
    if not graph.has_edge(p, q):
        return False
    if config.has_edge(p, q):
        return False
    return _accepts(config, caps, p, q) and _accepts(config, caps, q, p)


def blocking_pairs(config: Configuration, graph: AcceptanceGraph,
                   caps: SlotCapacities) -> list[tuple[int, int]]:
    """All blocking pairs, scanning acceptance edges not in the configuration."""
    out = []
    for p, q in graph.edges():
        if not config.has_edge(p, q) and is_blocking_pair(
                config, graph, caps, p, q):
            out.append((p, q))
    return out


def is_stable(config: Configuration, graph: AcceptanceGraph,
              caps: SlotCapacities) -> bool:
    """True iff no acceptable pair blocks the configuration."""
    config.validate_against(graph, caps)
    for p, q in graph.edges():
        if not config.has_edge(p, q) and is_blocking_pair(
                config, graph, caps, p, q):
            return False
    return True


# ---------------------------------------------------------------------------
# distance and disorder (1-matchings only)
# ---------------------------------------------------------------------------

def _sigma(config: Configuration) -> np.ndarray:
    """1-based mate ranks; n+1 where unmated (the metric's convention)."""
    mate = config.mate_vector()
    return np.where(mate == UNMATED, config.n + 1, mate + 1).astype(np.int64)


def distance(c1: Configuration, c2: Configuration) -> float:
    """Normalized mate-rank displacement between two 1-matchings.

    (2 / (n (n+1))) * sum_i |sigma(c1,i) - sigma(c2,i)| where sigma is
    the mate's rank, n+1 when unmated.  Equals 1 between any perfect
    matching and the empty configuration.
    """
    if c1.n != c2.n:
        raise ValueError("configurations live on different peer counts")
    s1 = _sigma(c1)
    s2 = _sigma(c2)
    n = c1.n
    return float(np.abs(s1 - s2).sum() * 2.0 / (n * (n + 1)))


def disorder(config: Configuration, instance: Instance) -> float:
    """Distance from `config` to the instance's stable configuration."""
    from . import solver

    target = solver.stable_configuration(
        instance.graph, instance.ranking, instance.caps)
    return distance(config, target)


def _check_rank(p: int, n: int) -> None:
    if not 1 <= p <= n:
        raise ValueError(f"peer rank {p} outside 1..{n}")


# ---------------------------------------------------------------------------
# edge-list / capacity text formats
# ---------------------------------------------------------------------------

def write_edge_list(obj: AcceptanceGraph | Configuration, fh: IO[str]) -> None:
    """Header `n=<int>`, then one `<i> <j>` line per edge with i < j."""
    fh.write(f"n={obj.n}\n")
    for p, q in obj.edges():
        fh.write(f"{p} {q}\n")


def _read_edge_lines(fh: IO[str]) -> tuple[int, list[tuple[int, int]]]:
    header = fh.readline().strip()
    if not header.startswith("n="):
        raise ValueError(f"expected 'n=<int>' header, got {header!r}")
    n = int(header[2:])
    edges = []
    for line in fh:
        line = line.strip()
        if not line:
            continue
        p_s, q_s = line.split()
        edges.append((int(p_s), int(q_s)))
    return n, edges


def read_acceptance_graph(fh: IO[str]) -> AcceptanceGraph:
    n, edges = _read_edge_lines(fh)
    return AcceptanceGraph(n, edges)


def read_configuration(fh: IO[str]) -> Configuration:
    n, edges = _read_edge_lines(fh)
    return Configuration(n, edges)


def write_capacities(caps: SlotCapacities, fh: IO[str]) -> None:
    """One integer per line, rank order."""
    for x in caps.b:
        fh.write(f"{x}\n")


def read_capacities(fh: IO[str]) -> SlotCapacities:
    values = [int(line) for line in fh if line.strip()]
    if not values:
        raise ValueError("empty capacity file")
    return SlotCapacities(tuple(values))
