import io

import numpy as np
import pytest

from rankmatch.core import (
    AcceptanceGraph,
    Configuration,
    Instance,
    Ranking,
    SlotCapacities,
    blocking_pairs,
    disorder,
    distance,
    is_blocking_pair,
    is_stable,
    read_acceptance_graph,
    read_capacities,
    read_configuration,
    write_capacities,
    write_edge_list,
)
from rankmatch.generators import gen_complete
from rankmatch.solver import stable_configuration

from conftest import random_one_matching

CLIQUES6 = Configuration(6, [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)])


def test_ranking_validation():
    assert Ranking(3).n == 3
    with pytest.raises(ValueError):
        Ranking(0)


def test_capacities():
    caps = SlotCapacities.constant(5, 2)
    assert caps.b == (2, 2, 2, 2, 2)
    assert caps.total == 10
    assert caps.of(1) == 2
    with pytest.raises(ValueError):
        SlotCapacities((1, -1))
    with pytest.raises(ValueError):
        caps.of(6)


def test_acceptance_graph_basic():
    g = AcceptanceGraph(4, [(1, 2), (3, 1)])
    assert g.has_edge(2, 1) and g.has_edge(1, 3)
    assert not g.has_edge(2, 3)
    assert g.neighbors(1) == [2, 3]
    assert g.num_edges == 2
    with pytest.raises(ValueError):
        AcceptanceGraph(3, [(1, 1)])
    with pytest.raises(ValueError):
        AcceptanceGraph(3, [(1, 4)])


def test_configuration_symmetry_and_updates():
    c = Configuration(4, [(2, 1)])
    assert c.mates(1) == (2,) and c.mates(2) == (1,)
    c2 = c.with_edge(3, 4)
    assert c2.has_edge(4, 3) and not c.has_edge(3, 4)
    c3 = c2.without_edge(1, 2)
    assert c3.mates(2) == ()
    # symmetry holds after every mutation
    for cfg in (c, c2, c3):
        for p in range(1, 5):
            for q in cfg.mates(p):
                assert p in cfg.mates(q)


def test_blocking_pair_examples():
    g = gen_complete(6)
    caps = SlotCapacities.constant(6, 2)
    # the stable two-clique configuration admits no blocking pair
    for p in range(1, 7):
        for q in range(p + 1, 7):
            if not CLIQUES6.has_edge(p, q):
                assert not is_blocking_pair(CLIQUES6, g, caps, p, q)
    # peer 3's mates 1,2 both outrank 4
    assert not is_blocking_pair(CLIQUES6, g, caps, 3, 4)
    # empty configuration: both sides have free slots
    g2 = AcceptanceGraph(3, [(1, 2)])
    caps1 = SlotCapacities.constant(3, 1)
    assert is_blocking_pair(Configuration.empty(3), g2, caps1, 1, 2)


def test_blocking_pair_errors():
    g = gen_complete(3)
    caps = SlotCapacities.constant(3, 1)
    cfg = Configuration.empty(3)
    with pytest.raises(ValueError):
        is_blocking_pair(cfg, g, caps, 1, 1)
    with pytest.raises(ValueError):
        is_blocking_pair(cfg, g, caps, 0, 2)
    with pytest.raises(ValueError):
        is_blocking_pair(cfg, g, caps, 1, 4)


def test_is_stable_examples():
    g = gen_complete(6)
    caps = SlotCapacities.constant(6, 2)
    assert is_stable(CLIQUES6, g, caps)
    # empty configuration with an available edge is unstable
    g2 = AcceptanceGraph(3, [(1, 2)])
    assert not is_stable(Configuration.empty(3), g2,
                         SlotCapacities.constant(3, 1))
    # eight peers, three slots for the best one: connected stable graph
    g8 = gen_complete(8)
    caps8 = SlotCapacities((3, 2, 2, 2, 2, 2, 2, 2))
    cfg8 = Configuration(8, [(1, 2), (1, 3), (2, 3), (1, 4),
                             (4, 5), (5, 6), (6, 7), (7, 8)])
    assert is_stable(cfg8, g8, caps8)


def test_is_stable_matches_blocking_pair_count(rng):
    from conftest import random_instance
    for _ in range(60):
        inst = random_instance(rng)
        cfg = Configuration.empty(inst.n)
        assert is_stable(cfg, inst.graph, inst.caps) == \
            (len(blocking_pairs(cfg, inst.graph, inst.caps)) == 0)


def test_distance_examples():
    c1 = Configuration(4, [(1, 2)])
    assert distance(c1, Configuration.empty(4)) == pytest.approx(0.7)
    assert distance(c1, c1) == 0.0
    # any perfect matching is at distance 1 from the empty configuration
    rs = np.random.RandomState(7)
    for _ in range(20):
        n = 2 * int(rs.randint(1, 11))
        perm = rs.permutation(np.arange(1, n + 1))
        cfg = Configuration(n, [(int(perm[2 * k]), int(perm[2 * k + 1]))
                                for k in range(n // 2)])
        assert distance(cfg, Configuration.empty(n)) == pytest.approx(1.0)


def test_distance_rejects_higher_degrees():
    c = Configuration(4, [(1, 2), (1, 3)])
    with pytest.raises(ValueError):
        distance(c, Configuration.empty(4))
    with pytest.raises(ValueError):
        distance(Configuration.empty(4), c)
    with pytest.raises(ValueError):
        distance(Configuration.empty(4), Configuration.empty(5))


def test_distance_is_a_metric(rng):
    for _ in range(40):
        n = int(rng.randint(2, 21))
        a = random_one_matching(rng, n)
        b = random_one_matching(rng, n)
        c = random_one_matching(rng, n)
        dab = distance(a, b)
        assert dab == pytest.approx(distance(b, a))
        assert dab >= 0.0
        assert (dab == 0.0) == (a == b)
        assert distance(a, c) <= dab + distance(b, c) + 1e-12


def test_disorder_examples():
    inst = Instance(gen_complete(4))
    assert disorder(Configuration(4, [(1, 2)]), inst) == pytest.approx(0.3)
    stable = stable_configuration(inst.graph, inst.ranking, inst.caps)
    assert disorder(stable, inst) == 0.0
    # empty vs perfect-matching stable configuration
    assert disorder(Configuration.empty(4), inst) == pytest.approx(1.0)


def test_edge_list_round_trip():
    g = AcceptanceGraph(5, [(1, 5), (2, 3)])
    buf = io.StringIO()
    write_edge_list(g, buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "n=5"
    assert read_acceptance_graph(io.StringIO(text)) == g
    cfg = Configuration(5, [(2, 3)])
    buf = io.StringIO()
    write_edge_list(cfg, buf)
    assert read_configuration(io.StringIO(buf.getvalue())) == cfg
    with pytest.raises(ValueError):
        read_acceptance_graph(io.StringIO("5\n1 2\n"))


def test_capacity_round_trip():
    caps = SlotCapacities((1, 0, 3))
    buf = io.StringIO()
    write_capacities(caps, buf)
    assert buf.getvalue() == "1\n0\n3\n"
    assert read_capacities(io.StringIO(buf.getvalue())) == caps
    with pytest.raises(ValueError):
        read_capacities(io.StringIO(""))


def test_validate_against():
    g = AcceptanceGraph(3, [(1, 2)])
    caps = SlotCapacities.constant(3, 1)
    Configuration(3, [(1, 2)]).validate_against(g, caps)
    with pytest.raises(ValueError):
        Configuration(3, [(1, 3)]).validate_against(g, caps)
    with pytest.raises(ValueError):
        Configuration(3, [(1, 2)]).validate_against(
            g, SlotCapacities.constant(3, 0))
