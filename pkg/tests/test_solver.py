import pytest

from rankmatch.core import (
    AcceptanceGraph,
    Configuration,
    Ranking,
    SlotCapacities,
    is_stable,
)
from rankmatch.generators import gen_complete, gen_erdos_renyi
from rankmatch.solver import (
    oracle_stable,
    replay_optimal_schedule,
    stable_configuration,
)

from conftest import random_instance


def test_two_cliques():
    cfg = stable_configuration(
        gen_complete(6), Ranking(6), SlotCapacities.constant(6, 2))
    assert cfg.edge_set() == {(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)}


def test_extra_slot_connects_the_graph():
    cfg = stable_configuration(
        gen_complete(8), Ranking(8), SlotCapacities((3, 2, 2, 2, 2, 2, 2, 2)))
    assert cfg.edge_set() == {(1, 2), (1, 3), (2, 3), (1, 4),
                              (4, 5), (5, 6), (6, 7), (7, 8)}


def test_empty_graph():
    cfg = stable_configuration(
        AcceptanceGraph(4, []), Ranking(4), SlotCapacities.constant(4, 2))
    assert cfg.num_edges == 0


def test_output_is_always_stable(rng):
    for _ in range(80):
        inst = random_instance(rng, n_max=8, cap_max=3)
        cfg = stable_configuration(inst.graph, inst.ranking, inst.caps)
        assert is_stable(cfg, inst.graph, inst.caps)


def test_matches_exhaustive_oracle(rng):
    for _ in range(60):
        inst = random_instance(rng)
        found = oracle_stable(inst.graph, inst.caps)
        assert len(found) == 1
        assert found[0] == stable_configuration(
            inst.graph, inst.ranking, inst.caps)


def test_oracle_unique_pair():
    found = oracle_stable(gen_complete(3), SlotCapacities.constant(3, 1))
    assert found == [Configuration(3, [(1, 2)])]
    found6 = oracle_stable(gen_complete(6), SlotCapacities.constant(6, 2))
    assert len(found6) == 1
    assert found6[0].edge_set() == {(1, 2), (1, 3), (2, 3),
                                    (4, 5), (4, 6), (5, 6)}


def test_oracle_guards():
    with pytest.raises(ValueError):
        oracle_stable(gen_complete(13), SlotCapacities.constant(13, 1))
    with pytest.raises(ValueError):
        oracle_stable(gen_complete(7), SlotCapacities.constant(7, 1))


def test_replay_schedule_examples():
    sched = replay_optimal_schedule(
        gen_complete(6), Ranking(6), SlotCapacities.constant(6, 2))
    assert len(sched) == 6  # B/2 = 12/2
    assert replay_optimal_schedule(
        AcceptanceGraph(3, []), Ranking(3), SlotCapacities.constant(3, 1)) == []
    assert replay_optimal_schedule(
        gen_complete(4), Ranking(4), SlotCapacities.constant(4, 1)) == \
        [(1, 2), (3, 4)]


def test_replay_schedule_reaches_stable(rng):
    for _ in range(40):
        inst = random_instance(rng, n_max=8, cap_max=3)
        sched = replay_optimal_schedule(inst.graph, inst.ranking, inst.caps)
        assert 2 * len(sched) <= inst.caps.total
        cfg = Configuration(inst.n, sched)
        assert cfg == stable_configuration(inst.graph, inst.ranking, inst.caps)


def test_degree_bounds_and_saturation(rng):
    # a free slot may remain only when no acceptable peer could fill it
    for _ in range(40):
        inst = random_instance(rng, n_max=8, cap_max=3)
        cfg = stable_configuration(inst.graph, inst.ranking, inst.caps)
        for p in range(1, inst.n + 1):
            assert cfg.degree(p) <= inst.caps.of(p)
            if cfg.degree(p) < inst.caps.of(p):
                for q in inst.graph.neighbors(p):
                    if cfg.has_edge(p, q):
                        continue
                    # q must be saturated with better mates
                    assert cfg.degree(q) == inst.caps.of(q)
                    assert all(x < p for x in cfg.mates(q))


def test_complete_and_sparse_paths_agree():
    n = 40
    dense = gen_erdos_renyi(n, n - 1, seed=0)  # p = 1: every edge present
    caps = SlotCapacities.constant(n, 3)
    assert stable_configuration(dense, Ranking(n), caps) == \
        stable_configuration(gen_complete(n), Ranking(n), caps)
