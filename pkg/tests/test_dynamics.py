import numpy as np
import pytest

from rankmatch.core import Configuration, Instance, Ranking, SlotCapacities
from rankmatch.dynamics import (
    BestMate,
    ChurnSpec,
    Decremental,
    RandomProbe,
    Trajectory,
    make_strategy,
    run_churn,
    run_convergence,
    run_removal,
    take_initiative,
)
from rankmatch.generators import gen_complete, gen_erdos_renyi
from rankmatch.solver import replay_optimal_schedule, solve_instance

from conftest import random_instance


def one_matching_instance(n, d, seed):
    return Instance(gen_erdos_renyi(n, d, seed), Ranking(n),
                    SlotCapacities.constant(n, 1))


def test_initiative_at_stable_is_inactive():
    inst = Instance(gen_complete(5))
    stable = solve_instance(inst)
    for strategy in ("best_mate", "decremental", "random"):
        rng = np.random.RandomState(0)
        for p in range(1, 6):
            out, active = take_initiative(stable, inst, p, strategy, rng)
            assert not active
            assert out is stable  # bit-for-bit unchanged


def test_best_mate_picks_lowest_rank():
    inst = Instance(gen_complete(3))
    out, active = take_initiative(Configuration.empty(3), inst, 3, "best_mate")
    assert active and out.edge_set() == {(1, 3)}
    # pairing with a better peer drops the loser
    out2, active2 = take_initiative(
        Configuration(3, [(2, 3)]), inst, 1, "best_mate")
    assert active2 and out2.edge_set() == {(1, 2)}
    assert out2.mates(3) == ()


def test_initiative_drops_worst_mate_at_capacity():
    inst = Instance(gen_complete(4), Ranking(4),
                    SlotCapacities((1, 2, 2, 1)))
    cfg = Configuration(4, [(2, 3), (2, 4)])
    # peer 1 proposes; 2 is its best blocking mate and must drop peer 4
    out, active = take_initiative(cfg, inst, 1, "best_mate")
    assert active
    assert out.edge_set() == {(1, 2), (2, 3)}


def test_initiative_peer_validation():
    inst = Instance(gen_complete(3))
    with pytest.raises(ValueError):
        take_initiative(Configuration.empty(3), inst, 4, "best_mate")
    with pytest.raises(ValueError):
        take_initiative(Configuration.empty(3), inst, 2, "best_mate",
                        present={1, 3})


def test_random_probe_miss_consumes_turn():
    inst = Instance(gen_complete(3))
    cfg = Configuration(3, [(1, 2)])
    rng = np.random.RandomState(11)
    for _ in range(20):
        out, active = take_initiative(cfg, inst, 3, "random", rng)
        assert not active and out is cfg


def test_decremental_cursor_persists():
    inst = Instance(gen_complete(6))
    strat = Decremental()
    cfg = Configuration.empty(6)
    cfg, active = take_initiative(cfg, inst, 4, strat)
    assert active
    assert 0 <= strat.cursors[4] < len(inst.graph.neighbors(4))
    first = strat.cursors[4]
    cfg, _ = take_initiative(cfg, inst, 4, strat)
    assert 0 <= strat.cursors[4] < len(inst.graph.neighbors(4))
    assert strat.cursors[4] != first or cfg.mates(4)


def test_make_strategy():
    assert isinstance(make_strategy("best_mate"), BestMate)
    assert isinstance(make_strategy("random"), RandomProbe)
    s = Decremental()
    assert make_strategy(s) is s
    with pytest.raises(ValueError):
        make_strategy("greedy")


def test_replay_through_initiatives(rng):
    # the optimal schedule replayed as best-mate initiatives lands on the
    # stable configuration in at most B/2 active steps
    for _ in range(25):
        inst = random_instance(rng, n_max=8, cap_max=3)
        sched = replay_optimal_schedule(inst.graph, inst.ranking, inst.caps)
        cfg = Configuration.empty(inst.n)
        active_steps = 0
        for p, _q in sched:
            cfg, active = take_initiative(cfg, inst, p, "best_mate")
            active_steps += active
        assert cfg == solve_instance(inst)
        assert active_steps <= inst.caps.total // 2


def test_active_runs_never_repeat_and_terminate(rng):
    # any sequence of active initiatives visits each configuration at most
    # once and ends at the stable configuration
    for _ in range(15):
        inst = random_instance(rng, n_min=4, n_max=8, cap_max=2, p=0.7)
        stable = solve_instance(inst)
        cfg = Configuration.empty(inst.n)
        seen = {cfg}
        strategies = [make_strategy("best_mate"), Decremental(),
                      make_strategy("random")]
        for step in range(4000):
            p = int(rng.randint(1, inst.n + 1))
            strat = strategies[int(rng.randint(3))]
            cfg, active = take_initiative(cfg, inst, p, strat, rng)
            if active:
                assert cfg not in seen
                seen.add(cfg)
            if cfg == stable:
                break
        assert cfg == stable


def test_trajectory_type():
    t = Trajectory()
    t.append(0, 1.0, 0, 10)
    t.append(1, 0.5, 3, 10)
    with pytest.raises(ValueError):
        t.append(1, 0.2, 1, 10)
    assert t.peak_disorder == 1.0
    assert t.final_disorder == 0.5
    assert list(t.rows())[1] == (1, 0.5, 3, 10)


def test_run_convergence_from_stable_is_trivial():
    inst = one_matching_instance(60, 6, seed=2)
    tr = run_convergence(inst, "best_mate", solve_instance(inst), 20, seed=0)
    assert len(tr) == 1
    assert tr.disorder == [0.0]
    assert tr.population == [60]


def test_run_convergence_requires_single_slots():
    inst = Instance(gen_complete(6), Ranking(6), SlotCapacities.constant(6, 2))
    with pytest.raises(ValueError):
        run_convergence(inst, "best_mate", Configuration.empty(6), 5, 0)


@pytest.mark.parametrize("strategy", ["best_mate", "decremental", "random"])
def test_runs_end_at_the_stable_configuration(strategy):
    # no churn: any strategy terminates at THE stable configuration
    for seed in range(3):
        inst = one_matching_instance(150, 8, seed)
        tr = run_convergence(inst, strategy, Configuration.empty(150),
                             400, seed + 10)
        assert tr.converged()
        assert all(b >= a for a, b in zip(tr.times, tr.times[1:]))


def test_run_removal_of_unmated_peer_keeps_disorder_zero():
    inst = Instance(gen_complete(3))
    # stable configuration pairs 1-2 and leaves 3 unmated
    tr = run_removal(inst, victim=3, max_units=10, seed=0)
    assert tr.disorder == [0.0]
    assert tr.population == [2]


def test_run_removal_heals():
    inst = one_matching_instance(300, 10, seed=5)
    tr = run_removal(inst, victim=3, max_units=30, seed=1)
    assert tr.converged()
    assert tr.population[0] == 299
    with pytest.raises(ValueError):
        run_removal(inst, victim=301, max_units=5, seed=0)


def test_churn_spec_validation():
    with pytest.raises(ValueError):
        ChurnSpec(rate=-1.0, n=100)
    with pytest.raises(ValueError):
        ChurnSpec(rate=1.0, n=1)


def test_churn_rate_zero_matches_convergence():
    inst = one_matching_instance(200, 10, seed=3)
    a = run_convergence(inst, "best_mate", Configuration.empty(200), 40, 9)
    b = run_churn(inst, ChurnSpec(rate=0.0, n=200, seed=9), 40)
    assert a.times == b.times
    assert a.disorder == b.disorder
    assert a.active == b.active
    assert a.population == b.population


def test_churn_keeps_disorder_bounded():
    inst = one_matching_instance(200, 10, seed=3)
    tr = run_churn(inst, ChurnSpec(rate=4.0, n=200, seed=1), 30)
    assert len(tr) == 31  # no early stop under churn
    assert max(tr.disorder[5:]) < 1.0
    assert min(tr.population) > 150 and max(tr.population) < 250


def test_churn_population_moves():
    inst = one_matching_instance(100, 8, seed=0)
    tr = run_churn(inst, ChurnSpec(rate=20.0, n=100, seed=4), 30)
    assert len(set(tr.population)) > 1
