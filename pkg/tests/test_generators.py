import numpy as np
import pytest

from rankmatch.generators import (
    gen_complete,
    gen_erdos_renyi,
    sample_capacities_constant,
    sample_capacities_normal,
)


def test_complete_graphs():
    assert gen_complete(3).edge_set() == {(1, 2), (1, 3), (2, 3)}
    assert gen_complete(1).num_edges == 0
    assert gen_complete(6).num_edges == 15
    assert gen_complete(4).has_edge(2, 4)


def test_erdos_renyi_extremes():
    assert gen_erdos_renyi(50, 0.0, seed=1).num_edges == 0
    g = gen_erdos_renyi(20, 19, seed=1)
    assert g.num_edges == 20 * 19 // 2


def test_erdos_renyi_determinism():
    a = gen_erdos_renyi(100, 5, seed=42)
    b = gen_erdos_renyi(100, 5, seed=42)
    c = gen_erdos_renyi(100, 5, seed=43)
    assert a == b
    assert a != c


def test_erdos_renyi_range_check():
    with pytest.raises(ValueError):
        gen_erdos_renyi(10, 9.5, seed=0)
    with pytest.raises(ValueError):
        gen_erdos_renyi(10, -0.1, seed=0)
    assert gen_erdos_renyi(1, 0, seed=0).num_edges == 0


def test_erdos_renyi_mean_degree():
    # mean degree over 100 seeds within 10 +/- 0.5
    n, d = 1000, 10.0
    degs = []
    for seed in range(100):
        g = gen_erdos_renyi(n, d, seed)
        degs.append(2 * g.num_edges / n)
    assert abs(np.mean(degs) - d) < 0.5


def test_erdos_renyi_edge_count_binomial():
    # edge count matches Binomial(n(n-1)/2, d/(n-1)) within 3 standard errors
    n, d, seeds = 200, 10.0, 100
    pairs = n * (n - 1) / 2
    p = d / (n - 1)
    counts = [gen_erdos_renyi(n, d, s).num_edges for s in range(seeds)]
    se = np.sqrt(pairs * p * (1 - p) / seeds)
    assert abs(np.mean(counts) - pairs * p) < 3 * se


def test_constant_capacities():
    caps = sample_capacities_constant(5, 2)
    assert caps.b == (2, 2, 2, 2, 2)
    assert sample_capacities_constant(4, 0).b == (0, 0, 0, 0)
    assert caps.total == 5 * 2
    with pytest.raises(ValueError):
        sample_capacities_constant(3, -1)


def test_normal_capacities_degenerate():
    caps = sample_capacities_normal(100, 6.0, 0.0, seed=0)
    assert set(caps.b) == {6}
    # half-up rounding of a constant 2.5 draw
    caps = sample_capacities_normal(10, 2.5, 0.0, seed=0)
    assert set(caps.b) == {3}


def test_normal_capacities_mean():
    caps = sample_capacities_normal(10 ** 5, 6.0, 0.2, seed=1)
    mean = np.mean(caps.b)
    assert 5.9 <= mean <= 6.1


def test_normal_capacities_clamped_positive():
    caps = sample_capacities_normal(5000, 1.0, 10.0, seed=3)
    assert min(caps.b) >= 1


def test_normal_capacities_determinism():
    a = sample_capacities_normal(50, 3.0, 0.5, seed=9)
    b = sample_capacities_normal(50, 3.0, 0.5, seed=9)
    assert a == b
    with pytest.raises(ValueError):
        sample_capacities_normal(5, 0.0, 0.1, seed=0)
    with pytest.raises(ValueError):
        sample_capacities_normal(5, 2.0, -1.0, seed=0)
