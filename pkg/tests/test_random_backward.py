import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mobius_julia.moebius import apply
from mobius_julia.random_backward import (
    ChainConfig,
    RandomOrbit,
    empirical_measure,
    make_rng,
    random_backward_orbit,
    run_ensemble,
    sample_index,
    sample_indices,
    walk,
)
from mobius_julia.semigroup import ProbabilityVector, caruso, dilation_pair, rotation
from mobius_julia.sphere import INF, chordal_distance, is_inf


def test_config_validation():
    with pytest.raises(ValueError):
        ChainConfig(10, burn_in=10)
    with pytest.raises(ValueError):
        ChainConfig(0, burn_in=0)
    with pytest.raises(ValueError):
        ChainConfig(10, burn_in=0, rng_seed=-1)


def test_sample_index_examples():
    rng = make_rng(1)
    assert {sample_index(ProbabilityVector((1.0,)), rng) for _ in range(50)} == {0}
    eps = 1e-9
    idx = sample_indices(ProbabilityVector((1 - eps, eps)), make_rng(2), 10_000)
    assert idx.sum() <= 1
    idx = sample_indices(ProbabilityVector((0.5, 0.5)), make_rng(3), 1_000_000)
    assert abs((idx == 0).mean() - 0.5) < 0.002


def test_sample_index_matches_tally():
    # one scalar draw at a time reproduces the vectorized stream
    b = ProbabilityVector((0.2, 0.3, 0.5))
    r1, r2 = make_rng(9), make_rng(9)
    assert [sample_index(b, r1) for _ in range(200)] == list(sample_indices(b, r2, 200))


def test_counterexample_orbits():
    G = dilation_pair()
    o = random_backward_orbit(G, 0, ChainConfig(1000, 0, 5))
    assert (o.points == 0).all()
    o = random_backward_orbit(G, INF, ChainConfig(1000, 0, 5))
    assert all(is_inf(z) for z in o.points)
    o = random_backward_orbit(rotation("1/3"), 0.4 + 0.3j, ChainConfig(10_000, 0, 5))
    assert np.abs(np.abs(o.points) - 0.5).max() < 1e-9


def test_determinism_and_recursion():
    G = caruso(1 + 1j)
    cfg = ChainConfig(5000, 100, 42)
    o1 = random_backward_orbit(G, 0.3, cfg)
    o2 = random_backward_orbit(G, 0.3, cfg)
    assert np.array_equal(o1.indices, o2.indices) and np.array_equal(o1.points, o2.points)
    prev = 0.3
    for j, z in zip(o1.indices, o1.points):
        assert chordal_distance(z, apply(G.inverses[j], prev)) < 1e-9
        prev = z


@given(st.lists(st.integers(0, 1), max_size=200), st.complex_numbers(max_magnitude=5, allow_nan=False))
@settings(max_examples=50)
def test_walk_matches_pointwise_application(idx, a):
    G = caruso(2)
    pts = walk(G, a, np.array(idx, dtype=np.int64))
    z = a
    for j, w in zip(idx, pts):
        z = apply(G.inverses[j], z)
        assert chordal_distance(w, z) < 1e-9


def test_walk_through_infinity():
    G = caruso(2)
    # f^{-1}(2) = inf, then g^{-1}(inf) = 0
    pts = walk(G, 2, np.array([0, 1]))
    assert is_inf(pts[0]) and pts[1] == 0


def test_walk_rejects_bad_index():
    with pytest.raises(IndexError):
        walk(caruso(2), 0, np.array([2]))


def test_branch_frequencies_per_state():
    """Conditional on the current state, branch j is chosen with probability b_j."""
    b = ProbabilityVector((0.3, 0.7))
    o = random_backward_orbit(caruso(2), 0.1, ChainConfig(100_000, 0, 11, b))
    states = np.concatenate([[0.1], o.points[:-1]])
    cells = np.digitize(states.real, [-0.4, 0, 0.4])
    for c in np.unique(cells):
        sel = o.indices[cells == c]
        n = sel.size
        se = np.sqrt(0.3 * 0.7 / n)
        assert abs((sel == 0).mean() - 0.3) < 4 * se


def test_ensemble():
    G = caruso(2)
    cfg = ChainConfig(1000, 0, 7, chain_count=2)
    single = random_backward_orbit(G, 0, cfg)
    chains = run_ensemble(G, 0, cfg)
    assert np.array_equal(chains[0].points, single.points)
    assert not np.array_equal(chains[0].indices, chains[1].indices)
    threaded = run_ensemble(G, 0, cfg, workers=2)
    assert all(np.array_equal(a.points, c.points) for a, c in zip(chains, threaded))


def test_empirical_measure_examples():
    o = RandomOrbit(0, np.zeros(1, dtype=np.int64), np.array([0.5 + 0j]), 0)
    mu = empirical_measure(o)
    assert list(mu.points) == [0.5] and list(mu.weights) == [1.0]
    const = RandomOrbit(0, np.zeros(10, dtype=np.int64), np.full(10, 2 + 0j), 0)
    mu = empirical_measure(const, burn_in=4)
    assert list(mu.weights) == [1.0]
    mu = empirical_measure(random_backward_orbit(dilation_pair(), 0, ChainConfig(500, 100, 1)), 100)
    assert list(mu.points) == [0]
    with pytest.raises(ValueError):
        empirical_measure(const, burn_in=10)


def test_empirical_weights_uniform():
    o = random_backward_orbit(caruso(2), 0, ChainConfig(1000, 10, 3))
    mu = empirical_measure(o, 10)
    assert abs(mu.mass - 1) < 1e-12
    assert np.allclose(mu.weights * 990, np.round(mu.weights * 990))
