import math

import numpy as np
import pytest

from mobius_julia.diagnostics.sets import (
    backward_invariance_check,
    directed_hausdorff,
    fixed_point_cloud,
    hausdorff_distance,
    interior_cells,
    orbit_to_julia_distance,
    well_separated_count,
)
from mobius_julia.full_backward import BudgetExceeded, FullRunConfig, full_backward_measure
from mobius_julia.moebius import MoebiusMap
from mobius_julia.random_backward import ChainConfig, random_backward_orbit
from mobius_julia.raster import RasterSet, RenderConfig, rasterize
from mobius_julia.semigroup import GeneratorSet, caruso, dilation_pair, inverse_semigroup
from mobius_julia.sphere import INF, PointIndex

DOUBLE = GeneratorSet((MoebiusMap.scaling(2),))


def test_hausdorff_examples():
    A = rasterize([0.3, 2j], RenderConfig(64))
    assert hausdorff_distance(A, A) == 0
    assert hausdorff_distance([0], [INF]) == 2
    assert hausdorff_distance([0, 1], [0]) == pytest.approx(math.sqrt(2))
    assert directed_hausdorff([0], [0, 1]) == 0
    with pytest.raises(ValueError):
        hausdorff_distance([], [0])


def test_orbit_distance_examples():
    o = random_backward_orbit(dilation_pair(), 0, ChainConfig(1000, 0, 0))
    J = rasterize([0], RenderConfig(64))
    od = orbit_to_julia_distance(o, J)
    assert (od.distances == 0).all()
    o = random_backward_orbit(caruso(2), 0.3, ChainConfig(20_000, 0, 0))
    J = rasterize(o.points, RenderConfig(64))
    assert orbit_to_julia_distance(o, J).tail_max <= J.cell_diameter


def test_orbit_tail_close_to_full_method():
    G = caruso(2)
    J = rasterize(full_backward_measure(G, FullRunConfig(14)), RenderConfig(512))
    for seed in range(8):
        o = random_backward_orbit(G, 0.3 + 0.2j, ChainConfig(100_000, 100, seed))
        assert orbit_to_julia_distance(o, J).tail_max < 0.03


def test_fixed_point_cloud_examples():
    c = fixed_point_cloud(DOUBLE, 3)
    assert set(c.points.tolist()) == {0}
    G = caruso(2)
    c = fixed_point_cloud(G, 1)
    s2 = math.sqrt(2)
    # repelling: 1 - sqrt2 for f and sqrt2 - 1 for g
    np.testing.assert_allclose(c.points.real, [1 - s2, s2 - 1], atol=1e-12)
    assert c.words == [(0,), (1,)]
    with pytest.raises(BudgetExceeded):
        fixed_point_cloud(G, 20, budget=1000)
    with pytest.raises(ValueError):
        fixed_point_cloud(G, 2, "sideways")


def test_cloud_skips_and_parabolics():
    G = caruso(2)
    c = fixed_point_cloud(G, 2)
    assert c.skipped == {"parabolic": 2}
    p = fixed_point_cloud(G, 2, "parabolic")
    np.testing.assert_allclose(sorted(p.points.real), [-1, 1], atol=1e-12)
    assert fixed_point_cloud(dilation_pair(), 2).skipped == {"identity": 2}


def test_repelling_cloud_is_attracting_cloud_of_inverse():
    for G in (caruso(2), caruso(1 + 1j)):
        rep = fixed_point_cloud(G, 6, "repelling")
        att = fixed_point_cloud(inverse_semigroup(G), 6, "attracting")
        assert len(rep) == len(att)
        assert PointIndex(att.points).distances(rep.points).max() < 1e-9
        assert PointIndex(rep.points).distances(att.points).max() < 1e-9


def test_cloud_near_random_raster():
    G = caruso(2)
    o = random_backward_orbit(G, 0, ChainConfig(1_000_000, 100, 0))
    J = rasterize(o.points[100:], RenderConfig(1024))
    assert J.distances(fixed_point_cloud(G, 8).points).max() < 0.02


def test_backward_invariance_examples():
    assert backward_invariance_check(DOUBLE, rasterize([0], RenderConfig(64))) == 0
    full = RasterSet(np.ones((2, 32, 32)), RenderConfig(32))
    assert backward_invariance_check(caruso(2), full) <= full.cell_diameter
    G = caruso(2)
    o = random_backward_orbit(G, 0, ChainConfig(1_000_000, 100, 0))
    assert backward_invariance_check(G, rasterize(o.points[100:], RenderConfig(512))) < 0.02


def test_random_orbit_covers_full_method():
    G = caruso(2)
    cfg = RenderConfig(256)
    Jf = rasterize(full_backward_measure(G, FullRunConfig(14)), cfg)
    o = random_backward_orbit(G, 1 - math.sqrt(2), ChainConfig(100_000, 0, 0))
    Jr = rasterize(o.points, cfg)
    assert directed_hausdorff(Jf, o.points) <= 3 * Jf.cell_diameter
    assert directed_hausdorff(Jr, full_backward_measure(G, FullRunConfig(14)).points) <= 3 * Jf.cell_diameter


def test_interior_and_separation():
    cfg = RenderConfig(16)
    block = RasterSet(np.zeros((2, 16, 16)), cfg)
    block.grids[0, 4:7, 4:7] = 1
    assert interior_cells(block) == 1
    assert interior_cells(rasterize([0, 0.5], cfg)) == 0
    assert well_separated_count([0, 1, INF, -1], 0.5) == 3
    assert well_separated_count([0, 1e-3], 0.5) == 1
    assert well_separated_count([], 0.1) == 0
