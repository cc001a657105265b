import numpy as np
import pytest

from mobius_julia.diagnostics.caruso import (
    beta_grid,
    beta_scan,
    beta_seed,
    canonical_beta,
    caruso_intersection_check,
    known_intersections,
    scan_csv,
)


def test_known_intersections():
    assert set(known_intersections(-1 + 1j)) == {1, -1, 1j, -1j}
    assert set(known_intersections(-2)) == {1, -1}
    assert set(known_intersections(-2j)) == {1j, -1j}
    with pytest.raises(ValueError):
        known_intersections(3)


def test_canonical_beta():
    assert canonical_beta(-1 - 1j) == 1 + 1j
    assert canonical_beta(-2j) == 2j
    assert beta_seed(5, 2) == beta_seed(5, -2) != beta_seed(6, 2)
    with pytest.raises(ValueError):
        canonical_beta(0)


@pytest.mark.parametrize("beta", [1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j, 2, -2, 2j, -2j])
def test_intersection_check(beta):
    rep = caruso_intersection_check(beta, steps=200_000)
    assert rep.passed, "\n".join(rep.summary_lines())
    assert len(rep.metadata["verified_points"]) == len(known_intersections(beta))


def test_grid_skips_zero_and_is_row_major():
    g = beta_grid((-1, 1, -1, 1), 1)
    assert 0 not in g and len(g) == 8
    assert g[:3] == [-1 - 1j, -1j, 1 - 1j]


def test_scan_symmetry_and_known_rows():
    rows = beta_scan((-2, 2, -2, 2), 2, steps=50_000, resolution=128, master_seed=3)
    by_beta = {r.beta: r for r in rows}
    for r in rows:
        twin = by_beta[-r.beta]
        assert (twin.hausdorff, twin.equal_flag) == (r.hausdorff, r.equal_flag)
    assert not by_beta[2].equal_flag and not by_beta[2 + 2j].equal_flag
    csv_text = scan_csv(rows)
    assert csv_text.splitlines()[0] == "beta_re,beta_im,hausdorff,equal_flag,chain_len,raster_res,master_seed"


def test_scan_one_plus_i_unequal():
    rows = beta_scan((1, 1, 1, 1), 1, steps=50_000, resolution=128)
    assert len(rows) == 1 and not rows[0].equal_flag


def test_scan_workers_keep_order():
    a = beta_scan((0, 1, 0, 1), 1, steps=20_000, resolution=64)
    b = beta_scan((0, 1, 0, 1), 1, steps=20_000, resolution=64, workers=3)
    assert scan_csv(a) == scan_csv(b)
    assert np.all([r.chain_len == 20_000 for r in a])
