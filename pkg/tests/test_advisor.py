import math

import pytest

from mobius_julia.diagnostics.advisor import (
    FINITE,
    NOT_FINITE,
    choose_seed_point,
    exceptional_orbit_heuristic,
    precondition_advisor,
)
from mobius_julia.moebius import MoebiusMap
from mobius_julia.semigroup import GeneratorSet, caruso, dilation_pair, mixed_exceptional


def test_exceptional_heuristic_examples():
    res = exceptional_orbit_heuristic(GeneratorSet((MoebiusMap.scaling(2),)), 0)
    assert res.status == FINITE and list(res.points) == [0]
    res = exceptional_orbit_heuristic(mixed_exceptional(), 0)
    assert res.status == FINITE and list(res.points) == [0]
    res = exceptional_orbit_heuristic(caruso(2), 1 + math.sqrt(2), depth=8, size_bound=64)
    assert res.status == NOT_FINITE and res.depth_reached <= 8


def test_seed_point_is_repelling_and_generic():
    z = choose_seed_point(caruso(2))
    assert z == pytest.approx(1 - math.sqrt(2))


@pytest.fixture(scope="module")
def reports():
    return {G.name: precondition_advisor(G) for G in (caruso(1 + 1j), dilation_pair(), mixed_exceptional())}


def test_caruso_verdicts(reports):
    rep = reports["caruso(1+1i)"]
    assert rep.heuristic
    assert rep["difference_criterion"].verdict == "supported"
    assert rep["disjointness_criterion"].verdict == "fails"
    assert rep["exceptional_set_heuristic"].statistic == 0
    assert rep.metadata["jker_empty_supported_by"] == ["difference_criterion"]


def test_dilation_pair_evidence(reports):
    chk = reports["dilation_pair"]["jker_inverse_nonempty"]
    assert chk.verdict == "evidence"
    assert sorted(chk.metadata["points"]) == ["0+0i", "inf"]


def test_mixed_exceptional_candidate(reports):
    chk = reports["mixed_exceptional"]["exceptional_meets_julia"]
    assert chk.verdict == "evidence" and chk.metadata["points"] == ["0+0i"]


def test_deterministic_text(reports):
    again = precondition_advisor(caruso(1 + 1j))
    assert again.to_text() == reports["caruso(1+1i)"].to_text()
    assert '"heuristic": true' in again.to_text()
