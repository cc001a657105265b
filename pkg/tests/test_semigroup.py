import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mobius_julia.moebius import MapClass, MoebiusMap, apply, classify, fixed_points, inverse, trace_squared_invariant
from mobius_julia.semigroup import (
    GeneratorSet,
    ProbabilityVector,
    caruso,
    definition_from_dict,
    disk_extension,
    disk_parabolics,
    dilation_pair,
    dump_definition,
    evaluate_backward_word,
    inverse_semigroup,
    load_definition,
    mixed_exceptional,
    named_example,
    parse_complex,
    rotation,
    word_map,
)
from mobius_julia.sphere import chordal_distance
from oracles import caruso_atoms
from strategies import finite, maps


def test_probability_vector_validation():
    assert ProbabilityVector.uniform(4).weights == (0.25,) * 4
    with pytest.raises(ValueError):
        ProbabilityVector((0.5, 0.6))
    with pytest.raises(ValueError):
        ProbabilityVector((1.0, 0.0))
    with pytest.raises(ValueError):
        ProbabilityVector(())
    assert ProbabilityVector((0.3, 0.7)).cumulative[-1] == 1.0


def test_generator_set_needs_a_map():
    with pytest.raises(ValueError):
        GeneratorSet(())


def test_inverse_semigroup_examples():
    ident = GeneratorSet((MoebiusMap.identity(),))
    assert inverse_semigroup(ident).maps[0].is_identity()
    inv = inverse_semigroup(dilation_pair())
    assert inv.maps[0] == MoebiusMap.scaling(0.5) and inv.maps[1] == MoebiusMap.scaling(2)
    G = caruso(2)
    assert inverse_semigroup(inverse_semigroup(G)) == G


@given(st.lists(maps(), min_size=1, max_size=4))
def test_inverse_semigroup_involutive(ms):
    G = GeneratorSet(tuple(ms))
    assert inverse_semigroup(inverse_semigroup(G)).maps == G.maps


def test_backward_word_examples():
    G = caruso(2)
    assert evaluate_backward_word(G, (), 0.3 + 1j) == 0.3 + 1j
    assert evaluate_backward_word(G, (0,), 0) == pytest.approx(-0.5)
    assert evaluate_backward_word(G, (0, 1), 0) == pytest.approx(2 / 3)


def test_backward_word_against_exact_oracle():
    G = caruso(2)
    for word, z, _ in caruso_atoms(2, 6):
        assert evaluate_backward_word(G, word, 0) == pytest.approx(float(z), abs=1e-12)


def test_backward_word_index_range():
    with pytest.raises(IndexError):
        evaluate_backward_word(caruso(2), (2,), 0)


@given(st.lists(st.integers(0, 1), max_size=12), finite)
def test_two_evaluation_orders_agree(word, a):
    G = caruso(1 + 1j)
    pointwise = evaluate_backward_word(G, word, a)
    composed = apply(inverse(word_map(G, word)), a)
    assert chordal_distance(pointwise, composed) < 1e-9


def test_caruso_examples():
    G = caruso(2)
    assert apply(G.maps[0], 1) == pytest.approx(3)
    assert classify(caruso(1 + 1j).maps[0]) is MapClass.STRICTLY_LOXODROMIC
    assert trace_squared_invariant(caruso(1 + 1j).maps[0]) == pytest.approx(-2j)
    pts = sorted(p.point.real for p in fixed_points(G.maps[0]).points)
    assert pts == pytest.approx([1 - math.sqrt(2), 1 + math.sqrt(2)])
    with pytest.raises(ValueError):
        caruso(0)


@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_caruso_sign_symmetry(beta):
    G, H = caruso(beta), caruso(-beta)
    assert set(G.maps) == set(H.maps)
    assert G.maps[0] == H.maps[1]


def test_named_examples():
    for m in dilation_pair().maps:
        assert classify(m) is MapClass.HYPERBOLIC
        assert trace_squared_invariant(m) == pytest.approx(4.5)
    r = rotation("1/3").maps[0]
    assert classify(r) is MapClass.ELLIPTIC
    assert trace_squared_invariant(r) == pytest.approx(1)
    assert rotation(Fraction(1, 3)) == rotation("1/3")
    fps = {round(p.point.real, 12): p.kind for p in fixed_points(mixed_exceptional().maps[1]).points}
    assert fps == {0: "attracting", 1: "repelling"}
    assert named_example("caruso", "1+1i").maps == caruso(1 + 1j).maps
    with pytest.raises(ValueError):
        named_example("nonsense")


def test_disk_examples():
    G = disk_parabolics()
    for m, p in zip(G.maps, (1, -1)):
        rep = fixed_points(m)
        assert rep.parabolic
        assert rep.points[0].point == pytest.approx(p)
        # the unit circle is preserved
        for t in range(8):
            z = complex(math.cos(t), math.sin(t))
            assert abs(abs(apply(m, z)) - 1) < 1e-12
    ext = disk_extension(G, 3)
    assert ext.k == 3 and ext.maps[2] == MoebiusMap.scaling(3)
    with pytest.raises(ValueError):
        disk_extension(G, 0.5)


@pytest.mark.parametrize("text,value", [("1+1i", 1 + 1j), ("2i", 2j), ("i", 1j), ("-i", -1j), ("-2", -2), ("1-i", 1 - 1j)])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


def test_definition_round_trip(tmp_path):
    G = caruso(1 + 1j)
    b = ProbabilityVector((0.3, 0.7))
    path = tmp_path / "g.toml"
    path.write_text(dump_definition(G, b))
    H, b2 = load_definition(path)
    assert H.maps == G.maps and H.labels == G.labels and b2 == b


def test_definition_defaults_and_errors():
    doc = {"k": 1, "generator": [{"a": [2, 0], "b": [0, 0], "c": [0, 0], "d": [1, 0]}]}
    G, b = definition_from_dict(doc)
    assert G.maps[0] == MoebiusMap.scaling(2) and b.weights == (1.0,)
    with pytest.raises(ValueError):
        definition_from_dict({"k": 2, "generator": doc["generator"]})
    with pytest.raises(ValueError):
        definition_from_dict({"generator": [{"a": [1, 0]}]})
    with pytest.raises(ValueError):
        definition_from_dict({})
