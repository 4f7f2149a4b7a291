import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recurwalk.errors import (
    DuplicateAtom,
    EmptySupport,
    MalformedLawFile,
    NonPositiveDenominator,
    NonPositiveWeight,
    WeightSumMismatch,
)
from recurwalk.lattice import (
    LatticePoint,
    convolve_laws,
    difference_law,
    dirac,
    is_symmetric,
    law_from_json,
    law_to_json,
    load_law,
    mean,
    reflect,
    second_moment,
    validate_law,
)
from recurwalk.laws import simple_walk


@st.composite
def step_laws(draw, max_atoms=5, max_coord=3, max_weight=5):
    pts = draw(st.lists(
        st.tuples(st.integers(-max_coord, max_coord), st.integers(-max_coord, max_coord)),
        min_size=1, max_size=max_atoms, unique=True))
    weights = draw(st.lists(st.integers(1, max_weight), min_size=len(pts), max_size=len(pts)))
    return validate_law(dict(zip(pts, weights)), sum(weights))


SIMPLE_SQUARED = {(0, 0): 4, (2, 0): 1, (-2, 0): 1, (0, 2): 1, (0, -2): 1,
                  (1, 1): 2, (1, -1): 2, (-1, 1): 2, (-1, -1): 2}


def brute_sum_law(a, b):
    out = {}
    for p, wp in a.atoms:
        for q, wq in b.atoms:
            key = (p.x + q.x, p.y + q.y)
            out[key] = out.get(key, 0) + wp * wq
    return out


def test_lattice_point():
    p = LatticePoint(3, -4)
    assert -(-p) == p
    assert p.norm2() == 25
    assert p + (1, 1) == LatticePoint(4, -3)


class TestValidateLaw:
    def test_simple_walk(self):
        law = validate_law({(1, 0): 1, (-1, 0): 1, (0, 1): 1, (0, -1): 1}, 4)
        assert law.denominator == 4
        assert len(law) == 4
        assert law.radius == 1

    def test_weight_sum_mismatch(self):
        with pytest.raises(WeightSumMismatch):
            validate_law({(1, 0): 1}, 2)

    def test_empty(self):
        with pytest.raises(EmptySupport):
            validate_law({}, 1)

    @pytest.mark.parametrize("weight", [0, -1])
    def test_non_positive_weight(self, weight):
        with pytest.raises(NonPositiveWeight):
            validate_law({(1, 0): 1, (0, 1): weight}, 1)

    @pytest.mark.parametrize("den", [0, -3])
    def test_non_positive_denominator(self, den):
        with pytest.raises(NonPositiveDenominator):
            validate_law({(1, 0): 1}, den)

    def test_duplicate(self):
        with pytest.raises(DuplicateAtom):
            validate_law([((1, 0), 1), ((1, 0), 1)], 2)


def test_symmetry_examples():
    assert is_symmetric(simple_walk())
    assert not is_symmetric(validate_law({(1, 0): 1, (0, 1): 1}, 2))


def test_reflect_examples():
    assert reflect(simple_walk()) == simple_walk()
    assert reflect(validate_law({(1, 0): 1}, 1)) == validate_law({(-1, 0): 1}, 1)


def test_convolve_examples():
    law = simple_walk()
    assert convolve_laws(dirac(), law) == law
    assert convolve_laws(law, law) == validate_law(SIMPLE_SQUARED, 16)


def test_difference_examples():
    assert difference_law(simple_walk()) == validate_law(SIMPLE_SQUARED, 16)
    assert difference_law(dirac()) == dirac()
    skew = validate_law({(1, 0): 1, (0, 1): 1}, 2)
    assert difference_law(skew) == validate_law({(0, 0): 2, (1, -1): 1, (-1, 1): 1}, 4)


def test_moments_examples():
    assert mean(simple_walk()) == (0, 0)
    assert mean(validate_law({(1, 0): 1, (0, 1): 1}, 2)) == (Fraction(1, 2), Fraction(1, 2))
    assert mean(validate_law({(2, 0): 1, (-2, 0): 1}, 2)) == (0, 0)
    assert second_moment(simple_walk()) == 1
    assert second_moment(difference_law(simple_walk())) == 2
    assert second_moment(dirac()) == 0


@given(step_laws())
def test_difference_is_symmetric(law):
    assert is_symmetric(difference_law(law))


@given(step_laws())
def test_difference_doubles_second_moment_after_centering(law):
    # E|X - X'|^2 = 2 E|X|^2 - 2 |E X|^2; equals 2 m2 exactly when centered.
    mx, my = mean(law)
    assert second_moment(difference_law(law)) == 2 * second_moment(law) - 2 * (mx * mx + my * my)


@given(step_laws())
def test_symmetric_laws_are_centered(law):
    sym = convolve_laws(law, reflect(law))
    assert mean(sym) == (0, 0)


@settings(max_examples=50)
@given(step_laws(max_atoms=4), step_laws(max_atoms=4), step_laws(max_atoms=3))
def test_convolution_commutative_associative(a, b, c):
    assert convolve_laws(a, b) == convolve_laws(b, a)
    assert convolve_laws(convolve_laws(a, b), c) == convolve_laws(a, convolve_laws(b, c))
    assert convolve_laws(a, b).weights() == brute_sum_law(a, b)


@given(step_laws(), step_laws())
def test_convolution_normalisation(a, b):
    out = convolve_laws(a, b)
    assert out.denominator == a.denominator * b.denominator
    assert sum(w for _, w in out.atoms) == out.denominator


@given(step_laws())
def test_reflect_involution_and_weights(law):
    r = reflect(law)
    assert reflect(r) == law
    assert r.denominator == law.denominator
    assert sorted(w for _, w in r.atoms) == sorted(w for _, w in law.atoms)


class TestLawFile:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "law.json"
        path.write_text(json.dumps(law_to_json(simple_walk())))
        assert load_law(path) == simple_walk()

    def test_duplicate_entries_rejected(self):
        data = {"denominator": 2, "atoms": [{"dx": 1, "dy": 0, "weight": 1},
                                            {"dx": 1, "dy": 0, "weight": 1}]}
        with pytest.raises(DuplicateAtom):
            law_from_json(data)

    @pytest.mark.parametrize("data, field", [
        ({"atoms": []}, "denominator"),
        ({"denominator": 1}, "atoms"),
        ({"denominator": 1, "atoms": [{"dx": 0, "weight": 1}]}, "dy"),
        ({"denominator": 1, "atoms": [{"dx": 0, "dy": 0, "weight": "1"}]}, "weight"),
    ])
    def test_malformed_names_field(self, data, field):
        with pytest.raises(MalformedLawFile, match=field):
            law_from_json(data)

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(MalformedLawFile):
            load_law(path)


@given(step_laws())
def test_difference_second_moment_symmetric(law):
    sym = convolve_laws(law, reflect(law))
    assert second_moment(difference_law(sym)) == 2 * second_moment(sym)
