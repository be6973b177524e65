import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import group
from finsler_toolkit.errors import GenericityWarning, ThickeningError
from finsler_toolkit.thickening import (Thickening, complement, enumerate_balanced,
                                        enumerate_ideals, face_direction, metric_thickening,
                                        random_chamber_direction, random_face_direction,
                                        spherical_distance,
                                        thickening_from_words, validate_thickening)
from finsler_toolkit.weyl import FaceType
from oracles import ideals_by_elements, subword_lower_sets

# Counts of W_tau-invariant balanced thickenings, cross-checked below against
# the element-level search of the oracle module.
BALANCED = {
    ("A1", "all"): 1, ("A2", "all"): 1, ("B2", "1"): 1, ("B2", "2"): 1, ("B2", "all"): 2,
    ("A3", "2"): 2, ("A3", "1,3"): 1, ("A3", "all"): 10,
    ("B3", "1"): 1, ("B3", "2"): 1, ("B3", "3"): 2, ("B3", "1,2"): 5, ("B3", "1,3"): 7,
    ("B3", "2,3"): 6, ("B3", "all"): 29, ("A1xA1", "all"): 2,
}


def test_a2_unique_balanced():
    W = group("A2")
    res = enumerate_balanced(W)
    assert len(res) == 1
    assert res[0].words() == ["e", "s1", "s2"]


@pytest.mark.parametrize("key,count", sorted(BALANCED.items()))
def test_balanced_counts_against_oracle(key, count):
    tag, face_text = key
    W = group(tag)
    face = FaceType.parse(face_text, W.rank)
    found = enumerate_balanced(W, face)
    assert len(found) == count
    lower = subword_lower_sets(W)
    gens = [W.generator(j) for j in face.J]
    oracle = ideals_by_elements(W, lower, balanced=True, invariant_gens=gens)
    assert {t.members for t in found} == set(oracle)
    for t in found:
        c = validate_thickening(W, t)
        assert c.ideal and c.balanced and t.left_invariant(face)


@pytest.mark.parametrize("tag", ["A2", "B2", "A3"])
def test_ideals_against_oracle(tag):
    W = group(tag)
    ours = {t.members for t in enumerate_ideals(W)}
    assert ours == set(ideals_by_elements(W, subword_lower_sets(W)))


def test_ideal_counts():
    assert len(enumerate_ideals(group("A2"))) == 9
    assert len(enumerate_ideals(group("B2"))) == 12
    assert len(enumerate_ideals(group("A3"))) == 250


def test_classification_and_degenerate():
    W = group("A2")
    th = thickening_from_words(W, ["e", "s1"])
    c = validate_thickening(W, th)
    assert c.ideal and c.slim and not c.fat and not c.balanced
    bad = thickening_from_words(W, ["s1"])
    assert not validate_thickening(W, bad).ideal
    with pytest.raises(ThickeningError):
        validate_thickening(W, Thickening(W, frozenset()))
    full = Thickening(W, frozenset(W.elements))
    assert validate_thickening(W, full, allow_degenerate=True).fat


def test_complement_examples():
    W = group("A2")
    point = Thickening(W, W.coset(FaceType.parse("1", 2), W.identity))
    assert point.words() == ["e", "s2"]
    assert complement(point).words() == ["e", "s1", "s2", "s1 s2"]
    with pytest.raises(ThickeningError):
        complement(thickening_from_words(W, ["s1"]))


@pytest.mark.parametrize("tag", ["A2", "B2", "A3"])
def test_complement_is_involution_on_ideals(tag):
    W = group(tag)
    for th in enumerate_ideals(W):
        c = complement(th)
        assert c.is_ideal
        assert complement(c) == th
        assert th.is_fat == c.is_slim


def test_balanced_is_self_complementary():
    W = group("B3")
    for th in enumerate_balanced(W):
        assert complement(th) == th


def test_spherical_distance_stable():
    u = np.array([1.0, 0.0])
    assert spherical_distance(u, u) == 0.0
    assert spherical_distance(u, -u) == pytest.approx(math.pi)
    assert spherical_distance(u, np.array([1.0, 1e-12])) == pytest.approx(1e-12)


@given(st.sampled_from(["A2", "B2", "A3", "B3"]), st.integers(0, 2**32 - 1))
def test_generic_metric_thickening_at_right_angle_is_balanced(tag, seed):
    W = group(tag)
    rng = np.random.default_rng(seed)
    for face in W.face_types():
        if not W.is_iota_invariant(face):
            continue
        theta = random_chamber_direction(W.rs, rng)
        with warnings.catch_warnings():
            warnings.simplefilter("error", GenericityWarning)
            th = metric_thickening(W, face_direction(W.rs, face), theta, math.pi / 2)
        assert th.is_ideal and th.is_balanced and th.left_invariant(face)


def test_metric_thickening_genericity_warning():
    W = group("A2")
    theta0 = face_direction(W.rs, FaceType.chamber(2))
    with pytest.warns(GenericityWarning):
        th = metric_thickening(W, theta0, theta0, math.pi / 3)
    assert th.near_boundary
    assert th.words() == ["e", "s1", "s2"]


def test_metric_thickening_validation():
    W = group("A2")
    theta0 = face_direction(W.rs, FaceType.chamber(2))
    with pytest.raises(ThickeningError):
        metric_thickening(W, theta0, -theta0, 1.0)
    with pytest.raises(ThickeningError):
        metric_thickening(W, theta0, theta0, 4.0)


def test_non_invariant_face_rejected():
    with pytest.raises(ThickeningError):
        enumerate_balanced(group("A2"), FaceType.parse("1", 2))


def test_sampling_mode_needs_seed():
    W = group("D4")
    with pytest.raises(ThickeningError, match="seed"):
        enumerate_balanced(W)
    res = enumerate_balanced(W, samples=30, seed=3)
    assert res and all(t.is_balanced and t.is_ideal for t in res)


@pytest.mark.parametrize("tag,face_text,missing", [("B3", "all", 0), ("B3", "1,3", 0),
                                                   ("A3", "2", 0), ("A3", "all", 2)])
def test_sampling_mode_against_exhaustive(tag, face_text, missing):
    W = group(tag)
    face = FaceType.parse(face_text, W.rank)
    exhaustive = set(enumerate_balanced(W, face))
    sampled = set(enumerate_balanced(W, face, exhaustive_budget=0, samples=3000, seed=1))
    assert sampled <= exhaustive
    # two balanced A3 chamber thickenings never arise as metric thickenings
    assert len(exhaustive) - len(sampled) == missing


def test_random_face_direction_is_iota_invariant():
    W = group("A3")
    rng = np.random.default_rng(0)
    for face_text in ("2", "1,3", "all"):
        face = FaceType.parse(face_text, 3)
        v = random_face_direction(W, face, rng)
        assert np.allclose(-W.w0.matrix @ v, v)
        vals = W.rs.simple_roots_float @ v
        assert all(vals[j] == pytest.approx(0, abs=1e-12) for j in face.J)
        assert all(vals[i] > 0 for i in face.I)
