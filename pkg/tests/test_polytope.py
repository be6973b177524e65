from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from conftest import group
from finsler_toolkit import _exact as ex
from finsler_toolkit.errors import IrregularFunctionalError
from finsler_toolkit.polytope import (build_unit_ball, dual_ball, truncated_dual_chamber,
                                      verify_cube_structure)
from finsler_toolkit.rootsys import FinslerFunctional, build_root_system

TAGS = ["A2", "B2", "A1xA1", "A3", "B3", "C3", "A1xA2", "A1xA1xA1"]


def _ball(tag, coeffs=None):
    rs = build_root_system(tag)
    l = (FinslerFunctional.from_coweights(rs, coeffs) if coeffs
         else FinslerFunctional.default(rs))
    return rs, l, build_unit_ball(rs, l, group(tag))


@pytest.mark.parametrize("tag", TAGS)
def test_cube_structure(tag):
    rs = build_root_system(tag)
    rep = verify_cube_structure(rs, FinslerFunctional.default(rs))
    assert rep.passed, rep.counterexamples
    assert rep.f_vector == tuple(comb(rs.rank, k) * 2 ** (rs.rank - k) for k in range(rs.rank + 1))


@given(st.sampled_from(["A2", "B2", "A3", "B3"]),
       st.lists(st.fractions(min_value=Fraction(1, 5), max_value=5), min_size=3, max_size=3))
def test_cube_structure_for_any_regular_functional(tag, coeffs):
    rs = build_root_system(tag)
    l = FinslerFunctional.from_coweights(rs, coeffs[:rs.rank])
    assert verify_cube_structure(rs, l).passed


def test_known_f_vectors():
    # B is simplicial with |W| facets; B* is simple with |W| vertices.
    assert _ball("A2")[2].face_lattice().f_vector() == (6, 6, 1)
    assert _ball("A3")[2].face_lattice().f_vector() == (14, 36, 24, 1)
    assert _ball("B3")[2].face_lattice().f_vector() == (26, 72, 48, 1)


@pytest.mark.parametrize("tag", ["A2", "B2", "A3", "B3"])
def test_hrep_and_vrep_agree(tag):
    _, _, B = _ball(tag)
    assert B.vertices_from_hrep() == set(B.vertices)
    assert len(B.inequalities) == len(group(tag))


@pytest.mark.parametrize("tag", ["A2", "B2", "A3", "B3"])
def test_duality_reverses_inclusion(tag):
    rs, l, B = _ball(tag)
    D = dual_ball(B)
    P, Q = D.primal_lattice, D.lattice
    assert P.f_vector()[::-1][1:] == Q.f_vector()[:-1]
    assert sorted(D.star.values()) == list(range(len(Q.faces)))
    for a in range(len(P.faces)):
        assert Q.dims[D.star[a]] == rs.rank - 1 - P.dims[a]
        for b in range(len(P.faces)):
            assert P.leq(a, b) == Q.leq(D.star[b], D.star[a])
    assert P.euler_characteristic() == 1
    assert P.euler_characteristic() - (-1) ** rs.rank == 1 + (-1) ** (rs.rank - 1)


@pytest.mark.parametrize("tag", ["A2", "B3"])
def test_weyl_group_acts_on_vertices_and_facets(tag):
    rs, l, B = _ball(tag)
    verts = set(B.vertices)
    facets = {a for a, _ in B.inequalities}
    for w in group(tag):
        assert {w.act(v) for v in verts} == verts
        assert {w.act(a) for a in facets} == facets


def test_dual_ball_vertices_are_orbit_of_l():
    rs, l, B = _ball("A2")
    D = dual_ball(B)
    assert set(D.polytope.vertices) == {w.act(l.vector) for w in group("A2")}


def test_truncated_dual_chamber_a2():
    rs = build_root_system("A2")
    l = FinslerFunctional.default(rs)
    P = truncated_dual_chamber(rs, l)
    assert len(P.vertices) == 4
    assert ex.frac_vec((0, 0, 0)) in P.vertices
    assert l.vector in P.vertices


def test_irregular_functional():
    rs = build_root_system("A2")
    with pytest.raises(IrregularFunctionalError):
        build_unit_ball(rs, FinslerFunctional.from_coweights(rs, [1, 0]))
