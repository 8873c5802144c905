"""Perfect matchings, the matching polygon, BvN decomposition."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import NONDEGENERATE, fixture_path
from dimertools.matchings import (bvn_decompose, coboundary,
                                  enumerate_matchings, hall_check,
                                  nondegeneracy_check, polygon,
                                  polygon_normal_form)
from dimertools.surface import DimerError, dualize, load_file

MATCHING_COUNTS = {"hexagonal": 3, "conifold": 4, "memeg": 6,
                   "examplestp": 9, "xyloops": 6}


def test_matching_counts(load_quiver):
    for name, count in MATCHING_COUNTS.items():
        g, q = load_quiver(name)
        ms = enumerate_matchings(g, q)
        assert len(ms) == count, name
        for m in ms:
            cb = coboundary(g, {e: 1 for e in m.support})
            assert set(cb.values()) == {1}


def test_hall_passes(load_fixture):
    for name in NONDEGENERATE:
        assert hall_check(load_fixture(name)).ok


def test_hall_witness(load_fixture):
    g = load_fixture("balwnopm")
    rep = hall_check(g)
    assert not rep.ok
    a, nbrs = rep.witness
    assert len(a) == 2 and len(nbrs) == 1
    # the witness really violates the marriage condition
    actual_nbrs = {e.white for e in g.edges if e.black in a}
    assert actual_nbrs == nbrs


def test_degenerate_forced_edge(load_fixture):
    g = load_fixture("degenerate")
    rep = nondegeneracy_check(g)
    assert not rep.ok
    ms = enumerate_matchings(g)
    forced = set.intersection(*[set(m.support) for m in ms])
    assert len(forced) == 1
    (f,) = forced
    edge = g.edges[f]
    neighbours = {e.id for e in g.edges if e.id != f
                  and (e.black == edge.black or e.white == edge.white)}
    assert neighbours <= set(rep.dead_edges)


def test_nondegenerate_fixtures(load_fixture):
    for name in NONDEGENERATE:
        assert nondegeneracy_check(load_fixture(name)).ok


def test_polygon_shapes(load_quiver):
    g, q = load_quiver("hexagonal")
    poly = polygon(enumerate_matchings(g, q), q)
    assert len(poly.points) == 3 and set(poly.points.values()) == {1}
    assert len(poly.vertices) == 3

    g, q = load_quiver("memeg")
    poly = polygon(enumerate_matchings(g, q), q)
    assert len(poly.vertices) == 4
    assert all(poly.is_external(p) for p in poly.points)
    # one facet midpoint carries two matchings, everything else one
    mids = [p for p in poly.points if not poly.is_vertex(p)]
    assert len(mids) == 1 and poly.points[mids[0]] == 2
    assert all(poly.points[p] == 1 for p in poly.vertices)

    g, q = load_quiver("examplestp")
    poly = polygon(enumerate_matchings(g, q), q)
    # square with a quintuple interior point
    interior = [p for p in poly.points if not poly.is_external(p)]
    assert len(interior) == 1 and poly.points[interior[0]] == 5


UNIMODULAR = [(1, 0, 0, 1), (0, -1, 1, 0), (1, 1, 0, 1), (1, 0, 1, 1),
              (-1, 0, 0, -1), (2, 1, 1, 1), (1, -1, 0, 1), (3, 2, 1, 1)]


@given(mat=st.sampled_from(UNIMODULAR),
       shift=st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
@settings(max_examples=40, deadline=None)
def test_normal_form_invariance(mat, shift):
    """The polygon normal form does not change under a lattice symmetry."""
    a, b, c, d = mat
    points = {(0, 0): 1, (1, 0): 2, (0, 1): 2, (1, 1): 12, (2, 1): 1,
              (1, 2): 1, (2, 2): 1}
    moved = {(a * x + b * y + shift[0], c * x + d * y + shift[1]): m
             for (x, y), m in points.items()}
    assert polygon_normal_form(points) == polygon_normal_form(moved)


def test_bvn_round_trip():
    rng = random.Random(7)
    for name in NONDEGENERATE:
        g = load_file(fixture_path(name))
        q = dualize(g)
        ms = enumerate_matchings(g, q)
        for _ in range(25):
            k = rng.randint(1, 5)
            chosen = [rng.choice(ms) for _ in range(k)]
            vec = {e.id: 0 for e in g.edges}
            for m in chosen:
                for e in m.support:
                    vec[e] += 1
            parts = bvn_decompose(g, vec, q)
            assert len(parts) == k
            back = {e.id: 0 for e in g.edges}
            for m in parts:
                for e in m.support:
                    back[e] += 1
            assert back == vec


def test_bvn_rejects_bad_input(load_quiver):
    g, q = load_quiver("memeg")
    with pytest.raises(DimerError):
        bvn_decompose(g, {0: 1}, q)               # non-constant coboundary
    g, q = load_quiver("hexagonal")
    with pytest.raises(DimerError):
        bvn_decompose(g, {0: -1, 1: -1, 2: -1}, q)
