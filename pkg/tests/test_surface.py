"""Torus graph loading, duality, and local moves."""

import pytest

from conftest import NONDEGENERATE, fixture_path
from dimertools.matchings import enumerate_matchings, polygon, \
    polygon_normal_form
from dimertools.surface import (BLACK, WHITE, ParseError, TopologyError,
                                contract_bivalent, dualize, dump,
                                fterm_relations, load, load_file,
                                split_vertex, superpotential, vadd)


def test_round_trip(load_fixture):
    for name in ("hexagonal", "conifold", "memeg", "examplestp"):
        g = load_fixture(name)
        g2 = load(dump(g))
        assert dump(g2) == dump(g)


def test_missing_header():
    with pytest.raises(ParseError):
        load("vertex 0 B\n")


def test_bad_records():
    base = "DIMER 1\nvertex 0 B\nvertex 1 W\nedge 0 0 1 0 0\n"
    with pytest.raises(ParseError):
        load(base + "rot 0 0\n")                 # missing rot for vertex 1
    with pytest.raises(ParseError):
        load(base + "rot 0 0\nrot 1 0\nrot 1 0\n")   # duplicate rot
    with pytest.raises(ParseError):
        load(base.replace("edge 0 0 1", "edge 0 1 0") +
             "rot 0 0\nrot 1 0\n")               # colors swapped
    with pytest.raises(ParseError):
        load(base + "frob 1 2\n")                # unknown record


def test_sphere_rejected():
    # the cube fixture is a valid rotation system of genus 0
    with pytest.raises(TopologyError):
        load_file(fixture_path("cube"))


def test_duality_counts(load_quiver):
    for name in NONDEGENERATE:
        g, q = load_quiver(name)
        assert q.n_vertices == len(g.faces)
        assert q.n_arrows == len(g.edges)
        assert len(q.faces) == len(g.colors)
        # every arrow in exactly one face of each color
        for color, member in ((BLACK, q.black_face_of),
                              (WHITE, q.white_face_of)):
            assert sorted(member) == list(range(q.n_arrows))
            for a, fid in member.items():
                assert q.faces[fid].color == color
                assert a in q.faces[fid].boundary


def test_face_offsets_vanish(load_quiver):
    for name in NONDEGENERATE:
        _, q = load_quiver(name)
        for f in q.faces:
            assert q.walk_class(f.boundary) == (0, 0)


def test_homology_basis(load_quiver):
    for name in NONDEGENERATE:
        _, q = load_quiver(name)
        assert q.walk_class(q.gamma_x) == (1, 0)
        assert q.walk_class(q.gamma_y) == (0, 1)


def test_superpotential_terms(load_quiver):
    _, q = load_quiver("hexagonal")
    w = superpotential(q)
    signs = sorted(s for s, _ in w.terms)
    assert signs == [-1, 1]
    assert all(len(cyc) == 3 for _, cyc in w.terms)


def test_fterm_offset_invariance(load_quiver):
    """Substituting one side of a relation for the other in a closed cycle
    keeps the offset sum."""
    for name in NONDEGENERATE:
        _, q = load_quiver(name)
        for a, plus, minus in fterm_relations(q):
            assert q.walk_class(plus) == q.walk_class(minus)
            # both complete arrow a to a face boundary
            assert q.walk_class([a] + list(plus)) == (0, 0)


def test_split_vertex_polygon_preserved(load_fixture):
    g = load_fixture("conifold")
    q = dualize(g)
    nf = polygon_normal_form(polygon(enumerate_matchings(g, q), q).points)
    g2 = split_vertex(g, 0, 0)
    q2 = dualize(g2)
    nf2 = polygon_normal_form(polygon(enumerate_matchings(g2, q2), q2).points)
    assert nf == nf2


def test_split_then_contract(load_fixture):
    g = load_fixture("conifold")
    g2 = split_vertex(g, 0, 0)
    assert len(g2.colors) == len(g.colors) + 2
    new_bivalent = [v for v in range(len(g2.colors))
                    if len(g2.rotation[v]) == 2]
    g3 = contract_bivalent(g2, new_bivalent[0])
    assert len(g3.colors) == len(g.colors)
