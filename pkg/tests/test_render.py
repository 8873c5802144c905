"""SVG output: well-formedness and element counts."""

import xml.etree.ElementTree as ET

import pytest

from dimertools.matchings import enumerate_matchings
from dimertools.render import emit_svg
from dimertools.surface import dualize
from dimertools.zigzag import zigzag_paths

NS = "{http://www.w3.org/2000/svg}"


def groups(svg):
    root = ET.fromstring(svg)
    return root, {el.get("class"): el for el in root.iter(NS + "g")}


def test_tiling_only(load_fixture):
    g = load_fixture("hexagonal")
    root, gs = groups(emit_svg(g))
    assert set(gs) == {"tiling"}
    # 3 domains drawn by default: edges and vertices tripled
    assert len(list(gs["tiling"].iter(NS + "line"))) == 3 * len(g.edges)
    assert len(list(gs["tiling"].iter(NS + "circle"))) == 3 * len(g.colors)


def test_all_layers(load_quiver):
    for name in ("hexagonal", "conifold", "memeg"):
        g, q = load_quiver(name)
        ms = enumerate_matchings(g, q)
        paths = zigzag_paths(q)
        svg = emit_svg(g, ("tiling", "quiver", "matching", "zigzag"),
                       matching=ms[0], path=paths[0])
        _, gs = groups(svg)
        assert set(gs) == {"tiling", "quiver", "matching", "zigzag"}
        assert len(list(gs["matching"].iter(NS + "line"))) == \
            3 * len(ms[0].support)
        assert len(list(gs["quiver"].iter(NS + "line"))) == \
            3 * q.n_arrows
        poly = gs["zigzag"].find(NS + "polyline")
        # one full period, closed up to the class translation
        assert len(poly.get("points").split()) == paths[0].period + 1


def test_layer_errors(load_fixture):
    g = load_fixture("hexagonal")
    with pytest.raises(ValueError):
        emit_svg(g, ("sparkles",))
    with pytest.raises(ValueError):
        emit_svg(g, ("matching",))          # no matching given
    with pytest.raises(ValueError):
        emit_svg(g, ("zigzag",))
