"""Local and global zig-zag fans, extremal and external perfect matchings.

For a geometrically consistent model, the homology classes of zig-zag
paths span a complete fan in the plane.  Each two dimensional cone picks a
coherent choice of one arrow per face and hence a perfect matching; its
class is a vertex of the matching polygon.  Resonating such a matching
along representatives of a ray walks through all the matchings on the
adjacent polygon edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .matchings import PerfectMatching, pm_class
from .surface import BLACK, DimerError, Quiver, Vec, vadd
from .zigzag import ZigZagPath, angular_sort, wedge, zag_path_of, zig_path_of

Cone = tuple[Vec, Vec]     # (clockwise ray, counterclockwise ray)


@dataclass(frozen=True)
class Fan2D:
    rays: tuple[Vec, ...]    # counterclockwise, pairwise distinct

    def __post_init__(self) -> None:
        assert len(self.rays) == len(set(self.rays)) >= 2
        for u, v in self.cones:
            assert wedge(u, v) != 0, "degenerate cone"

    @property
    def cones(self) -> list[Cone]:
        n = len(self.rays)
        return [(self.rays[i], self.rays[(i + 1) % n]) for i in range(n)]

    def cone_containing(self, p: Vec) -> Cone:
        """The cone whose closed span contains p; unique for p off the rays
        (strictly interior probes in all uses here)."""
        for u, v in self.cones:
            if wedge(u, p) >= 0 and wedge(p, v) >= 0 and wedge(u, v) > 0:
                return (u, v)
        raise DimerError(f"no cone contains {p}: fan not complete")


@dataclass
class LocalFan:
    face: int
    fan: Fan2D
    reps: dict[Vec, int]        # ray -> path id crossing the face
    tags: dict[Cone, int]       # cone -> boundary arrow shared by its reps


@dataclass
class ExtremalMatching:
    cone: Cone
    matching: PerfectMatching
    face_choice: dict[int, int]     # quiver face -> chosen arrow


def _crossings(q: Quiver, paths: Sequence[ZigZagPath], fid: int
               ) -> dict[int, tuple[int, int]]:
    """path id -> its (entry, exit) arrow pair on the boundary of face fid.

    In a black face the pair is zig then zag, in a white face zag then
    zig; either way they are consecutive boundary arrows.
    """
    f = q.faces[fid]
    lookup = zig_path_of(paths) if f.color == BLACK else zag_path_of(paths)
    out: dict[int, tuple[int, int]] = {}
    for a in f.boundary:
        p = lookup[a]
        assert p not in out, "path crosses a face twice (inconsistent model)"
        out[p] = (a, q.next_in_face(fid, a))
    return out


def local_fan(q: Quiver, paths: Sequence[ZigZagPath], fid: int) -> LocalFan:
    """The fan of classes of paths crossing a face, cones tagged by the
    boundary arrow its two representatives share."""
    cross = _crossings(q, paths, fid)
    reps: dict[Vec, int] = {}
    for p in cross:
        cls = paths[p].cls
        assert cls not in reps, "two parallel paths cross one face"
        reps[cls] = p
    fan = Fan2D(tuple(angular_sort(list(reps))))
    tags: dict[Cone, int] = {}
    for u, v in fan.cones:
        shared = set(cross[reps[u]]) & set(cross[reps[v]])
        assert len(shared) == 1, "adjacent representatives must chain"
        tags[(u, v)] = shared.pop()
    return LocalFan(fid, fan, reps, tags)


def global_fan(paths: Sequence[ZigZagPath]) -> Fan2D:
    return Fan2D(tuple(angular_sort(sorted(set(p.cls for p in paths)))))


def extremal_matching(q: Quiver, paths: Sequence[ZigZagPath], sigma: Cone,
                      matchings: Sequence[PerfectMatching]
                      ) -> ExtremalMatching:
    """The perfect matching P of a cone of the global fan.

    Per face, the local cone containing the (strictly interior) probe
    ray-sum of sigma donates its tagged arrow; black and white faces make
    the same choices, which assemble into a perfect matching.
    """
    probe = vadd(*sigma)
    face_choice: dict[int, int] = {}
    for f in q.faces:
        lf = local_fan(q, paths, f.id)
        face_choice[f.id] = lf.tags[lf.fan.cone_containing(probe)]
    support = frozenset(face_choice.values())
    for f in q.faces:
        assert sum(a in support for a in f.boundary) == 1, \
            "cone tags do not form a perfect matching"
    pm = next((m for m in matchings if m.support == support), None)
    assert pm is not None, "extremal matching missing from enumeration"
    return ExtremalMatching(sigma, pm, face_choice)


def boundary_system(q: Quiver, paths: Sequence[ZigZagPath], gamma: Vec
                    ) -> dict[int, int]:
    """S(gamma): the sum of the black and white boundary cycles of every
    representative path of the ray, as a nonnegative arrow vector of
    homology class -2r*gamma for r representatives."""
    from .zigzag import boundary_flows
    out: dict[int, int] = {a: 0 for a in range(q.n_arrows)}
    r = 0
    for p in paths:
        if p.cls != gamma:
            continue
        r += 1
        for cyc in boundary_flows(q, p):
            for a in cyc:
                out[a] += 1
    assert r > 0, "ray has no representative"
    cls = (0, 0)
    for a, k in out.items():
        off = q.arrows[a].offset
        cls = (cls[0] + k * off[0], cls[1] + k * off[1])
    assert cls == (-2 * r * gamma[0], -2 * r * gamma[1])
    return out


def pairing(m: PerfectMatching, vec: dict[int, int]) -> int:
    return sum(k for a, k in vec.items() if a in m.support)


def resonate(q: Quiver, m: PerfectMatching, eta: ZigZagPath, direction: str,
             matchings: Sequence[PerfectMatching]) -> PerfectMatching:
    """Swap the path's zigs for its zags inside a matching (or the other
    way around), yielding another perfect matching.

    direction "zig->zag" requires the matching to contain every zig of the
    path; "zag->zig" every zag.
    """
    if direction == "zig->zag":
        drop, add = eta.zigs, eta.zags
    elif direction == "zag->zig":
        drop, add = eta.zags, eta.zigs
    else:
        raise ValueError(f"unknown direction {direction!r}")
    if not set(drop) <= m.support:
        raise DimerError("cannot resonate")
    support = (m.support - set(drop)) | set(add)
    known = next((x for x in matchings if x.support == support), None)
    if known is not None:
        return known
    pi0 = min((x.support for x in matchings), key=sorted)
    return PerfectMatching(frozenset(support),
                           pm_class(frozenset(support), pi0, q))


def external_matchings(q: Quiver, paths: Sequence[ZigZagPath], gamma: Vec,
                       matchings: Sequence[PerfectMatching]
                       ) -> list[PerfectMatching]:
    """All perfect matchings vanishing on S(gamma): the subset resonations
    of the extremal matching of the cone clockwise-bounded by gamma."""
    import itertools
    fan = global_fan(paths)
    i = fan.rays.index(gamma)
    sigma = (gamma, fan.rays[(i + 1) % len(fan.rays)])
    base = extremal_matching(q, paths, sigma, matchings).matching
    reps = [p for p in paths if p.cls == gamma]
    out = []
    for k in range(len(reps) + 1):
        for subset in itertools.combinations(reps, k):
            m = base
            for eta in subset:
                m = resonate(q, m, eta, "zag->zig", matchings)
            out.append(m)
    assert len(set(m.support for m in out)) == len(out)
    s = boundary_system(q, paths, gamma)
    vanishing = {m.support for m in matchings if pairing(m, s) == 0}
    assert vanishing == {m.support for m in out}, \
        "resonations disagree with direct enumeration"
    return out
