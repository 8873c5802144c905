"""Perfect matchings, degeneracy tests, and the matching polygon.

A perfect matching is stored as a frozen set of edge ids; through the dual
quiver it doubles as a 0/1 cochain on arrows whose coboundary is 1 on every
quiver face.  Relative cohomology classes are measured against a fixed
reference matching using the homology basis walks of the quiver.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .surface import BLACK, WHITE, DimerError, Quiver, TorusGraph, Vec


@dataclass(frozen=True)
class PerfectMatching:
    support: frozenset[int]      # edge ids == dual arrow ids
    cls: Vec = (0, 0)            # relative cohomology class

    def __contains__(self, edge: int) -> bool:
        return edge in self.support


def _matching_backtrack(g: TorusGraph, allowed: set[int],
                        first_only: bool = False) -> list[frozenset[int]]:
    """All perfect matchings of g using only ``allowed`` edges."""
    n = len(g.colors)
    incident: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        for e in g.rotation[v]:
            if e in allowed:
                incident[v].append(e)
    results: list[frozenset[int]] = []
    covered = [False] * n
    chosen: list[int] = []

    def rec(v0: int) -> bool:
        while v0 < n and covered[v0]:
            v0 += 1
        if v0 == n:
            results.append(frozenset(chosen))
            return True
        for e in incident[v0]:
            w = g.other_end(e, v0)
            if covered[w]:
                continue
            covered[v0] = covered[w] = True
            chosen.append(e)
            done = rec(v0 + 1)
            chosen.pop()
            covered[v0] = covered[w] = False
            if done and first_only:
                return True
        return False

    rec(0)
    return results


def pm_class(pi: frozenset[int], pi0: frozenset[int], q: Quiver) -> Vec:
    """Pairing of the cocycle pi - pi0 with the homology basis walks."""
    def pair(walk: Sequence[int]) -> int:
        return sum((a in pi) - (a in pi0) for a in walk)
    return (pair(q.gamma_x), pair(q.gamma_y))


def enumerate_matchings(g: TorusGraph, q: Optional[Quiver] = None
                        ) -> list[PerfectMatching]:
    """Complete duplicate-free matching list, classes against the first.

    The reference matching is the lexicographically least support in
    canonical edge order, which the backtracking order produces first.
    """
    supports = _matching_backtrack(g, {e.id for e in g.edges})
    supports.sort(key=lambda s: sorted(s))
    if not supports:
        return []
    if q is None:
        q = Quiver(g)
    pi0 = supports[0]
    return [PerfectMatching(s, pm_class(s, pi0, q)) for s in supports]


# ---------------------------------------------------------------------------
# Hall condition and non-degeneracy

@dataclass(frozen=True)
class HallReport:
    ok: bool
    imbalance: Optional[tuple[int, int]] = None      # (#black, #white)
    witness: Optional[tuple[frozenset[int], frozenset[int]]] = None


def _max_matching(adj: dict[int, set[int]], lefts: list[int]
                  ) -> dict[int, int]:
    """Simple augmenting-path bipartite maximum matching.

    Returns the match map for both sides.  Sizes here are tiny, so the
    quadratic algorithm is fine.
    """
    match: dict[int, int] = {}

    def augment(u: int, seen: set[int]) -> bool:
        for w in adj.get(u, ()):
            if w in seen:
                continue
            seen.add(w)
            if w not in match or augment(match[w], seen):
                match[w] = u
                match[u] = w
                return True
        return False

    for u in lefts:
        if u not in match:
            augment(u, set())
    return match


def hall_check(g: TorusGraph) -> HallReport:
    """Pass, or a black subset A with |N(A)| < |A|, or an imbalance."""
    blacks = g.black_vertices
    whites = g.white_vertices
    if len(blacks) != len(whites):
        return HallReport(False, imbalance=(len(blacks), len(whites)))
    adj: dict[int, set[int]] = {}
    for e in g.edges:
        adj.setdefault(e.black, set()).add(e.white)
        adj.setdefault(e.white, set()).add(e.black)
    match = _max_matching(adj, blacks)
    unmatched = [b for b in blacks if b not in match]
    if not unmatched:
        return HallReport(True)
    # Alternating reachability from an unmatched black vertex gives a
    # violating set: every reachable white vertex is matched back into the
    # reachable blacks, so |N(A)| = |A| - 1.
    a = {unmatched[0]}
    nbrs: set[int] = set()
    frontier = [unmatched[0]]
    while frontier:
        b = frontier.pop()
        for w in adj.get(b, ()):
            if w not in nbrs:
                nbrs.add(w)
                b2 = match.get(w)
                if b2 is not None and b2 not in a:
                    a.add(b2)
                    frontier.append(b2)
    return HallReport(False, witness=(frozenset(a), frozenset(nbrs)))


@dataclass(frozen=True)
class NondegeneracyReport:
    ok: bool
    edge_in_some_matching: dict[int, bool] = field(default_factory=dict)

    @property
    def dead_edges(self) -> list[int]:
        return sorted(e for e, f in self.edge_in_some_matching.items()
                      if not f)


def nondegeneracy_check(g: TorusGraph) -> NondegeneracyReport:
    """Per edge: does some perfect matching contain it?

    Checked in polynomial time by removing the edge's endpoints and asking
    for a perfect matching on the rest.
    """
    blacks = g.black_vertices
    whites = g.white_vertices
    flags: dict[int, bool] = {}
    balanced = len(blacks) == len(whites)
    for e in g.edges:
        if not balanced:
            flags[e.id] = False
            continue
        adj: dict[int, set[int]] = {}
        for e2 in g.edges:
            if e2.black in (e.black,) or e2.white in (e.white,):
                continue
            adj.setdefault(e2.black, set()).add(e2.white)
            adj.setdefault(e2.white, set()).add(e2.black)
        rest = [b for b in blacks if b != e.black]
        match = _max_matching(adj, rest)
        flags[e.id] = all(b in match for b in rest)
    return NondegeneracyReport(all(flags.values()), flags)


# ---------------------------------------------------------------------------
# The matching polygon

def _cross(o: Vec, a: Vec, b: Vec) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Sequence[Vec]) -> list[Vec]:
    """Counterclockwise hull (monotone chain); collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Vec] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Vec] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _on_segment(p: Vec, a: Vec, b: Vec) -> bool:
    if _cross(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


@dataclass
class PMPolygon:
    points: dict[Vec, int]                       # class -> multiplicity
    vertices: list[Vec]                          # ccw extremal points
    by_point: dict[Vec, list[PerfectMatching]]

    def is_vertex(self, p: Vec) -> bool:
        return p in set(self.vertices)

    def is_external(self, p: Vec) -> bool:
        """On the boundary (vertex or on a facet)."""
        if self.is_vertex(p):
            return True
        v = self.vertices
        if len(v) == 1:
            return p == v[0]
        return any(_on_segment(p, v[i], v[(i + 1) % len(v)])
                   for i in range(len(v)))

    def multiplicity(self, p: Vec) -> int:
        return self.points.get(p, 0)


def polygon(matchings: Sequence[PerfectMatching], q: Quiver) -> PMPolygon:
    if not matchings:
        raise DimerError("no perfect matchings")
    points: dict[Vec, int] = {}
    by_point: dict[Vec, list[PerfectMatching]] = {}
    for m in matchings:
        points[m.cls] = points.get(m.cls, 0) + 1
        by_point.setdefault(m.cls, []).append(m)
    return PMPolygon(points, convex_hull(list(points)), by_point)


# ---------------------------------------------------------------------------
# Normal form under unimodular transformation + translation

def _apply(mat: tuple[int, int, int, int], p: Vec) -> Vec:
    a, b, c, d = mat
    return (a * p[0] + b * p[1], c * p[0] + d * p[1])


def polygon_normal_form(points: dict[Vec, int]
                        ) -> tuple[tuple[Vec, int], ...]:
    """Lexicographically least image of a weighted point set under
    GL(2,Z) x translations.

    The search enumerates unimodular matrices with entries bounded by the
    point-set diameter plus two; for lattice polygons of desk scale this
    bound is comfortably sufficient (invariance is property-tested).
    """
    pts = list(points)
    span = max(max(abs(p[0] - q[0]), abs(p[1] - q[1]))
               for p in pts for q in pts) if len(pts) > 1 else 1
    bound = span + 2
    best: Optional[tuple[tuple[Vec, int], ...]] = None
    rng = range(-bound, bound + 1)
    for a, b, c, d in itertools.product(rng, repeat=4):
        if a * d - b * c not in (1, -1):
            continue
        img = [(_apply((a, b, c, d), p), m) for p, m in points.items()]
        mx = min(p[0] for p, _ in img)
        my = min(p[1] for p, _ in img)
        norm = tuple(sorted(((p[0] - mx, p[1] - my), m) for p, m in img))
        if best is None or norm < best:
            best = norm
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# Birkhoff - von Neumann decomposition

def coboundary(g: TorusGraph, vec: dict[int, int]) -> dict[int, int]:
    """Sum of vec over the edges at each dimer vertex (the coboundary value
    on the dual quiver face)."""
    return {v: sum(vec.get(e, 0) for e in g.rotation[v])
            for v in range(len(g.colors))}


def bvn_decompose(g: TorusGraph, vec: dict[int, int],
                  q: Optional[Quiver] = None) -> list[PerfectMatching]:
    """Write a nonnegative integer cochain with constant coboundary k as a
    sum of k perfect matchings: find a matching inside the support,
    subtract, recurse."""
    if any(x < 0 for x in vec.values()):
        raise DimerError("negative entry in decomposition input")
    db = coboundary(g, vec)
    ks = set(db.values())
    if len(ks) != 1:
        raise DimerError(f"coboundary is not constant: {sorted(ks)}")
    k = ks.pop()
    if q is None:
        q = Quiver(g)
    ref = enumerate_matchings(g, q)
    if not ref and k > 0:
        raise DimerError("model has no perfect matchings")
    pi0 = min((m.support for m in ref), key=sorted) if ref else frozenset()
    out: list[PerfectMatching] = []
    work = dict(vec)
    for _ in range(k):
        support = {e for e, x in work.items() if x > 0}
        found = _matching_backtrack(g, support, first_only=True)
        assert found, "support graph lost the marriage property (bad input)"
        m = found[0]
        for e in m:
            work[e] -= 1
        out.append(PerfectMatching(m, pm_class(m, pi0, q)))
    assert all(x == 0 for x in work.values()), "leftover after k matchings"
    return out
