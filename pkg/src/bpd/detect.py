"""Detection of forbidden and branchable structures.

The solver's target is the bicolored P3: a blue edge and a red edge that
share a vertex while the far endpoints are non-adjacent.  Branching acts
on four larger patterns (three diamond shapes and an hourglass, each also
matched with colors swapped) plus edges that conflict with two or more
other edges.  This module enumerates all of these, decides graph classes
(nice, endangered-triangle-free, monochromatic-structure-free), and picks
the structure to branch on.

Witness conventions.  Every structure is reported with its vertices in a
fixed role order and an ``orientation`` color, which is the color of the
edge between the first two witness vertices.  The role templates for
orientation BLUE are (RED means the same with colors swapped):

- bicolored_p3 (u, v, w):   {u,v} blue, {v,w} red; {u,w} absent.
- mono_p3 (u, v, w):        {u,v}, {v,w} same color; {u,w} absent; u < w.
- mono_k3 (u, v, w):        all three edges one color; u < v < w.
- bicolored_k3 (u, v, w):   triangle, {u,v} the minority-color edge, u < v.
  Orientation is the minority color (the two {.,w} edges have the other).
- endangered_k3:            a bicolored_k3 where a majority-color edge
  lies in some bicolored P3 of the whole graph.
- lc_diamond (u, v, w, z):  {u,v} b, {v,w} r, {u,z} b, {v,z} r, {w,z} b.
- lo_diamond (u, v, w, z):  {u,v} b, {v,w} r, {u,z} b, {v,z} b, {w,z} r.
- iiz_diamond (u, v, w, z): {u,v} b, {v,w} r, {u,z} r, {v,z} b, {w,z} b.
  All diamonds have {u,w} absent and nothing else absent.
- cc_hourglass (u, v, w, z1, z2): {u,v} b, {v,w} r, {u,z1} b, {v,z1} r,
  {v,z2} b, {w,z2} r; {u,w}, {u,z2}, {w,z1}, {z1,z2} absent.
- multi_conflict_edge: an edge e1 forming bicolored P3s with two edges
  e2 < e3; ``edges`` holds (e1, e2, e3), orientation the color of e1.

Symmetric witnesses are canonicalized so each subgraph occurrence is
emitted exactly once: lo_diamond v < z, iiz_diamond u < w, cc_hourglass
u < w (which also fixes the orientation of hourglasses and of the
symmetric diamonds).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Optional

from .graph import Color, ColoredGraph, Edge, edge_key


class StructureKind(enum.Enum):
    BICOLORED_P3 = "bicolored_p3"
    MONO_P3 = "mono_p3"
    MONO_K3 = "mono_k3"
    BICOLORED_K3 = "bicolored_k3"
    ENDANGERED_K3 = "endangered_k3"
    LC_DIAMOND = "lc_diamond"
    LO_DIAMOND = "lo_diamond"
    IIZ_DIAMOND = "iiz_diamond"
    CC_HOURGLASS = "cc_hourglass"
    MULTI_CONFLICT_EDGE = "multi_conflict_edge"


@dataclass(frozen=True)
class ForbiddenStructure:
    """One located structure.

    ``witness`` lists the vertices in the kind's role order, ``edges`` the
    structure's edges in template order (for multi_conflict_edge: the
    conflict edge first, then its two partners).
    """

    kind: StructureKind
    witness: tuple[int, ...]
    edges: tuple[Edge, ...]
    orientation: Color

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "witness": list(self.witness),
            "edges": [list(e) for e in self.edges],
            "orientation": self.orientation.value,
        }


# -- bicolored P3 ----------------------------------------------------------


def iter_bicolored_p3(g) -> Iterator[tuple[int, int, int]]:
    """Yield each induced bicolored P3 once as (u, v, w).

    u is the blue endpoint, v the center, w the red endpoint; {u,w} is a
    non-edge by definition.
    """
    for v in range(g.n):
        blues = g.blue_neighbors(v)
        if not blues:
            continue
        for w in g.red_neighbors(v):
            for u in blues:
                if not g.has_edge(u, w):
                    yield (u, v, w)


def first_bicolored_p3(g) -> Optional[tuple[int, int, int]]:
    return next(iter_bicolored_p3(g), None)


def count_bicolored_p3(g) -> int:
    return sum(1 for _ in iter_bicolored_p3(g))


def enumerate_bicolored_p3(g) -> list[ForbiddenStructure]:
    """All induced bicolored P3s, sorted by witness."""
    out = [
        ForbiddenStructure(
            StructureKind.BICOLORED_P3, (u, v, w),
            (edge_key(u, v), edge_key(v, w)), Color.BLUE,
        )
        for u, v, w in iter_bicolored_p3(g)
    ]
    out.sort(key=lambda s: s.witness)
    return out


def p3_partners(g, e: Edge) -> list[Edge]:
    """Edges that form an induced bicolored P3 together with ``e``, sorted."""
    u, v = e
    c = g.color_of(u, v)
    if c is None:
        raise ValueError(f"edge {e} not in graph")
    opp = g.red_neighbors if c is Color.BLUE else g.blue_neighbors
    out = []
    for x in opp(u):
        if x != v and not g.has_edge(v, x):
            out.append(edge_key(u, x))
    for x in opp(v):
        if x != u and not g.has_edge(u, x):
            out.append(edge_key(v, x))
    return sorted(out)


def p3_witness_vertices(g, u: int, v: int) -> list[int]:
    """Vertices w for which G[{u, v, w}] is an induced bicolored P3.

    There is one such w per partner edge of {u,v}, so the length equals
    the partner count.
    """
    c = g.color_of(u, v)
    if c is None:
        raise ValueError(f"edge ({u}, {v}) not in graph")
    opp = g.red_neighbors if c is Color.BLUE else g.blue_neighbors
    out = []
    for w in opp(u):
        if w != v and not g.has_edge(v, w):
            out.append(w)
    for w in opp(v):
        if w != u and not g.has_edge(u, w):
            out.append(w)
    return sorted(out)


# -- monochromatic patterns --------------------------------------------------


def enumerate_mono_p3(g) -> list[ForbiddenStructure]:
    """All induced single-colored paths on three vertices, sorted."""
    out = []
    for v in range(g.n):
        for side, color in ((g.blue_neighbors(v), Color.BLUE), (g.red_neighbors(v), Color.RED)):
            for i, u in enumerate(side):
                for w in side[i + 1:]:
                    if not g.has_edge(u, w):
                        out.append(ForbiddenStructure(
                            StructureKind.MONO_P3, (u, v, w),
                            (edge_key(u, v), edge_key(v, w)), color,
                        ))
    out.sort(key=lambda s: s.witness)
    return out


def iter_triangles(g) -> Iterator[tuple[int, int, int]]:
    """Yield each triangle once as u < v < w."""
    for u, v in g.pairs():
        nu = set(g.neighbors(u))
        for w in g.neighbors(v):
            if w > v and w in nu:
                yield (u, v, w)


def _classify_triangle(g, u: int, v: int, w: int) -> ForbiddenStructure:
    pairs = [(u, v), (u, w), (v, w)]
    colors = [g.color_of(*p) for p in pairs]
    blues = colors.count(Color.BLUE)
    if blues in (0, 3):
        return ForbiddenStructure(
            StructureKind.MONO_K3, (u, v, w),
            tuple(edge_key(*p) for p in pairs), colors[0],
        )
    minority = Color.BLUE if blues == 1 else Color.RED
    (a, b), = (p for p, c in zip(pairs, colors) if c is minority)
    apex, = {u, v, w} - {a, b}
    return ForbiddenStructure(
        StructureKind.BICOLORED_K3, (a, b, apex),
        (edge_key(a, b), edge_key(a, apex), edge_key(b, apex)), minority,
    )


def enumerate_mono_k3(g) -> list[ForbiddenStructure]:
    out = [s for s in map(lambda t: _classify_triangle(g, *t), iter_triangles(g))
           if s.kind is StructureKind.MONO_K3]
    out.sort(key=lambda s: s.witness)
    return out


def enumerate_bicolored_k3(g) -> list[ForbiddenStructure]:
    out = [s for s in map(lambda t: _classify_triangle(g, *t), iter_triangles(g))
           if s.kind is StructureKind.BICOLORED_K3]
    out.sort(key=lambda s: s.witness)
    return out


def _is_endangered(g, tri: ForbiddenStructure) -> bool:
    # the two majority-color edges are those incident to the apex
    return bool(p3_partners(g, tri.edges[1])) or bool(p3_partners(g, tri.edges[2]))


def enumerate_endangered_k3(g) -> list[ForbiddenStructure]:
    out = [
        ForbiddenStructure(StructureKind.ENDANGERED_K3, s.witness, s.edges, s.orientation)
        for s in enumerate_bicolored_k3(g) if _is_endangered(g, s)
    ]
    return out


def find_endangered_k3(g) -> Optional[ForbiddenStructure]:
    """First endangered bicolored triangle, or None (gates the cover solver)."""
    for tri in iter_triangles(g):
        s = _classify_triangle(g, *tri)
        if s.kind is StructureKind.BICOLORED_K3 and _is_endangered(g, s):
            return ForbiddenStructure(StructureKind.ENDANGERED_K3, s.witness, s.edges, s.orientation)
    return None


# -- diamonds and hourglasses ------------------------------------------------


def _diamond(kind: StructureKind, orientation: Color, u, v, w, z) -> ForbiddenStructure:
    return ForbiddenStructure(
        kind, (u, v, w, z),
        (edge_key(u, v), edge_key(v, w), edge_key(u, z), edge_key(v, z), edge_key(w, z)),
        orientation,
    )


def iter_diamonds(g) -> Iterator[ForbiddenStructure]:
    """Yield every induced lc/lo/iiz diamond exactly once.

    Scans each bicolored P3 (p, q, r) and each common neighbor d of all
    three vertices; the colors of d's edges to (p, q, r) decide the kind,
    with the symmetric kinds deduplicated via the canonical orderings in
    the module docstring.
    """
    B, R = Color.BLUE, Color.RED
    for p, q, r in iter_bicolored_p3(g):
        for d in g.neighbors(q):
            if d == p or d == r:
                continue
            cp = g.color_of(d, p)
            cr = g.color_of(d, r)
            if cp is None or cr is None:
                continue
            cq = g.color_of(d, q)
            trip = (cp, cq, cr)
            if trip == (B, R, B):
                yield _diamond(StructureKind.LC_DIAMOND, B, p, q, r, d)
            elif trip == (R, B, R):
                yield _diamond(StructureKind.LC_DIAMOND, R, r, q, p, d)
            elif trip == (B, B, R):
                if q < d:
                    yield _diamond(StructureKind.LO_DIAMOND, B, p, q, r, d)
            elif trip == (B, R, R):
                if q < d:
                    yield _diamond(StructureKind.LO_DIAMOND, R, r, q, p, d)
            elif trip == (R, B, B):
                if p < r:
                    yield _diamond(StructureKind.IIZ_DIAMOND, B, p, q, r, d)
            elif trip == (R, R, B):
                if r < p:
                    yield _diamond(StructureKind.IIZ_DIAMOND, R, r, q, p, d)
            # (B,B,B) and (R,R,R) complete a diamond with a single
            # bicolored P3; no branching rule targets those.


def enumerate_diamonds(g, kind: Optional[StructureKind] = None) -> list[ForbiddenStructure]:
    out = [s for s in iter_diamonds(g) if kind is None or s.kind is kind]
    out.sort(key=lambda s: (s.kind.value, s.witness))
    return out


def iter_hourglasses(g) -> Iterator[ForbiddenStructure]:
    """Yield every induced hourglass exactly once.

    An hourglass is two bicolored P3s sharing their center v, with a blue
    and a red edge tying the four endpoints together as in the template.
    """
    for v in range(g.n):
        p3s = [
            (a, c)
            for a in g.blue_neighbors(v)
            for c in g.red_neighbors(v)
            if not g.has_edge(a, c)
        ]
        for a1, c1 in p3s:
            for a2, c2 in p3s:
                if len({a1, c1, a2, c2}) != 4:
                    continue
                if g.color_of(a1, c2) is not Color.BLUE:
                    continue
                if g.color_of(c1, a2) is not Color.RED:
                    continue
                if g.has_edge(a1, a2) or g.has_edge(c1, c2):
                    continue
                if a1 < c1:
                    verts = (a1, v, c1, c2, a2)
                    orient = Color.BLUE
                else:
                    verts = (c1, v, a1, a2, c2)
                    orient = Color.RED
                u, _, w, z1, z2 = verts
                yield ForbiddenStructure(
                    StructureKind.CC_HOURGLASS, verts,
                    (edge_key(u, v), edge_key(v, w), edge_key(u, z1),
                     edge_key(v, z1), edge_key(v, z2), edge_key(w, z2)),
                    orient,
                )


def enumerate_hourglasses(g) -> list[ForbiddenStructure]:
    out = list(iter_hourglasses(g))
    out.sort(key=lambda s: s.witness)
    return out


# -- conflict edges and branch selection --------------------------------------


def _mce(g, e1: Edge, partners: list[Edge]) -> ForbiddenStructure:
    e2, e3 = partners[0], partners[1]
    verts = tuple(sorted({*e1, *e2, *e3}))
    return ForbiddenStructure(
        StructureKind.MULTI_CONFLICT_EDGE, verts, (e1, e2, e3), g.color_of(*e1),
    )


def enumerate_multi_conflict_edges(g) -> list[ForbiddenStructure]:
    """One structure per edge with two or more conflict partners.

    Only the two smallest partners are reported, matching what branching
    uses.
    """
    out = []
    for e1 in g.pairs():
        partners = p3_partners(g, e1)
        if len(partners) >= 2:
            out.append(_mce(g, e1, partners))
    return out


def find_branch_structure(g) -> Optional[ForbiddenStructure]:
    """The structure the search branches on, or None if the graph is nice.

    Deterministic scan: first the smallest edge conflicting with two or
    more edges, then lc, lo, iiz diamonds and hourglasses, each by
    lexicographically smallest witness.
    """
    for e1 in g.pairs():
        partners = p3_partners(g, e1)
        if len(partners) >= 2:
            return _mce(g, e1, partners)
    best: dict[StructureKind, ForbiddenStructure] = {}
    for s in iter_diamonds(g):
        cur = best.get(s.kind)
        if cur is None or s.witness < cur.witness:
            best[s.kind] = s
    for kind in (StructureKind.LC_DIAMOND, StructureKind.LO_DIAMOND, StructureKind.IIZ_DIAMOND):
        if kind in best:
            return best[kind]
    hour = None
    for s in iter_hourglasses(g):
        if hour is None or s.witness < hour.witness:
            hour = s
    return hour


def is_nice(g) -> bool:
    """True iff no diamond, no hourglass, and every edge has at most one partner."""
    return find_branch_structure(g) is None


# -- graph classes -------------------------------------------------------------


@dataclass(frozen=True)
class InstanceClass:
    """Class flags consumed by the auto-solver dispatch."""

    bicolored_p3_free: bool
    endangered_k3_free: bool
    mono_free: bool
    max_degree_le_two: bool

    def to_json_dict(self) -> dict:
        return {
            "bicolored_p3_free": self.bicolored_p3_free,
            "endangered_k3_free": self.endangered_k3_free,
            "mono_free": self.mono_free,
            "max_degree_le_two": self.max_degree_le_two,
        }


def _has_mono_structure(g) -> bool:
    for v in range(g.n):
        for side in (g.blue_neighbors(v), g.red_neighbors(v)):
            # any same-colored pair at v is a mono P3 or half a triangle
            for i, u in enumerate(side):
                for w in side[i + 1:]:
                    if not g.has_edge(u, w):
                        return True  # mono P3
                    if g.color_of(u, w) is g.color_of(u, v):
                        return True  # mono K3
    return False


def classify(g) -> InstanceClass:
    """Compute the class flags used to pick a solver."""
    mono_free = not _has_mono_structure(g)
    if mono_free:
        # two same-colored edges at one vertex always close into a mono
        # P3 or, via a third same-colored pair, a mono K3; so freeness
        # caps both color degrees at two
        assert all(g.blue_degree(v) <= 2 and g.red_degree(v) <= 2 for v in range(g.n))
    return InstanceClass(
        bicolored_p3_free=first_bicolored_p3(g) is None,
        endangered_k3_free=find_endangered_k3(g) is None,
        mono_free=mono_free,
        max_degree_le_two=all(g.degree(v) <= 2 for v in range(g.n)),
    )
