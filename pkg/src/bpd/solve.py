"""Exact solvers for bicolored P3 deletion.

Decision question: can at most k edges be deleted from a two-edge-colored
graph so that no induced bicolored P3 remains?  This module provides

- ``oracle_min_deletions``: complete branch-and-bound on P3 edges, the
  reference answer for everything else (exponential, small inputs only);
- ``solve_branching``: the general FPT search.  Branches on a located
  structure with vectors (1,2) or (1,2,3), prunes with an edge-disjoint
  P3 packing, and finishes nice leaf graphs in polynomial time;
- ``solve_endangered_free``: minimum vertex cover of the bipartite
  edge-conflict graph, valid when no bicolored triangle is endangered;
- ``solve_degree_two``: linear-time path/cycle case analysis;
- ``solve_mono_free``: reduction to degree two for graphs without
  monochromatic P3s and triangles;
- ``solve_auto``: kernelize, split into components, and dispatch each to
  the cheapest applicable method.

Every solver re-verifies a yes answer against the input graph before
returning it.
"""

from __future__ import annotations

import os
import time
from bisect import insort
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

from .detect import (
    InstanceClass,
    StructureKind,
    classify,
    count_bicolored_p3,
    find_branch_structure,
    find_endangered_k3,
    first_bicolored_p3,
    is_nice,
    iter_bicolored_p3,
    p3_partners,
)
from .graph import Color, ColoredGraph, Edge, Instance, edge_key


class PreconditionError(ValueError):
    """A solver was called on an instance outside its graph class."""


class InternalConsistencyError(RuntimeError):
    """A structural guarantee the algorithms rely on failed at runtime."""


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    max_depth: int = 0
    rule_counts: dict = field(default_factory=dict)
    time_ms: float = 0.0

    def bump(self, key: str, by: int = 1) -> None:
        self.rule_counts[key] = self.rule_counts.get(key, 0) + by

    def merge(self, other: "SearchStats") -> None:
        self.nodes_expanded += other.nodes_expanded
        self.max_depth = max(self.max_depth, other.max_depth)
        for key, cnt in other.rule_counts.items():
            self.bump(key, cnt)

    def to_json_dict(self) -> dict:
        return {
            "nodes_expanded": self.nodes_expanded,
            "max_depth": self.max_depth,
            "rule_counts": dict(sorted(self.rule_counts.items())),
            "time_ms": round(self.time_ms, 3),
        }


@dataclass
class SolveResult:
    answer: bool
    solution: Optional[tuple[Edge, ...]]
    optimum: Optional[int]
    stats: SearchStats
    method: str


def verify_solution(g: ColoredGraph, deletions, k: Optional[int] = None) -> tuple[bool, str]:
    """Check a deletion set: edges exist, within budget, result P3-free."""
    keys = []
    for u, v in deletions:
        if g.color_of(u, v) is None:
            return False, f"({u}, {v}) is not an edge of the graph"
        keys.append(edge_key(u, v))
    if len(set(keys)) != len(keys):
        return False, "duplicate edges in deletion set"
    if k is not None and len(keys) > k:
        return False, f"{len(keys)} deletions exceed budget {k}"
    left = g.delete_edges(keys)
    p3 = first_bicolored_p3(left)
    if p3 is not None:
        return False, f"bicolored P3 {p3} remains after deletion"
    return True, "ok"


def _checked(g: ColoredGraph, k: Optional[int], result: SolveResult) -> SolveResult:
    # runtime soundness: never hand out an unverified yes
    if result.answer:
        ok, reason = verify_solution(g, result.solution, k)
        if not ok:
            raise InternalConsistencyError(
                f"solver {result.method!r} produced an invalid solution: {reason}")
    return result


class _Workspace:
    """Mutable edge-deletion overlay sharing the read interface of ColoredGraph.

    Detection functions only need n, pairs, has_edge, color_of and the
    neighbor lists, so the search can delete and restore edges in place
    instead of copying the graph at every node.
    """

    __slots__ = ("n", "_color", "_blue", "_red")

    def __init__(self, g):
        self.n = g.n
        self._color = {}
        self._blue = [list(g.blue_neighbors(v)) for v in range(g.n)]
        self._red = [list(g.red_neighbors(v)) for v in range(g.n)]
        for pair in g.pairs():
            self._color[pair] = g.color_of(*pair)

    @property
    def m(self) -> int:
        return len(self._color)

    def pairs(self):
        return sorted(self._color)

    def has_edge(self, u, v) -> bool:
        return ((u, v) if u < v else (v, u)) in self._color

    def color_of(self, u, v):
        return self._color.get((u, v) if u < v else (v, u))

    def blue_neighbors(self, v):
        return self._blue[v]

    def red_neighbors(self, v):
        return self._red[v]

    def neighbors(self, v):
        return sorted(self._blue[v] + self._red[v])

    def degree(self, v) -> int:
        return len(self._blue[v]) + len(self._red[v])

    def blue_degree(self, v) -> int:
        return len(self._blue[v])

    def red_degree(self, v) -> int:
        return len(self._red[v])

    def delete(self, pairs):
        """Remove edges; returns a token for restore. Missing edge = bug."""
        token = []
        for u, v in pairs:
            key = (u, v) if u < v else (v, u)
            c = self._color.pop(key)
            side = self._blue if c is Color.BLUE else self._red
            side[key[0]].remove(key[1])
            side[key[1]].remove(key[0])
            token.append((key, c))
        return token

    def restore(self, token) -> None:
        for key, c in reversed(token):
            self._color[key] = c
            side = self._blue if c is Color.BLUE else self._red
            insort(side[key[0]], key[1])
            insort(side[key[1]], key[0])

    def to_graph(self) -> ColoredGraph:
        return ColoredGraph(self.n, [(u, v, c) for (u, v), c in self._color.items()])


# -- reference oracle ---------------------------------------------------------


def oracle_min_deletions(g: ColoredGraph, cap: Optional[int] = None):
    """Exact minimum deletion count and witness by complete 2-way branching.

    Any solution must delete one of the two edges of the first remaining
    P3, so branching on both covers everything; the current best (seeded
    with the smaller color class, which is always a solution) bounds the
    depth.  Exponential; intended for small graphs and cross-checks.
    Returns (None, None) when a cap is given and the optimum exceeds it.
    """
    blue = [p for p in g.pairs() if g.color_of(*p) is Color.BLUE]
    red = [p for p in g.pairs() if g.color_of(*p) is Color.RED]
    seed = red if len(red) <= len(blue) else blue
    if cap is None or len(seed) <= cap:
        best, best_set = len(seed), tuple(sorted(seed))
    else:
        best, best_set = cap + 1, None
    ws = _Workspace(g)
    chosen: list[Edge] = []

    def rec():
        nonlocal best, best_set
        if len(chosen) >= best:
            return
        p3 = first_bicolored_p3(ws)
        if p3 is None:
            best, best_set = len(chosen), tuple(sorted(chosen))
            return
        u, v, w = p3
        for e in (edge_key(u, v), edge_key(v, w)):
            token = ws.delete([e])
            chosen.append(e)
            rec()
            chosen.pop()
            ws.restore(token)

    rec()
    if best_set is None:
        return None, None
    return best, best_set


# -- nice endgame -------------------------------------------------------------


def _deletion_creates_p3(ws, x: int, y: int) -> bool:
    # a new P3 after deleting {x,y} must be centered at a common neighbor
    # whose edges to x and y differ in color
    nx = set(ws.neighbors(x))
    for z in ws.neighbors(y):
        if z in nx and ws.color_of(x, z) is not ws.color_of(y, z):
            return True
    return False


def _fix_nice(ws) -> list[Edge]:
    """Minimum deletion set for a nice workspace; workspace is restored.

    In a nice graph the P3s are pairwise edge-disjoint, so the optimum is
    the P3 count, and for every P3 at least one of its two edges can be
    deleted without creating a new P3 (which also keeps the rest nice).
    Blue is tried first for deterministic witnesses.
    """
    deletions: list[Edge] = []
    tokens = []
    while True:
        p3 = first_bicolored_p3(ws)
        if p3 is None:
            break
        u, v, w = p3
        for e in (edge_key(u, v), edge_key(v, w)):
            if not _deletion_creates_p3(ws, *e):
                tokens.append(ws.delete([e]))
                deletions.append(e)
                break
        else:
            raise InternalConsistencyError(
                f"both edges of P3 {p3} create new P3s in a supposedly nice graph")
    for token in reversed(tokens):
        ws.restore(token)
    return deletions


def solve_nice(g: ColoredGraph, k: int) -> SolveResult:
    """Decide a nice graph: yes iff its P3 count is within budget."""
    t0 = time.perf_counter()
    if not is_nice(g):
        raise PreconditionError("graph is not nice (a branch structure exists)")
    ws = _Workspace(g)
    fix = _fix_nice(ws)
    stats = SearchStats(nodes_expanded=1, time_ms=(time.perf_counter() - t0) * 1000)
    optimum = len(fix)
    answer = optimum <= k
    result = SolveResult(answer, tuple(sorted(fix)) if answer else None, optimum, stats, "nice")
    return _checked(g, k, result)


# -- FPT branching ------------------------------------------------------------


def _packing_exceeds(ws, k: int) -> bool:
    """True if a greedy edge-disjoint P3 packing grows past k (certifying no)."""
    used = set()
    count = 0
    for u, v, w in iter_bicolored_p3(ws):
        e1, e2 = edge_key(u, v), edge_key(v, w)
        if e1 in used or e2 in used:
            continue
        used.add(e1)
        used.add(e2)
        count += 1
        if count > k:
            return True
    return False


def _branch_children(s) -> list[list[Edge]]:
    if s.kind is StructureKind.MULTI_CONFLICT_EDGE:
        e1, e2, e3 = s.edges
        return [[e1], [e2, e3]]
    if s.kind is StructureKind.CC_HOURGLASS:
        u, v, w, z1, z2 = s.witness
        return [
            [edge_key(v, w)],
            [edge_key(u, v), edge_key(v, z1)],
            [edge_key(u, v), edge_key(u, z1), edge_key(v, z2)],
        ]
    u, v, w, z = s.witness  # one of the three diamonds
    return [
        [edge_key(v, w)],
        [edge_key(u, v), edge_key(u, z)],
        [edge_key(u, v), edge_key(v, z), edge_key(w, z)],
    ]


def _search(ws, k: int, stats: SearchStats, depth: int, cancel) -> Optional[list[Edge]]:
    # pre: k >= 0 (children over budget are never entered)
    if cancel is not None and cancel.is_set():
        return None
    stats.nodes_expanded += 1
    if depth > stats.max_depth:
        stats.max_depth = depth
    if _packing_exceeds(ws, k):
        stats.bump("packing_prune")
        return None
    s = find_branch_structure(ws)
    if s is None:
        if count_bicolored_p3(ws) > k:
            stats.bump("nice_leaf_no")
            return None
        stats.bump("nice_leaf")
        return _fix_nice(ws)
    stats.bump(s.kind.value)
    for deletions in _branch_children(s):
        if len(deletions) > k:
            continue
        token = ws.delete(deletions)
        sub = _search(ws, k - len(deletions), stats, depth + 1, cancel)
        ws.restore(token)
        if sub is not None:
            return deletions + sub
    return None


def _decide(g: ColoredGraph, k: int, stats: SearchStats, parallel: bool) -> Optional[list[Edge]]:
    """One decision run; asserts the search-tree size bound for this run."""
    if k < 0:
        return None
    before = stats.nodes_expanded
    if parallel:
        found = _decide_parallel(g, k, stats)
    else:
        found = _search(_Workspace(g), k, stats, 0, None)
    assert stats.nodes_expanded - before <= 2 ** (k + 1), \
        "search tree exceeded the 2^(k+1) sanity bound"
    return found


def _decide_parallel(g: ColoredGraph, k: int, stats: SearchStats) -> Optional[list[Edge]]:
    # root-level sibling subtrees race; first yes wins (witness therefore
    # run-dependent, documented); bookkeeping otherwise identical
    import threading
    from concurrent.futures import ThreadPoolExecutor, as_completed

    stats.nodes_expanded += 1
    ws0 = _Workspace(g)
    if _packing_exceeds(ws0, k):
        stats.bump("packing_prune")
        return None
    s = find_branch_structure(ws0)
    if s is None:
        if count_bicolored_p3(ws0) > k:
            stats.bump("nice_leaf_no")
            return None
        stats.bump("nice_leaf")
        return _fix_nice(ws0)
    stats.bump(s.kind.value)
    children = [d for d in _branch_children(s) if len(d) <= k]
    if not children:
        return None
    cancel = threading.Event()
    limit = int(os.environ.get("BPD_THREADS", 0)) or (os.cpu_count() or 1)
    child_stats = [SearchStats() for _ in children]

    def run(idx: int) -> Optional[list[Edge]]:
        deletions = children[idx]
        sub_ws = _Workspace(g.delete_edges(deletions))
        sub = _search(sub_ws, k - len(deletions), child_stats[idx], 1, cancel)
        return None if sub is None else deletions + sub

    found = None
    with ThreadPoolExecutor(max_workers=min(limit, len(children))) as pool:
        futures = {pool.submit(run, i): i for i in range(len(children))}
        for fut in as_completed(futures):
            res = fut.result()
            if res is not None and found is None:
                found = res
                cancel.set()
    for cs in child_stats:
        stats.merge(cs)
    return found


def solve_branching(inst: Instance, *, optimize: bool = False,
                    parallel: bool = False) -> SolveResult:
    """Bounded search with branching vectors (1,2) and (1,2,3).

    Decision mode answers for the instance budget; optimize mode runs the
    decision with increasing budgets (starting at the packing lower
    bound) until the first yes, which is the optimum.
    """
    g, k = inst.graph, inst.k
    t0 = time.perf_counter()
    stats = SearchStats()
    if optimize:
        blue = sum(1 for p in g.pairs() if g.color_of(*p) is Color.BLUE)
        lower = 0
        ws = _Workspace(g)
        while _packing_exceeds(ws, lower):
            lower += 1
        found = None
        budget = lower
        while found is None:
            assert budget <= min(blue, g.m - blue), \
                "optimum cannot exceed the smaller color class"
            found = _decide(g, budget, stats, parallel)
            if found is None:
                budget += 1
        optimum = budget
        answer = optimum <= k
        stats.time_ms = (time.perf_counter() - t0) * 1000
        result = SolveResult(answer, tuple(sorted(found)) if answer else None,
                             optimum, stats, "branch")
    else:
        found = _decide(g, k, stats, parallel)
        stats.time_ms = (time.perf_counter() - t0) * 1000
        answer = found is not None
        result = SolveResult(answer, tuple(sorted(found)) if answer else None,
                             None, stats, "branch")
    return _checked(g, k, result)


# -- conflict-graph vertex cover ----------------------------------------------


@dataclass(frozen=True)
class ConflictGraph:
    """Bipartite graph on the edges of g: red left, blue right.

    A conflict joins two edges that form an induced bicolored P3, which
    always pairs one red with one blue edge.
    """

    red_edges: tuple[Edge, ...]
    blue_edges: tuple[Edge, ...]
    conflicts: tuple[tuple[Edge, Edge], ...]


def build_conflict_graph(g: ColoredGraph) -> ConflictGraph:
    red, blue = [], []
    for p in g.pairs():
        (blue if g.color_of(*p) is Color.BLUE else red).append(p)
    conflicts = []
    for e in red:
        for f in p3_partners(g, e):
            conflicts.append((e, f))
    return ConflictGraph(tuple(red), tuple(blue), tuple(sorted(conflicts)))


def _hopcroft_karp(nl: int, nr: int, adj: list[list[int]]):
    """Maximum bipartite matching; returns (match_l, match_r) with -1 = free."""
    INF = float("inf")
    match_l = [-1] * nl
    match_r = [-1] * nr
    while True:
        dist = [INF] * nl
        queue = deque()
        for i in range(nl):
            if match_l[i] == -1:
                dist[i] = 0
                queue.append(i)
        reachable_free = False
        while queue:
            i = queue.popleft()
            for j in adj[i]:
                i2 = match_r[j]
                if i2 == -1:
                    reachable_free = True
                elif dist[i2] is INF:
                    dist[i2] = dist[i] + 1
                    queue.append(i2)
        if not reachable_free:
            return match_l, match_r
        for root in range(nl):
            if match_l[root] != -1:
                continue
            # iterative layered DFS; chosen[t] is the right vertex picked
            # when descending out of frames[t]
            frames = [(root, iter(adj[root]))]
            chosen: list[int] = []
            while frames:
                i, it = frames[-1]
                descended = False
                for j in it:
                    i2 = match_r[j]
                    if i2 == -1:
                        chosen.append(j)
                        for (li, _), jj in zip(frames, chosen):
                            match_l[li] = jj
                            match_r[jj] = li
                        frames.clear()
                        descended = True
                        break
                    if dist[i2] == dist[i] + 1:
                        chosen.append(j)
                        frames.append((i2, iter(adj[i2])))
                        descended = True
                        break
                if not descended:
                    dist[i] = INF
                    frames.pop()
                    if chosen:
                        chosen.pop()


def bipartite_min_vertex_cover(cg: ConflictGraph) -> tuple[Edge, ...]:
    """Minimum vertex cover of the conflict graph, as edges of g.

    Standard alternating-reachability construction from a maximum
    matching; minimum covers are in particular inclusion-minimal, which
    the deletion-soundness argument needs.
    """
    li = {e: i for i, e in enumerate(cg.red_edges)}
    ri = {e: i for i, e in enumerate(cg.blue_edges)}
    adj: list[list[int]] = [[] for _ in cg.red_edges]
    for e, f in cg.conflicts:
        adj[li[e]].append(ri[f])
    match_l, match_r = _hopcroft_karp(len(cg.red_edges), len(cg.blue_edges), adj)
    # Z := vertices on alternating paths from free left vertices
    z_left = [False] * len(cg.red_edges)
    z_right = [False] * len(cg.blue_edges)
    queue = deque()
    for i in range(len(cg.red_edges)):
        if match_l[i] == -1:
            z_left[i] = True
            queue.append(i)
    while queue:
        i = queue.popleft()
        for j in adj[i]:
            if match_l[i] == j or z_right[j]:
                continue
            z_right[j] = True
            i2 = match_r[j]
            if i2 != -1 and not z_left[i2]:
                z_left[i2] = True
                queue.append(i2)
    cover = [cg.red_edges[i] for i in range(len(cg.red_edges)) if not z_left[i]]
    cover += [cg.blue_edges[j] for j in range(len(cg.blue_edges)) if z_right[j]]
    matched = sum(1 for x in match_l if x != -1)
    assert len(cover) == matched, "cover size must equal matching size"
    in_cover = set(cover)
    assert all(e in in_cover or f in in_cover for e, f in cg.conflicts)
    return tuple(sorted(cover))


def solve_endangered_free(inst: Instance) -> SolveResult:
    """Polynomial solver for graphs with no endangered bicolored triangle."""
    g, k = inst.graph, inst.k
    t0 = time.perf_counter()
    bad = find_endangered_k3(g)
    if bad is not None:
        raise PreconditionError(
            f"endangered bicolored triangle on vertices {bad.witness}; "
            "the cover argument does not apply")
    cover = bipartite_min_vertex_cover(build_conflict_graph(g))
    optimum = len(cover)
    answer = optimum <= k
    stats = SearchStats(nodes_expanded=1, time_ms=(time.perf_counter() - t0) * 1000)
    result = SolveResult(answer, cover if answer else None, optimum, stats, "vc")
    return _checked(g, k, result)


# -- degree two ----------------------------------------------------------------


def _greedy_path(edges: list[Edge], colors: list[Color]) -> list[Edge]:
    """Optimal deletions for a path, scanning left to right.

    In a path two consecutive edges conflict exactly when their colors
    differ; deleting the right edge of the first conflict resolves at
    least everything the left one would.  After a deletion the scan may
    skip ahead two edges, as the gap cannot conflict leftward.
    """
    deleted = []
    i = 0
    while i + 1 < len(edges):
        if colors[i] is colors[i + 1]:
            i += 1
        else:
            deleted.append(edges[i + 1])
            i += 2
    return deleted


def _walk_component(g, comp: tuple[int, ...]):
    """Vertex order of a degree-≤2 component; returns (is_cycle, vertices)."""
    if len(comp) == 1:
        return False, list(comp)
    ends = [v for v in comp if g.degree(v) <= 1]
    if ends:
        start = min(ends)
        is_cycle = False
    else:
        start = min(comp)
        is_cycle = True
    order = [start]
    prev = None
    cur = start
    while True:
        nxt = [u for u in g.neighbors(cur) if u != prev]
        if not nxt:
            break
        nyt = min(nxt)
        if is_cycle and nyt == start:
            break
        order.append(nyt)
        prev, cur = cur, nyt
        if is_cycle and len(order) == len(comp):
            break
    assert len(order) == len(comp)
    return is_cycle, order


def _cyclic_runs(colors: list[Color]) -> list[tuple[int, int]]:
    """(start, length) of maximal same-color runs after rotating to a boundary."""
    n = len(colors)
    first = next((i for i in range(n) if colors[i] is not colors[i - 1]), None)
    if first is None:
        return [(0, n)]
    runs = []
    start = first
    length = 1
    for off in range(1, n):
        i = (first + off) % n
        if colors[i] is colors[(i - 1) % n]:
            length += 1
        else:
            runs.append((start, length))
            start = i
            length = 1
    runs.append((start, length))
    return runs


def _solve_cycle(g, order: list[int]) -> list[Edge]:
    L = len(order)
    edges = [edge_key(order[i], order[(i + 1) % L]) for i in range(L)]
    colors = [g.color_of(*e) for e in edges]
    runs = _cyclic_runs(colors)
    if len(runs) == 1:
        return []  # single color, nothing to do
    for start, length in runs:
        if length >= 3:
            # an interior edge of the run is in no P3; conceptually cut
            # the cycle there for free and treat the rest as a path
            mid = (start + length // 2) % L
            path = [edges[(mid + 1 + i) % L] for i in range(L - 1)]
            return _greedy_path(path, [g.color_of(*e) for e in path])
    for start, length in runs:
        if length == 2:
            # delete the two edges flanking the run; the run itself is
            # monochromatic and the rest becomes a path
            e0 = edges[(start - 1) % L]
            e3 = edges[(start + 2) % L]
            path = [edges[(start + 3 + i) % L] for i in range(L - 4)]
            return [e0, e3] + _greedy_path(path, [g.color_of(*e) for e in path])
    # fully alternating, necessarily even: one color class is optimal
    assert L % 2 == 0
    return [e for e in edges if g.color_of(*e) is Color.BLUE]


def _deg2_deletions(g) -> list[Edge]:
    """Minimum deletions for a graph (or workspace) of maximum degree ≤ 2."""
    if isinstance(g, _Workspace):
        comps = g.to_graph().connected_components()
    else:
        comps = g.connected_components()
    out: list[Edge] = []
    for comp in comps:
        if len(comp) <= 2:
            continue
        is_cycle, order = _walk_component(g, comp)
        if is_cycle and len(order) <= 5:
            if isinstance(g, _Workspace):
                sub, back = g.to_graph().induced_subgraph(comp)
            else:
                sub, back = g.induced_subgraph(comp)
            _, witness = oracle_min_deletions(sub)
            out.extend(edge_key(back[u], back[v]) for u, v in witness)
        elif is_cycle:
            out.extend(_solve_cycle(g, order))
        else:
            edges = [edge_key(order[i], order[i + 1]) for i in range(len(order) - 1)]
            out.extend(_greedy_path(edges, [g.color_of(*e) for e in edges]))
    return out


def solve_degree_two(inst: Instance) -> SolveResult:
    """Path/cycle case analysis for graphs of maximum degree two."""
    g, k = inst.graph, inst.k
    t0 = time.perf_counter()
    bad = next((v for v in range(g.n) if g.degree(v) > 2), None)
    if bad is not None:
        raise PreconditionError(f"vertex {bad} has degree {g.degree(bad)} > 2")
    deletions = _deg2_deletions(g)
    optimum = len(deletions)
    answer = optimum <= k
    stats = SearchStats(nodes_expanded=1, time_ms=(time.perf_counter() - t0) * 1000)
    result = SolveResult(answer, tuple(sorted(deletions)) if answer else None,
                         optimum, stats, "deg2")
    return _checked(g, k, result)


# -- monochromatic-free ----------------------------------------------------------


def _small_component_optimum(g: ColoredGraph, comp: tuple[int, ...]):
    sub, back = g.induced_subgraph(comp)
    cost, witness = oracle_min_deletions(sub)
    return cost, [edge_key(back[u], back[v]) for u, v in witness]


def solve_mono_free(inst: Instance) -> SolveResult:
    """Solver for graphs without monochromatic P3s and triangles.

    Small and P3-free components are settled outright; every surviving
    degree-3 vertex then sits in a paw whose triangle hangs off the rest
    of the graph by a bridge, which is deleted greedily; the remainder
    has maximum degree two.
    """
    g, k = inst.graph, inst.k
    t0 = time.perf_counter()
    flags = classify(g)
    if not flags.mono_free:
        raise PreconditionError("graph has a monochromatic P3 or triangle")
    assert all(g.blue_degree(v) <= 2 and g.red_degree(v) <= 2 for v in range(g.n))

    witness: list[Edge] = []
    ws = _Workspace(g)
    for comp in g.connected_components():
        sub, _ = g.induced_subgraph(comp)
        if first_bicolored_p3(sub) is None:
            ws.delete([(u, v) for u, v, _ in g.edges_within(comp)])
        elif len(comp) <= 5:
            _, edges = _small_component_optimum(g, comp)
            witness.extend(edges)
            ws.delete([(u, v) for u, v, _ in g.edges_within(comp)])

    for v in range(ws.n):
        if ws.degree(v) != 3:
            continue
        nbrs = ws.neighbors(v)
        adjacent_pairs = [(a, b) for i, a in enumerate(nbrs) for b in nbrs[i + 1:]
                          if ws.has_edge(a, b)]
        if len(adjacent_pairs) != 1:
            raise InternalConsistencyError(
                f"closed neighborhood of degree-3 vertex {v} is not a paw: {nbrs}")
        u, w = adjacent_pairs[0]
        (t,) = set(nbrs) - {u, w}
        if ws.neighbors(u) != sorted((v, w)) or ws.neighbors(w) != sorted((u, v)):
            raise InternalConsistencyError(
                f"triangle partners of {v} have outside neighbors: "
                f"N({u})={ws.neighbors(u)}, N({w})={ws.neighbors(w)}")
        # {v,t} bridges the paw triangle to the rest and sits in a P3
        # with a triangle edge; deleting it and dropping the now-closed
        # triangle costs exactly one
        witness.append(edge_key(v, t))
        ws.delete([edge_key(v, t), edge_key(v, u), edge_key(v, w), edge_key(u, w)])

    bad = next((v for v in range(ws.n) if ws.degree(v) > 2), None)
    if bad is not None:
        raise InternalConsistencyError(
            f"degree {ws.degree(bad)} vertex {bad} survived the paw reduction")
    witness.extend(_deg2_deletions(ws))
    optimum = len(witness)
    answer = optimum <= k
    stats = SearchStats(nodes_expanded=1, time_ms=(time.perf_counter() - t0) * 1000)
    result = SolveResult(answer, tuple(sorted(witness)) if answer else None,
                         optimum, stats, "monofree")
    return _checked(g, k, result)


# -- auto dispatch ---------------------------------------------------------------


def _component_method(flags: InstanceClass) -> str:
    if flags.mono_free:
        return "monofree"
    if flags.max_degree_le_two:
        return "deg2"
    if flags.endangered_k3_free:
        return "vc"
    return "branch"


_POLY_SOLVERS: dict[str, Callable[[Instance], SolveResult]] = {
    "monofree": solve_mono_free,
    "deg2": solve_degree_two,
    "vc": solve_endangered_free,
}


def _greedy_packing(g) -> int:
    """Size of a greedy maximal edge-disjoint P3 packing (a lower bound)."""
    used = set()
    count = 0
    for u, v, w in iter_bicolored_p3(g):
        e1, e2 = edge_key(u, v), edge_key(v, w)
        if e1 not in used and e2 not in used:
            used.add(e1)
            used.add(e2)
            count += 1
    return count


def _packing_excluding(g: ColoredGraph, used: set) -> int:
    """Maximum edge-disjoint P3 packing among edges outside ``used``."""
    reds, blues = [], []
    for p in g.pairs():
        if p in used:
            continue
        (blues if g.color_of(*p) is Color.BLUE else reds).append(p)
    li = {e: i for i, e in enumerate(reds)}
    ri = {e: i for i, e in enumerate(blues)}
    adj: list[list[int]] = [[] for _ in reds]
    for e in reds:
        for f in p3_partners(g, e):
            if f not in used:
                adj[li[e]].append(ri[f])
    match_l, _ = _hopcroft_karp(len(reds), len(blues), adj)
    return sum(1 for j in match_l if j != -1)


def max_disjoint_p3_packing(g: ColoredGraph) -> int:
    """Exact maximum number of pairwise edge-disjoint P3s.

    A P3 pairs one red edge with one blue edge, so a packing is exactly a
    matching in the bipartite conflict graph.
    """
    return _packing_excluding(g, set())


def _blocks(g: ColoredGraph) -> list[list[Edge]]:
    """Partition the edges into biconnected blocks (bridges come out alone)."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    counter = 0
    estack: list[Edge] = []
    out: list[list[Edge]] = []
    for root in range(g.n):
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack = [(root, None, iter(g.neighbors(root)))]
        while stack:
            v, parent, it = stack[-1]
            descended = False
            for w in it:
                if w == parent:
                    continue
                if w not in index:
                    estack.append(edge_key(v, w))
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append((w, v, iter(g.neighbors(w))))
                    descended = True
                    break
                if index[w] < index[v]:
                    estack.append(edge_key(v, w))
                    if index[w] < low[v]:
                        low[v] = index[w]
            if descended:
                continue
            stack.pop()
            if not stack:
                continue
            pv = stack[-1][0]
            if low[v] < low[pv]:
                low[pv] = low[v]
            if low[v] >= index[pv]:
                mark = edge_key(pv, v)
                block = []
                while True:
                    e = estack.pop()
                    block.append(e)
                    if e == mark:
                        break
                out.append(block)
    return out


# pieces up to this many vertices get priced exactly by the oracle
_ORACLE_BLOCK_VERTICES = 10


def _clique_pieces(g: ColoredGraph) -> list[tuple[int, ...]]:
    """Candidate dense piece vertex sets grown around greedy cliques.

    Each piece is a maximal-ish clique of size at least 4 plus the
    outside vertices with two or more neighbors in it, capped at oracle
    size.  Regions like that are where deletions cascade and plain
    packings underestimate badly.
    """
    nbr = [set(g.neighbors(v)) for v in range(g.n)]
    pieces = []
    seen = set()
    for v in sorted(range(g.n), key=lambda u: (-len(nbr[u]), u)):
        if len(nbr[v]) < 3:
            continue
        clique = [v]
        cands = set(nbr[v])
        while cands:
            best = min(cands, key=lambda u: (-len(cands & nbr[u]), u))
            clique.append(best)
            cands &= nbr[best]
        if len(clique) < 4:
            continue
        core = tuple(sorted(clique))
        if core in seen:
            continue
        seen.add(core)
        count: dict[int, int] = {}
        inside = set(core)
        for u in core:
            for w in nbr[u]:
                if w not in inside:
                    count[w] = count.get(w, 0) + 1
        verts = list(core)
        for w in sorted((w for w, c in count.items() if c >= 2),
                        key=lambda w: (-count[w], w)):
            if len(verts) >= _ORACLE_BLOCK_VERTICES:
                break
            verts.append(w)
        pieces.append(tuple(sorted(verts)))
    return pieces


def _piece_optimum(g: ColoredGraph) -> int:
    """Exact optimum of a small piece by 2-way branching with packing prune."""
    blue = sum(1 for p in g.pairs() if g.color_of(*p) is Color.BLUE)
    best = min(blue, g.m - blue)
    ws = _Workspace(g)

    def rec(spent: int):
        nonlocal best
        if spent >= best:
            return
        packing = 0
        used: set[Edge] = set()
        head = None
        for u, v, w in iter_bicolored_p3(ws):
            if head is None:
                head = (u, v, w)
            e1, e2 = edge_key(u, v), edge_key(v, w)
            if e1 not in used and e2 not in used:
                used.add(e1)
                used.add(e2)
                packing += 1
                if spent + packing >= best:
                    return
        if head is None:
            best = spent
            return
        u, v, w = head
        for e in (edge_key(u, v), edge_key(v, w)):
            token = ws.delete([e])
            rec(spent + 1)
            ws.restore(token)

    rec(0)
    return best


def _component_lower_bound(g: ColoredGraph, cache: dict) -> int:
    """Lower bound on the optimum from edge-disjoint induced pieces.

    For an induced subgraph the far pair of an internal P3 is adjacent
    in the full graph exactly when it is adjacent in the piece, so any
    solution restricted to a piece's edges must solve the piece; over
    edge-disjoint pieces those costs add up.  Pieces come from small
    biconnected blocks and from clique cores, priced exactly; whatever
    edges remain contribute a maximum edge-disjoint P3 packing on top.
    """
    candidates = []
    big_blocks = False
    for block in _blocks(g):
        if len(block) > 1:
            verts = {x for e in block for x in e}
            if len(verts) <= _ORACLE_BLOCK_VERTICES:
                candidates.append(tuple(sorted(verts)))
            else:
                big_blocks = True
    candidates.sort()
    if big_blocks:
        candidates.extend(_clique_pieces(g))
    total = 0
    used: set[Edge] = set()
    for verts in candidates:
        sub, back = g.induced_subgraph(verts)
        pairs = [edge_key(back[u], back[v]) for u, v in sub.pairs()]
        if any(p in used for p in pairs):
            continue
        part = cache.get(sub)
        if part is None:
            part = _piece_optimum(sub)
            cache[sub] = part
        if part:
            total += part
            used.update(pairs)
    return total + _packing_excluding(g, used)


def _component_optimum(g: ColoredGraph, stats: SearchStats, memo: dict,
                       lb_cache: dict, depth: int = 0) -> tuple[int, tuple[Edge, ...]]:
    """Exact optimum of a connected graph by branch and decompose.

    Branches with the same rules as the plain search, but after each
    branch step the remainder splits into connected components that are
    solved independently (their optima add up) and dispatched back to
    the polynomial solvers when they qualify.  Children are explored in
    order of deletion cost plus block lower bound, so the first descent
    lands on an optimal solution whenever the bound is tight; siblings
    that cannot beat the incumbent are pruned.  Results are memoized by
    graph value, which collapses the many repeated subproblems that
    edge-disjoint gadget regions produce.
    """
    cached = memo.get(g)
    if cached is not None:
        return cached
    stats.nodes_expanded += 1
    if depth > stats.max_depth:
        stats.max_depth = depth
    if first_bicolored_p3(g) is None:
        result = (0, ())
    elif g.n <= _ORACLE_BLOCK_VERTICES:
        stats.bump("oracle_leaf")
        result = oracle_min_deletions(g)
    else:
        flags = classify(g)
        method = _component_method(flags)
        if method != "branch":
            res = _POLY_SOLVERS[method](Instance(g, g.m))
            stats.bump(method)
            result = (res.optimum, res.solution)
        else:
            s = find_branch_structure(g)
            if s is None:
                fix = _fix_nice(_Workspace(g))
                stats.bump("nice_leaf")
                result = (len(fix), tuple(sorted(fix)))
            else:
                stats.bump(s.kind.value)
                blue = [p for p in g.pairs() if g.color_of(*p) is Color.BLUE]
                red = [p for p in g.pairs() if g.color_of(*p) is Color.RED]
                seed = red if len(red) <= len(blue) else blue
                best_total, best_wit = len(seed), tuple(sorted(seed))
                children = []
                for deletions in _branch_children(s):
                    rest = g.delete_edges(deletions)
                    subs = []
                    bound = len(deletions)
                    for comp in rest.connected_components():
                        sub, back = rest.induced_subgraph(comp)
                        if first_bicolored_p3(sub) is not None:
                            known = memo.get(sub)
                            lb = known[0] if known is not None else \
                                _component_lower_bound(sub, lb_cache)
                            subs.append((sub, back, lb))
                            bound += lb
                    children.append((bound, len(children), deletions, subs))
                children.sort(key=lambda c: (c[0], c[1]))
                for bound, _, deletions, subs in children:
                    if bound >= best_total:
                        stats.bump("bound_prune")
                        continue
                    total = len(deletions)
                    wit = list(deletions)
                    feasible = True
                    for idx, (sub, back, _) in enumerate(subs):
                        opt_c, wit_c = _component_optimum(sub, stats, memo,
                                                          lb_cache, depth + 1)
                        total += opt_c
                        wit.extend(edge_key(back[u], back[v]) for u, v in wit_c)
                        rest_lb = sum(lb for _, _, lb in subs[idx + 1:])
                        if total + rest_lb >= best_total:
                            feasible = False
                            break
                    if feasible and total < best_total:
                        best_total, best_wit = total, tuple(sorted(wit))
                result = (best_total, best_wit)
    memo[g] = result
    return result


def _component_optimum_parallel(g: ColoredGraph, stats: SearchStats,
                                memo: dict, lb_cache: dict) -> tuple[int, tuple[Edge, ...]]:
    """Branch-and-decompose with the root children raced on threads.

    Children do not share bounds or memo tables, so the result (not just
    the answer) is deterministic; only wall time varies.
    """
    from concurrent.futures import ThreadPoolExecutor

    if first_bicolored_p3(g) is None or g.n <= _ORACLE_BLOCK_VERTICES:
        return _component_optimum(g, stats, memo, lb_cache)
    s = None
    if _component_method(classify(g)) == "branch":
        s = find_branch_structure(g)
    if s is None:
        return _component_optimum(g, stats, memo, lb_cache)
    stats.nodes_expanded += 1
    stats.bump(s.kind.value)

    def run(deletions):
        local_stats = SearchStats()
        local_memo: dict = {}
        local_lb: dict = {}
        rest = g.delete_edges(deletions)
        total = len(deletions)
        wit = list(deletions)
        for comp in rest.connected_components():
            sub, back = rest.induced_subgraph(comp)
            if first_bicolored_p3(sub) is None:
                continue
            opt_c, wit_c = _component_optimum(sub, local_stats, local_memo, local_lb)
            total += opt_c
            wit.extend(edge_key(back[u], back[v]) for u, v in wit_c)
        return total, tuple(sorted(wit)), local_stats

    children = _branch_children(s)
    limit = int(os.environ.get("BPD_THREADS", 0)) or (os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=min(limit, len(children))) as pool:
        outcomes = list(pool.map(run, children))
    blue = [p for p in g.pairs() if g.color_of(*p) is Color.BLUE]
    red = [p for p in g.pairs() if g.color_of(*p) is Color.RED]
    seed = red if len(red) <= len(blue) else blue
    best_total, best_wit = len(seed), tuple(sorted(seed))
    for total, wit, local_stats in outcomes:
        stats.merge(local_stats)
        if total < best_total:
            best_total, best_wit = total, wit
    return best_total, best_wit


def solve_auto(inst: Instance, *, optimize: bool = False,
               parallel: bool = False) -> SolveResult:
    """Kernelize, split into components, dispatch each to the cheapest solver.

    Decision mode may stop at the trivial small-color-class solution;
    optimize mode skips that shortcut and uses the color-class size only
    as a budget bound, so the reported optimum is exact.
    """
    from .kernel import kernelize, trivial_yes_check

    g, k = inst.graph, inst.k
    t0 = time.perf_counter()
    stats = SearchStats(nodes_expanded=1)

    def done(answer, solution, optimum, method) -> SolveResult:
        stats.time_ms = (time.perf_counter() - t0) * 1000
        result = SolveResult(answer, solution, optimum,
                             stats, method)
        return _checked(g, k if not optimize else None, result)

    if not optimize:
        if k < 0:
            return done(False, None, None, "trivial-no")
        # P3-free inputs flow through the kernel instead, so they come
        # back as yes with the empty deletion set
        if first_bicolored_p3(g) is not None:
            trivial = trivial_yes_check(inst)
            if trivial is not None:
                return done(True, trivial, None, "trivial-yes")
        work = inst
    else:
        blue = sum(1 for p in g.pairs() if g.color_of(*p) is Color.BLUE)
        work = Instance(g, min(blue, g.m - blue))

    kinst, trace = kernelize(work, use_trivial_yes=False)
    forced_cost = trace.cost()
    if kinst.k < 0:
        return done(False, None, None, "kernel-only")

    kg = kinst.graph
    budget = kinst.k
    solutions: list[Edge] = []
    optimum_total = forced_cost
    methods = set()
    branch_comps = []
    for comp in kg.connected_components():
        sub, back = kg.induced_subgraph(comp)
        if sub.m == 0:
            continue
        if first_bicolored_p3(sub) is None:
            continue
        flags = classify(sub)
        method = _component_method(flags)
        if method == "branch":
            branch_comps.append((sub, back))
            continue
        res = _POLY_SOLVERS[method](Instance(sub, sub.m))
        stats.merge(res.stats)
        methods.add(method)
        optimum_total += res.optimum
        budget -= res.optimum
        solutions.extend(edge_key(back[u], back[v]) for u, v in res.solution)

    if not optimize and budget < 0:
        return done(False, None, None, "+".join(sorted(methods)) or "kernel-only")

    if branch_comps:
        # exact optima via branch and decompose; deep single-edge chains
        # can nest past the default interpreter recursion limit
        import sys
        limit = 64 + 16 * max(sub.m for sub, _ in branch_comps)
        if sys.getrecursionlimit() < limit:
            sys.setrecursionlimit(limit)
    memo: dict = {}
    lb_cache: dict = {}
    for sub, back in branch_comps:
        methods.add("branch")
        if parallel:
            comp_opt, comp_sol = _component_optimum_parallel(sub, stats, memo, lb_cache)
        else:
            comp_opt, comp_sol = _component_optimum(sub, stats, memo, lb_cache)
        optimum_total += comp_opt
        budget -= comp_opt
        solutions.extend(edge_key(back[u], back[v]) for u, v in comp_sol)
        if not optimize and budget < 0:
            return done(False, None, None, "+".join(sorted(methods)))

    lifted = trace.lift(tuple(solutions))
    method = "+".join(sorted(methods)) if methods else "kernel-only"
    if optimize:
        answer = optimum_total <= k
        return done(answer, lifted if answer else None, optimum_total, method)
    return done(True, lifted, None, method)
