"""Data reduction for bicolored P3 deletion instances.

Four reduction rules shrink an instance while preserving the answer:

1. components that contain no bicolored P3 are dropped, and components
   with at most five vertices are solved outright by brute force;
2. (optional) a bridge whose far side becomes P3-free once the bridge
   is cut can be deleted greedily, removing that side;
3. an edge lying in more witness triples than the budget allows must be
   in every solution, so it is deleted and the budget decreases;
4. a vertex whose closed neighborhood touches no P3 vertex is inert and
   is removed.

Additionally, when one color class is no larger than the budget, that
class itself is a solution and the instance is trivially yes.

``kernelize`` drives the rules to a fixed point and records every
action in a :class:`KernelTrace`, which converts any solution of the
kernel back into a solution of the original instance.  For yes
instances the kernel size obeys ``kernel_size_bound``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

from .detect import first_bicolored_p3, iter_bicolored_p3, p3_witness_vertices
from .graph import Color, ColoredGraph, Edge, Instance, edge_key

__all__ = [
    "Instance",
    "KernelTrace",
    "RemovedFreeComponent",
    "SolvedSmallComponent",
    "BridgeRule",
    "ForcedEdgeDeletion",
    "RemovedVertex",
    "TrivialYes",
    "rr1_components",
    "rr2_bridge",
    "rr3_heavy_edge",
    "rr4_far_vertex",
    "trivial_yes_check",
    "kernelize",
    "lift_solution",
    "replay_trace",
    "kernel_size_bound",
]

SMALL_COMPONENT_SIZE = 5


# -- trace steps (all ids refer to the original instance) ----------------------


@dataclass(frozen=True)
class RemovedFreeComponent:
    vertices: tuple[int, ...]
    cost = 0

    def to_json_dict(self) -> dict:
        return {"step": "removed_free_component", "vertices": list(self.vertices)}


@dataclass(frozen=True)
class SolvedSmallComponent:
    vertices: tuple[int, ...]
    forced_deletions: tuple[Edge, ...]
    cost: int

    def to_json_dict(self) -> dict:
        return {
            "step": "solved_small_component",
            "vertices": list(self.vertices),
            "forced_deletions": [list(e) for e in self.forced_deletions],
            "cost": self.cost,
        }


@dataclass(frozen=True)
class BridgeRule:
    deleted_edge: Edge
    removed_component: tuple[int, ...]
    cost = 1

    def to_json_dict(self) -> dict:
        return {
            "step": "bridge_rule",
            "deleted_edge": list(self.deleted_edge),
            "removed_component": list(self.removed_component),
        }


@dataclass(frozen=True)
class ForcedEdgeDeletion:
    edge: Edge
    cost = 1

    def to_json_dict(self) -> dict:
        return {"step": "forced_edge_deletion", "edge": list(self.edge)}


@dataclass(frozen=True)
class RemovedVertex:
    vertex: int
    cost = 0

    def to_json_dict(self) -> dict:
        return {"step": "removed_vertex", "vertex": self.vertex}


@dataclass(frozen=True)
class TrivialYes:
    color: Color
    edges: tuple[Edge, ...]

    @property
    def cost(self) -> int:
        return len(self.edges)

    def to_json_dict(self) -> dict:
        return {
            "step": "trivial_yes",
            "color": self.color.value,
            "edges": [list(e) for e in self.edges],
        }


Step = Union[RemovedFreeComponent, SolvedSmallComponent, BridgeRule,
             ForcedEdgeDeletion, RemovedVertex, TrivialYes]


@dataclass
class KernelTrace:
    original_n: int
    original_k: int
    original_max_degree: int
    steps: list = field(default_factory=list)
    kernel_to_original: tuple[int, ...] = ()
    final_k: int = 0

    def cost(self) -> int:
        return sum(s.cost for s in self.steps)

    def forced_deletions(self) -> tuple[Edge, ...]:
        out: list[Edge] = []
        for s in self.steps:
            if isinstance(s, SolvedSmallComponent):
                out.extend(s.forced_deletions)
            elif isinstance(s, BridgeRule):
                out.append(s.deleted_edge)
            elif isinstance(s, ForcedEdgeDeletion):
                out.append(s.edge)
            elif isinstance(s, TrivialYes):
                out.extend(s.edges)
        return tuple(sorted(out))

    def lift(self, kernel_solution) -> tuple[Edge, ...]:
        """Map a kernel deletion set back to original ids, adding forced edges."""
        back = self.kernel_to_original
        out = list(self.forced_deletions())
        for u, v in kernel_solution:
            if not (0 <= u < len(back) and 0 <= v < len(back)):
                raise ValueError(f"kernel edge ({u}, {v}) outside kernel id range")
            out.append(edge_key(back[u], back[v]))
        if len(set(out)) != len(out):
            raise ValueError("lifted solution contains duplicate edges")
        return tuple(sorted(out))

    def bound_check(self) -> dict:
        bound = kernel_size_bound(self.original_k, self.original_max_degree)
        n_kernel = len(self.kernel_to_original)
        return {
            "kernel_vertices": n_kernel,
            "vertex_bound": bound,
            "within_bound": n_kernel <= bound,
        }

    def to_json_dict(self) -> dict:
        return {
            "steps": [s.to_json_dict() for s in self.steps],
            "kernel_to_original": list(self.kernel_to_original),
            "original_k": self.original_k,
            "final_k": self.final_k,
            "cost": self.cost(),
            "bound": self.bound_check(),
        }


def lift_solution(trace: KernelTrace, kernel_solution) -> tuple[Edge, ...]:
    return trace.lift(kernel_solution)


def kernel_size_bound(k: int, max_degree: int) -> int:
    """Vertex bound a kernelized yes instance satisfies."""
    cap = min(k, 2 * max_degree)
    return 6 * k * max_degree * cap + 6 * k * cap


# -- reduction engine -----------------------------------------------------------


class _State:
    """Current shrunken instance plus the translation back to original ids."""

    def __init__(self, inst: Instance):
        self.graph = inst.graph
        self.k = inst.k
        self.to_original = tuple(range(inst.graph.n))
        self.steps: list[Step] = []

    def originals(self, vertices) -> tuple[int, ...]:
        return tuple(sorted(self.to_original[v] for v in vertices))

    def original_edge(self, u: int, v: int) -> Edge:
        return edge_key(self.to_original[u], self.to_original[v])

    def remove_vertices(self, vertices) -> None:
        doomed = set(vertices)
        keep = [v for v in range(self.graph.n) if v not in doomed]
        self.graph, back = self.graph.induced_subgraph(keep)
        self.to_original = tuple(self.to_original[old] for old in back)

    def delete_edge(self, u: int, v: int) -> None:
        self.graph = self.graph.delete_edges([(u, v)])

    def instance(self) -> Instance:
        return Instance(self.graph, self.k)

    def trace(self, original: Instance) -> KernelTrace:
        return KernelTrace(
            original_n=original.graph.n,
            original_k=original.k,
            original_max_degree=max(
                (original.graph.degree(v) for v in range(original.graph.n)), default=0),
            steps=self.steps,
            kernel_to_original=self.to_original,
            final_k=self.k,
        )


def small_component_optimum(g: ColoredGraph) -> tuple[int, tuple[Edge, ...]]:
    """Brute-force optimum by increasing deletion-set size, first hit wins."""
    if first_bicolored_p3(g) is None:
        return 0, ()
    edges = g.pairs()
    for size in range(1, len(edges) + 1):
        for combo in itertools.combinations(edges, size):
            if first_bicolored_p3(g.delete_edges(combo)) is None:
                return size, tuple(combo)
    raise AssertionError("unreachable: deleting every edge removes all P3s")


def _apply_rr1(state: _State) -> bool:
    changed = False
    while True:
        target = None
        for comp in state.graph.connected_components():
            sub, back = state.graph.induced_subgraph(comp)
            if first_bicolored_p3(sub) is None:
                target = (comp, None, None)
                break
            if len(comp) <= SMALL_COMPONENT_SIZE:
                target = (comp, sub, back)
                break
        if target is None:
            return changed
        comp, sub, back = target
        if sub is None:
            state.steps.append(RemovedFreeComponent(state.originals(comp)))
        else:
            cost, local = small_component_optimum(sub)
            forced = tuple(sorted(state.original_edge(back[u], back[v])
                                  for u, v in local))
            state.steps.append(SolvedSmallComponent(state.originals(comp), forced, cost))
            state.k -= cost
        state.remove_vertices(comp)
        changed = True
        if state.k < 0:
            return changed


def _apply_rr2(state: _State) -> bool:
    changed = False
    while state.k >= 0:
        g = state.graph
        hit = None
        for u, v in sorted(g.bridges()):
            for leaf, center in ((u, v), (v, u)):
                c = g.color_of(leaf, center)
                opp = g.red_neighbors if c is Color.BLUE else g.blue_neighbors
                if not any(w != leaf and not g.has_edge(leaf, w) for w in opp(center)):
                    continue
                cut = g.delete_edges([(leaf, center)])
                comp = next(cc for cc in cut.connected_components() if center in cc)
                far, _ = cut.induced_subgraph(comp)
                if first_bicolored_p3(far) is None:
                    hit = (leaf, center, comp)
                    break
            if hit:
                break
        if hit is None:
            return changed
        leaf, center, comp = hit
        state.steps.append(BridgeRule(state.original_edge(leaf, center),
                                      state.originals(comp)))
        state.delete_edge(leaf, center)
        state.remove_vertices(comp)
        state.k -= 1
        changed = True
    return changed


def _apply_rr3(state: _State) -> bool:
    changed = False
    while state.k >= 0:
        g = state.graph
        heavy = next((e for e in g.pairs()
                      if len(p3_witness_vertices(g, *e)) > state.k), None)
        if heavy is None:
            return changed
        state.steps.append(ForcedEdgeDeletion(state.original_edge(*heavy)))
        state.delete_edge(*heavy)
        state.k -= 1
        changed = True
    return changed


def _apply_rr4(state: _State) -> bool:
    # one batch suffices: removing inert vertices never touches a P3,
    # so the P3 vertex set is unchanged afterwards
    g = state.graph
    in_p3: set[int] = set()
    for u, v, w in iter_bicolored_p3(g):
        in_p3.update((u, v, w))
    doomed = [v for v in range(g.n)
              if v not in in_p3 and not any(u in in_p3 for u in g.neighbors(v))]
    if not doomed:
        return False
    for v in doomed:
        state.steps.append(RemovedVertex(state.to_original[v]))
    state.remove_vertices(doomed)
    return True


def _apply_trivial_yes(state: _State) -> bool:
    if first_bicolored_p3(state.graph) is None:
        # nothing to solve; the component rule cleans up at cost 0
        # instead of wasting budget on a needless color-class deletion
        return False
    found = trivial_yes_check(state.instance())
    if not found:
        return False
    color = state.graph.color_of(*found[0])
    state.steps.append(TrivialYes(
        color, tuple(sorted(state.original_edge(u, v) for u, v in found))))
    state.graph = state.graph.delete_edges(found)
    state.k -= len(found)
    return True


# -- public operations -----------------------------------------------------------


def _run(inst: Instance, rule) -> tuple[Instance, KernelTrace]:
    state = _State(inst)
    rule(state)
    return state.instance(), state.trace(inst)


def rr1_components(inst: Instance) -> tuple[Instance, KernelTrace]:
    """Drop P3-free components; solve components of at most five vertices."""
    return _run(inst, _apply_rr1)


def rr2_bridge(inst: Instance) -> tuple[Instance, KernelTrace]:
    """Cut bridges whose far side is P3-free without the bridge."""
    return _run(inst, _apply_rr2)


def rr3_heavy_edge(inst: Instance) -> tuple[Instance, KernelTrace]:
    """Delete edges with more P3 witness vertices than the budget."""
    return _run(inst, _apply_rr3)


def rr4_far_vertex(inst: Instance) -> tuple[Instance, KernelTrace]:
    """Remove vertices whose closed neighborhood avoids all P3 vertices."""
    return _run(inst, _apply_rr4)


def trivial_yes_check(inst: Instance) -> Optional[tuple[Edge, ...]]:
    """The smaller color class, when it fits the budget outright.

    Every bicolored P3 uses one edge of each color, so either class is a
    solution; if the smaller one is within k the instance is yes without
    any search.  Ties go to red for determinism.
    """
    g = inst.graph
    red = [p for p in g.pairs() if g.color_of(*p) is Color.RED]
    if len(red) <= g.m - len(red):
        small = red
    else:
        small = [p for p in g.pairs() if g.color_of(*p) is Color.BLUE]
    if len(small) <= inst.k:
        return tuple(small)
    return None


def kernelize(inst: Instance, *, use_bridge_rule: bool = False,
              use_trivial_yes: bool = True) -> tuple[Instance, KernelTrace]:
    """Reduce an instance to a fixed point of the reduction rules.

    Rules run in passes: trivial-yes, heavy edges, inert vertices, then
    components; passes repeat because a pass can lower the budget and
    re-arm an earlier rule.  A negative resulting budget marks a no
    instance.  ``use_trivial_yes=False`` keeps the instance structure
    intact so optimum counts survive kernelization; the bridge rule is
    off by default.
    """
    state = _State(inst)
    changed = True
    while changed and state.k >= 0:
        changed = False
        if use_trivial_yes and _apply_trivial_yes(state):
            changed = True
        if state.k >= 0 and _apply_rr3(state):
            changed = True
        if state.k >= 0 and _apply_rr4(state):
            changed = True
        if state.k >= 0 and _apply_rr1(state):
            changed = True
        if use_bridge_rule and state.k >= 0 and _apply_rr2(state):
            changed = True
    return state.instance(), state.trace(inst)


def replay_trace(inst: Instance, trace: KernelTrace) -> Instance:
    """Re-apply a trace to its original instance, reproducing the kernel.

    Used to validate traces: the result must equal the kernel instance
    after relabeling through ``kernel_to_original``.
    """
    alive = set(range(inst.graph.n))
    colors = {pair: inst.graph.color_of(*pair) for pair in inst.graph.pairs()}
    k = inst.k

    def drop_vertices(vertices):
        for v in vertices:
            alive.discard(v)
        for pair in [p for p in colors if p[0] not in alive or p[1] not in alive]:
            del colors[pair]

    for s in trace.steps:
        if isinstance(s, (RemovedFreeComponent, SolvedSmallComponent)):
            drop_vertices(s.vertices)
            k -= s.cost
        elif isinstance(s, BridgeRule):
            del colors[s.deleted_edge]
            drop_vertices(s.removed_component)
            k -= 1
        elif isinstance(s, ForcedEdgeDeletion):
            del colors[s.edge]
            k -= 1
        elif isinstance(s, RemovedVertex):
            drop_vertices([s.vertex])
        elif isinstance(s, TrivialYes):
            for e in s.edges:
                del colors[e]
            k -= len(s.edges)
        else:
            raise ValueError(f"unknown trace step {s!r}")
    order = sorted(alive)
    if tuple(order) != trace.kernel_to_original:
        raise ValueError("trace does not reproduce the kernel vertex set")
    index = {old: new for new, old in enumerate(order)}
    g = ColoredGraph(len(order), [(index[u], index[v], c) for (u, v), c in colors.items()])
    return Instance(g, k)
