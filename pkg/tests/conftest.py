"""Shared brute-force references and corpus helpers.

Everything here recomputes answers from first principles (triple loops,
subset enumeration) so the library is never checked against itself.
"""

import itertools

from hypothesis import strategies as st

from bpd import Color, ColoredGraph, random_instance


def brute_p3_pairs(g) -> set:
    """All induced bicolored P3s as frozensets of two edge keys."""
    out = set()
    for v in range(g.n):
        for u in range(g.n):
            if u == v:
                continue
            for w in range(u + 1, g.n):
                if w == v:
                    continue
                cu, cw = g.color_of(u, v), g.color_of(v, w)
                if cu is None or cw is None or cu is cw:
                    continue
                if g.has_edge(u, w):
                    continue
                e1 = (min(u, v), max(u, v))
                e2 = (min(v, w), max(v, w))
                out.add(frozenset((e1, e2)))
    return out


def brute_has_p3(g) -> bool:
    return bool(brute_p3_pairs(g))


def brute_min_deletions(g, k_max=None):
    """Smallest deletion set by subset enumeration; (size, first witness).

    Exponential in m; keep m small.  Returns (None, None) if nothing
    within k_max works.
    """
    pairs = g.pairs()
    limit = len(pairs) if k_max is None else min(k_max, len(pairs))
    for r in range(limit + 1):
        for subset in itertools.combinations(pairs, r):
            if not brute_has_p3(g.delete_edges(subset)):
                return r, subset
    return None, None


def brute_max_packing(g) -> int:
    """Maximum edge-disjoint P3 packing by exhaustive recursion."""
    p3s = [tuple(sorted(p)) for p in brute_p3_pairs(g)]

    def rec(i: int, used: frozenset) -> int:
        if i == len(p3s):
            return 0
        best = rec(i + 1, used)
        e1, e2 = p3s[i]
        if e1 not in used and e2 not in used:
            best = max(best, 1 + rec(i + 1, used | {e1, e2}))
        return best

    return rec(0, frozenset())


def brute_bridges(g) -> set:
    """Edges whose removal increases the component count."""
    base = len(g.connected_components())
    return {
        e for e in g.pairs()
        if len(g.delete_edges([e]).connected_components()) > base
    }


def graph_corpus(seed: int, count: int, max_n: int, p_lo=0.1, p_hi=0.8):
    """Deterministic stream of small random graphs."""
    import random

    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, max_n)
        p = p_lo + rng.random() * (p_hi - p_lo)
        out.append(random_instance(n, p, rng.random(), rng.randint(0, 10**9)))
    return out


@st.composite
def colored_graphs(draw, max_n: int = 6):
    n = draw(st.integers(min_value=0, max_value=max_n))
    edges = []
    for u, v in itertools.combinations(range(n), 2):
        pick = draw(st.sampled_from(("none", "blue", "red")))
        if pick == "blue":
            edges.append((u, v, Color.BLUE))
        elif pick == "red":
            edges.append((u, v, Color.RED))
    return ColoredGraph(n, edges)
