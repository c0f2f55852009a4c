"""Two-edge-colored graphs and the ``bpd v1`` interchange format.

A :class:`ColoredGraph` is a simple undirected graph on vertices
``0 .. n-1`` whose edges each carry one of two colors, red or blue.  The
class is immutable and has value semantics: two graphs compare equal iff
they have the same vertex count and the same colored edge set.  All edge
deletions and vertex removals therefore produce new graphs.

The text format ``bpd v1`` is line based::

    # optional comment lines
    p bpd <n> <m>
    <u> <v> <r|b>     (m edge lines, 0-based vertex ids)

Parsing rejects duplicate vertex pairs, self-loops, ids outside
``0 .. n-1`` and edge counts that do not match the header.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

Edge = tuple[int, int]


class Color(enum.Enum):
    RED = "r"
    BLUE = "b"

    def other(self) -> "Color":
        return Color.BLUE if self is Color.RED else Color.RED

    def __repr__(self) -> str:  # keep witness dumps short
        return self.name


class FormatError(ValueError):
    """Raised for malformed bpd v1 input."""


def edge_key(u: int, v: int) -> Edge:
    """Normalized representation of the undirected edge {u, v}."""
    if u == v:
        raise ValueError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


class ColoredGraph:
    """Immutable two-edge-colored simple graph.

    ``edges`` is an iterable of ``(u, v, color)`` triples.  Neighbor lists
    are kept sorted, and color lookup for a vertex pair is O(1).
    """

    __slots__ = ("n", "_color", "_adj_blue", "_adj_red", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int, Color]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        color: dict[Edge, Color] = {}
        adj_blue: list[list[int]] = [[] for _ in range(n)]
        adj_red: list[list[int]] = [[] for _ in range(n)]
        for u, v, c in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"vertex id out of range in edge ({u}, {v})")
            key = edge_key(u, v)
            if key in color:
                raise ValueError(f"duplicate edge {key}")
            if not isinstance(c, Color):
                raise ValueError(f"bad color {c!r} for edge {key}")
            color[key] = c
            side = adj_blue if c is Color.BLUE else adj_red
            side[u].append(v)
            side[v].append(u)
        for lst in adj_blue:
            lst.sort()
        for lst in adj_red:
            lst.sort()
        self._color = color
        self._adj_blue = [tuple(lst) for lst in adj_blue]
        self._adj_red = [tuple(lst) for lst in adj_red]
        self._hash: Optional[int] = None

    # -- basic accessors -------------------------------------------------

    @property
    def m(self) -> int:
        return len(self._color)

    def pairs(self) -> list[Edge]:
        """All edges as normalized pairs, sorted."""
        return sorted(self._color)

    def edges(self) -> list[tuple[int, int, Color]]:
        """All edges as sorted ``(u, v, color)`` triples."""
        return [(u, v, self._color[(u, v)]) for u, v in self.pairs()]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._color or (v, u) in self._color

    def color_of(self, u: int, v: int) -> Optional[Color]:
        """Color of the edge {u, v}, or ``None`` if absent."""
        c = self._color.get((u, v))
        if c is None and u != v:
            c = self._color.get((v, u))
        return c

    def neighbors(self, v: int) -> list[int]:
        """Sorted list of all neighbors of ``v``."""
        blue, red = self._adj_blue[v], self._adj_red[v]
        if not red:
            return list(blue)
        if not blue:
            return list(red)
        return sorted(blue + red)

    def colored_neighbors(self, v: int) -> list[tuple[int, Color]]:
        """Sorted list of ``(neighbor, edge color)`` pairs for ``v``."""
        out = [(u, Color.BLUE) for u in self._adj_blue[v]]
        out += [(u, Color.RED) for u in self._adj_red[v]]
        return sorted(out)

    def closed_neighborhood(self, v: int) -> list[int]:
        """N[v]: v together with its neighbors, sorted."""
        return sorted(self.neighbors(v) + [v])

    def second_neighborhood(self, v: int) -> list[int]:
        """Vertices at distance exactly two from ``v``, sorted."""
        close = set(self.closed_neighborhood(v))
        out = {w for u in self.neighbors(v) for w in self.neighbors(u)}
        return sorted(out - close)

    def blue_neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj_blue[v]

    def red_neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj_red[v]

    def degree(self, v: int) -> int:
        return len(self._adj_blue[v]) + len(self._adj_red[v])

    def blue_degree(self, v: int) -> int:
        return len(self._adj_blue[v])

    def red_degree(self, v: int) -> int:
        return len(self._adj_red[v])

    def edges_between(self, a: Iterable[int], b: Iterable[int]) -> list[tuple[int, int, Color]]:
        """Sorted colored edges with one endpoint in ``a`` and one in ``b``."""
        sa, sb = set(a), set(b)
        out = []
        for (u, v), c in self._color.items():
            if (u in sa and v in sb) or (u in sb and v in sa):
                out.append((u, v, c))
        return sorted(out)

    def edges_within(self, a: Iterable[int]) -> list[tuple[int, int, Color]]:
        """Sorted colored edges with both endpoints in ``a``."""
        sa = set(a)
        return sorted((u, v, c) for (u, v), c in self._color.items() if u in sa and v in sa)

    # -- derived graphs ---------------------------------------------------

    def delete_edges(self, pairs: Iterable[Edge]) -> "ColoredGraph":
        """New graph with the given (existing) edges removed."""
        gone = {edge_key(u, v) for u, v in pairs}
        for key in gone:
            if key not in self._color:
                raise ValueError(f"cannot delete missing edge {key}")
        return ColoredGraph(
            self.n,
            ((u, v, c) for (u, v), c in self._color.items() if (u, v) not in gone),
        )

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["ColoredGraph", tuple[int, ...]]:
        """Induced subgraph on ``vertices`` with contiguous ids.

        Returns ``(subgraph, new_to_old)`` where ``new_to_old[i]`` is the
        original id of the subgraph's vertex ``i``.
        """
        keep = sorted(set(vertices))
        index = {old: new for new, old in enumerate(keep)}
        sub_edges = []
        for (u, v), c in self._color.items():
            iu, iv = index.get(u), index.get(v)
            if iu is not None and iv is not None:
                sub_edges.append((iu, iv, c))
        return ColoredGraph(len(keep), sub_edges), tuple(keep)

    def connected_components(self) -> list[tuple[int, ...]]:
        """Vertex sets of the connected components, each sorted, ordered by minimum vertex."""
        seen = [False] * self.n
        comps = []
        for start in range(self.n):
            if seen[start]:
                continue
            stack = [start]
            seen[start] = True
            comp = []
            while stack:
                v = stack.pop()
                comp.append(v)
                for u in self._adj_blue[v] + self._adj_red[v]:
                    if not seen[u]:
                        seen[u] = True
                        stack.append(u)
            comps.append(tuple(sorted(comp)))
        return comps

    def bridges(self) -> frozenset[Edge]:
        """All bridges (color-blind), via iterative lowpoint DFS."""
        disc = [-1] * self.n
        low = [0] * self.n
        out: set[Edge] = set()
        timer = 0
        for root in range(self.n):
            if disc[root] != -1:
                continue
            # stack entries: (vertex, parent, iterator over neighbors)
            stack = [(root, -1, iter(self.neighbors(root)))]
            disc[root] = low[root] = timer
            timer += 1
            while stack:
                v, parent, it = stack[-1]
                advanced = False
                for u in it:
                    if disc[u] == -1:
                        disc[u] = low[u] = timer
                        timer += 1
                        stack.append((u, v, iter(self.neighbors(u))))
                        advanced = True
                        break
                    elif u != parent:
                        low[v] = min(low[v], disc[u])
                if not advanced:
                    stack.pop()
                    if stack:
                        pv = stack[-1][0]
                        low[pv] = min(low[pv], low[v])
                        if low[v] > disc[pv]:
                            out.add(edge_key(pv, v))
        return frozenset(out)

    # -- value semantics --------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return self.n == other.n and self._color == other._color

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._color.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"ColoredGraph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class InstanceStats:
    """Size and degree statistics of an instance.

    ``dual`` is m - k (the deletion budget's complement), ``None`` when no
    budget was supplied.
    """

    n: int
    m: int
    m_red: int
    m_blue: int
    max_degree: int
    max_blue_degree: int
    max_red_degree: int
    dual: Optional[int] = None


@dataclass(frozen=True)
class Instance:
    """A problem instance: graph plus edge-deletion budget.

    ``k`` may be negative, which marks a branch or kernel state that is
    already known infeasible.
    """

    graph: ColoredGraph
    k: int


def instance_stats(g: ColoredGraph, k: Optional[int] = None) -> InstanceStats:
    m_blue = sum(len(g.blue_neighbors(v)) for v in range(g.n)) // 2
    m_red = g.m - m_blue
    return InstanceStats(
        n=g.n,
        m=g.m,
        m_red=m_red,
        m_blue=m_blue,
        max_degree=max((g.degree(v) for v in range(g.n)), default=0),
        max_blue_degree=max((g.blue_degree(v) for v in range(g.n)), default=0),
        max_red_degree=max((g.red_degree(v) for v in range(g.n)), default=0),
        dual=None if k is None else g.m - k,
    )


# -- bpd v1 text format ---------------------------------------------------

_COLOR_BY_CHAR = {"r": Color.RED, "b": Color.BLUE}


def parse_bpd(text: str) -> ColoredGraph:
    """Parse a graph in bpd v1 format."""
    header: Optional[tuple[int, int]] = None
    edges: list[tuple[int, int, Color]] = []
    seen: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if header is None:
            if fields[:2] != ["p", "bpd"] or len(fields) != 4:
                raise FormatError(f"line {lineno}: expected header 'p bpd <n> <m>', got {line!r}")
            try:
                n, m = int(fields[2]), int(fields[3])
            except ValueError:
                raise FormatError(f"line {lineno}: non-integer counts in header {line!r}") from None
            if n < 0 or m < 0:
                raise FormatError(f"line {lineno}: negative counts in header")
            header = (n, m)
            continue
        if len(fields) != 3:
            raise FormatError(f"line {lineno}: expected '<u> <v> <r|b>', got {line!r}")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer vertex id in {line!r}") from None
        color = _COLOR_BY_CHAR.get(fields[2])
        if color is None:
            raise FormatError(f"line {lineno}: color must be 'r' or 'b', got {fields[2]!r}")
        if u == v:
            raise FormatError(f"line {lineno}: self-loop at vertex {u}")
        n = header[0]
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f"line {lineno}: vertex id out of range 0..{n - 1}")
        key = edge_key(u, v)
        if key in seen:
            raise FormatError(f"line {lineno}: duplicate edge {key}")
        seen.add(key)
        edges.append((u, v, color))
    if header is None:
        raise FormatError("missing 'p bpd <n> <m>' header")
    if len(edges) != header[1]:
        raise FormatError(f"header announces {header[1]} edges, file has {len(edges)}")
    return ColoredGraph(header[0], edges)


def format_bpd(g: ColoredGraph, comment: Optional[str] = None) -> str:
    """Serialize to canonical bpd v1 text (edges sorted, no comments by default)."""
    lines = []
    if comment:
        for part in comment.splitlines():
            lines.append(f"# {part}")
    lines.append(f"p bpd {g.n} {g.m}")
    for u, v, c in g.edges():
        lines.append(f"{u} {v} {c.value}")
    return "\n".join(lines) + "\n"


def read_bpd(path) -> ColoredGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_bpd(fh.read())


def write_bpd(g: ColoredGraph, path, comment: Optional[str] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_bpd(g, comment))


def all_pairs(n: int) -> Iterator[Edge]:
    for u in range(n):
        for v in range(u + 1, n):
            yield (u, v)
