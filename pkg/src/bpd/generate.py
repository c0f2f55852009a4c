"""Instance generators: SAT reduction, fixture gadgets, random families.

The SAT reduction turns a 3-CNF formula in which every variable occurs
in at most four clauses into an equivalent deletion instance.  Each
variable becomes a star with four blue and four red leaves; each clause
becomes a seven-vertex blue clique wired by one blue and six red edges
to three of the variable leaves, chosen by occurrence number.  The
budget is 4 per variable plus 14 per clause.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .graph import Color, ColoredGraph, Instance


class FormulaError(ValueError):
    """A formula violates the 3-literals / 4-occurrences promise."""


@dataclass(frozen=True)
class CnfFormula:
    """CNF with 1-based variable ids; negative literal = negated variable."""

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        occurrences = [0] * (self.num_vars + 1)
        for idx, clause in enumerate(self.clauses):
            if len(clause) != 3:
                raise FormulaError(f"clause {idx} has {len(clause)} literals, need 3")
            seen = set()
            for lit in clause:
                var = abs(lit)
                if lit == 0 or var > self.num_vars:
                    raise FormulaError(f"clause {idx} has bad literal {lit}")
                if var in seen:
                    raise FormulaError(
                        f"variable x{var} appears twice in clause {idx}")
                seen.add(var)
                occurrences[var] += 1
        heavy = next((v for v in range(1, self.num_vars + 1) if occurrences[v] > 4), None)
        if heavy is not None:
            raise FormulaError(
                f"variable x{heavy} occurs {occurrences[heavy]} times, at most 4 allowed")


def parse_dimacs(text: str) -> CnfFormula:
    num_vars = None
    lits: list[int] = []
    clauses: list[tuple[int, int, int]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormulaError(f"bad problem line: {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(lits))
                lits = []
            else:
                lits.append(lit)
    if num_vars is None:
        raise FormulaError("missing 'p cnf' problem line")
    if lits:
        raise FormulaError("last clause not terminated by 0")
    return CnfFormula(num_vars, tuple(clauses))


def to_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    lines.extend(" ".join(str(l) for l in clause) + " 0" for clause in f.clauses)
    return "\n".join(lines) + "\n"


def sat_brute_force(f: CnfFormula) -> bool:
    """Exhaustive satisfiability check, exponential in the variable count."""
    for bits in itertools.product((False, True), repeat=f.num_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in clause) for clause in f.clauses):
            return True
    return False


def random_formula(num_vars: int, num_clauses: int, seed: int) -> CnfFormula:
    """Random formula respecting the 3-distinct-variables / 4-occurrences promise."""
    rng = random.Random(seed)
    budget = {v: 4 for v in range(1, num_vars + 1)}
    clauses = []
    for _ in range(num_clauses):
        avail = [v for v, b in budget.items() if b > 0]
        if len(avail) < 3:
            break
        chosen = rng.sample(avail, 3)
        for v in chosen:
            budget[v] -= 1
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in sorted(chosen)))
    return CnfFormula(num_vars, tuple(clauses))


# -- the reduction ---------------------------------------------------------------


@dataclass(frozen=True)
class ReductionLayout:
    """Vertex roles of a reduced instance.

    Variable i (0-based) owns ids 9i..9i+8: the star center, then four
    "true" leaves (blue), then four "false" leaves (red).  Clause j owns
    seven ids after the variable blocks: three clique vertices paired
    with the clause's literals, then four auxiliary clique vertices.
    The literal vertices themselves reuse variable-leaf ids, recorded in
    ``identification``.
    """

    num_vars: int
    variable_center: tuple[int, ...]
    variable_true: tuple[tuple[int, ...], ...]
    variable_false: tuple[tuple[int, ...], ...]
    clause_a: tuple[tuple[int, ...], ...]
    clause_b: tuple[tuple[int, ...], ...]
    clause_w: tuple[tuple[int, ...], ...]
    occurrence: tuple[tuple[int, ...], ...]
    k: int

    def to_json_dict(self) -> dict:
        return {
            "num_vars": self.num_vars,
            "variable_center": list(self.variable_center),
            "variable_true": [list(t) for t in self.variable_true],
            "variable_false": [list(t) for t in self.variable_false],
            "clause_a": [list(t) for t in self.clause_a],
            "clause_b": [list(t) for t in self.clause_b],
            "clause_w": [list(t) for t in self.clause_w],
            "occurrence": [list(t) for t in self.occurrence],
            "k": self.k,
        }


def reduce_sat_to_bpd(f: CnfFormula) -> tuple[Instance, ReductionLayout]:
    """Equivalent deletion instance for a (3,4) formula.

    The formula is satisfiable iff the result is a yes instance.
    """
    nx = f.num_vars
    nc = len(f.clauses)
    edges: list[tuple[int, int, Color]] = []
    centers, trues, falses = [], [], []
    for i in range(nx):
        v = 9 * i
        t = tuple(range(v + 1, v + 5))
        fl = tuple(range(v + 5, v + 9))
        centers.append(v)
        trues.append(t)
        falses.append(fl)
        edges.extend((v, x, Color.BLUE) for x in t)
        edges.extend((v, x, Color.RED) for x in fl)

    seen_so_far = [0] * (nx + 1)
    clause_a, clause_b, clause_w, occ_numbers = [], [], [], []
    for j, clause in enumerate(f.clauses):
        base = 9 * nx + 7 * j
        b = tuple(range(base, base + 3))
        w = tuple(range(base + 3, base + 7))
        a = []
        occs = []
        for lit in clause:
            var = abs(lit) - 1
            seen_so_far[abs(lit)] += 1
            psi = seen_so_far[abs(lit)]
            occs.append(psi)
            pool = trues[var] if lit > 0 else falses[var]
            a.append(pool[psi - 1])
        clause_a.append(tuple(a))
        clause_b.append(b)
        clause_w.append(w)
        occ_numbers.append(tuple(occs))
        clique = b + w
        edges.extend((x, y, Color.BLUE) for x, y in itertools.combinations(clique, 2))
        for p in range(3):
            edges.append((a[p], b[p], Color.BLUE))
            edges.extend((a[p], u, Color.RED) for u in clique if u != b[p])

    g = ColoredGraph(9 * nx + 7 * nc, edges)
    k = 4 * nx + 14 * nc
    assert g.n == 9 * nx + 7 * nc
    assert g.m == 8 * nx + 42 * nc
    assert all(g.degree(v) <= 9 for v in range(g.n)), \
        "reduction never exceeds degree 9"
    layout = ReductionLayout(
        num_vars=nx,
        variable_center=tuple(centers),
        variable_true=tuple(trues),
        variable_false=tuple(falses),
        clause_a=tuple(clause_a),
        clause_b=tuple(clause_b),
        clause_w=tuple(clause_w),
        occurrence=tuple(occ_numbers),
        k=k,
    )
    return Instance(g, k), layout


# -- fixtures --------------------------------------------------------------------


def _variable_gadget() -> ColoredGraph:
    edges = [(0, x, Color.BLUE) for x in range(1, 5)]
    edges += [(0, x, Color.RED) for x in range(5, 9)]
    return ColoredGraph(9, edges)


def _clause_gadget() -> ColoredGraph:
    # literal vertices 0..2 stand alone, clique vertices 3..9
    a = (0, 1, 2)
    b = (3, 4, 5)
    clique = tuple(range(3, 10))
    edges = [(x, y, Color.BLUE) for x, y in itertools.combinations(clique, 2)]
    for p in range(3):
        edges.append((a[p], b[p], Color.BLUE))
        edges.extend((a[p], u, Color.RED) for u in clique if u != b[p])
    return ColoredGraph(10, edges)


def _alternating_cycle(length: int) -> ColoredGraph:
    if length % 2 != 0 or length < 4:
        raise ValueError(f"alternating cycle length must be even and >= 4, got {length}")
    edges = [
        (i, (i + 1) % length, Color.BLUE if i % 2 == 0 else Color.RED)
        for i in range(length)
    ]
    return ColoredGraph(length, edges)


_FOUR_VERTEX = {
    # vertex roles (u, v, w, z) = (0, 1, 2, 3); {u,w} is the non-edge
    "lc": [(0, 1, Color.BLUE), (1, 2, Color.RED), (0, 3, Color.BLUE),
           (1, 3, Color.RED), (2, 3, Color.BLUE)],
    "lo": [(0, 1, Color.BLUE), (1, 2, Color.RED), (0, 3, Color.BLUE),
           (1, 3, Color.BLUE), (2, 3, Color.RED)],
    "iiz": [(0, 1, Color.BLUE), (1, 2, Color.RED), (0, 3, Color.RED),
            (1, 3, Color.BLUE), (2, 3, Color.BLUE)],
}


def gadget(kind: str, length: int = 0) -> ColoredGraph:
    """Named fixture graphs in canonical vertex order."""
    if kind == "variable":
        return _variable_gadget()
    if kind == "clause":
        return _clause_gadget()
    if kind in _FOUR_VERTEX:
        return ColoredGraph(4, _FOUR_VERTEX[kind])
    if kind == "hourglass":
        # roles (u, v, w, z1, z2) = (0, 1, 2, 3, 4)
        return ColoredGraph(5, [
            (0, 1, Color.BLUE), (1, 2, Color.RED), (0, 3, Color.BLUE),
            (1, 3, Color.RED), (1, 4, Color.BLUE), (2, 4, Color.RED),
        ])
    if kind == "alternating_cycle":
        return _alternating_cycle(length)
    raise ValueError(f"unknown gadget kind {kind!r}")


GADGET_KINDS = ("variable", "clause", "lc", "lo", "iiz", "hourglass",
                "alternating_cycle")


def random_instance(n: int, edge_prob: float, blue_prob: float,
                    seed: int) -> ColoredGraph:
    """Seeded Erdős–Rényi graph with independently colored edges."""
    if not (0 <= edge_prob <= 1 and 0 <= blue_prob <= 1):
        raise ValueError("probabilities must lie in [0, 1]")
    rng = random.Random(seed)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < edge_prob:
                color = Color.BLUE if rng.random() < blue_prob else Color.RED
                edges.append((u, v, color))
    return ColoredGraph(n, edges)
