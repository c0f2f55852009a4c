import itertools

import pytest
from bpd import (
    CnfFormula,
    Color,
    ColoredGraph,
    FormulaError,
    GADGET_KINDS,
    count_bicolored_p3,
    enumerate_bicolored_p3,
    gadget,
    instance_stats,
    parse_dimacs,
    random_formula,
    random_instance,
    reduce_sat_to_bpd,
    sat_brute_force,
    to_dimacs,
)

B, R = Color.BLUE, Color.RED


# -- formulas ---------------------------------------------------------------


def test_formula_validation():
    CnfFormula(3, ((1, -2, 3),))
    with pytest.raises(FormulaError):
        CnfFormula(3, ((1, 2),))  # short clause
    with pytest.raises(FormulaError):
        CnfFormula(3, ((1, -1, 2),))  # repeated variable
    with pytest.raises(FormulaError):
        CnfFormula(2, ((1, 2, 3),))  # variable out of range
    with pytest.raises(FormulaError):
        CnfFormula(3, ((0, 1, 2),))  # zero literal


def test_formula_occurrence_cap_names_the_variable():
    clauses = (
        (1, 2, 3), (1, 2, 4), (1, 3, 4), (1, 2, 3), (1, 3, 4),
    )
    with pytest.raises(FormulaError) as err:
        CnfFormula(4, clauses)
    assert "x1" in str(err.value)


def test_sat_brute_force():
    assert sat_brute_force(CnfFormula(3, ()))
    assert sat_brute_force(CnfFormula(3, ((1, 2, 3),)))
    assert sat_brute_force(CnfFormula(3, ((1, 2, 3), (-1, -2, -3))))
    # x1 fixed both ways across two clauses that only it can satisfy
    f = CnfFormula(5, ((1, 2, 3), (-1, -2, -3), (1, -2, -3), (-1, 2, 3)))
    assert sat_brute_force(f) == any(
        all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in f.clauses)
        for bits in itertools.product((False, True), repeat=5)
    )


def test_dimacs_round_trip():
    f = CnfFormula(4, ((1, -2, 3), (-1, 2, 4)))
    assert parse_dimacs(to_dimacs(f)) == f
    g = parse_dimacs("c comment\np cnf 3 1\n1 -2 3 0\n")
    assert g == CnfFormula(3, ((1, -2, 3),))


def test_dimacs_rejections():
    with pytest.raises(FormulaError):
        parse_dimacs("1 2 3 0\n")  # no problem line
    with pytest.raises(FormulaError):
        parse_dimacs("p cnf 3 1\n1 2 3\n")  # unterminated clause
    with pytest.raises(FormulaError):
        parse_dimacs("p sat 3 1\n1 2 3 0\n")


def test_random_formula_determinism_and_bounds():
    f1 = random_formula(8, 6, seed=5)
    f2 = random_formula(8, 6, seed=5)
    assert f1 == f2
    assert f1 != random_formula(8, 6, seed=6)
    assert len(f1.clauses) <= 6
    counts = {}
    for clause in f1.clauses:
        assert len(clause) == 3
        assert len({abs(l) for l in clause}) == 3
        for lit in clause:
            counts[abs(lit)] = counts.get(abs(lit), 0) + 1
    assert all(c <= 4 for c in counts.values())


# -- gadgets ----------------------------------------------------------------


def test_variable_gadget_shape():
    g = gadget("variable")
    assert (g.n, g.m) == (9, 8)
    assert g.blue_neighbors(0) == (1, 2, 3, 4)
    assert g.red_neighbors(0) == (5, 6, 7, 8)
    assert count_bicolored_p3(g) == 16


def test_clause_gadget_shape():
    g = gadget("clause")
    assert (g.n, g.m) == (10, 42)
    stats = instance_stats(g)
    assert stats.m_blue == 24 and stats.m_red == 18
    # the seven clique vertices are mutually blue-adjacent
    for x, y in itertools.combinations(range(3, 10), 2):
        assert g.color_of(x, y) is B
    witnesses = {s.witness for s in enumerate_bicolored_p3(g)}
    assert witnesses == {
        (0, 3, 1), (0, 3, 2), (1, 4, 0), (1, 4, 2), (2, 5, 0), (2, 5, 1),
    }


def test_alternating_cycle():
    g = gadget("alternating_cycle", length=8)
    assert (g.n, g.m) == (8, 8)
    for i in range(8):
        expected = B if i % 2 == 0 else R
        assert g.color_of(i, (i + 1) % 8) is expected
    for bad in (0, 2, 5, 7):
        with pytest.raises(ValueError):
            gadget("alternating_cycle", length=bad)


def test_gadget_kinds_cover_all_fixtures():
    for kind in GADGET_KINDS:
        g = gadget(kind, length=4 if kind == "alternating_cycle" else 0)
        assert g.n > 0
    with pytest.raises(ValueError):
        gadget("nonsense")


# -- reduction --------------------------------------------------------------


def test_reduction_sizes():
    f = CnfFormula(3, ((1, -2, 3),))
    inst, layout = reduce_sat_to_bpd(f)
    g = inst.graph
    assert g.n == 9 * 3 + 7 * 1 == 34
    assert g.m == 8 * 3 + 42 * 1 == 66
    assert inst.k == layout.k == 4 * 3 + 14 * 1 == 26
    assert max(g.degree(v) for v in range(g.n)) == 9


def test_reduction_layout_wiring():
    f = CnfFormula(3, ((1, 2, 3), (1, -2, 3)))
    inst, layout = reduce_sat_to_bpd(f)
    g = inst.graph
    assert layout.variable_center == (0, 9, 18)
    assert layout.variable_true == ((1, 2, 3, 4), (10, 11, 12, 13), (19, 20, 21, 22))
    assert layout.variable_false == ((5, 6, 7, 8), (14, 15, 16, 17), (23, 24, 25, 26))
    # the occurrence number counts uses of the variable across the whole
    # formula, and picks that leaf out of the polarity's pool; x2's second
    # use is negated, so it lands on the second red leaf
    assert layout.clause_a == ((1, 10, 19), (2, 15, 20))
    assert layout.occurrence == ((1, 1, 1), (2, 2, 2))
    assert layout.clause_b == ((27, 28, 29), (34, 35, 36))
    assert layout.clause_w == ((30, 31, 32, 33), (37, 38, 39, 40))
    for a, b in zip(layout.clause_a, layout.clause_b):
        for p in range(3):
            assert g.color_of(a[p], b[p]) is B
    for j, (a, b, w) in enumerate(zip(layout.clause_a, layout.clause_b, layout.clause_w)):
        clique = b + w
        for x, y in itertools.combinations(clique, 2):
            assert g.color_of(x, y) is B
        for p in range(3):
            for u in clique:
                if u != b[p]:
                    assert g.color_of(a[p], u) is R
    d = layout.to_json_dict()
    assert d["k"] == inst.k and d["num_vars"] == 3


def test_reduction_scales_linearly():
    f = random_formula(6, 5, seed=2)
    inst, _ = reduce_sat_to_bpd(f)
    nc = len(f.clauses)
    assert inst.graph.n == 9 * 6 + 7 * nc
    assert inst.graph.m == 8 * 6 + 42 * nc
    assert inst.k == 4 * 6 + 14 * nc


# -- random instances -------------------------------------------------------


def test_random_instance_determinism():
    a = random_instance(8, 0.4, 0.5, seed=9)
    b = random_instance(8, 0.4, 0.5, seed=9)
    assert a == b
    assert a.n == 8


def test_random_instance_extremes():
    full = random_instance(6, 1.0, 1.0, seed=1)
    assert full.m == 15
    assert all(c is B for _, _, c in full.edges())
    assert random_instance(6, 0.0, 0.5, seed=1).m == 0
    with pytest.raises(ValueError):
        random_instance(5, 1.5, 0.5, seed=1)
    with pytest.raises(ValueError):
        random_instance(5, 0.5, -0.1, seed=1)
