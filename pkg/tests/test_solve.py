import itertools

import pytest
from hypothesis import given, settings

from bpd import (
    Color,
    ColoredGraph,
    Instance,
    PreconditionError,
    bipartite_min_vertex_cover,
    build_conflict_graph,
    classify,
    count_bicolored_p3,
    find_endangered_k3,
    gadget,
    is_nice,
    max_disjoint_p3_packing,
    oracle_min_deletions,
    random_instance,
    solve_auto,
    solve_branching,
    solve_degree_two,
    solve_endangered_free,
    solve_mono_free,
    solve_nice,
    verify_solution,
)
from bpd.solve import SearchStats, _component_lower_bound, _piece_optimum
from conftest import (
    brute_has_p3,
    brute_max_packing,
    brute_min_deletions,
    colored_graphs,
    graph_corpus,
)

B, R = Color.BLUE, Color.RED


def single_p3():
    return ColoredGraph(3, [(0, 1, B), (1, 2, R)])


# -- verification -------------------------------------------------------------


def test_verify_solution_cases():
    g = single_p3()
    assert verify_solution(g, [(0, 1)], 1) == (True, "ok")
    ok, why = verify_solution(g, [(0, 2)], 1)
    assert not ok and "not an edge" in why
    ok, why = verify_solution(g, [(0, 1), (1, 0)], 2)
    assert not ok and "duplicate" in why
    ok, why = verify_solution(g, [(0, 1), (1, 2)], 1)
    assert not ok and "exceed" in why
    ok, why = verify_solution(g, [], 1)
    assert not ok and "remains" in why


# -- reference oracle ----------------------------------------------------------


def test_oracle_matches_subset_enumeration():
    for g in graph_corpus(seed=61, count=25, max_n=6):
        opt, witness = oracle_min_deletions(g)
        expected, _ = brute_min_deletions(g)
        assert opt == expected
        assert not brute_has_p3(g.delete_edges(witness))
        assert len(witness) == opt


def test_oracle_cap_semantics():
    g = gadget("variable")
    opt, witness = oracle_min_deletions(g)
    assert opt == len(witness)
    assert oracle_min_deletions(g, cap=opt - 1) == (None, None)
    capped_opt, capped_witness = oracle_min_deletions(g, cap=opt)
    assert capped_opt == opt
    ok, why = verify_solution(g, capped_witness, opt)
    assert ok, why


@settings(max_examples=50, deadline=None)
@given(colored_graphs(max_n=5))
def test_oracle_property(g):
    opt, witness = oracle_min_deletions(g)
    expected, _ = brute_min_deletions(g)
    assert opt == expected
    assert not brute_has_p3(g.delete_edges(witness))


# -- branching solver -----------------------------------------------------------


def test_branching_agrees_with_oracle_across_budgets():
    for g in graph_corpus(seed=67, count=20, max_n=7):
        opt, _ = oracle_min_deletions(g)
        for k in range(g.m + 1):
            res = solve_branching(Instance(g, k))
            assert res.answer == (opt <= k)
            assert res.optimum is None
            if res.answer:
                ok, why = verify_solution(g, res.solution, k)
                assert ok, why
            else:
                assert res.solution is None


def test_branching_optimize_mode():
    for g in graph_corpus(seed=71, count=15, max_n=7):
        opt, _ = oracle_min_deletions(g)
        res = solve_branching(Instance(g, g.m), optimize=True)
        assert res.optimum == opt
        assert res.answer and len(res.solution) == opt
        tight = solve_branching(Instance(g, max(opt - 1, -1)), optimize=True)
        assert tight.optimum == opt and not tight.answer and tight.solution is None


def test_branching_node_budget():
    for g in graph_corpus(seed=73, count=15, max_n=7):
        for k in range(g.m + 1):
            res = solve_branching(Instance(g, k))
            assert res.stats.nodes_expanded <= 2 ** (k + 1)


def test_branching_parallel_agrees():
    for g in graph_corpus(seed=79, count=6, max_n=7):
        opt, _ = oracle_min_deletions(g)
        res = solve_branching(Instance(g, g.m), optimize=True, parallel=True)
        assert res.optimum == opt


# -- specialized solvers ----------------------------------------------------------


def test_solve_nice_counts_conflicts():
    g = single_p3()
    res = solve_nice(g, 1)
    assert res.answer and res.optimum == 1 and res.method == "nice"
    assert not solve_nice(g, 0).answer
    # two vertex-disjoint conflicts need two deletions
    two = ColoredGraph(6, [(0, 1, B), (1, 2, R), (3, 4, B), (4, 5, R)])
    assert solve_nice(two, 2).optimum == 2
    with pytest.raises(PreconditionError):
        solve_nice(gadget("lc"), 3)


def test_solve_nice_on_sampled_nice_graphs():
    checked = 0
    for g in graph_corpus(seed=83, count=150, max_n=7, p_lo=0.05, p_hi=0.35):
        if not is_nice(g):
            continue
        checked += 1
        opt, _ = oracle_min_deletions(g)
        res = solve_nice(g, g.m)
        assert res.optimum == opt == count_bicolored_p3(g)
    assert checked >= 20


def test_solve_degree_two():
    with pytest.raises(PreconditionError):
        solve_degree_two(Instance(gadget("variable"), 4))
    for length in range(4, 21, 2):
        g = gadget("alternating_cycle", length=length)
        res = solve_degree_two(Instance(g, g.m))
        assert res.optimum == length // 2
        assert res.method == "deg2"
    checked = 0
    for g in graph_corpus(seed=89, count=120, max_n=8, p_lo=0.05, p_hi=0.3):
        if any(g.degree(v) > 2 for v in range(g.n)):
            continue
        checked += 1
        opt, _ = oracle_min_deletions(g)
        res = solve_degree_two(Instance(g, g.m))
        assert res.optimum == opt
        ok, why = verify_solution(g, res.solution, opt)
        assert ok, why
    assert checked >= 30


def test_solve_endangered_free():
    g = ColoredGraph(3, [(0, 1, B), (0, 2, B), (1, 2, R)])
    # make the blue edges conflict so the triangle is endangered
    g = ColoredGraph(4, g.edges() + [(0, 3, R)])
    assert find_endangered_k3(g) is not None
    with pytest.raises(PreconditionError):
        solve_endangered_free(Instance(g, 2))
    checked = 0
    for h in graph_corpus(seed=97, count=150, max_n=7, p_lo=0.1, p_hi=0.5):
        if find_endangered_k3(h) is not None:
            continue
        checked += 1
        opt, _ = oracle_min_deletions(h)
        res = solve_endangered_free(Instance(h, h.m))
        assert res.optimum == opt
        ok, why = verify_solution(h, res.solution, opt)
        assert ok, why
    assert checked >= 40


def test_solve_mono_free():
    mono = ColoredGraph(3, [(0, 1, B), (1, 2, B)])
    with pytest.raises(PreconditionError):
        solve_mono_free(Instance(mono, 1))
    checked = 0
    for h in graph_corpus(seed=101, count=200, max_n=8, p_lo=0.05, p_hi=0.4):
        if not classify(h).mono_free:
            continue
        checked += 1
        opt, _ = oracle_min_deletions(h)
        res = solve_mono_free(Instance(h, h.m))
        assert res.optimum == opt
        ok, why = verify_solution(h, res.solution, opt)
        assert ok, why
    assert checked >= 40


# -- conflict-graph cover -----------------------------------------------------------


def brute_min_cover(cg) -> int:
    if not cg.conflicts:
        return 0
    vertices = sorted({e for pair in cg.conflicts for e in pair})
    for size in range(len(vertices) + 1):
        for combo in itertools.combinations(vertices, size):
            chosen = set(combo)
            if all(e in chosen or f in chosen for e, f in cg.conflicts):
                return size
    raise AssertionError("unreachable")


@settings(max_examples=50, deadline=None)
@given(colored_graphs(max_n=6))
def test_vertex_cover_is_minimum(g):
    cg = build_conflict_graph(g)
    cover = bipartite_min_vertex_cover(cg)
    assert len(cover) == brute_min_cover(cg)
    chosen = set(cover)
    assert all(e in chosen or f in chosen for e, f in cg.conflicts)


# -- packing and pruning helpers ------------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(colored_graphs(max_n=6))
def test_packing_is_exact(g):
    assert max_disjoint_p3_packing(g) == brute_max_packing(g)


@settings(max_examples=50, deadline=None)
@given(colored_graphs(max_n=6))
def test_packing_bounds_the_optimum(g):
    opt, _ = oracle_min_deletions(g)
    assert max_disjoint_p3_packing(g) <= opt


def test_piece_optimum_matches_oracle():
    for g in graph_corpus(seed=103, count=60, max_n=8):
        assert _piece_optimum(g) == oracle_min_deletions(g)[0]


def test_component_lower_bound_is_sound():
    for g in graph_corpus(seed=107, count=60, max_n=9):
        opt, _ = oracle_min_deletions(g)
        lb = _component_lower_bound(g, {})
        assert 0 <= lb <= opt


def test_component_lower_bound_is_exact_on_reduction_blocks():
    clause = gadget("clause")
    assert _component_lower_bound(clause, {}) == 14 == _piece_optimum(clause)
    var = gadget("variable")
    assert _component_lower_bound(var, {}) == 4


# -- auto solver -------------------------------------------------------------------


def test_auto_agrees_with_oracle_across_budgets():
    for g in graph_corpus(seed=109, count=20, max_n=7):
        opt, _ = oracle_min_deletions(g)
        for k in range(g.m + 1):
            res = solve_auto(Instance(g, k))
            assert res.answer == (opt <= k), f"k={k} opt={opt} method={res.method}"
            if res.answer:
                ok, why = verify_solution(g, res.solution, k)
                assert ok, why


def test_auto_optimize_is_exact():
    for g in graph_corpus(seed=113, count=20, max_n=8):
        opt, _ = oracle_min_deletions(g)
        res = solve_auto(Instance(g, g.m), optimize=True)
        assert res.optimum == opt
        ok, why = verify_solution(g, res.solution, opt)
        assert ok, why


def test_auto_negative_budget_is_a_fast_no():
    res = solve_auto(Instance(single_p3(), -1))
    assert not res.answer and res.method == "trivial-no"


def test_auto_p3_free_input_short_circuits():
    g = ColoredGraph(4, [(0, 1, B), (2, 3, R)])
    res = solve_auto(Instance(g, 2))
    assert res.answer and res.solution == ()
    assert res.method == "kernel-only"


def test_auto_trivial_yes_shortcut():
    g = ColoredGraph(4, [(0, 1, B), (0, 2, R), (0, 3, R), (2, 3, B)])
    res = solve_auto(Instance(g, g.m))
    assert res.answer and res.method == "trivial-yes"
    # optimize mode must not take the shortcut
    res2 = solve_auto(Instance(g, g.m), optimize=True)
    assert res2.optimum == oracle_min_deletions(g)[0]


def test_auto_dispatch_methods():
    cyc = gadget("alternating_cycle", length=8)
    res = solve_auto(Instance(cyc, 4), optimize=True)
    assert res.optimum == 4 and "monofree" in res.method
    hard = gadget("clause")
    res2 = solve_auto(Instance(hard, 14), optimize=True)
    assert res2.optimum == 14 and "branch" in res2.method


def test_auto_parallel_agrees():
    for g in graph_corpus(seed=127, count=8, max_n=8):
        a = solve_auto(Instance(g, g.m), optimize=True)
        b = solve_auto(Instance(g, g.m), optimize=True, parallel=True)
        assert a.optimum == b.optimum


@settings(max_examples=40, deadline=None)
@given(colored_graphs(max_n=6))
def test_auto_and_branching_agree(g):
    opt, _ = oracle_min_deletions(g)
    k = max(0, opt - 1)
    assert solve_auto(Instance(g, k)).answer == solve_branching(Instance(g, k)).answer
    assert solve_auto(Instance(g, opt)).answer


# -- stats plumbing ------------------------------------------------------------------


def test_search_stats_merge_and_json():
    a = SearchStats(nodes_expanded=3, max_depth=2)
    a.bump("mce")
    b = SearchStats(nodes_expanded=4, max_depth=5)
    b.bump("mce")
    b.bump("diamond")
    a.merge(b)
    assert a.nodes_expanded == 7 and a.max_depth == 5
    assert a.rule_counts == {"mce": 2, "diamond": 1}
    d = a.to_json_dict()
    assert set(d) == {"nodes_expanded", "max_depth", "rule_counts", "time_ms"}
