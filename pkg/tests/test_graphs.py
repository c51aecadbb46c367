from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from blockplan.design import ProfileSet, count_estimable
from blockplan.graphs import (
    BudgetExceeded,
    Coloring,
    RequirementsGraph,
    check_sufficient_conditions,
    chromatic_number,
    colorings_by_profile,
    colorings_with_sizes,
    equitable_coloring,
    find_coloring,
    graph_to_dot,
    split_color_class,
)


def graph(n, spec):
    pairs = [(ord(a) - 64, ord(b) - 64) for a, b in spec.split()]
    return RequirementsGraph.from_pairs(n, pairs)


S1 = graph(7, "AB AC AD BC BE CD DF EF EG FG")
S2 = graph(7, "AB AC BC BD BE CD CF CG EF EG")
S3 = graph(7, "AB AD AF AG BC BD CD CE DE DF DG")
S4 = graph(7, "AB AC AD AE AG BF CD CG DG EF")
STAR5 = graph(6, "AB AC AD AE AF")


def brute_force_colorable(g: RequirementsGraph, k: int) -> bool:
    for assign in product(range(k), repeat=g.n):
        if all(assign[i - 1] != assign[j - 1] for i, j in g.edges):
            return True
    return False


def small_graphs(max_n=7):
    return st.integers(2, max_n).flatmap(
        lambda n: st.sets(
            st.tuples(st.integers(1, n), st.integers(1, n)).filter(
                lambda e: e[0] < e[1]
            ),
            max_size=n * (n - 1) // 2,
        ).map(lambda edges: RequirementsGraph(n, frozenset(edges)))
    )


def test_chromatic_numbers_of_worked_graphs():
    assert chromatic_number(S1) == 3
    assert chromatic_number(S2) == 3
    assert chromatic_number(S3) == 3
    assert chromatic_number(S4) == 4
    assert find_coloring(S4, 3) is None


def test_find_coloring_matches_worked_sizes():
    c = find_coloring(S1, 3)
    assert c is not None and c.is_proper(S1) and c.covers_all()
    assert sorted(c.sizes(), reverse=True) == [3, 2, 2]
    assert find_coloring(S1, 3) == c  # deterministic


@given(small_graphs(), st.integers(1, 4))
@settings(max_examples=120, deadline=None)
def test_find_coloring_agrees_with_brute_force(g, k):
    found = find_coloring(g, k)
    assert (found is not None) == brute_force_colorable(g, k)
    if found is not None:
        assert found.is_proper(g) and found.covers_all()
        assert found.k <= k


@given(small_graphs(6))
@settings(max_examples=60, deadline=None)
def test_colorings_with_sizes_enumerates_each_partition_once(g):
    sizes = [max(1, g.n - 3), min(3, g.n - max(1, g.n - 3))]
    sizes = [s for s in sizes if s > 0]
    if sum(sizes) != g.n:
        sizes.append(g.n - sum(sizes))
    if any(s <= 0 for s in sizes):
        return
    k = len(sizes)
    want = set()
    for assign in product(range(k), repeat=g.n):
        counts = [assign.count(c) for c in range(k)]
        if sorted(counts) != sorted(sizes):
            continue
        if any(assign[i - 1] == assign[j - 1] for i, j in g.edges):
            continue
        part = frozenset(
            frozenset(v + 1 for v in range(g.n) if assign[v] == c)
            for c in range(k)
        )
        want.add(part)
    got = [
        frozenset(frozenset(cls) for cls in c.classes)
        for c in colorings_with_sizes(g, sizes)
    ]
    assert len(got) == len(set(got))
    assert set(got) == want


def test_colorings_by_profile_star():
    profiles = colorings_by_profile(STAR5, 2)
    keys = {p.multiplicities for p in profiles}
    assert keys == {(5, 1, 0), (4, 1, 1), (3, 2, 1)}
    grouping = profiles[ProfileSet.from_counts(2, [3, 2, 1])]
    assert grouping.groups[-1] == (1,)  # the hub can only stand alone
    best = max(profiles, key=count_estimable)
    assert count_estimable(best) == 11


def test_conditions_on_worked_graphs():
    r1 = check_sufficient_conditions(S1, 2)
    assert r1.max_degree == 3
    assert r1.low_degree_no_complete
    assert not r1.few_high_degree
    assert r1.colorable_guaranteed

    r2 = check_sufficient_conditions(S2, 2)
    assert not r2.low_degree_no_complete
    assert r2.few_high_degree
    assert r2.colorable_guaranteed

    r3 = check_sufficient_conditions(S3, 2)
    assert not r3.low_degree_no_complete
    assert not r3.few_high_degree
    assert r3.common_cycle_vertex
    assert r3.colorable_guaranteed

    r4 = check_sufficient_conditions(S4, 2)
    assert not r4.colorable_guaranteed
    assert not r4.acyclic and r4.common_cycle_vertex is False


def test_conditions_on_forests():
    star = check_sufficient_conditions(STAR5, 2)
    assert star.acyclic and star.common_cycle_vertex
    assert star.few_high_degree
    assert not star.forest_max_degree_four  # degree 5 hub
    assert not star.forest_degree_within_bound  # 15 > 6 + 8
    assert not star.equitable_guaranteed

    pendant = graph(6, "AB AC AD AE EF")
    rep = check_sufficient_conditions(pendant, 2)
    assert rep.forest_max_degree_four and rep.equitable_guaranteed

    # a six-leaf star plus one isolated factor sits exactly on the
    # degree bound that still promises an equitable three-coloring
    wide = graph(8, "AB AC AD AE AF AG")
    rep8 = check_sufficient_conditions(wide, 2)
    assert rep8.forest_degree_at_exact_bound
    assert not rep8.forest_degree_within_bound
    eq = equitable_coloring(wide, 3)
    assert eq is not None and sorted(eq.sizes(), reverse=True) == [3, 3, 2]


def test_conditions_for_blocks_of_eight():
    g = graph(9, " ".join(
        f"{a}{b}" for a, b in [
            ("A", "B"), ("A", "C"), ("A", "D"), ("A", "E"),
            ("A", "F"), ("A", "G"), ("B", "C"),
        ]
    ))
    rep = check_sufficient_conditions(g, 3)
    assert rep.max_degree == 6
    assert rep.low_degree_no_complete
    assert rep.common_cycle_vertex is None
    assert rep.forest_max_degree_four is None


def test_equitable_coloring():
    assert equitable_coloring(STAR5, 3) is None  # hub forces a singleton
    c = equitable_coloring(graph(6, "AB AC AD AE EF"), 3)
    assert c is not None and sorted(c.sizes(), reverse=True) == [2, 2, 2]
    assert equitable_coloring(S1, 3) is not None  # sizes 3,2,2
    assert equitable_coloring(RequirementsGraph(3, frozenset()), 4) is None


def test_split_color_class():
    c = Coloring.from_classes(6, [(1, 2, 3, 4), (5, 6)])
    before = count_estimable(c.profile(2))
    split = split_color_class(c)
    assert split.k == 3
    assert sorted(split.sizes(), reverse=True) == [2, 2, 2]
    gain = count_estimable(split.profile(2)) - before
    assert gain == 2 * 2  # floor(4/2) * ceil(4/2)
    with pytest.raises(ValueError):
        split_color_class(Coloring.from_classes(3, [(1,), (2,), (3,)]))


@given(small_graphs(7))
@settings(max_examples=60, deadline=None)
def test_split_keeps_properness_and_gains(g):
    c = find_coloring(g, g.n)
    assert c is not None
    if all(len(cls) == 1 for cls in c.classes):
        return
    split = split_color_class(c)
    assert split.is_proper(g) and split.covers_all()
    q = 3
    if split.k <= 2**q - 1 and c.k <= 2**q - 1:
        sizes = sorted((len(x) for x in c.classes), reverse=True)
        s = sizes[0]
        expected_gain = (s // 2) * (s - s // 2)
        gain = count_estimable(split.profile(q)) - count_estimable(c.profile(q))
        assert gain == expected_gain


@given(st.integers(2, 10), st.data())
@settings(max_examples=60, deadline=None)
def test_forests_are_two_chromatic(n, data):
    edges = set()
    for v in range(2, n + 1):
        if data.draw(st.booleans()):
            u = data.draw(st.integers(1, v - 1))
            edges.add((u, v))
    g = RequirementsGraph(n, frozenset(edges))
    assert g.is_acyclic()
    assert chromatic_number(g) <= 2


def test_budget_and_size_guards():
    with pytest.raises(BudgetExceeded, match="check_sufficient_conditions"):
        chromatic_number(S4, budget=3)
    big = RequirementsGraph(25, frozenset())
    with pytest.raises(ValueError, match="scope"):
        chromatic_number(big)


def test_graph_to_dot():
    dot = graph_to_dot(4, [(1, 2), (3, 4)], dashed=[(3, 4)], name="req")
    assert dot.startswith("graph req {")
    assert "  A -- B;" in dot
    assert "  C -- D [style=dashed];" in dot
    assert dot.endswith("}\n")
