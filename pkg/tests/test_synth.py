import pytest

from blockplan.catalog import load_catalog
from blockplan.design import FactorGrouping, ProfileSet, phi_max
from blockplan.effects import EffectWord, FractionSpec, parse_word
from blockplan.graphs import BudgetExceeded, RequirementsGraph, find_coloring
from blockplan.oracle import verify_design
from blockplan.synth import (
    SynthesisRequest,
    best_template_mapping,
    removal_advice,
    scan_profiles,
    synthesize,
    synthesize_fraction,
    synthesize_full,
)

S1 = "AB AC AD BC BE CD DF EF EG FG"
S2 = "AB AC BC BD BE CD CF CG EF EG"
S3 = "AB AD AF AG BC BD CD CE DE DF DG"
S4 = "AB AC AD AE AG BF CD CG DG EF"


def words(text, n):
    return tuple(parse_word(t, n) for t in text.split())


def check_against_oracle(result):
    """Success results must survive the brute-force audit."""
    report = verify_design(result.design, required=result.required)
    assert not report.problems, report.problems
    assert report.mains_estimable
    assert set(report.two_factor_estimable) == set(result.estimable)
    assert set(report.required_failures) == set(result.required_failures)
    return report


def test_blocked_full_factorials_hit_known_counts():
    for text, expected in [(S1, 16), (S2, 16), (S3, 14)]:
        r = synthesize(SynthesisRequest(7, 0, 2, words(text, 7)))
        assert r.status == "ok"
        assert r.estimable_count == expected
        assert set(r.required) <= set(r.estimable)
        check_against_oracle(r)
    assert phi_max(7, 2) == 16


def test_four_chromatic_requirements_are_infeasible():
    r = synthesize(SynthesisRequest(7, 0, 2, words(S4, 7)))
    assert r.status == "infeasible"
    assert r.design is None
    advice = {w.render() for w in r.advice}
    assert advice == {"AC", "AD", "AG", "CD", "CG", "DG"}
    for w in r.advice:
        assert set(w.render()) & {"C", "D", "G"}


def test_star_requirements_pick_the_balanced_remainder():
    # all pairs with A, six factors, blocks of four
    star = " ".join("A" + x for x in "BCDEF")
    r = synthesize(SynthesisRequest(6, 0, 2, words(star, 6)))
    assert r.status == "ok"
    assert r.profile == ProfileSet.parse("<3,2,1>", q=2)
    assert r.estimable_count == 11
    # A interacts with everything, so it sits alone
    assert (1,) in r.grouping.groups


def test_blocks_of_eight_leave_small_complete_requirements_whole():
    every = tuple(
        EffectWord.from_factors(6, (a, b))
        for a in range(1, 7)
        for b in range(a + 1, 7)
    )
    req = SynthesisRequest(6, 0, 3, every)
    r = synthesize(req)
    assert r.status == "ok"
    assert r.estimable_count == 15
    assert all(len(g) == 1 for g in r.grouping.groups)
    check_against_oracle(r)


def test_pendant_requirements_reach_phi_max():
    r = synthesize(SynthesisRequest(6, 0, 2, words("AB AC AD AE EF", 6)))
    assert r.status == "ok"
    assert r.profile == ProfileSet.parse("<2,2,2>", q=2)
    assert r.estimable_count == 12 == phi_max(6, 2)
    check_against_oracle(r)


def test_require_only_objective_still_covers_requirements():
    r = synthesize(
        SynthesisRequest(7, 0, 2, words(S1, 7), objective="require-only")
    )
    assert r.status == "ok"
    assert set(r.required) <= set(r.estimable)


def test_greedy_advice_when_no_single_removal_suffices():
    # complete graph on five factors needs five groups
    every = tuple(
        EffectWord.from_factors(5, (a, b))
        for a in range(1, 6)
        for b in range(a + 1, 6)
    )
    r = synthesize(SynthesisRequest(5, 0, 2, every))
    assert r.status == "infeasible"
    assert len(r.advice) > 1
    g = RequirementsGraph.from_words(5, every)
    for w in r.advice:
        g = g.without_edge(tuple(w.factors))
    assert find_coloring(g, 3) is not None


def test_single_edge_advice_is_ordered_by_degree():
    g = RequirementsGraph.from_words(7, words(S4, 7))
    advice = removal_advice(g, 3)
    # A has the highest degree, so edges at A come first
    assert [e for e in advice[:3]] == [(1, 3), (1, 4), (1, 7)]


def test_request_validation():
    with pytest.raises(ValueError, match="two-factor"):
        SynthesisRequest(5, 0, 2, (parse_word("ABC", 5),))
    with pytest.raises(ValueError, match="objective"):
        SynthesisRequest(5, 0, 2, (), objective="fastest")
    with pytest.raises(ValueError, match="words"):
        SynthesisRequest(5, 0, 2, (), words=(parse_word("ABCDE", 5),))
    with pytest.raises(ValueError, match="p = 0"):
        synthesize_full(SynthesisRequest(5, 1, 2, ()))
    with pytest.raises(ValueError, match="p > 0"):
        synthesize_fraction(SynthesisRequest(5, 0, 2, ()))


def test_scan_finds_exactly_the_reachable_profiles():
    scan1 = scan_profiles(FractionSpec.parse(7, ["ABCDEFG"]), 2)
    assert {p.render() for p in scan1} == {"<5,1,1>", "<3,3,1>"}
    scan2 = scan_profiles(FractionSpec.parse(7, ["ABCDEG"]), 2)
    assert {p.render() for p in scan2} == {"<4,2,1>", "<3,2,2>"}
    for profile, grouping in {**scan1, **scan2}.items():
        assert grouping.profile(2) == profile


def test_scan_key_set_ignores_the_pinned_first_column():
    from blockplan.design import iter_fraction_assignments

    frac = FractionSpec.parse(7, ["ABCDEG"])
    pinned = scan_profiles(frac, 2)
    unpinned = {
        grouping.profile(2)
        for _, grouping in iter_fraction_assignments(frac, 2, fix_first=False)
        if grouping.profile(2).positive_parts >= 3
    }
    assert set(pinned) == unpinned


def test_scan_degenerate_full_factorial():
    # no defining words: plain column assignment, profiles need only
    # enough groups for a full-rank blocking matrix
    found = scan_profiles(FractionSpec.parse(4, []), 2, min_parts=2)
    renders = {p.render() for p in found}
    assert renders == {"<2,1,1>", "<2,2,0>", "<3,1,0>"}


def test_scan_budget_guard():
    with pytest.raises(BudgetExceeded, match="scan_profiles"):
        scan_profiles(FractionSpec.parse(7, ["ABCDEFG"]), 2, budget=5)


def test_fraction_synthesis_from_catalog_golden():
    interactions = words("AB BC BD BE BF BG BH AC CH DG EG", 8)
    r = synthesize(SynthesisRequest(8, 2, 2, interactions))
    assert r.status == "ok"
    assert r.fraction_id == "8-2.1"
    assert r.profile == ProfileSet.parse("<4,3,1>", q=2)
    assert r.estimable_count == 19
    assert set(r.required) <= set(r.estimable)
    assert r.mapping is not None and len(r.mapping) == 8
    assert len(r.design.defining_words) == 2
    check_against_oracle(r)


def test_fraction_synthesis_prefers_the_clean_profile():
    r = synthesize(SynthesisRequest(7, 2, 2, words(S2, 7)))
    assert r.status == "ok"
    assert r.profile == ProfileSet.parse("<3,3,1>", q=2)
    assert r.estimable_count == 11
    assert r.inestimable_required == ()
    assert {w.render() for w in r.design.defining_words} == {"ADFG", "ABCDE"}
    check_against_oracle(r)


def test_forced_profile_reports_alias_casualties():
    r = synthesize(
        SynthesisRequest(
            7, 2, 2, words(S2, 7), profile=ProfileSet.parse("<3,2,2>", q=2)
        )
    )
    assert r.status == "partial"
    assert {w.render() for w in r.required_failures} == {"AC", "CD"}
    assert all(reason == "C1 alias" for _, reason in r.inestimable_required)
    assert r.estimable_count == 12
    report = verify_design(r.design, required=r.required)
    assert set(report.required_failures) == set(r.required_failures)


def test_forced_unachievable_profile_is_infeasible():
    r = synthesize(
        SynthesisRequest(
            7, 2, 2, words(S2, 7), profile=ProfileSet.parse("<5,1,1>", q=2)
        )
    )
    assert r.status == "infeasible"
    assert any("not achievable" in d for d in r.diagnostics)


def test_mapping_search_protects_requirements_when_it_can():
    catalog = load_catalog()
    required = words(S2, 7)
    t331 = catalog.lookup(7, 2, 2, ProfileSet.parse("<3,3,1>", q=2))
    g331 = FactorGrouping.from_sets(7, [(1, 4, 5), (2, 6, 7), (3,)])
    assert best_template_mapping(g331, t331, required).failures == ()

    t322 = catalog.lookup(7, 2, 2, ProfileSet.parse("<3,2,2>", q=2))
    g322 = FactorGrouping.from_sets(7, [(1, 4, 6), (2, 7), (3, 5)])
    lost = best_template_mapping(g322, t322, required).failures
    assert {w.render() for w in lost} == {"BC", "BE", "CG", "EG"}


def test_profiles_without_templates_suggest_going_off_catalog():
    cycle = words("AB BC CD DE AE", 5)
    r = synthesize(SynthesisRequest(5, 1, 2, cycle))
    assert r.status == "infeasible"
    assert any("defining words" in d for d in r.diagnostics)


def test_user_words_cover_what_the_catalog_cannot():
    n = 9
    wanted = [
        (a, b)
        for a in range(1, 10)
        for b in range(a + 1, 10)
        if not (a >= 7 and b >= 7)
    ]
    interactions = tuple(EffectWord.from_factors(n, e) for e in wanted)
    r = synthesize(
        SynthesisRequest(
            9,
            2,
            3,
            interactions,
            words=(parse_word("ABEGH", 9), parse_word("ABCDEFI", 9)),
        )
    )
    assert r.status == "ok"
    assert r.profile == ProfileSet.parse("<3,1,1,1,1,1,1>", q=3)
    assert r.estimable_count == 33
    assert (7, 8, 9) in r.grouping.groups
    check_against_oracle(r)


def test_user_words_incompatible_with_every_grouping():
    cycle = words("AB BC CD DE AE", 5)
    r = synthesize(
        SynthesisRequest(5, 1, 2, cycle, words=(parse_word("ABCDE", 5),))
    )
    assert r.status == "infeasible"
    assert any("admit none" in d for d in r.diagnostics)


def test_result_serialization_is_complete():
    r = synthesize(SynthesisRequest(7, 2, 2, words(S2, 7)))
    doc = r.to_json_dict()
    assert doc["status"] == "ok"
    assert doc["profile"] == "<3,3,1>"
    assert doc["mapping"]["A"] == "F1"
    assert sorted(doc["defining_words"]) == ["ABCDE", "ADFG"]
    assert doc["design"]["blocks"]
    assert doc["inestimable_required"] == []
