"""Planner that turns an interaction wish list into a blocked design.

Full factorials reduce to proper coloring of the requirements graph:
factors sharing a color share a generator column, so a requested
interaction survives exactly when its endpoints are colored apart.
Fractions add the defining-word algebra on top, either through the
shipped template catalog (blocks of four) or through caller-supplied
defining words for anything the catalog does not cover.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Sequence

from .catalog import Catalog, TemplateRecord, load_catalog
from .design import (
    BlockedDesign,
    FactorGrouping,
    GeneratorMatrix,
    ProfileSet,
    count_estimable,
    expand_blocks,
    generator_for_grouping,
    generator_from_columns,
    iter_fraction_assignments,
)
from .effects import (
    ContrastSubgroup,
    EffectWord,
    FractionSpec,
    alias_set,
    expand_words,
)
from .graphs import (
    BudgetExceeded,
    DEFAULT_BUDGET,
    RequirementsGraph,
    check_sufficient_conditions,
    colorings_by_profile,
    find_coloring,
)

__all__ = [
    "SynthesisRequest",
    "SynthesisResult",
    "MappedTemplate",
    "synthesize",
    "synthesize_full",
    "synthesize_fraction",
    "scan_profiles",
    "removal_advice",
    "best_template_mapping",
]

SCAN_BUDGET = 10**9


@dataclass(frozen=True)
class SynthesisRequest:
    """What the caller wants estimable, and how hard to try."""

    n: int
    p: int
    q: int
    interactions: tuple[EffectWord, ...]
    objective: str = "maximize-estimable"  # or "require-only"
    words: tuple[EffectWord, ...] = ()
    profile: ProfileSet | None = None
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.objective not in ("maximize-estimable", "require-only"):
            raise ValueError(f"unknown objective {self.objective!r}")
        if self.p == 0 and self.words:
            raise ValueError("defining words require p > 0")
        for e in self.interactions:
            if e.order != 2:
                raise ValueError("requirements must be two-factor interactions")


@dataclass(frozen=True)
class SynthesisResult:
    status: str  # "ok" | "partial" | "infeasible"
    n: int
    p: int
    q: int
    design: BlockedDesign | None = None
    grouping: FactorGrouping | None = None
    profile: ProfileSet | None = None
    estimable: tuple[EffectWord, ...] = ()
    required: tuple[EffectWord, ...] = ()
    inestimable_required: tuple[tuple[EffectWord, str], ...] = ()
    aliased_pairs: tuple[EffectWord, ...] = ()
    mapping: dict[int, int] | None = None  # experiment factor -> template slot
    fraction_id: str | None = None
    advice: tuple[EffectWord, ...] = ()
    diagnostics: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    @property
    def estimable_count(self) -> int:
        return len(self.estimable)

    @property
    def required_failures(self) -> tuple[EffectWord, ...]:
        return tuple(e for e, _ in self.inestimable_required)

    def to_json_dict(self) -> dict:
        def slot(s: int) -> str:
            return f"F{s}"

        return {
            "status": self.status,
            "n": self.n,
            "p": self.p,
            "q": self.q,
            "profile": self.profile.render() if self.profile else None,
            "grouping": (
                [list(g) for g in self.grouping.groups] if self.grouping else None
            ),
            "mapping": (
                {
                    EffectWord.from_factors(self.n, (j,)).render(): slot(s)
                    for j, s in sorted(self.mapping.items())
                }
                if self.mapping is not None
                else None
            ),
            "defining_words": (
                [w.render() for w in self.design.defining_words]
                if self.design
                else []
            ),
            "fraction": self.fraction_id,
            "estimable": [w.render() for w in self.estimable],
            "inestimable_required": [
                {"interaction": w.render(), "reason": reason}
                for w, reason in self.inestimable_required
            ],
            "aliased_pairs": [w.render() for w in self.aliased_pairs],
            "advice": [w.render() for w in self.advice],
            "diagnostics": list(self.diagnostics),
            "design": self.design.to_json_dict() if self.design else None,
        }


def removal_advice(
    g: RequirementsGraph, k: int, budget: int = DEFAULT_BUDGET
) -> tuple[tuple[int, int], ...]:
    """Single requirement removals that restore k-colorability.

    Edges touching the busiest vertices go first: those are the
    likeliest candidates for the caller to drop or defer.
    """
    degrees = g.degree_map()
    singles = []
    for a, b in sorted(g.edges, key=lambda e: (-max(degrees[e[0]], degrees[e[1]]), e)):
        if find_coloring(g.without_edge((a, b)), k, budget) is not None:
            singles.append((a, b))
    return tuple(singles)


def _greedy_multi_removal(
    g: RequirementsGraph, k: int, budget: int
) -> tuple[tuple[int, int], ...]:
    removed = []
    work = g
    degrees = work.degree_map()
    while find_coloring(work, k, budget) is None and work.edges:
        degrees = work.degree_map()
        a, b = max(work.edges, key=lambda e: (degrees[e[0]] + degrees[e[1]], e))
        removed.append((a, b))
        work = work.without_edge((a, b))
    return tuple(removed)


def _edge_words(n: int, edges: Iterable[tuple[int, int]]) -> tuple[EffectWord, ...]:
    return tuple(EffectWord.from_factors(n, e) for e in edges)


def _infeasible_coloring(req: SynthesisRequest, g: RequirementsGraph) -> SynthesisResult:
    k = 2**req.q - 1
    singles = removal_advice(g, k, req.budget)
    diags = [
        f"requirements need more than {k} factor groups; "
        f"blocks of {2**req.q} cannot hold them"
    ]
    if singles:
        diags.append("dropping any one suggested interaction restores feasibility")
        advice = _edge_words(req.n, singles)
    else:
        multi = _greedy_multi_removal(g, k, req.budget)
        diags.append(
            f"no single interaction unblocks the design; dropping all "
            f"{len(multi)} suggested ones does"
        )
        advice = _edge_words(req.n, multi)
    return SynthesisResult(
        "infeasible",
        req.n,
        req.p,
        req.q,
        required=req.interactions,
        advice=advice,
        diagnostics=tuple(diags),
    )


def _candidate_groupings(
    req: SynthesisRequest, g: RequirementsGraph, diags: list[str]
) -> dict[ProfileSet, FactorGrouping]:
    """Achievable profiles (one witness grouping each), largest first."""
    by_profile = colorings_by_profile(g, req.q, req.budget)
    usable = {
        prof: grp
        for prof, grp in by_profile.items()
        if prof.positive_parts >= req.q
    }
    dropped = len(by_profile) - len(usable)
    if dropped:
        diags.append(
            f"ignored {dropped} coloring profile(s) with fewer than "
            f"{req.q} groups; the blocking matrix needs full rank"
        )
    if req.profile is not None:
        if req.profile in usable:
            usable = {req.profile: usable[req.profile]}
        else:
            achievable = ", ".join(
                p.render()
                for p in sorted(usable, key=lambda x: x.multiplicities, reverse=True)
            )
            diags.append(
                f"requested profile {req.profile.render()} is not achievable; "
                f"achievable profiles: {achievable or 'none'}"
            )
            usable = {}
    return dict(sorted(usable.items(), key=lambda kv: kv[0].multiplicities, reverse=True))


def synthesize_full(req: SynthesisRequest) -> SynthesisResult:
    """Block a full factorial so every requested interaction survives."""
    if req.p != 0:
        raise ValueError("synthesize_full handles p = 0 only")
    g = RequirementsGraph.from_words(req.n, req.interactions)
    diags: list[str] = []
    conditions = check_sufficient_conditions(g, req.q)
    if conditions.colorable_guaranteed:
        diags.append("a sufficient condition already guarantees feasibility")
    k = 2**req.q - 1
    if find_coloring(g, k, req.budget) is None:
        return _infeasible_coloring(req, g)

    usable = _candidate_groupings(req, g, diags)
    if not usable:
        return SynthesisResult(
            "infeasible",
            req.n,
            req.p,
            req.q,
            required=req.interactions,
            diagnostics=tuple(diags),
        )

    if req.objective == "maximize-estimable":
        counts = {prof: count_estimable(prof) for prof in usable}
        best_count = max(counts.values())
        ties = [p for p, c in counts.items() if c == best_count]
        if len(ties) > 1:
            diags.append(
                "profiles "
                + ", ".join(p.render() for p in ties)
                + f" tie at {best_count} estimable interactions; "
                "keeping the least balanced"
            )
        profile = max(ties, key=lambda p: p.multiplicities)
    else:
        profile = next(iter(usable))
    grouping = usable[profile]

    gen = generator_for_grouping(grouping, (), req.q)
    if gen is None:  # pragma: no cover - profile filter keeps rank feasible
        return SynthesisResult(
            "infeasible",
            req.n,
            req.p,
            req.q,
            required=req.interactions,
            diagnostics=tuple(diags + ["no full-rank column assignment exists"]),
        )
    blocks = expand_blocks(gen)
    design = BlockedDesign(req.n, 0, req.q, (), gen, blocks)
    return SynthesisResult(
        "ok",
        req.n,
        0,
        req.q,
        design=design,
        grouping=grouping,
        profile=profile,
        estimable=_cross_pairs(grouping),
        required=req.interactions,
        diagnostics=tuple(diags),
    )


def _cross_pairs(grouping: FactorGrouping) -> tuple[EffectWord, ...]:
    n = grouping.n
    pairs = [
        EffectWord.from_factors(n, (a, b))
        for gi, g in enumerate(grouping.groups)
        for other in grouping.groups[gi + 1 :]
        for a in g
        for b in other
    ]
    return tuple(sorted(pairs, key=lambda w: w.factors))


def scan_profiles(
    frac: FractionSpec,
    q: int,
    budget: int = SCAN_BUDGET,
    min_parts: int | None = None,
) -> dict[ProfileSet, FactorGrouping]:
    """Grouping profiles a fraction admits, one witness grouping each.

    By default only full-support profiles count: every available
    column value, or every factor when there are fewer, must appear.
    """
    if min_parts is None:
        min_parts = min(2**q - 1, frac.n)
    found: dict[ProfileSet, FactorGrouping] = {}
    steps = 0
    for _, grouping in iter_fraction_assignments(frac, q):
        steps += 1
        if steps > budget:
            raise BudgetExceeded(
                f"scan_profiles exceeded its budget of {budget} assignments; "
                "search one profile at a time with a larger cap"
            )
        profile = grouping.profile(q)
        if profile.positive_parts >= min_parts and profile not in found:
            found[profile] = grouping
    return found


def _failing_cross_pairs(
    grouping: FactorGrouping, subgroup: ContrastSubgroup
) -> tuple[EffectWord, ...]:
    n = grouping.n
    out = []
    for gi, gyou in enumerate(grouping.groups):
        for other in grouping.groups[gi + 1 :]:
            for a in gyou:
                for b in other:
                    e = EffectWord.from_factors(n, (a, b))
                    if e in subgroup or any(
                        x.order <= 2 for x in alias_set(e, subgroup)
                    ):
                        out.append(e)
    return tuple(sorted(out, key=lambda w: w.factors))


@dataclass(frozen=True)
class MappedTemplate:
    failures: tuple[EffectWord, ...]
    mapping: dict[int, int]  # experiment factor -> template slot


def best_template_mapping(
    grouping: FactorGrouping,
    template: TemplateRecord,
    required: Sequence[EffectWord],
) -> MappedTemplate:
    """Relabel experiment groups onto template groups, protecting as
    many required interactions from the template's aliased pairs as
    possible. Only placements onto aliased ("hot") slots matter."""
    hot = sorted({f for w in template.aliased_pairs for f in w.factors})
    aliased = {frozenset(w.factors) for w in template.aliased_pairs}
    req_pairs = {frozenset(e.factors) for e in required}

    exp_groups = list(grouping.groups)
    tmp_groups = list(template.grouping.groups)
    by_size: dict[int, list[int]] = {}
    for i, grp in enumerate(tmp_groups):
        by_size.setdefault(len(grp), []).append(i)

    def pairings(exp_idx: int, taken: dict[int, int]):
        if exp_idx == len(exp_groups):
            yield dict(taken)
            return
        size = len(exp_groups[exp_idx])
        for t in by_size[size]:
            if t in taken.values():
                continue
            taken[exp_idx] = t
            yield from pairings(exp_idx + 1, taken)
            del taken[exp_idx]

    def finish(pairing: dict[int, int], hot_map: dict[int, int]) -> dict[int, int]:
        mapping = dict(hot_map)
        for ei, ti in pairing.items():
            placed = {j for j in exp_groups[ei] if j in mapping}
            free_slots = [s for s in tmp_groups[ti] if s not in mapping.values()]
            for j, s in zip(sorted(set(exp_groups[ei]) - placed), free_slots):
                mapping[j] = s
        return mapping

    best: tuple[int, dict[int, int], dict[int, int]] | None = None
    for pairing in pairings(0, {}):
        hot_by_group = [
            (ei, [s for s in tmp_groups[ti] if s in hot])
            for ei, ti in pairing.items()
        ]
        hot_by_group = [(ei, slots) for ei, slots in hot_by_group if slots]

        def place(idx: int, hot_map: dict[int, int]):
            nonlocal best
            if best is not None and best[0] == 0:
                return
            if idx == len(hot_by_group):
                inv = {s: j for j, s in hot_map.items()}
                fails = sum(
                    1
                    for pair in aliased
                    if all(s in inv for s in pair)
                    and frozenset(inv[s] for s in pair) in req_pairs
                )
                if best is None or fails < best[0]:
                    best = (fails, dict(hot_map), dict(pairing))
                return
            ei, slots = hot_by_group[idx]
            for chosen in permutations(sorted(exp_groups[ei]), len(slots)):
                for j, s in zip(chosen, slots):
                    hot_map[j] = s
                place(idx + 1, hot_map)
                for j in chosen:
                    del hot_map[j]

        place(0, {})
        if best is not None and best[0] == 0:
            break

    assert best is not None  # group sizes always admit at least one pairing
    _, hot_map, pairing = best
    mapping = finish(pairing, hot_map)
    inv = {s: j for j, s in mapping.items()}
    failures = sorted(
        (
            EffectWord.from_factors(grouping.n, (inv[s] for s in pair))
            for pair in aliased
            if frozenset(inv[s] for s in pair) in req_pairs
        ),
        key=lambda w: w.factors,
    )
    return MappedTemplate(tuple(failures), mapping)


def _relabel_template(
    template: TemplateRecord,
    frac_words: tuple[EffectWord, ...],
    mapping: dict[int, int],
    q: int,
) -> tuple[GeneratorMatrix, tuple[EffectWord, ...], tuple[EffectWord, ...]]:
    gen_t = generator_for_grouping(template.grouping, frac_words, q)
    assert gen_t is not None  # validated at catalog build time
    slot_cols = [v.as_int() for v in gen_t.matrix.columns()]
    n = template.n
    cols = [slot_cols[mapping[j] - 1] for j in range(1, n + 1)]
    inv = {s: j for j, s in mapping.items()}
    words = tuple(
        EffectWord.from_factors(n, (inv[s] for s in w.factors)) for w in frac_words
    )
    aliased = tuple(
        sorted(
            (
                EffectWord.from_factors(n, (inv[s] for s in w.factors))
                for w in template.aliased_pairs
            ),
            key=lambda w: w.factors,
        )
    )
    return generator_from_columns(q, cols), words, aliased


def _finish_fraction(
    req: SynthesisRequest,
    gen: GeneratorMatrix,
    words: tuple[EffectWord, ...],
    grouping: FactorGrouping,
    profile: ProfileSet,
    failures: tuple[EffectWord, ...],
    aliased: tuple[EffectWord, ...],
    mapping: dict[int, int] | None,
    fraction_id: str | None,
    diags: list[str],
) -> SynthesisResult:
    blocks = expand_blocks(gen, words)
    design = BlockedDesign(req.n, req.p, req.q, words, gen, blocks)
    status = "ok" if not failures else "partial"
    if failures:
        diags.append(
            "required interactions lost to aliasing: "
            + ", ".join(w.render() for w in failures)
        )
    estimable = tuple(
        w for w in _cross_pairs(grouping) if w not in set(aliased)
    )
    return SynthesisResult(
        status,
        req.n,
        req.p,
        req.q,
        design=design,
        grouping=grouping,
        profile=profile,
        estimable=estimable,
        required=req.interactions,
        inestimable_required=tuple((w, "C1 alias") for w in failures),
        aliased_pairs=aliased,
        mapping=mapping,
        fraction_id=fraction_id,
        diagnostics=tuple(diags),
    )


def _synthesize_from_catalog(
    req: SynthesisRequest,
    g: RequirementsGraph,
    catalog: Catalog,
    diags: list[str],
) -> SynthesisResult:
    usable = _candidate_groupings(req, g, diags)
    ranked: list[tuple] = []
    for prof_index, (profile, grouping) in enumerate(usable.items()):
        templates = catalog.lookup_all(req.n, req.p, req.q, profile)
        for t_index, template in enumerate(templates):
            mapped = best_template_mapping(grouping, template, req.interactions)
            ranked.append(
                (
                    len(mapped.failures),
                    -template.int_count,
                    prof_index,
                    t_index,
                    mapped,
                    template,
                    grouping,
                    profile,
                )
            )
    if not ranked:
        achievable = ", ".join(p.render() for p in usable)
        diags.append(
            "no shipped template matches the achievable profiles"
            + (f" ({achievable})" if achievable else "")
            + "; supply defining words to go off catalog"
        )
        return SynthesisResult(
            "infeasible",
            req.n,
            req.p,
            req.q,
            required=req.interactions,
            diagnostics=tuple(diags),
        )
    if req.objective == "require-only":
        ranked.sort(key=lambda r: (r[0], r[2], r[3]))
    else:
        ranked.sort(key=lambda r: r[:4])
    _, _, _, _, mapped, template, grouping, profile = ranked[0]
    frac = catalog.fraction(template.fraction_id)
    gen, words, aliased = _relabel_template(template, frac.words, mapped.mapping, req.q)
    diags.append(
        f"used catalog template {template.fraction_id} "
        f"profile {profile.render()} ({template.provenance})"
    )
    return _finish_fraction(
        req,
        gen,
        words,
        grouping,
        profile,
        mapped.failures,
        aliased,
        mapped.mapping,
        template.fraction_id,
        diags,
    )


def _synthesize_from_words(
    req: SynthesisRequest, g: RequirementsGraph, diags: list[str]
) -> SynthesisResult:
    words = req.words
    subgroup = expand_words(req.n, words)
    if subgroup.resolution < 4:
        diags.append(
            "defining words of length three or less sacrifice main effects"
        )
    usable = _candidate_groupings(req, g, diags)
    ranked: list[tuple] = []
    for prof_index, (profile, grouping) in enumerate(usable.items()):
        gen = generator_for_grouping(grouping, words, req.q)
        if gen is None:
            diags.append(
                f"profile {profile.render()}: no column assignment is "
                "consistent with the defining words"
            )
            continue
        failing = _failing_cross_pairs(grouping, subgroup)
        req_fail = tuple(
            sorted(
                set(req.interactions) & set(failing), key=lambda w: w.factors
            )
        )
        estimable = count_estimable(profile) - len(failing)
        ranked.append(
            (len(req_fail), -estimable, prof_index, gen, grouping, profile, req_fail, failing)
        )
    if not ranked:
        diags.append("the defining words admit none of the achievable groupings")
        return SynthesisResult(
            "infeasible",
            req.n,
            req.p,
            req.q,
            required=req.interactions,
            diagnostics=tuple(diags),
        )
    if req.objective == "require-only":
        ranked.sort(key=lambda r: (r[0], r[2]))
    else:
        ranked.sort(key=lambda r: r[:3])
    _, _, _, gen, grouping, profile, req_fail, failing = ranked[0]
    return _finish_fraction(
        req, gen, words, grouping, profile, req_fail, failing, None, None, diags
    )


def synthesize_fraction(
    req: SynthesisRequest, catalog: Catalog | None = None
) -> SynthesisResult:
    """Block a regular fraction, from the catalog or from given words."""
    if req.p <= 0:
        raise ValueError("synthesize_fraction handles p > 0 only")
    g = RequirementsGraph.from_words(req.n, req.interactions)
    diags: list[str] = []
    k = 2**req.q - 1
    if find_coloring(g, k, req.budget) is None:
        return _infeasible_coloring(req, g)
    if req.words:
        return _synthesize_from_words(req, g, diags)
    if catalog is None:
        catalog = load_catalog()
    return _synthesize_from_catalog(req, g, catalog, diags)


def synthesize(
    req: SynthesisRequest, catalog: Catalog | None = None
) -> SynthesisResult:
    return (
        synthesize_full(req)
        if req.p == 0
        else synthesize_fraction(req, catalog)
    )
