"""Requirements graphs and the coloring searches behind block assignment.

Vertices are factors 1..n; an edge joins two factors whose interaction
must be estimated. A proper coloring with at most 2^q - 1 colors turns
into a factor grouping (color classes share a generator column), so
colorability questions decide design feasibility.

All searches are exact and deterministic: vertices are picked by
saturation (most distinctly-colored neighbors first, lowest index on
ties) and colors are tried lowest first, with new colors opened at
most once per branch.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .design import FactorGrouping, ProfileSet
from .effects import EffectWord

__all__ = [
    "RequirementsGraph",
    "Coloring",
    "ConditionReport",
    "BudgetExceeded",
    "MAX_VERTICES",
    "chromatic_number",
    "find_coloring",
    "colorings_with_sizes",
    "colorings_by_profile",
    "check_sufficient_conditions",
    "equitable_coloring",
    "split_color_class",
    "graph_to_dot",
]

MAX_VERTICES = 24
DEFAULT_BUDGET = 2_000_000


class BudgetExceeded(ValueError):
    """Raised when a coloring search outgrows its node budget."""


@dataclass(frozen=True)
class RequirementsGraph:
    """Simple graph over factors 1..n."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        for i, j in self.edges:
            if not (1 <= i < j <= self.n):
                raise ValueError(f"bad edge ({i},{j}) for n={self.n}")

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Sequence[int]]) -> "RequirementsGraph":
        edges = set()
        for a, b in pairs:
            if a == b:
                raise ValueError("an interaction needs two distinct factors")
            edges.add((min(a, b), max(a, b)))
        return cls(n, frozenset(edges))

    @classmethod
    def from_words(cls, n: int, words: Iterable[EffectWord]) -> "RequirementsGraph":
        pairs = []
        for w in words:
            if w.order != 2:
                raise ValueError(f"{w.render()} is not a two-factor interaction")
            pairs.append(w.factors)
        return cls.from_pairs(n, pairs)

    def words(self) -> tuple[EffectWord, ...]:
        return tuple(
            EffectWord.from_factors(self.n, e) for e in sorted(self.edges)
        )

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n + 1)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def degree_map(self) -> dict[int, int]:
        adj = self.adjacency()
        return {v: len(adj[v]) for v in range(1, self.n + 1)}

    def without_vertex(self, v: int) -> "RequirementsGraph":
        kept = [e for e in self.edges if v not in e]
        return RequirementsGraph(self.n, frozenset(kept))

    def without_edge(self, edge: tuple[int, int]) -> "RequirementsGraph":
        e = (min(edge), max(edge))
        return RequirementsGraph(self.n, self.edges - {e})

    def is_acyclic(self) -> bool:
        parent = list(range(self.n + 1))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in self.edges:
            ri, rj = find(i), find(j)
            if ri == rj:
                return False
            parent[ri] = rj
        return True


@dataclass(frozen=True)
class Coloring:
    """Proper coloring as ordered color classes (largest first)."""

    n: int
    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        flat = [v for c in self.classes for v in c]
        if len(set(flat)) != len(flat) or any(not c for c in self.classes):
            raise ValueError("classes must be nonempty and disjoint")
        if any(v < 1 or v > self.n for v in flat):
            raise ValueError("vertex out of range")

    @classmethod
    def from_classes(cls, n: int, classes: Iterable[Iterable[int]]) -> "Coloring":
        canon = sorted(
            (tuple(sorted(c)) for c in classes if c),
            key=lambda c: (-len(c), c[0]),
        )
        return cls(n, tuple(canon))

    @property
    def k(self) -> int:
        return len(self.classes)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    def is_proper(self, g: RequirementsGraph) -> bool:
        color = self.vertex_colors()
        return all(color.get(i) != color.get(j) for i, j in g.edges)

    def vertex_colors(self) -> dict[int, int]:
        return {v: ci for ci, cls in enumerate(self.classes) for v in cls}

    def covers_all(self) -> bool:
        return sum(len(c) for c in self.classes) == self.n

    def to_grouping(self) -> FactorGrouping:
        if not self.covers_all():
            raise ValueError("coloring does not cover every factor")
        return FactorGrouping.from_sets(self.n, self.classes)

    def profile(self, q: int) -> ProfileSet:
        return ProfileSet.from_counts(q, [len(c) for c in self.classes])


def _check_size(g: RequirementsGraph) -> None:
    if g.n > MAX_VERTICES:
        raise ValueError(
            f"graphs beyond {MAX_VERTICES} factors are out of scope for the "
            "exact searches"
        )


def _saturation_order_search(
    g: RequirementsGraph,
    k: int,
    caps: Sequence[int] | None,
    budget: int,
    equal_cap_break: bool,
) -> Iterator[list[int]]:
    """Yield proper assignments color[v] with at most k colors.

    caps bounds each color class size (exact totals are the caller's
    concern; capacities here are upper bounds met by construction when
    they sum to n). With equal_cap_break, a color of the same capacity
    as its predecessor may not open before that predecessor is used,
    which quotients away same-size class swaps.
    """
    adj = g.adjacency()
    color: dict[int, int] = {}
    counts = [0] * k
    nodes = 0

    def admissible(v: int) -> list[int]:
        seen = {color[u] for u in adj[v] if u in color}
        used_any = max((c for c in color.values()), default=-1)
        out = []
        for c in range(k):
            if c in seen:
                continue
            if caps is not None and counts[c] >= caps[c]:
                continue
            if caps is None and c > used_any + 1:
                break  # unconstrained colors are interchangeable: open one
            if (
                equal_cap_break
                and caps is not None
                and c > 0
                and caps[c] == caps[c - 1]
                and counts[c - 1] == 0
            ):
                continue  # equal-capacity classes open in index order
            out.append(c)
        return out

    def pick() -> int | None:
        best = None
        best_key = None
        for v in range(1, g.n + 1):
            if v in color:
                continue
            sat = len({color[u] for u in adj[v] if u in color})
            key = (-sat, -len(adj[v]), v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        return best

    def walk() -> Iterator[list[int]]:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(
                "coloring search budget exceeded; run "
                "check_sufficient_conditions to screen the graph first"
            )
        v = pick()
        if v is None:
            yield [color[u] for u in range(1, g.n + 1)]
            return
        for c in admissible(v):
            color[v] = c
            counts[c] += 1
            yield from walk()
            counts[c] -= 1
            del color[v]

    yield from walk()


def find_coloring(
    g: RequirementsGraph, k: int, budget: int = DEFAULT_BUDGET
) -> Coloring | None:
    """First proper coloring with at most k colors, or None if the
    chromatic number exceeds k."""
    _check_size(g)
    if k < 1:
        return None
    for assignment in _saturation_order_search(g, k, None, budget, False):
        classes: dict[int, list[int]] = {}
        for v, c in enumerate(assignment, start=1):
            classes.setdefault(c, []).append(v)
        return Coloring.from_classes(g.n, classes.values())
    return None


def chromatic_number(g: RequirementsGraph, budget: int = DEFAULT_BUDGET) -> int:
    """Exact chromatic number for graphs of desk scale."""
    _check_size(g)
    if g.n == 0:
        return 0
    if not g.edges:
        return 1
    for k in range(2, g.n + 1):
        if find_coloring(g, k, budget) is not None:
            return k
    raise AssertionError("unreachable: n colors always suffice")


def colorings_with_sizes(
    g: RequirementsGraph, sizes: Sequence[int], budget: int = DEFAULT_BUDGET
) -> Iterator[Coloring]:
    """All proper colorings with exactly the given class sizes.

    Each set partition appears exactly once; classes of equal size are
    not distinguished. Sizes must be positive and sum to n.
    """
    _check_size(g)
    caps = sorted(sizes, reverse=True)
    if any(s <= 0 for s in caps) or sum(caps) != g.n:
        raise ValueError("sizes must be positive and sum to n")
    k = len(caps)
    for assignment in _saturation_order_search(g, k, caps, budget, True):
        classes: dict[int, list[int]] = {}
        for v, c in enumerate(assignment, start=1):
            classes.setdefault(c, []).append(v)
        if len(classes) == k:
            yield Coloring.from_classes(g.n, classes.values())


def _partitions(total: int, max_part: int, max_parts: int) -> Iterator[tuple[int, ...]]:
    if total == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(total, max_part), 0, -1):
        for rest in _partitions(total - first, first, max_parts - 1):
            yield (first, *rest)


def colorings_by_profile(
    g: RequirementsGraph, q: int, budget: int = DEFAULT_BUDGET
) -> dict[ProfileSet, FactorGrouping]:
    """One witness grouping per achievable class-size multiset using at
    most 2^q - 1 colors, keyed by the zero-padded profile."""
    _check_size(g)
    k_max = 2**q - 1
    out: dict[ProfileSet, FactorGrouping] = {}
    for sizes in _partitions(g.n, g.n, k_max):
        witness = next(colorings_with_sizes(g, sizes, budget), None)
        if witness is not None:
            out[ProfileSet.from_counts(q, sizes)] = witness.to_grouping()
    return out


@dataclass(frozen=True)
class ConditionReport:
    """Checkable conditions that guarantee a (2^q - 1)-coloring exists.

    Fields that only make sense for blocks of four (q = 2) are None at
    other q. equitable_guaranteed marks the forest conditions that
    promise an equitable 3-coloring, which attains the interaction
    count bound.
    """

    q: int
    max_degree: int
    acyclic: bool
    low_degree_no_complete: bool
    few_high_degree: bool
    common_cycle_vertex: bool | None
    forest_degree_within_bound: bool | None
    forest_degree_at_exact_bound: bool | None
    forest_max_degree_four: bool | None

    @property
    def colorable_guaranteed(self) -> bool:
        flags = [
            self.low_degree_no_complete,
            self.few_high_degree,
            self.common_cycle_vertex,
            self.forest_degree_within_bound,
            self.forest_degree_at_exact_bound,
            self.forest_max_degree_four,
        ]
        return any(f for f in flags if f is not None)

    @property
    def equitable_guaranteed(self) -> bool:
        flags = [
            self.forest_degree_within_bound,
            self.forest_degree_at_exact_bound,
            self.forest_max_degree_four,
        ]
        return any(f for f in flags if f is not None)


def _has_complete_component(g: RequirementsGraph, size: int) -> bool:
    """Detect a complete subgraph on `size` vertices, valid under the
    assumption max degree <= size - 1 (the clique is then a component)."""
    adj = g.adjacency()
    seen: set[int] = set()
    for start in range(1, g.n + 1):
        if start in seen or len(adj[start]) != size - 1:
            continue
        comp = {start}
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for u in adj[v]:
                if u not in comp:
                    comp.add(u)
                    frontier.append(u)
        seen |= comp
        if len(comp) == size and all(len(adj[v]) == size - 1 for v in comp):
            return True
    return False


def check_sufficient_conditions(g: RequirementsGraph, q: int) -> ConditionReport:
    _check_size(g)
    k = 2**q - 1
    degrees = g.degree_map()
    max_degree = max(degrees.values(), default=0)
    acyclic = g.is_acyclic()

    low_degree = max_degree <= k
    low_degree_no_complete = low_degree and not _has_complete_component(g, 2**q)
    few_high_degree = sum(1 for d in degrees.values() if d >= k) <= k

    common_cycle_vertex: bool | None = None
    forest_four: bool | None = None
    forest_within: bool | None = None
    forest_exact: bool | None = None
    if q == 2:
        common_cycle_vertex = acyclic or any(
            g.without_vertex(v).is_acyclic() for v in range(1, g.n + 1)
        )
        forest_four = acyclic and max_degree <= 4
        forest_within = acyclic and 3 * max_degree <= g.n + 8
        forest_exact = acyclic and 3 * max_degree == g.n + 10
    return ConditionReport(
        q,
        max_degree,
        acyclic,
        low_degree_no_complete,
        few_high_degree,
        common_cycle_vertex,
        forest_within,
        forest_exact,
        forest_four,
    )


def equitable_coloring(
    g: RequirementsGraph, k: int, budget: int = DEFAULT_BUDGET
) -> Coloring | None:
    """Proper coloring in exactly k classes whose sizes differ by at
    most one, or None."""
    _check_size(g)
    if k < 1 or k > g.n:
        return None
    floor, extra = divmod(g.n, k)
    sizes = [floor + 1] * extra + [floor] * (k - extra)
    return next(colorings_with_sizes(g, sizes, budget), None)


def split_color_class(c: Coloring) -> Coloring:
    """Move half of the largest class (rounded down) to a new color.

    Splitting an independent set keeps the coloring proper and raises
    the pairwise product sum by floor(s/2) * ceil(s/2); useless once
    every class is a singleton.
    """
    if all(len(cls) == 1 for cls in c.classes):
        raise ValueError("every class is a singleton; nothing to split")
    largest = max(range(c.k), key=lambda i: (len(c.classes[i]), -i))
    cls = c.classes[largest]
    half = len(cls) // 2
    moved, kept = cls[:half], cls[half:]
    classes = [list(x) for x in c.classes]
    classes[largest] = list(kept)
    classes.append(list(moved))
    return Coloring.from_classes(c.n, classes)


def _vertex_label(v: int, n: int) -> str:
    return chr(ord("A") + v - 1) if n <= 26 else f"F{v}"


def graph_to_dot(
    n: int,
    edges: Iterable[tuple[int, int]],
    dashed: Iterable[tuple[int, int]] = (),
    name: str = "design",
) -> str:
    """Render an undirected graph in DOT, dashing the given edges."""
    dashed_set = {(min(e), max(e)) for e in dashed}
    lines = [f"graph {name} {{"]
    for v in range(1, n + 1):
        lines.append(f'  {_vertex_label(v, n)};')
    for i, j in sorted({(min(e), max(e)) for e in edges} | dashed_set):
        style = ' [style=dashed]' if (i, j) in dashed_set else ""
        lines.append(f"  {_vertex_label(i, n)} -- {_vertex_label(j, n)}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"
