"""Blocked factorial construction from GF(2) generator matrices.

A q x n generator matrix assigns each factor a column in GF(2)^q; the
principal block is the run subgroup spanned by the rows, and the other
blocks are its cosets. Runs are bitmasks with bit j-1 holding the
level of factor j, rendered as lowercase letter strings with "(1)" for
the all-low run.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .effects import EffectWord, FractionSpec, parse_word
from .gf2 import Gf2Matrix, Gf2Vector, enumerate_xq, rank

__all__ = [
    "GeneratorMatrix",
    "ProfileSet",
    "FactorGrouping",
    "BlockedDesign",
    "run_string",
    "parse_run",
    "run_sort_key",
    "principal_block",
    "expand_blocks",
    "is_unconfounded",
    "interaction_estimable",
    "phi_max",
    "profile_of",
    "count_estimable",
    "grouping_to_generator",
    "iter_fraction_assignments",
    "generator_from_columns",
    "generator_for_grouping",
]

MAX_RUNS = 2**16


@dataclass(frozen=True)
class GeneratorMatrix:
    """Block generator: q rows of length n over GF(2)."""

    q: int
    n: int
    matrix: Gf2Matrix

    def __post_init__(self) -> None:
        if self.matrix.nrows != self.q or self.matrix.ncols != self.n:
            raise ValueError("matrix shape does not match q x n")
        if not 1 <= self.q < self.n + 1:
            raise ValueError("need 1 <= q <= n")

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> "GeneratorMatrix":
        m = Gf2Matrix.from_lists(entries)
        return cls(m.nrows, m.ncols, m)

    def row_mask(self, i: int) -> int:
        mask = 0
        for j, bit in enumerate(self.matrix.rows[i].bits):
            mask |= bit << j
        return mask

    def column(self, factor: int) -> Gf2Vector:
        return self.matrix.column(factor - 1)

    def to_lists(self) -> list[list[int]]:
        return self.matrix.to_lists()


@dataclass(frozen=True)
class ProfileSet:
    """Column multiplicities of a generator, sorted descending.

    Padded with zeros to the 2^q - 1 possible columns. v and w are the
    balanced-case parameters: n = (2^q - 1) v + w with 0 <= w < 2^q - 1.
    """

    q: int
    multiplicities: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.multiplicities) != 2**self.q - 1:
            raise ValueError("profile must have 2^q - 1 entries")
        if list(self.multiplicities) != sorted(self.multiplicities, reverse=True):
            raise ValueError("profile entries must be sorted descending")
        if self.multiplicities and self.multiplicities[-1] < 0:
            raise ValueError("profile entries must be nonnegative")

    @classmethod
    def from_counts(cls, q: int, counts: Sequence[int]) -> "ProfileSet":
        padded = sorted(counts, reverse=True) + [0] * (2**q - 1 - len(counts))
        return cls(q, tuple(padded))

    @property
    def n(self) -> int:
        return sum(self.multiplicities)

    @property
    def v(self) -> int:
        return self.n // (2**self.q - 1)

    @property
    def w(self) -> int:
        return self.n % (2**self.q - 1)

    @property
    def positive_parts(self) -> int:
        return sum(1 for m in self.multiplicities if m > 0)

    def is_balanced(self) -> bool:
        return self.multiplicities[0] - self.multiplicities[-1] <= 1

    def render(self) -> str:
        return "<" + ",".join(str(m) for m in self.multiplicities) + ">"

    @classmethod
    def parse(cls, text: str, q: int) -> "ProfileSet":
        body = text.strip().strip("<>").strip("⟨⟩")
        counts = [int(tok) for tok in body.split(",") if tok.strip()]
        return cls.from_counts(q, counts)


@dataclass(frozen=True)
class FactorGrouping:
    """Partition of factors 1..n into same-column groups.

    Groups are kept in canonical order: larger first, ties by smallest
    member. The group order is what a column assignment maps onto.
    """

    n: int
    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        flat = [f for g in self.groups for f in g]
        if sorted(flat) != list(range(1, self.n + 1)):
            raise ValueError("groups must partition factors 1..n")

    @classmethod
    def from_sets(cls, n: int, parts: Sequence[Sequence[int]]) -> "FactorGrouping":
        canon = sorted(
            (tuple(sorted(p)) for p in parts if p),
            key=lambda g: (-len(g), g[0]),
        )
        return cls(n, tuple(canon))

    def profile(self, q: int) -> ProfileSet:
        return ProfileSet.from_counts(q, [len(g) for g in self.groups])

    def group_of(self, factor: int) -> int:
        for i, g in enumerate(self.groups):
            if factor in g:
                return i
        raise ValueError(f"factor {factor} not in grouping")

    def render(self) -> str:
        def letters(g: tuple[int, ...]) -> str:
            if self.n <= 26:
                return ",".join(chr(ord("A") + f - 1) for f in g)
            return ",".join(f"F{f}" for f in g)

        return "{" + ",".join("(" + letters(g) + ")" for g in self.groups) + "}"


def run_string(mask: int, n: int) -> str:
    """Render a run as lowercase letters, '(1)' when all factors are low."""
    if mask == 0:
        return "(1)"
    if n > 26:
        raise ValueError("letter run strings support at most 26 factors")
    return "".join(chr(ord("a") + j) for j in range(n) if mask >> j & 1)


def parse_run(text: str, n: int) -> int:
    text = text.strip()
    if text == "(1)":
        return 0
    mask = 0
    for ch in text:
        j = ord(ch) - ord("a")
        if not 0 <= j < n:
            raise ValueError(f"bad run string {text!r}")
        mask |= 1 << j
    return mask


def run_sort_key(mask: int, n: int) -> int:
    """Runs sort ascending as binary numbers with factor 1 most significant."""
    key = 0
    for j in range(n):
        key = (key << 1) | (mask >> j & 1)
    return key


def principal_block(g: GeneratorMatrix) -> tuple[int, ...]:
    """The 2^q runs spanned by the generator rows, sorted canonically."""
    if rank(g.matrix) != g.q:
        raise ValueError("generator matrix is rank-deficient")
    masks = {0}
    for i in range(g.q):
        row = g.row_mask(i)
        masks |= {m ^ row for m in masks}
    return tuple(sorted(masks, key=lambda m: run_sort_key(m, g.n)))


def expand_blocks(
    g: GeneratorMatrix, words: Sequence[EffectWord] = ()
) -> tuple[tuple[int, ...], ...]:
    """All blocks of the (possibly fractional) design.

    With defining words, runs are restricted to the principal fraction
    (even overlap with every word); the generator rows must lie inside
    it so the principal block survives the restriction.
    """
    base = principal_block(g)
    word_masks = [w.mask for w in words]
    for b in base:
        if any(bin(b & wm).count("1") & 1 for wm in word_masks):
            raise ValueError("a generator row falls outside the principal fraction")
    n_runs = 2 ** (g.n - len(words))
    if n_runs > MAX_RUNS:
        raise ValueError(f"design would have {n_runs} runs; limit is {MAX_RUNS}")
    runs = [
        m
        for m in range(2**g.n)
        if all(bin(m & wm).count("1") % 2 == 0 for wm in word_masks)
    ]
    if len(runs) != n_runs:
        raise ValueError("defining words are not independent")
    seen: set[int] = set()
    blocks = []
    for r in runs:
        if r in seen:
            continue
        coset = sorted((r ^ b for b in base), key=lambda m: run_sort_key(m, g.n))
        seen.update(coset)
        blocks.append(tuple(coset))
    blocks.sort(key=lambda blk: run_sort_key(blk[0], g.n))
    return tuple(blocks)


def is_unconfounded(g: GeneratorMatrix, e: EffectWord) -> bool:
    """An effect escapes block confounding iff some generator row meets
    it in an odd number of factors."""
    if e.n != g.n:
        raise ValueError("word over wrong factor count")
    return any(bin(g.row_mask(i) & e.mask).count("1") & 1 for i in range(g.q))


def interaction_estimable(g: GeneratorMatrix, i: int, j: int) -> bool:
    """In a blocked full factorial with all columns nonzero, the i,j
    interaction is estimable iff the two columns differ."""
    if i == j:
        raise ValueError("an interaction needs two distinct factors")
    return g.column(i) != g.column(j)


def phi_max(n: int, q: int) -> int:
    """Largest number of two-factor interactions estimable along with
    all main effects in blocks of size 2^q."""
    k = 2**q - 1
    v, w = divmod(n, k)
    return math.comb(n, 2) - v * w - k * math.comb(v, 2)


def profile_of(g: GeneratorMatrix) -> ProfileSet:
    counts: dict[tuple[int, ...], int] = {}
    for j in range(1, g.n + 1):
        col = g.column(j)
        if col.is_zero():
            raise ValueError(f"column {j} is zero; factor {j} would be confounded")
        counts[col.bits] = counts.get(col.bits, 0) + 1
    return ProfileSet.from_counts(g.q, list(counts.values()))


def count_estimable(profile: ProfileSet) -> int:
    """Number of estimable two-factor interactions: pairs of factors in
    different column groups."""
    return sum(a * b for a, b in combinations(profile.multiplicities, 2))


def grouping_to_generator(
    grouping: FactorGrouping, q: int, colmap: Sequence[int] | None = None
) -> GeneratorMatrix:
    """Build a generator giving each group a distinct nonzero column.

    colmap[i] indexes the canonical column list for group i; by default
    groups take the canonical columns in order. The chosen columns must
    be injective and span GF(2)^q.
    """
    xq = enumerate_xq(q)
    k = len(grouping.groups)
    if k > len(xq):
        raise ValueError(f"{k} groups but only {len(xq)} distinct columns exist")
    if colmap is None:
        colmap = list(range(k))
    if len(colmap) != k or len(set(colmap)) != k:
        raise ValueError("column assignment must be injective over the groups")
    chosen = [xq[c] for c in colmap]
    if rank(Gf2Matrix(tuple(chosen))) != q:
        raise ValueError("assigned columns do not span GF(2)^q; rank too low")
    cols: list[Gf2Vector] = [None] * grouping.n  # type: ignore[list-item]
    for gi, group in enumerate(grouping.groups):
        for f in group:
            cols[f - 1] = chosen[gi]
    matrix = Gf2Matrix(tuple(cols)).transpose()
    return GeneratorMatrix(q, grouping.n, matrix)


def _packed_rank(values: Sequence[int]) -> int:
    basis: list[int] = []
    for v in values:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return len(basis)


def generator_from_columns(q: int, columns: Sequence[int]) -> GeneratorMatrix:
    """Generator whose factor j takes the q-bit packed column columns[j-1]
    (first row in the high bit)."""
    rows = [
        Gf2Vector(tuple((c >> (q - 1 - i)) & 1 for c in columns))
        for i in range(q)
    ]
    return GeneratorMatrix(q, len(columns), Gf2Matrix(tuple(rows)))


def _grouping_from_columns(n: int, columns: Sequence[int]) -> FactorGrouping:
    by_col: dict[int, list[int]] = {}
    for j, c in enumerate(columns, start=1):
        by_col.setdefault(c, []).append(j)
    return FactorGrouping.from_sets(n, list(by_col.values()))


def iter_fraction_assignments(
    f: FractionSpec, q: int, fix_first: bool = True
):
    """Enumerate valid column assignments for a blocked fraction.

    The first n - p factors range over the nonzero columns of GF(2)^q
    (the first one pinned to the all-ones column unless fix_first is
    off; any assignment can be rotated into that form by a change of
    basis, which never moves factors between groups). The generated
    factors' columns follow from the defining words. An assignment is
    kept when every column is nonzero and the matrix has full rank;
    each yields (packed column tuple, grouping).
    """
    m = f.n - f.p
    full = (1 << q) - 1
    nonzero = list(range(full, 0, -1))  # descending: canonical order
    z_rows = [w.mask for w in f.words]
    first_choices = [full] if fix_first and m > 0 else nonzero

    def assignments(prefix: list[int], j: int):
        if j == m:
            cols = list(prefix)
            ok = True
            for i, zmask in enumerate(z_rows):
                acc = 0
                for t in range(m):
                    if zmask >> t & 1:
                        acc ^= cols[t]
                if acc == 0:
                    ok = False
                    break
                cols.append(acc)
            if ok and _packed_rank(cols) == q:
                yield tuple(cols)
            return
        for c in nonzero if j else first_choices:
            prefix.append(c)
            yield from assignments(prefix, j + 1)
            prefix.pop()

    for cols in assignments([], 0):
        yield cols, _grouping_from_columns(f.n, cols)


def generator_for_grouping(
    grouping: FactorGrouping, words: Sequence[EffectWord], q: int
) -> GeneratorMatrix | None:
    """Injective column assignment for a grouping under defining words.

    Searches assignments of distinct nonzero columns to the groups,
    canonical order first, so that every defining word has an even
    overlap with every generator row and the columns span GF(2)^q.
    Returns None when the grouping cannot carry the fraction.
    """
    k = len(grouping.groups)
    full = (1 << q) - 1
    if k > full:
        return None
    overlap = [
        [sum(1 for x in g if w.contains(x)) & 1 for g in grouping.groups]
        for w in words
    ]
    nonzero = list(range(full, 0, -1))

    def search(chosen: list[int]) -> tuple[int, ...] | None:
        if len(chosen) == k:
            for row in overlap:
                acc = 0
                for d, v in zip(row, chosen):
                    if d:
                        acc ^= v
                if acc:
                    return None
            if _packed_rank(chosen) != q:
                return None
            return tuple(chosen)
        for c in nonzero:
            if c in chosen:
                continue
            chosen.append(c)
            found = search(chosen)
            if found is not None:
                return found
            chosen.pop()
        return None

    assignment = search([])
    if assignment is None:
        return None
    columns = [0] * grouping.n
    for gi, group in enumerate(grouping.groups):
        for x in group:
            columns[x - 1] = assignment[gi]
    return generator_from_columns(q, columns)


@dataclass(frozen=True)
class BlockedDesign:
    """A fully expanded blocked (fractional) factorial."""

    n: int
    p: int
    q: int
    defining_words: tuple[EffectWord, ...]
    generator: GeneratorMatrix
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.defining_words) != self.p:
            raise ValueError("need exactly p defining words")
        if len(self.blocks) != 2 ** (self.n - self.p - self.q):
            raise ValueError("wrong number of blocks")
        if any(len(b) != 2**self.q for b in self.blocks):
            raise ValueError("every block must hold 2^q runs")

    @classmethod
    def build(
        cls, g: GeneratorMatrix, words: Sequence[EffectWord] = ()
    ) -> "BlockedDesign":
        blocks = expand_blocks(g, words)
        return cls(g.n, len(words), g.q, tuple(words), g, blocks)

    @property
    def runs(self) -> tuple[int, ...]:
        return tuple(r for b in self.blocks for r in b)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "q": self.q,
            "defining_words": [w.render() for w in self.defining_words],
            "generator": self.generator.to_lists(),
            "blocks": [[run_string(r, self.n) for r in b] for b in self.blocks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    @classmethod
    def from_json_dict(cls, doc: dict) -> "BlockedDesign":
        n, p, q = int(doc["n"]), int(doc["p"]), int(doc["q"])
        words = tuple(parse_word(t, n) for t in doc["defining_words"])
        g = GeneratorMatrix.from_lists(doc["generator"])
        if g.n != n or g.q != q:
            raise ValueError("generator shape disagrees with n and q")
        blocks = tuple(
            tuple(parse_run(s, n) for s in blk) for blk in doc["blocks"]
        )
        return cls(n, p, q, words, g, blocks)

    @classmethod
    def from_json(cls, text: str) -> "BlockedDesign":
        return cls.from_json_dict(json.loads(text))
