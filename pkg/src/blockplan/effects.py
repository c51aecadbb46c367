"""Factorial effect words, fraction defining relations, and alias structure.

A factor is a 1-based index; factor j is written with the uppercase
letter chr(ord('A') + j - 1) when n <= 26, and as Fj in the explicit
form accepted everywhere. An effect word is the set of factors in an
interaction (a main effect is a one-letter word), stored as a bitmask
with bit j-1 for factor j.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .gf2 import Gf2Matrix, Gf2Vector

__all__ = [
    "EffectWord",
    "FractionSpec",
    "ContrastSubgroup",
    "parse_word",
    "expand_subgroup",
    "expand_words",
    "alias_set",
    "two_factor_alias_pairs",
]

_F_FORM = re.compile(r"^(?:F[1-9][0-9]*)+$")
_LETTER_FORM = re.compile(r"^[A-Z]+$")


@dataclass(frozen=True, order=True)
class EffectWord:
    """A nonempty set of factors out of n, as a bitmask."""

    n: int
    mask: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 0 < self.mask < (1 << self.n):
            raise ValueError("word must name at least one factor out of n")

    @classmethod
    def from_factors(cls, n: int, factors: Iterable[int]) -> "EffectWord":
        mask = 0
        for f in factors:
            if not 1 <= f <= n:
                raise ValueError(f"factor {f} out of range 1..{n}")
            mask |= 1 << (f - 1)
        return cls(n, mask)

    @property
    def factors(self) -> tuple[int, ...]:
        return tuple(j + 1 for j in range(self.n) if self.mask >> j & 1)

    @property
    def order(self) -> int:
        return bin(self.mask).count("1")

    def __xor__(self, other: "EffectWord") -> "EffectWord":
        if other.n != self.n:
            raise ValueError("words over different factor counts")
        return EffectWord(self.n, self.mask ^ other.mask)

    def contains(self, factor: int) -> bool:
        return bool(self.mask >> (factor - 1) & 1)

    def render(self) -> str:
        if self.n <= 26:
            return "".join(chr(ord("A") + f - 1) for f in self.factors)
        return "".join(f"F{f}" for f in self.factors)

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.render()


def parse_word(text: str, n: int) -> EffectWord:
    """Parse 'ACD' or 'F1F3F4' into an effect word over n factors."""
    text = text.strip()
    if _F_FORM.match(text):
        factors = [int(tok) for tok in text.split("F") if tok]
    elif _LETTER_FORM.match(text) and n <= 26:
        factors = [ord(ch) - ord("A") + 1 for ch in text]
    else:
        raise ValueError(f"cannot parse effect word {text!r}")
    if len(set(factors)) != len(factors):
        raise ValueError(f"repeated factor in effect word {text!r}")
    return EffectWord.from_factors(n, factors)


@dataclass(frozen=True)
class FractionSpec:
    """Defining words of a regular 1/2^p fraction of a 2^n factorial.

    Word i must contain factor n - p + i and none of the other last p
    factors, so the last p factors are the generated ones and the words
    are automatically independent. z is the p x (n - p) incidence of
    words with the first n - p factors.
    """

    n: int
    p: int
    words: tuple[EffectWord, ...]
    z: Gf2Matrix

    @classmethod
    def from_words(cls, n: int, words: Sequence[EffectWord]) -> "FractionSpec":
        p = len(words)
        if not 0 <= p < n:
            raise ValueError("need 0 <= p < n")
        for i, w in enumerate(words):
            if w.n != n:
                raise ValueError("word over wrong factor count")
            generated = [f for f in w.factors if f > n - p]
            if generated != [n - p + i + 1]:
                raise ValueError(
                    f"word {i + 1} must contain factor {n - p + i + 1} and no "
                    "other generated factor"
                )
        z = Gf2Matrix(
            tuple(
                Gf2Vector(tuple(int(w.contains(j + 1)) for j in range(n - p)))
                for w in words
            )
        )
        return cls(n, p, tuple(words), z)

    @classmethod
    def parse(cls, n: int, texts: Sequence[str]) -> "FractionSpec":
        return cls.from_words(n, [parse_word(t, n) for t in texts])


@dataclass(frozen=True)
class ContrastSubgroup:
    """The defining-contrast subgroup of a fraction, minus the identity.

    wordlength_pattern[k] counts elements of length k; entries sum to
    2^p - 1. resolution is the shortest element length, math.inf for
    the full factorial.
    """

    n: int
    elements: frozenset[EffectWord]
    wordlength_pattern: tuple[int, ...]
    resolution: float

    def __contains__(self, e: EffectWord) -> bool:
        return e in self.elements


def expand_words(n: int, words: Sequence[EffectWord]) -> ContrastSubgroup:
    """Close an independent word list under symmetric difference."""
    masks = {0}
    for w in words:
        if w.n != n:
            raise ValueError("word over wrong factor count")
        masks |= {m ^ w.mask for m in masks}
    if len(masks) != 2 ** len(words):
        raise ValueError("defining words are not independent")
    elements = frozenset(EffectWord(n, m) for m in masks if m)
    pattern = [0] * (n + 1)
    for e in elements:
        pattern[e.order] += 1
    resolution = min((e.order for e in elements), default=math.inf)
    return ContrastSubgroup(n, elements, tuple(pattern), float(resolution))


def expand_subgroup(f: FractionSpec) -> ContrastSubgroup:
    return expand_words(f.n, f.words)


def alias_set(e: EffectWord, g: ContrastSubgroup) -> tuple[EffectWord, ...]:
    """All effects aliased with e, sorted by order then factors.

    e itself is excluded. An e inside the subgroup is rejected: its
    contrast is the mean column and has no alias set.
    """
    if e.n != g.n:
        raise ValueError("word over wrong factor count")
    if e in g:
        raise ValueError(f"{e.render()} is a defining contrast")
    partners = [e ^ w for w in g.elements]
    return tuple(sorted(partners, key=lambda w: (w.order, w.factors)))


def two_factor_alias_pairs(g: ContrastSubgroup) -> tuple[frozenset[EffectWord], ...]:
    """Classes of two-factor interactions aliased with each other.

    Each class lists mutually aliased two-factor words; singleton
    classes (a 2fi aliased only with higher-order terms) are omitted.
    Classes come back sorted by their smallest member.
    """
    classes: dict[int, set[EffectWord]] = {}
    for i, j in combinations(range(1, g.n + 1), 2):
        e = EffectWord.from_factors(g.n, (i, j))
        if e in g:
            continue
        rep = min(w.mask for w in (e, *(p for p in alias_set(e, g) if p.order == 2)))
        classes.setdefault(rep, set()).add(e)
    out = [frozenset(c) for c in classes.values() if len(c) > 1]
    return tuple(sorted(out, key=lambda c: min(w.factors for w in c)))
