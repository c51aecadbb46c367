"""Brute-force verification of blocked designs.

Everything here works from the expanded runs, never from the parity
shortcuts used during construction: block balance is counted directly,
and estimability is decided by an exact integer rank test on the
actual plus/minus-one contrast columns. Designs that pass both routes
have their claims verified end to end.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .design import BlockedDesign
from .effects import EffectWord, alias_set, expand_words, two_factor_alias_pairs
from .gf2 import rank as gf2_rank

__all__ = [
    "OracleError",
    "VerificationReport",
    "contrast_sign",
    "verify_confounding",
    "verify_design",
]

_PARITY16 = np.array(
    [bin(x).count("1") & 1 for x in range(1 << 16)], dtype=np.int8
)


class OracleError(ValueError):
    """A design's runs violate the sign structure a regular blocked
    factorial must have."""


def contrast_sign(run: int, e: EffectWord) -> int:
    """+1 when the run shares an even number of high factors with the
    effect word, else -1."""
    return -1 if bin(run & e.mask).count("1") & 1 else 1


def _sign_columns(runs: np.ndarray, words: Sequence[EffectWord]) -> np.ndarray:
    """Matrix of contrast signs, one row per run, one column per word."""
    masks = np.array([w.mask for w in words], dtype=np.int64)
    anded = runs[:, None] & masks[None, :]
    parity = (
        _PARITY16[anded & 0xFFFF]
        ^ _PARITY16[(anded >> 16) & 0xFFFF]
    )
    return (1 - 2 * parity.astype(np.int32)).astype(np.int64)


def verify_confounding(d: BlockedDesign, e: EffectWord) -> bool:
    """True when e's contrast is constant on every block.

    Counts signs run by run. A regular design admits only two shapes:
    constant sign per block (confounded with blocks) or an exact
    half/half split in every block (clear of blocks); anything else
    raises OracleError.
    """
    subgroup = expand_words(d.n, d.defining_words)
    if e in subgroup:
        raise ValueError(f"{e.render()} is a defining contrast, not a block effect")
    size = 2**d.q
    confounded = True
    balanced = True
    for block in d.blocks:
        plus = sum(contrast_sign(r, e) == 1 for r in block)
        if plus not in (0, size):
            confounded = False
        if plus != size // 2:
            balanced = False
    if confounded == balanced:
        raise OracleError(
            f"contrast of {e.render()} is neither block-constant nor "
            "block-balanced; runs do not form a regular blocked design"
        )
    return confounded


def _span_contains(basis: list[list[int]], target: list[int]) -> bool:
    """Exact rational span membership by fraction-free elimination."""
    rows = [list(v) for v in basis if any(v)]
    t = list(target)
    if not any(t):
        return True
    width = len(t)
    pivots: list[tuple[int, list[int]]] = []
    for row in rows:
        for col, piv_row in pivots:
            if row[col]:
                a, b = piv_row[col], row[col]
                row = [a * x - b * y for x, y in zip(row, piv_row)]
        lead = next((c for c in range(width) if row[c]), None)
        if lead is not None:
            pivots.append((lead, row))
    for col, piv_row in pivots:
        if t[col]:
            a, b = piv_row[col], t[col]
            t = [a * x - b * y for x, y in zip(t, piv_row)]
    return not any(t)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of the full brute-force check of a design."""

    n: int
    p: int
    q: int
    status: dict[EffectWord, str]
    estimable: tuple[EffectWord, ...]
    mains_estimable: bool
    two_factor_estimable: tuple[EffectWord, ...]
    alias_classes: tuple[frozenset[EffectWord], ...]
    required_failures: tuple[EffectWord, ...]
    problems: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.problems

    def to_json_dict(self) -> dict:
        order = sorted(self.status, key=lambda w: (w.order, w.factors))
        return {
            "n": self.n,
            "p": self.p,
            "q": self.q,
            "ok": self.ok,
            "mains_estimable": self.mains_estimable,
            "status": {w.render(): self.status[w] for w in order},
            "estimable": [w.render() for w in self.estimable],
            "two_factor_estimable": [w.render() for w in self.two_factor_estimable],
            "alias_classes": [
                sorted(w.render() for w in cls) for cls in self.alias_classes
            ],
            "required_failures": [w.render() for w in self.required_failures],
            "problems": list(self.problems),
        }


def _structural_problems(d: BlockedDesign) -> list[str]:
    problems = []
    runs = [r for b in d.blocks for r in b]
    if len(set(runs)) != len(runs):
        problems.append("duplicate runs across blocks")
    if any(not 0 <= r < 2**d.n for r in runs):
        problems.append("run outside the 2^n grid")
    if gf2_rank(d.generator.matrix) != d.q:
        problems.append("generator matrix is rank-deficient")
    for w in d.defining_words:
        if any(bin(r & w.mask).count("1") & 1 for r in runs):
            problems.append(f"runs stray outside the principal fraction of {w.render()}")
            break
    if not problems:
        base = frozenset(d.blocks[0])
        if 0 not in base:
            problems.append("first block does not contain the all-low run")
        else:
            for i, block in enumerate(d.blocks):
                rep = block[0]
                if frozenset(rep ^ b for b in base) != frozenset(block):
                    problems.append(f"block {i + 1} is not a coset of the first block")
                    break
    return problems


def verify_design(
    d: BlockedDesign, required: Iterable[EffectWord] = ()
) -> VerificationReport:
    """Check a design from its runs alone and classify every main
    effect and two-factor interaction.

    Statuses: "estimable", "confounded" (block-constant contrast),
    "aliased" (shares a column with another effect of order <= 2 up to
    sign), "both", or "defining". Each classification is made twice,
    once by block counting and once by an exact rank test of the
    contrast column against the block-indicator span plus the columns
    of low-order alias partners; any disagreement is a problem.
    """
    required = tuple(required)
    problems = _structural_problems(d)
    if problems:
        return VerificationReport(
            d.n, d.p, d.q, {}, (), False, (), (), required, tuple(problems)
        )

    subgroup = expand_words(d.n, d.defining_words)
    size = 2**d.q
    runs = np.array([r for b in d.blocks for r in b], dtype=np.int64)
    effects = [EffectWord.from_factors(d.n, (i,)) for i in range(1, d.n + 1)]
    effects += [
        EffectWord.from_factors(d.n, pair)
        for pair in combinations(range(1, d.n + 1), 2)
    ]

    index_of = {e: i for i, e in enumerate(effects)}
    signs = _sign_columns(runs, effects)
    block_sums = signs.reshape(len(d.blocks), size, len(effects)).sum(axis=1)
    # quotient out the block-indicator span: pi(c) = size*c - blocksums
    quotient = size * signs - np.repeat(block_sums, size, axis=0)

    status: dict[EffectWord, str] = {}
    for idx, e in enumerate(effects):
        if e in subgroup:
            status[e] = "defining"
            continue
        confounded = verify_confounding(d, e)
        partners = [a for a in alias_set(e, subgroup) if a.order <= 2]
        aliased = bool(partners)

        # independent route: exact rank test on the quotient columns
        col = quotient[:, idx].tolist()
        confounded_rank = not any(col)
        if confounded_rank != confounded:
            problems.append(
                f"{e.render()}: block counting and rank test disagree on confounding"
            )
            continue
        # order <= 2 partners are themselves mains or 2fis, so their
        # quotient columns are already computed
        partner_cols = [quotient[:, index_of[a]].tolist() for a in partners]
        estimable_rank = not confounded_rank and not _span_contains(partner_cols, col)
        estimable_pred = not confounded and not aliased
        if estimable_rank != estimable_pred:
            problems.append(
                f"{e.render()}: rank criterion disagrees with the "
                "confounding/alias classification"
            )
            continue
        if confounded and aliased:
            status[e] = "both"
        elif confounded:
            status[e] = "confounded"
        elif aliased:
            status[e] = "aliased"
        else:
            status[e] = "estimable"

    estimable = tuple(e for e in effects if status.get(e) == "estimable")
    two_factor = tuple(e for e in estimable if e.order == 2)
    mains_ok = all(
        status.get(EffectWord.from_factors(d.n, (i,))) == "estimable"
        for i in range(1, d.n + 1)
    )
    failures = tuple(
        e for e in required if status.get(e) != "estimable"
    )
    return VerificationReport(
        d.n,
        d.p,
        d.q,
        status,
        estimable,
        mains_ok,
        two_factor,
        two_factor_alias_pairs(subgroup),
        failures,
        tuple(problems),
    )
