"""Shipped table of blocked-fraction templates.

The raw rows live in data/printed_tables.txt exactly as printed,
typos included. A build step parses them, validates every row against
the defining-word algebra, repairs the rows that cannot be read as
printed (by searching the fraction's column assignments for the unique
structure matching the row's profile and interaction count), and
writes data/catalog.json. Runtime code only ever loads the validated
JSON: lookups never re-run validation or repair.
"""
from __future__ import annotations

import json
import os
import re
import sys
import warnings
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Sequence

from .design import (
    FactorGrouping,
    ProfileSet,
    count_estimable,
    generator_for_grouping,
    iter_fraction_assignments,
)
from .effects import (
    ContrastSubgroup,
    EffectWord,
    FractionSpec,
    alias_set,
    expand_subgroup,
    parse_word,
)

__all__ = [
    "FractionRecord",
    "TemplateRecord",
    "Catalog",
    "PrintedRow",
    "parse_printed",
    "validate_row",
    "repair_row",
    "build_records",
    "load_catalog",
]

ENV_VAR = "BLOCKPLAN_CATALOG"
BLOCK_Q = 2  # the shipped tables all use blocks of four runs


@dataclass(frozen=True)
class FractionRecord:
    """A named fraction: defining words in normal form plus resolution."""

    id: str
    n: int
    p: int
    words: tuple[EffectWord, ...]
    resolution: int

    def spec(self) -> FractionSpec:
        return FractionSpec.from_words(self.n, self.words)

    def subgroup(self) -> ContrastSubgroup:
        return expand_subgroup(self.spec())


@dataclass(frozen=True)
class TemplateRecord:
    """One validated template row."""

    table: int
    n: int
    p: int
    q: int
    runs: int
    profile: ProfileSet
    int_count: int
    fraction_id: str
    grouping: FactorGrouping
    aliased_pairs: tuple[EffectWord, ...]
    provenance: str  # "verbatim" or "repaired"
    defects: tuple[str, ...] = ()


@dataclass(frozen=True)
class PrintedRow:
    """A template row as transcribed, before any validation."""

    table: int
    n: int
    p: int
    runs: int
    profile: tuple[int, ...]
    int_count: int
    fraction_id: str
    grouping_parts: tuple[tuple[int, ...], ...]
    aliased: tuple[str, ...] | None  # None when the table prints no column
    notes: tuple[str, ...]  # transcription oddities found while parsing
    line: int


_GROUP_RE = re.compile(r"\(([^)]*)\)")


def _parse_grouping(text: str) -> tuple[tuple[tuple[int, ...], ...], tuple[str, ...]]:
    parts = []
    notes = []
    for body in _GROUP_RE.findall(text):
        factors = []
        for tok in body.split(","):
            tok = tok.strip()
            if not tok:
                notes.append(f"empty factor slot printed in ({body})")
                continue
            if not re.fullmatch(r"F[0-9]+", tok):
                raise ValueError(f"bad factor token {tok!r}")
            factors.append(int(tok[1:]))
        parts.append(tuple(factors))
    if not parts:
        raise ValueError(f"no groups in {text!r}")
    return tuple(parts), tuple(notes)


def parse_printed(text: str) -> tuple[list[PrintedRow], dict[str, FractionRecord]]:
    rows: list[PrintedRow] = []
    fractions: dict[str, FractionRecord] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("|")
        kind = fields[0]
        if kind == "template":
            _, table, n, p, runs, profile, count, frac, grouping, aliased = fields
            aliased_col: tuple[str, ...] | None
            if aliased == "-":
                aliased_col = None
            elif aliased == "none":
                aliased_col = ()
            else:
                aliased_col = tuple(t for t in aliased.split(",") if t)
            parts, notes = _parse_grouping(grouping)
            rows.append(
                PrintedRow(
                    int(table),
                    int(n),
                    int(p),
                    int(runs),
                    tuple(int(x) for x in profile.split(",")),
                    int(count),
                    frac,
                    parts,
                    aliased_col,
                    notes,
                    lineno,
                )
            )
        elif kind == "fraction":
            _, fid, words_field = fields
            n_str, rest = fid.split("-")
            n = int(n_str)
            p = int(rest.split(".")[0])
            words = tuple(
                parse_word(t, n) for t in words_field.split(",") if t.strip()
            )
            spec = FractionSpec.from_words(n, words)  # enforces normal form
            resolution = int(expand_subgroup(spec).resolution)
            fractions[fid] = FractionRecord(fid, n, p, words, resolution)
        else:
            raise ValueError(f"line {lineno}: unknown row kind {kind!r}")
    return rows, fractions


def _failing_pairs(
    grouping: FactorGrouping, subgroup: ContrastSubgroup
) -> tuple[EffectWord, ...]:
    """Cross-group interactions that alias another effect of order <= 2."""
    n = grouping.n
    out = []
    for gi in range(len(grouping.groups)):
        for gj in range(gi + 1, len(grouping.groups)):
            for a in grouping.groups[gi]:
                for b in grouping.groups[gj]:
                    e = EffectWord.from_factors(n, (a, b))
                    if e in subgroup:
                        out.append(e)
                    elif any(x.order <= 2 for x in alias_set(e, subgroup)):
                        out.append(e)
    return tuple(sorted(out, key=lambda w: w.factors))


def validate_row(
    row: PrintedRow, fractions: dict[str, FractionRecord]
) -> list[str]:
    """Check a printed row's own consistency; empty list means valid."""
    problems: list[str] = list(row.notes)
    frac = fractions.get(row.fraction_id)
    if frac is None:
        return problems + [f"unknown fraction {row.fraction_id}"]
    if (frac.n, frac.p) != (row.n, row.p):
        problems.append("fraction size disagrees with the row")
    if row.runs != 2 ** (row.n - row.p):
        problems.append("run count disagrees with n and p")
    if row.aliased is None:
        if frac.resolution < 5:
            problems.append("fraction below resolution V in a no-alias table")
    else:
        pattern = frac.subgroup().wordlength_pattern
        if frac.resolution != 4 or pattern[4] != 1:
            problems.append("fraction is not resolution IV with one short word")

    flat = sorted(f for g in row.grouping_parts for f in g)
    if flat != list(range(1, row.n + 1)):
        missing = sorted(set(range(1, row.n + 1)) - set(flat))
        dupes = sorted({f for f in flat if flat.count(f) > 1})
        problems.append(
            f"grouping is not a partition (missing {missing}, repeated {dupes})"
        )
        return problems

    grouping = FactorGrouping.from_sets(row.n, row.grouping_parts)
    sizes = tuple(sorted((len(g) for g in row.grouping_parts), reverse=True))
    if sizes != row.profile:
        problems.append(f"group sizes {sizes} do not match profile {row.profile}")
        return problems

    if generator_for_grouping(grouping, frac.words, BLOCK_Q) is None:
        problems.append("no column assignment satisfies the defining words")
        return problems

    failing = _failing_pairs(grouping, frac.subgroup())
    expected = count_estimable(ProfileSet.from_counts(BLOCK_Q, row.profile)) - len(
        failing
    )
    if expected != row.int_count:
        problems.append(
            f"estimable count {expected} does not match printed {row.int_count}"
        )
    if row.aliased is not None:
        printed = tuple(sorted(
            (parse_word(t, row.n) for t in row.aliased), key=lambda w: w.factors
        ))
        if printed != failing:
            problems.append("printed aliased pairs disagree with the words")
    return problems


def _record_from(
    row: PrintedRow,
    grouping: FactorGrouping,
    aliased: tuple[EffectWord, ...],
    provenance: str,
    defects: Sequence[str] = (),
) -> TemplateRecord:
    return TemplateRecord(
        row.table,
        row.n,
        row.p,
        BLOCK_Q,
        row.runs,
        ProfileSet.from_counts(BLOCK_Q, row.profile),
        row.int_count,
        row.fraction_id,
        grouping,
        aliased,
        provenance,
        tuple(defects),
    )


def repair_row(
    row: PrintedRow, fractions: dict[str, FractionRecord]
) -> TemplateRecord:
    """Rebuild a corrupt row by searching the fraction's assignments.

    A row that validates as printed comes back unchanged (verbatim).
    Otherwise the repaired grouping is the first one (in canonical
    search order) whose profile, estimable count, and aliased pairs
    agree with the printed values; those fields pin the row's design
    up to relabeling.
    """
    defects = validate_row(row, fractions)
    if not defects:
        grouping = FactorGrouping.from_sets(row.n, row.grouping_parts)
        failing = _failing_pairs(grouping, fractions[row.fraction_id].subgroup())
        return _record_from(row, grouping, failing, "verbatim")
    frac = fractions[row.fraction_id]
    subgroup = frac.subgroup()
    target_profile = ProfileSet.from_counts(BLOCK_Q, row.profile)
    printed_aliased = (
        None
        if row.aliased is None
        else tuple(sorted(
            (parse_word(t, row.n) for t in row.aliased), key=lambda w: w.factors
        ))
    )
    for _, grouping in iter_fraction_assignments(frac.spec(), BLOCK_Q):
        if grouping.profile(BLOCK_Q) != target_profile:
            continue
        failing = _failing_pairs(grouping, subgroup)
        if count_estimable(target_profile) - len(failing) != row.int_count:
            continue
        if printed_aliased is not None and failing != printed_aliased:
            continue
        return _record_from(row, grouping, failing, "repaired", defects)
    raise ValueError(
        f"no assignment of {row.fraction_id} matches profile "
        f"{target_profile.render()} with {row.int_count} estimable"
    )


def build_records(
    text: str,
) -> tuple[list[TemplateRecord], dict[str, FractionRecord]]:
    rows, fractions = parse_printed(text)
    records = []
    for row in rows:
        try:
            records.append(repair_row(row, fractions))
        except ValueError as exc:
            # unrepairable rows are dropped, never shipped
            warnings.warn(f"dropping printed row at line {row.line}: {exc}")
    return records, fractions


def records_to_json(
    templates: Iterable[TemplateRecord], fractions: dict[str, FractionRecord]
) -> dict:
    return {
        "fractions": [
            {
                "id": f.id,
                "n": f.n,
                "p": f.p,
                "words": [w.render() for w in f.words],
                "resolution": f.resolution,
            }
            for f in fractions.values()
        ],
        "templates": [
            {
                "table": t.table,
                "n": t.n,
                "p": t.p,
                "q": t.q,
                "runs": t.runs,
                "profile": list(t.profile.multiplicities),
                "int_count": t.int_count,
                "fraction": t.fraction_id,
                "grouping": [list(g) for g in t.grouping.groups],
                "aliased": [w.render() for w in t.aliased_pairs],
                "provenance": t.provenance,
                "defects": list(t.defects),
            }
            for t in templates
        ],
    }


@dataclass(frozen=True)
class Catalog:
    templates: tuple[TemplateRecord, ...]
    fractions: dict[str, FractionRecord]

    def lookup(
        self, n: int, p: int, q: int, profile: ProfileSet
    ) -> TemplateRecord | None:
        matches = self.lookup_all(n, p, q, profile)
        return matches[0] if matches else None

    def lookup_all(
        self, n: int, p: int, q: int, profile: ProfileSet
    ) -> tuple[TemplateRecord, ...]:
        return tuple(
            t
            for t in self.templates
            if (t.n, t.p, t.q) == (n, p, q) and t.profile == profile
        )

    def filter(self, n: int | None = None, p: int | None = None) -> tuple[TemplateRecord, ...]:
        return tuple(
            t
            for t in self.templates
            if (n is None or t.n == n) and (p is None or t.p == p)
        )

    def fraction(self, fid: str) -> FractionRecord:
        return self.fractions[fid]


def _catalog_from_json(doc: dict) -> Catalog:
    fractions = {}
    for f in doc["fractions"]:
        words = tuple(parse_word(t, f["n"]) for t in f["words"])
        fractions[f["id"]] = FractionRecord(
            f["id"], f["n"], f["p"], words, f["resolution"]
        )
    templates = []
    for t in doc["templates"]:
        templates.append(
            TemplateRecord(
                t["table"],
                t["n"],
                t["p"],
                t["q"],
                t["runs"],
                ProfileSet.from_counts(t["q"], t["profile"]),
                t["int_count"],
                t["fraction"],
                FactorGrouping.from_sets(t["n"], t["grouping"]),
                tuple(parse_word(w, t["n"]) for w in t["aliased"]),
                t["provenance"],
                tuple(t["defects"]),
            )
        )
    return Catalog(tuple(templates), fractions)


def printed_tables_text() -> str:
    return (
        resources.files("blockplan").joinpath("data/printed_tables.txt").read_text()
    )


def load_catalog(path: str | None = None) -> Catalog:
    """Load the validated catalog (env BLOCKPLAN_CATALOG overrides)."""
    if path is None:
        path = os.environ.get(ENV_VAR)
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            return _catalog_from_json(json.load(fh))
    data = resources.files("blockplan").joinpath("data/catalog.json").read_text()
    return _catalog_from_json(json.loads(data))


def build_catalog_file(out_path: str) -> int:
    templates, fractions = build_records(printed_tables_text())
    doc = records_to_json(templates, fractions)
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    return len(templates)


if __name__ == "__main__":  # pragma: no cover - build-time entry
    out = sys.argv[1] if len(sys.argv) > 1 else None
    if out is None:
        out = str(resources.files("blockplan").joinpath("data/catalog.json"))
    count = build_catalog_file(out)
    print(f"wrote {count} templates to {out}")
