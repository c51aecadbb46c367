"""Command line front end.

Subcommands:
  analyze     size up a requirements graph before committing to a design
  construct   synthesize a blocked design and emit JSON or a run sheet
  verify      brute-force audit of a design file
  catalog     browse the shipped fraction templates
  export-dot  requirements or estimability graph in DOT
  report      construct plus figures and run sheet in one directory

Exit codes: 0 success, 2 infeasible, 3 partial (some required
interactions lost), 4 bad input, 5 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Sequence

from . import __version__
from .catalog import load_catalog
from .design import BlockedDesign, ProfileSet, count_estimable, phi_max, run_string
from .effects import EffectWord, parse_word
from .graphs import (
    DEFAULT_BUDGET,
    MAX_VERTICES,
    BudgetExceeded,
    RequirementsGraph,
    check_sufficient_conditions,
    chromatic_number,
    colorings_by_profile,
    graph_to_dot,
)
from .oracle import verify_design
from .synth import SynthesisRequest, SynthesisResult, synthesize

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_PARTIAL = 3
EXIT_INPUT = 4
EXIT_VERIFY = 5

_STATUS_EXIT = {"ok": EXIT_OK, "partial": EXIT_PARTIAL, "infeasible": EXIT_INFEASIBLE}


class InputError(ValueError):
    """Bad flag, file, or request document."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad flags; we reserve 2 for
    # infeasible designs, so route parse errors through InputError
    def error(self, message: str) -> None:  # type: ignore[override]
        raise InputError(message)


def _letter(j: int, n: int) -> str:
    return chr(ord("A") + j - 1) if n <= 26 else f"F{j}"


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def parse_word_list(spec: str | None, n: int) -> tuple[EffectWord, ...]:
    """Words from an inline string ("AB,AC DE") or a file of them.

    Files may carry # comments. Duplicates collapse, order kept.
    """
    if not spec:
        return ()
    from_file = os.path.exists(spec)
    text = _read_text(spec) if from_file else spec
    words: list[EffectWord] = []
    for lineno, raw in enumerate(text.splitlines() or [text], start=1):
        line = raw.split("#", 1)[0]
        for tok in line.replace(",", " ").split():
            try:
                words.append(parse_word(tok, n))
            except ValueError as exc:
                where = (
                    f"{spec}:{lineno}:{raw.index(tok) + 1}: " if from_file else ""
                )
                raise InputError(f"{where}{exc}") from exc
    return tuple(dict.fromkeys(words))


def request_from_args(args: argparse.Namespace) -> SynthesisRequest:
    doc: dict = {}
    if getattr(args, "request", None):
        try:
            doc = json.loads(_read_text(args.request))
        except json.JSONDecodeError as exc:
            raise InputError(f"request file is not JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise InputError("request document must be a JSON object")

    def pick(key: str, flag, default=None):
        return doc.get(key, default) if key in doc else (
            flag if flag is not None else default
        )

    n = pick("n", getattr(args, "n", None))
    if n is None:
        raise InputError("--n is required (or give a request file with n)")
    p = pick("p", getattr(args, "p", None), 0)
    q = pick("q", getattr(args, "q", None), 2)
    try:
        n, p, q = int(n), int(p), int(q)
    except (TypeError, ValueError) as exc:
        raise InputError(f"n, p, q must be integers: {exc}") from exc

    def word_spec(key: str) -> str | None:
        if key not in doc:
            return getattr(args, key, None)
        value = doc[key]
        if isinstance(value, str):
            return value
        return ",".join(str(t) for t in value)

    interactions = parse_word_list(word_spec("interactions"), n)
    words = parse_word_list(word_spec("words"), n)

    objective = pick("objective", getattr(args, "objective", None),
                     "maximize-estimable")
    prof_text = pick("profile", getattr(args, "profile", None))
    try:
        profile = ProfileSet.parse(prof_text, q) if prof_text else None
        budget = int(pick("budget", getattr(args, "budget", None),
                          DEFAULT_BUDGET))
        return SynthesisRequest(
            n=n, p=p, q=q, interactions=interactions, objective=objective,
            words=words, profile=profile, budget=budget,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def runsheet_csv(d: BlockedDesign) -> str:
    """One row per run: block id, classical run label, 0/1 levels."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["block", "run"] + [_letter(j, d.n) for j in range(1, d.n + 1)])
    for i, block in enumerate(d.blocks, start=1):
        for r in block:
            writer.writerow(
                [i, run_string(r, d.n)]
                + [(r >> (j - 1)) & 1 for j in range(1, d.n + 1)]
            )
    return buf.getvalue()


def _greedy_color_bound(g: RequirementsGraph) -> int:
    adj = g.adjacency()
    order = sorted(range(1, g.n + 1), key=lambda v: (-len(adj[v]), v))
    color: dict[int, int] = {}
    for v in order:
        used = {color[u] for u in adj[v] if u in color}
        c = 1
        while c in used:
            c += 1
        color[v] = c
    return max(color.values(), default=1)


def cross_check(result: SynthesisResult) -> list[str]:
    """Compare a synthesized design against the brute-force audit.

    The synthesizer predicts estimability from the generator matrix;
    the oracle rederives it from the runs alone. Any gap is an
    internal failure, never something to paper over.
    """
    assert result.design is not None
    report = verify_design(result.design, required=result.required)
    problems = list(report.problems)
    if not report.mains_estimable:
        problems.append("a main effect is confounded or aliased")
    predicted = {w.render() for w in result.estimable}
    actual = {w.render() for w in report.two_factor_estimable}
    if predicted != actual:
        gained = sorted(actual - predicted)
        lost = sorted(predicted - actual)
        problems.append(
            "estimable set disagrees with the oracle"
            + (f"; claimed but not estimable: {', '.join(lost)}" if lost else "")
            + (f"; estimable but unclaimed: {', '.join(gained)}" if gained else "")
        )
    claimed_failures = {w.render() for w in result.required_failures}
    actual_failures = {w.render() for w in report.required_failures}
    if claimed_failures != actual_failures:
        problems.append("required-failure set disagrees with the oracle")
    return problems


# ---------------------------------------------------------------- analyze


def cmd_analyze(args: argparse.Namespace) -> int:
    n, q = args.n, args.q
    interactions = parse_word_list(args.interactions, n)
    try:
        g = RequirementsGraph.from_words(n, interactions)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    k = 2**q - 1

    doc: dict = {
        "n": n,
        "q": q,
        "block_size": 2**q,
        "interactions": [w.render() for w in interactions],
    }
    exact = n <= MAX_VERTICES
    chi = chromatic_number(g, budget=args.budget) if exact else _greedy_color_bound(g)
    doc["chromatic_number" if exact else "chromatic_number_bound"] = chi
    feasible: bool | None = True if chi <= k else (False if exact else None)
    doc["feasible"] = feasible
    doc["phi_max"] = phi_max(n, q)

    cond = check_sufficient_conditions(g, q)
    doc["conditions"] = {
        "max_degree": cond.max_degree,
        "acyclic": cond.acyclic,
        "low_degree_no_complete": cond.low_degree_no_complete,
        "few_high_degree": cond.few_high_degree,
        "common_cycle_vertex": cond.common_cycle_vertex,
        "forest_degree_within_bound": cond.forest_degree_within_bound,
        "forest_degree_at_exact_bound": cond.forest_degree_at_exact_bound,
        "forest_max_degree_four": cond.forest_max_degree_four,
        "colorable_guaranteed": cond.colorable_guaranteed,
        "equitable_guaranteed": cond.equitable_guaranteed,
    }

    profiles: list[dict] = []
    if feasible and exact:
        by_profile = colorings_by_profile(g, q, budget=args.budget)
        ranked = sorted(
            by_profile,
            key=lambda prof: (-count_estimable(prof), prof.multiplicities),
        )
        profiles = [
            {"profile": prof.render(), "estimable": count_estimable(prof)}
            for prof in ranked
        ]
    doc["achievable_profiles"] = profiles

    if args.format == "json":
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
        return EXIT_OK

    lines = [f"factors: {n}    required interactions: {len(interactions)}"]
    label = "chromatic number" if exact else "chromatic number (greedy bound)"
    lines.append(f"{label}: {chi}")
    if feasible:
        lines.append(f"feasible in blocks of {2**q}: yes ({k} groups available)")
    elif feasible is None:
        lines.append(f"feasible in blocks of {2**q}: unknown (bound exceeds {k})")
    else:
        lines.append(
            f"infeasible for q={q}: needs {chi} groups, blocks of {2**q} give {k}"
        )
    lines.append(f"phi_max({n},{q}) = {doc['phi_max']}")
    flags = ", ".join(
        f"{key}={value}"
        for key, value in doc["conditions"].items()
        if key not in ("max_degree",)
    )
    lines.append(f"max degree: {cond.max_degree}")
    lines.append(f"conditions: {flags}")
    if profiles:
        lines.append("achievable profiles (best first):")
        for entry in profiles:
            lines.append(f"  {entry['profile']}: {entry['estimable']} estimable")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# -------------------------------------------------------------- construct


def cmd_construct(args: argparse.Namespace) -> int:
    req = request_from_args(args)
    result = synthesize(req)
    code = _STATUS_EXIT[result.status]

    if result.design is not None:
        problems = cross_check(result)
        if problems:
            for line in problems:
                print(f"verification failure: {line}", file=sys.stderr)
            return EXIT_VERIFY

    if args.format in ("csv", "dot"):
        if result.design is None:
            for line in result.diagnostics:
                print(line, file=sys.stderr)
            return code
        if args.format == "csv":
            _emit(runsheet_csv(result.design), args.out)
        else:
            dashed = [w.factors for w in result.aliased_pairs]
            dashed += [w.factors for w in result.required_failures]
            _emit(
                graph_to_dot(
                    req.n,
                    [w.factors for w in result.estimable],
                    dashed=dashed,
                    name="estimability",
                ),
                args.out,
            )
    else:
        _emit(json.dumps(result.to_json_dict(), indent=2) + "\n", args.out)
    if result.status != "ok":
        for line in result.diagnostics:
            print(line, file=sys.stderr)
    return code


# ----------------------------------------------------------------- verify


def _design_from_doc(doc: dict) -> tuple[BlockedDesign, dict]:
    """Accept either a bare design document or a synthesis result."""
    if not isinstance(doc, dict):
        raise InputError("design file must hold a JSON object")
    inner = doc
    claims: dict = {}
    if "blocks" not in doc:
        if not doc.get("design"):
            raise InputError("file carries no design (synthesis was infeasible?)")
        inner = doc["design"]
        claims = doc
    try:
        return BlockedDesign.from_json_dict(inner), claims
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"malformed design document: {exc}") from exc


def _report_text(report) -> str:
    lines = [
        f"n={report.n} p={report.p} q={report.q}: "
        f"{2 ** (report.n - report.p)} runs in "
        f"{2 ** (report.n - report.p - report.q)} blocks of {2 ** report.q}"
    ]
    lines.append("structural problems: none" if not report.problems else "PROBLEMS:")
    for prob in report.problems:
        lines.append(f"  {prob}")
    lines.append(f"main effects estimable: {'yes' if report.mains_estimable else 'NO'}")
    total = report.n * (report.n - 1) // 2
    lines.append(
        f"estimable two-factor interactions: "
        f"{len(report.two_factor_estimable)} of {total}"
    )
    order = sorted(report.status, key=lambda w: (w.order, w.factors))
    for w in order:
        if w.order == 2:
            lines.append(f"  {w.render():>4}  {report.status[w]}")
    if report.alias_classes:
        lines.append("alias classes among mains and interactions:")
        for cls in report.alias_classes:
            lines.append("  " + " = ".join(sorted(w.render() for w in cls)))
    if report.required_failures:
        lines.append(
            "required but not estimable: "
            + " ".join(w.render() for w in report.required_failures)
        )
    return "\n".join(lines) + "\n"


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        doc = json.loads(_read_text(args.design))
    except json.JSONDecodeError as exc:
        raise InputError(f"design file is not JSON: {exc}") from exc
    design, claims = _design_from_doc(doc)

    must_hold = parse_word_list(args.require, design.n)
    required = list(must_hold)
    for entry in claims.get("inestimable_required", []):
        required.append(parse_word(entry["interaction"], design.n))
    report = verify_design(design, required=tuple(dict.fromkeys(required)))

    failures = list(report.problems)
    if not report.mains_estimable:
        failures.append("a main effect is confounded or aliased")
    if claims.get("estimable") is not None:
        claimed = set(claims["estimable"])
        actual = {w.render() for w in report.two_factor_estimable}
        if claimed != actual:
            failures.append("estimable claim in the file disagrees with the runs")
    for w in report.required_failures:
        if w in must_hold:
            failures.append(f"required interaction {w.render()} is not estimable")

    if args.format == "json":
        out_doc = report.to_json_dict()
        out_doc["failures"] = failures
        _emit(json.dumps(out_doc, indent=2) + "\n", args.out)
    else:
        text = _report_text(report)
        if failures:
            text += "".join(f"FAIL: {line}\n" for line in failures)
        else:
            text += "verdict: pass\n"
        _emit(text, args.out)
    return EXIT_VERIFY if failures else EXIT_OK


# ---------------------------------------------------------------- catalog


def _grouping_text(record) -> str:
    return "".join(
        "(" + ",".join(f"F{j}" for j in grp) + ")" for grp in record.grouping.groups
    )


def cmd_catalog(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    rows = catalog.filter(n=args.n, p=args.p)

    if args.format == "json":
        doc = [
            {
                "table": r.table,
                "n": r.n,
                "p": r.p,
                "runs": r.runs,
                "profile": r.profile.render(),
                "int_count": r.int_count,
                "fraction": r.fraction_id,
                "words": [w.render() for w in catalog.fraction(r.fraction_id).words],
                "grouping": [list(g) for g in r.grouping.groups],
                "aliased": [w.render() for w in r.aliased_pairs],
                "provenance": r.provenance,
            }
            for r in rows
        ]
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
        return EXIT_OK

    header = ["table", "n", "p", "runs", "profile", "int_count",
              "fraction", "grouping", "aliased", "provenance"]
    cells = [
        [
            str(r.table), str(r.n), str(r.p), str(r.runs), r.profile.render(),
            str(r.int_count), r.fraction_id, _grouping_text(r),
            " ".join(w.render() for w in r.aliased_pairs) or "-",
            r.provenance,
        ]
        for r in rows
    ]
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(cells)
        _emit(buf.getvalue(), args.out)
        return EXIT_OK

    widths = [
        max(len(header[i]), *(len(row[i]) for row in cells)) if cells else len(header[i])
        for i in range(len(header))
    ]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip()]
    for row in cells:
        lines.append("  ".join(c.ljust(widths[i]) for i, c in enumerate(row)).rstrip())
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# ------------------------------------------------------------- export-dot


def cmd_export_dot(args: argparse.Namespace) -> int:
    if args.design:
        try:
            doc = json.loads(_read_text(args.design))
        except json.JSONDecodeError as exc:
            raise InputError(f"design file is not JSON: {exc}") from exc
        if isinstance(doc, dict) and "estimable" in doc:
            n = int(doc["n"])
            solid = [parse_word(t, n).factors for t in doc["estimable"]]
            dashed = [parse_word(t, n).factors for t in doc.get("aliased_pairs", [])]
            dashed += [
                parse_word(entry["interaction"], n).factors
                for entry in doc.get("inestimable_required", [])
            ]
        else:
            design, _ = _design_from_doc(doc)
            report = verify_design(design)
            n = design.n
            solid = [w.factors for w in report.two_factor_estimable]
            dashed = [
                w.factors
                for w, s in report.status.items()
                if w.order == 2 and s in ("aliased", "both", "defining")
            ]
        text = graph_to_dot(n, solid, dashed=dashed, name="estimability")
    else:
        if args.n is None:
            raise InputError("export-dot needs --n with --interactions, or --design")
        words = parse_word_list(args.interactions, args.n)
        try:
            g = RequirementsGraph.from_words(args.n, words)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        text = graph_to_dot(g.n, g.edges, name="requirements")
    _emit(text, args.out)
    return EXIT_OK


# ----------------------------------------------------------------- report


def _layout(n: int) -> dict[int, tuple[float, float]]:
    return {
        v: (
            math.cos(math.pi / 2 - 2 * math.pi * (v - 1) / n),
            math.sin(math.pi / 2 - 2 * math.pi * (v - 1) / n),
        )
        for v in range(1, n + 1)
    }


def _render_graph_png(
    path: str,
    n: int,
    solid: Sequence[tuple[int, int]],
    dashed: Sequence[tuple[int, int]] = (),
    bold: Sequence[tuple[int, int]] = (),
    title: str = "",
) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    pos = _layout(n)
    bold_set = {(min(e), max(e)) for e in bold}
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    for i, j in sorted({(min(e), max(e)) for e in dashed}):
        ax.plot(
            [pos[i][0], pos[j][0]], [pos[i][1], pos[j][1]],
            linestyle="--", color="#c0392b", linewidth=1.2, zorder=1,
        )
    for i, j in sorted({(min(e), max(e)) for e in solid}):
        heavy = (i, j) in bold_set
        ax.plot(
            [pos[i][0], pos[j][0]], [pos[i][1], pos[j][1]],
            color="#1a1a1a" if heavy else "#9a9a9a",
            linewidth=2.2 if heavy else 1.1, zorder=2,
        )
    for v in range(1, n + 1):
        x, y = pos[v]
        ax.scatter([x], [y], s=430, color="white", edgecolors="#1a1a1a",
                   linewidths=1.2, zorder=3)
        ax.text(x, y, _letter(v, n), ha="center", va="center",
                fontsize=11, zorder=4)
    ax.set_title(title)
    ax.set_aspect("equal")
    ax.set_xlim(-1.25, 1.25)
    ax.set_ylim(-1.25, 1.25)
    ax.axis("off")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def cmd_report(args: argparse.Namespace) -> int:
    req = request_from_args(args)
    result = synthesize(req)
    code = _STATUS_EXIT[result.status]
    if result.design is None:
        for line in result.diagnostics:
            print(line, file=sys.stderr)
        return code

    problems = cross_check(result)
    if problems:
        for line in problems:
            print(f"verification failure: {line}", file=sys.stderr)
        return EXIT_VERIFY

    outdir = args.out or "report"
    os.makedirs(outdir, exist_ok=True)
    design_path = os.path.join(outdir, "design.json")
    sheet_path = os.path.join(outdir, "runsheet.csv")
    req_png = os.path.join(outdir, "requirements.png")
    est_png = os.path.join(outdir, "estimability.png")

    _emit(json.dumps(result.to_json_dict(), indent=2) + "\n", design_path)
    _emit(runsheet_csv(result.design), sheet_path)

    required_edges = [w.factors for w in result.required]
    _render_graph_png(
        req_png, req.n, required_edges,
        title=f"required interactions ({len(required_edges)})",
    )
    estimable_edges = [w.factors for w in result.estimable]
    failure_edges = [w.factors for w in result.required_failures]
    _render_graph_png(
        est_png, req.n, estimable_edges,
        dashed=failure_edges, bold=required_edges,
        title=f"estimable interactions ({len(estimable_edges)})",
    )

    for path in (design_path, sheet_path, req_png, est_png):
        print(path)
    if result.status != "ok":
        for line in result.diagnostics:
            print(line, file=sys.stderr)
    return code


# ------------------------------------------------------------------ wiring


def _add_request_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--n", type=int, help="number of factors")
    sp.add_argument("--p", type=int, default=0,
                    help="number of defining words (fraction 1/2^p)")
    sp.add_argument("--q", type=int, default=2, help="blocks hold 2^q runs")
    sp.add_argument("--interactions",
                    help="two-factor interactions, inline (AB,AC) or a file")
    sp.add_argument("--objective",
                    choices=["maximize-estimable", "require-only"],
                    default="maximize-estimable")
    sp.add_argument("--words",
                    help="defining words to use instead of the catalog")
    sp.add_argument("--profile", help="force a group size profile, e.g. <3,2,2>")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                    help="search node budget")
    sp.add_argument("--request", help="JSON request document (overrides flags)")
    sp.add_argument("--seed", type=int, default=0,
                    help="reserved; the search is deterministic")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="blockplan",
        description="blocked two-level designs that keep chosen "
        "interactions estimable",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    sp = sub.add_parser("analyze", help="size up a requirements graph")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--interactions")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--format", choices=["text", "json"], default="text")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("construct", help="synthesize a blocked design")
    _add_request_flags(sp)
    sp.add_argument("--format", choices=["json", "csv", "dot"], default="json",
                    help="json result document, csv run sheet, or "
                    "estimability graph in dot")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify", help="brute-force audit of a design file")
    sp.add_argument("design", help="design or construct-result JSON")
    sp.add_argument("--require",
                    help="interactions that must be estimable, inline or a file")
    sp.add_argument("--format", choices=["text", "json"], default="text")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("catalog", help="browse the shipped templates")
    sp.add_argument("--n", type=int)
    sp.add_argument("--p", type=int)
    sp.add_argument("--catalog", help="alternate catalog JSON file")
    sp.add_argument("--format", choices=["text", "csv", "json"], default="text")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_catalog)

    sp = sub.add_parser("export-dot", help="requirements or estimability DOT")
    sp.add_argument("--n", type=int)
    sp.add_argument("--interactions")
    sp.add_argument("--design", help="render estimability for this design file")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_export_dot)

    sp = sub.add_parser("report",
                        help="construct plus run sheet and figures")
    _add_request_flags(sp)
    sp.add_argument("--out", help="output directory (default: report)")
    sp.set_defaults(func=cmd_report)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
