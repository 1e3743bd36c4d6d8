"""Command-line entry point.

    treebdy homology|verify|ktheory|distributions GRAPH [--group SPEC] [--depth K]
            [--base V] [--json] [--cap N] [--report-dir DIR]

Exit codes: 0 all checks passed, 1 a mathematical check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .coefficients import CoefficientGroup, GroupError, Z
from .cover import DEFAULT_NODE_CAP, SliceTooLarge, check_additivity, expand
from .distributions import (
    Distribution,
    NotACycleError,
    check_prop_k,
    enumerate_invariant,
    from_cycle,
    invariant_generators,
    labels_from_mapping,
    t_minus_i,
    validate,
)
from .graph import Graph, GraphError, euler_characteristic, load_graph
from .homology import format_combination, h1_basis_Z, h1_generators, h1_rank, h1_structure, parse_chain
from .verify import Check, verify_graph

SCHEMA = 1

log = logging.getLogger("treebdy")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    graph_path: str
    group: CoefficientGroup
    depth: int
    base: str | None
    json: bool
    cap: int
    report_dir: Path | None
    cycle: str | None = None
    labels: str | None = None
    sigma: str | None = None
    all_mass: bool = False
    limit: int = 50
    dot: Path | None = None

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise UsageError("--depth must be >= 0")
        if self.cap < 1:
            raise UsageError("--cap must be >= 1")


@dataclass
class Outcome:
    """What a subcommand produced: a JSON document, text lines, summary rows."""

    doc: dict
    lines: list[str]
    rows: list[tuple[str, str, str]]
    ok: bool = True


def _header(cfg: RunConfig, g: Graph) -> dict:
    return {
        "schema": SCHEMA,
        "command": cfg.command,
        "graph": g.to_json(),
        "group": cfg.group.to_json(),
    }


def _base_index(cfg: RunConfig, g: Graph) -> int:
    return g.vertex_index(cfg.base) if cfg.base is not None else 0


def _parse_element(M: CoefficientGroup, text: str) -> tuple[int, ...]:
    text = text.strip()
    try:
        if text.startswith("("):
            return M.element([int(x) for x in text.strip("()").split(",")])
        return M.element(int(text))
    except ValueError as exc:
        raise UsageError(f"bad group element {text!r}: {exc}") from None


def _parse_labels(g: Graph, M: CoefficientGroup, text: str) -> dict:
    mapping = {}
    for item in _split_top(text):
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"expected name=value, got {item!r}")
        mapping[name.strip()] = _parse_element(M, value)
    return mapping


def _split_top(text: str) -> list[str]:
    """Split on commas that are not inside parentheses."""
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur)
    return [s for s in (x.strip() for x in out) if s]


def cmd_homology(cfg: RunConfig, g: Graph) -> Outcome:
    M = cfg.group
    basis = h1_basis_Z(g)
    structure = h1_structure(g, M)
    doc = _header(cfg, g)
    doc.update({
        "euler_characteristic": euler_characteristic(g),
        "rank": len(basis),
        "h1": structure.to_json(),
        "invariant_factors": list(structure.torsion),
        "basis": [c.to_json(g) for c in basis],
    })
    lines = [
        f"graph: {g.n_vertices} vertices, {g.n_pos} edges, chi = {euler_characteristic(g)}",
        f"H_1(G, Z) rank: {len(basis)}",
        f"H_1(G, {M}) = {structure}",
        "basis cycles:",
    ]
    lines += [f"  {c.format(g)}" for c in basis] or ["  (none)"]
    rows = [("rank", str(len(basis)), "H_1(G, Z)"), ("structure", str(structure), f"H_1(G, {M})")]
    if M != Z:
        gens = h1_generators(g, M)
        doc["generators"] = [c.to_json(g) for c in gens]
        lines.append(f"generators over {M}:")
        lines += [f"  {c.format(g)}" for c in gens] or ["  (none)"]
    if M.is_finite:
        count = M.order ** h1_rank(g)
        doc["elements"] = count
        lines.append(f"elements: {count}")
        rows.append(("elements", str(count), "|M|^(1 - chi)"))
    return Outcome(doc, lines, rows)


def cmd_verify(cfg: RunConfig, g: Graph) -> Outcome:
    M = cfg.group
    checks: list[Check] = verify_graph(g, M, cfg.depth, _base_index(cfg, g), cfg.cap)
    ok = all(c.ok for c in checks)
    doc = _header(cfg, g)
    doc.update({"ok": ok, "checks": [c.to_json() for c in checks]})
    lines = [f"{'PASS' if c.ok else 'FAIL'}  {c.name:<13} {c.detail}" for c in checks]
    lines.append("all checks passed" if ok else "some checks FAILED")
    rows = [(c.name, "pass" if c.ok else "fail", c.detail) for c in checks]
    if cfg.report_dir is not None:
        from .plots import plot_counts, plot_cover

        gens = h1_generators(g, M)
        if gens and cfg.depth >= 1:
            sl = expand(g, _base_index(cfg, g), min(cfg.depth, 5), cfg.cap)
            plot_cover(sl, from_cycle(g, M, gens[0]), cfg.report_dir / "cover.png")
        bij = checks[0]
        if bij.data.get("expected") is not None:
            plot_counts([(str(M), bij.data["cycles"], bij.data["distributions"])], cfg.report_dir / "counts.png")
    return Outcome(doc, lines, rows, ok)


def cmd_ktheory(cfg: RunConfig, g: Graph) -> Outcome:
    rep = check_prop_k(g, force=True)
    verdict = rep.isomorphism if rep.hypothesis_holds else None
    doc = _header(cfg, g)
    doc.update(rep.to_json(g))
    doc["verdict"] = verdict
    lines = [
        f"ker(T - I) rank: {rep.kernel_rank}",
        f"H_1(G, Z) rank: {rep.h1_rank}   (1 - chi = {1 - rep.euler_characteristic})",
        f"min degree: {rep.min_degree}   hypothesis: {'holds' if rep.hypothesis_holds else 'violated'}",
        "kernel basis:",
    ]
    names = g.all_edge_names
    lines += [f"  {format_combination(Z, names, [(c,) for c in v])}" for v in rep.kernel_basis] or ["  (none)"]
    if rep.hypothesis_holds:
        lines.append(f"alpha -> alpha - bar(alpha) onto ker(T - I): {'confirmed' if rep.isomorphism else 'FAILED'}")
    else:
        lines.append("isomorphism not asserted outside the degree hypothesis; "
                     f"subgroups {'agree' if rep.isomorphism else 'differ'}")
    rows = [
        ("kernel_rank", str(rep.kernel_rank), "ker(T - I)"),
        ("h1_rank", str(rep.h1_rank), "H_1(G, Z)"),
        ("hypothesis", "holds" if rep.hypothesis_holds else "violated", f"min degree {rep.min_degree}"),
        ("isomorphism", {True: "pass", False: "fail", None: "n/a"}[verdict], "same subgroup of Z^E"),
    ]
    if cfg.report_dir is not None:
        from .plots import plot_matrix

        plot_matrix(t_minus_i(g), g, cfg.report_dir / "t_minus_i.png", "T - I")
    return Outcome(doc, lines, rows, verdict is not False)


def cmd_distributions(cfg: RunConfig, g: Graph) -> Outcome:
    M = cfg.group
    doc = _header(cfg, g)
    lines: list[str] = []
    rows: list[tuple[str, str, str]] = []
    shown: Distribution | None = None
    ok = True

    if cfg.cycle is not None:
        alpha = parse_chain(g, M, cfg.cycle)
        shown = from_cycle(g, M, alpha)
        rep = validate(g, shown)
        doc.update({"mode": "construct", "cycle": alpha.to_json(g), "distribution": shown.to_json(g),
                    "validation": rep.to_json(g)})
        lines.append(f"cycle: {alpha.format(g)}")
        lines += [f"  mu(Omega) over {n}: {M.format(a)}" for n, a in zip(g.all_edge_names, shown.labels)]
        lines.append(f"total mass: {M.format(shown.sigma)}")
        ok = rep.ok
        rows.append(("construct", "pass" if ok else "fail", alpha.format(g)))
    elif cfg.labels is not None:
        labels = labels_from_mapping(g, M, _parse_labels(g, M, cfg.labels))
        sigma = _parse_element(M, cfg.sigma) if cfg.sigma is not None else M.zero()
        shown = Distribution(M, labels, sigma)
        rep = validate(g, shown)
        ok = rep.ok
        doc.update({"mode": "validate", "distribution": shown.to_json(g), "validation": rep.to_json(g)})
        lines.append(shown.format(g))
        lines.append("valid" if ok else "INVALID: " + ", ".join(rep.failures(g)))
        rows.append(("validate", "pass" if ok else "fail", "; ".join(rep.failures(g))))
    elif M.is_finite:
        dists = enumerate_invariant(g, M, mass_zero_only=not cfg.all_mass)
        doc.update({"mode": "enumerate", "mass_zero_only": not cfg.all_mass, "count": len(dists),
                    "distributions": [d.to_json(g) for d in dists[: cfg.limit]]})
        lines.append(f"{len(dists)} {'mass-zero ' if not cfg.all_mass else ''}invariant distributions over {M}")
        lines += [f"  {d.format(g)}" for d in dists[: cfg.limit]]
        if len(dists) > cfg.limit:
            lines.append(f"  ... {len(dists) - cfg.limit} more")
        rows.append(("enumerate", str(len(dists)), str(M)))
        shown = next((d for d in dists if not d.mass_zero), dists[-1] if dists else None)
    else:
        gens = invariant_generators(g, M)
        doc.update({"mode": "generators", "generators": [d.to_json(g) for d in gens]})
        lines.append(f"{len(gens)} generators of the invariant distributions over {M}")
        lines += [f"  {d.format(g)}" for d in gens]
        rows.append(("generators", str(len(gens)), str(M)))

    if shown is not None and cfg.depth >= 2 and (cfg.dot or cfg.report_dir):
        sl = expand(g, _base_index(cfg, g), cfg.depth, cfg.cap)
        add = check_additivity(sl, shown)
        doc["additivity"] = add.to_json(sl, shown)
        lines.append(f"cover additivity to depth {cfg.depth}: {'pass' if add.ok else 'FAIL'}")
        rows.append(("additivity", "pass" if add.ok else "fail", f"depth {cfg.depth}"))
        if cfg.dot:
            cfg.dot.write_text(sl.to_dot(shown), encoding="utf-8")
        if cfg.report_dir is not None:
            from .plots import plot_cover

            plot_cover(sl, shown, cfg.report_dir / "cover.png")
    return Outcome(doc, lines, rows, ok)


COMMANDS: dict[str, Callable[[RunConfig, Graph], Outcome]] = {
    "homology": cmd_homology,
    "verify": cmd_verify,
    "ktheory": cmd_ktheory,
    "distributions": cmd_distributions,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treebdy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("graph", help="graph file")
        p.add_argument("--group", default="Z", help="coefficient group, e.g. Z, Z/3, Z^2+Z/4 (default Z)")
        p.add_argument("--depth", type=int, default=4, help="cover slice depth (default 4)")
        p.add_argument("--base", help="base vertex of the cover (default: first vertex)")
        p.add_argument("--json", action="store_true", help="print the JSON report")
        p.add_argument("--cap", type=int, default=DEFAULT_NODE_CAP, help="maximum cover slice nodes")
        p.add_argument("--report-dir", type=Path, help="write report.json, summary.tsv and figures here")
        if name == "distributions":
            mode = p.add_mutually_exclusive_group()
            mode.add_argument("--cycle", help="construct the distribution of a cycle, e.g. 'a+2b-3c'")
            mode.add_argument("--labels", help="validate a labelling, e.g. 'a=1,b=2,a~=-1'")
            p.add_argument("--sigma", help="total mass for --labels (default 0)")
            p.add_argument("--all-mass", action="store_true", help="enumerate every total mass, not just zero")
            p.add_argument("--limit", type=int, default=50, help="distributions to list (default 50)")
            p.add_argument("--dot", type=Path, help="write the cover slice with cone masses as DOT")
    return parser


def write_report(directory: Path, outcome: Outcome) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "report.json").write_text(json.dumps(outcome.doc, indent=2) + "\n", encoding="utf-8")
    with open(directory / "summary.tsv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(("item", "value", "detail"))
        w.writerows(outcome.rows)


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        cfg = RunConfig(
            command=args.command,
            graph_path=args.graph,
            group=CoefficientGroup.parse(args.group),
            depth=args.depth,
            base=args.base,
            json=args.json,
            cap=args.cap,
            report_dir=args.report_dir,
            cycle=getattr(args, "cycle", None),
            labels=getattr(args, "labels", None),
            sigma=getattr(args, "sigma", None),
            all_mass=getattr(args, "all_mass", False),
            limit=getattr(args, "limit", 50),
            dot=getattr(args, "dot", None),
        )
        g = load_graph(cfg.graph_path)
        if cfg.base is not None:
            g.vertex_index(cfg.base)
        if cfg.report_dir is not None:
            cfg.report_dir.mkdir(parents=True, exist_ok=True)
        outcome = COMMANDS[cfg.command](cfg, g)
    except (UsageError, GraphError, GroupError, NotACycleError, SliceTooLarge, OSError) as exc:
        print(f"treebdy: error: {exc}", file=sys.stderr)
        return 2

    if cfg.json:
        print(json.dumps(outcome.doc, indent=2))
    else:
        print("\n".join(outcome.lines))
    if cfg.report_dir is not None:
        write_report(cfg.report_dir, outcome)
    return 0 if outcome.ok else 1


if __name__ == "__main__":
    sys.exit(main())
