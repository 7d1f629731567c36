"""``holoperc`` command line: run, sweep, reconstruct, export-dot."""

import argparse
import json
import logging
import sys
from pathlib import Path

from . import analysis, io
from .errors import CapacityError, HoloPercError, InvalidInputError
from .holonomy import build_skeleton, skeleton_to_dot
from .netmodel import PercParams, Scenario

log = logging.getLogger("holoperc")

EXIT_OK, EXIT_USER, EXIT_CAPACITY = 0, 2, 3


def _parse_range(text: str, flag: str) -> range:
    for sep in ("..", ":", "-"):
        if sep in text:
            a, _, b = text.partition(sep)
            break
    else:
        a = b = text
    try:
        lo, hi = int(a), int(b)
    except ValueError:
        raise InvalidInputError(f"{flag} must look like 1:5, got {text!r}") from None
    if lo > hi:
        raise InvalidInputError(f"{flag} is empty: {text!r}")
    return range(lo, hi + 1)


def _load_scenario(args, need_params: bool = True) -> Scenario:
    if bool(args.scenario) == bool(args.graph):
        raise InvalidInputError("give exactly one of --scenario or --graph")
    try:
        if args.scenario:
            scen = io.read_scenario(args.scenario)
        else:
            graph = io.read_edge_list(args.graph)
            nf = frozenset()
            if getattr(args, "non_forceable", None):
                nf = frozenset(int(s) for s in args.non_forceable.split(",") if s.strip())
            if need_params and (args.k1 is None or args.k2 is None):
                raise InvalidInputError("--k1 and --k2 are required with --graph")
            scen = Scenario(graph, PercParams(args.k1 or 1, args.k2 or 1), nf)
    except FileNotFoundError as exc:
        raise InvalidInputError(f"cannot read {exc.filename}") from None
    except ValueError as exc:
        raise InvalidInputError(str(exc)) from None
    if scen.n > args.max_n:
        raise CapacityError(f"n={scen.n} exceeds --max-n={args.max_n}")
    if getattr(args, "k1", None) is not None or getattr(args, "k2", None) is not None:
        scen = scen.with_params(args.k1 or scen.params.k1, args.k2 or scen.params.k2)
    return scen


def _groups_detail(skel) -> list:
    out = []
    for c, grp in sorted(skel.groups.items(), key=lambda kv: skel.class_heights[kv[0]], reverse=True):
        if grp.is_trivial:
            continue
        out.append({
            "level": skel.depth_of_height(skel.class_heights[c]),
            "representative": list(grp.base),
            "group": grp.name,
            "order": grp.order,
            "tiles": [list(t) for t in grp.tiles],
            "tile_orbits": [
                {"word": o.label, "sets": [list(s) for s in o.sets]}
                for o in analysis.tile_orbits(grp, skel.labels)
            ],
        })
    return out


def cmd_run(args) -> int:
    scen = _load_scenario(args)
    skel = build_skeleton(scen)
    report = analysis.complexity_report(scen, skel)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    doc = report.to_dict()
    doc["holonomy_groups"] = _groups_detail(skel)
    (out / "report.json").write_text(io.dumps(doc))
    (out / "skeleton.json").write_text(io.dumps(skel.summary()))
    (out / "skeleton.dot").write_text(skeleton_to_dot(skel))
    cycles = analysis.limit_cycles(scen)
    (out / "cycles.txt").write_text("".join(f"period {c.period}: {' '.join(map(str, c.states))}\n" for c in cycles))
    if len(skel.gens) == 1:
        log.warning("every state is non-forceable: the semigroup is generated by t alone")
    if args.format == "json":
        sys.stdout.write(io.dumps(doc))
    elif args.format == "dot":
        sys.stdout.write(skeleton_to_dot(skel))
    else:
        print(f"kr_upper={report.kr_upper} height={report.height_complexity} "
              f"irreversibility={report.irreversibility_bound}")
        for lc in report.levels:
            print(f"  level {lc.level}: {lc.signature()}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    scen = _load_scenario(args, need_params=False)
    default = f"1:{min(5, scen.n)}"
    k1s = _parse_range(args.k1_range or default, "--k1-range")
    k2s = _parse_range(args.k2_range or default, "--k2-range")
    for r, flag in ((k1s, "--k1-range"), (k2s, "--k2-range")):
        if r.start < 1 or r.stop - 1 > scen.n:
            raise InvalidInputError(f"{flag} must lie within 1..{scen.n}")
    reports = analysis.sweep(scen, k1s, k2s, jobs=args.jobs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, attr in (("kr_upper", "kr_upper"), ("height_complexity", "height_complexity"),
                       ("irreversibility", "irreversibility_bound")):
        grid = {cell: getattr(rep, attr) for cell, rep in reports.items()}
        (out / f"{name}.csv").write_text(io.heatmap_csv(grid, k1s, k2s))
    if args.format == "json":
        doc = {"scenario": io.scenario_to_dict(scen),
               "cells": [{"k1": k1, "k2": k2, **reports[(k1, k2)].to_dict()} for k1, k2 in sorted(reports)]}
        (out / "sweep.json").write_text(io.dumps(doc))
    print(f"wrote {len(reports)} cells to {out}")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    if args.constraints in ("none", ""):
        names = []
    elif args.constraints is None:
        names = list(analysis.TARGET_CONSTRAINTS)
    else:
        names = [c.strip() for c in args.constraints.split(",") if c.strip()]
    unknown = [c for c in names if c not in analysis.CONSTRAINTS]
    if unknown:
        raise InvalidInputError(f"unknown constraint(s) {unknown}; choose from {sorted(analysis.CONSTRAINTS)}")
    survivors = analysis.reconstruct_candidate_graphs(names, n=5, jobs=args.jobs)
    out = Path(args.out)
    (out / "candidates").mkdir(parents=True, exist_ok=True)
    listing = []
    for g in survivors:
        code = g.code()
        (out / "candidates" / f"{code:04d}.txt").write_text(io.format_edge_list(g))
        entry = {"code": code, "edges": [list(e) for e in g.edges()]}
        if not args.no_signatures:
            entry["signatures"] = analysis.signature_table(g)
        listing.append(entry)
    doc = {"constraints": names, "count": len(survivors), "candidates": listing}
    if args.discrepancy:
        doc["discrepancy"] = analysis.discrepancy_report(jobs=args.jobs)
    (out / "candidates.json").write_text(io.dumps(doc))
    print(f"{len(survivors)} candidate graph(s) under {names or 'no constraints'}")
    return EXIT_OK


def cmd_export_dot(args) -> int:
    scen = _load_scenario(args)
    text = skeleton_to_dot(build_skeleton(scen))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="holoperc", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def scenario_flags(sp):
        sp.add_argument("--scenario", help="scenario JSON file")
        sp.add_argument("--graph", help="edge-list file (non-forceable set from --non-forceable)")
        sp.add_argument("--non-forceable", help="comma-separated state ids, with --graph")
        sp.add_argument("--max-n", type=int, default=6, help="largest accepted node count (default 6)")

    sp = sub.add_parser("run", help="decompose one scenario")
    scenario_flags(sp)
    sp.add_argument("--k1", type=int)
    sp.add_argument("--k2", type=int)
    sp.add_argument("--out", required=True)
    sp.add_argument("--format", choices=["json", "dot"], help="also print this to stdout")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("sweep", help="complexity heat maps over a (k1, k2) grid")
    scenario_flags(sp)
    sp.add_argument("--k1-range")
    sp.add_argument("--k2-range")
    sp.add_argument("--out", required=True)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--format", choices=["csv", "json"], default="csv", help="json also writes sweep.json")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("reconstruct", help="scan all 5-node graphs against the target signatures")
    sp.add_argument("--constraints", help=f"comma list or 'none' (default: {','.join(analysis.TARGET_CONSTRAINTS)})")
    sp.add_argument("--out", required=True)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--no-signatures", action="store_true", help="skip per-candidate signature tables")
    sp.add_argument("--discrepancy", action="store_true", help="add the per-claim discrepancy report")
    sp.set_defaults(func=cmd_reconstruct)

    sp = sub.add_parser("export-dot", help="write the skeleton as Graphviz DOT")
    scenario_flags(sp)
    sp.add_argument("--k1", type=int)
    sp.add_argument("--k2", type=int)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=["dot"], default="dot")
    sp.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"holoperc: capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (InvalidInputError, HoloPercError) as exc:
        print(f"holoperc: error: {exc}", file=sys.stderr)
        return EXIT_USER


if __name__ == "__main__":
    sys.exit(main())
