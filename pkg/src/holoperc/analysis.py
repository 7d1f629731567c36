"""Complexity measures, limit cycles, tile orbits and graph reconstruction."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .groups import identify_group, perm_cycles  # noqa: F401  (identify_group is public here)
from .holonomy import HolonomyGroup, LevelComponent, Skeleton, build_skeleton
from .netmodel import Graph, PercParams, Scenario, build_t

# Non-forceable sets of the three reference scenarios on the 5-node study graph.
SCENARIO_SETS = {
    1: frozenset(),
    2: frozenset({11, 19, 20, 25}),
    3: frozenset({8, 15, 20, 22, 29}),
}

IRREVERSIBILITY_DEFINITION = (
    "length of the longest strict subduction chain of class representatives "
    "from the full state set down to a singleton (equal to the height of the full set)"
)
HEIGHT_COMPLEXITY_NOTE = "the aperiodic complexity measure is identified with height complexity"


@dataclass(frozen=True)
class ComplexityReport:
    kr_upper: int
    height_complexity: int
    irreversibility_bound: int
    levels: tuple
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "params": self.params,
            "kr_upper": self.kr_upper,
            "height_complexity": self.height_complexity,
            "irreversibility_bound": self.irreversibility_bound,
            "irreversibility_definition": IRREVERSIBILITY_DEFINITION,
            "notes": [
                "kr_upper is an upper bound: the number of holonomy levels containing a non-trivial group",
                HEIGHT_COMPLEXITY_NOTE,
            ],
            "levels": [
                {
                    "level": lc.level,
                    "height": lc.height,
                    "signature": lc.signature(),
                    "n_classes": lc.n_classes,
                    "n_members": lc.n_members,
                    "parts": [
                        {"degree": p.degree, "group": p.group, "order": p.order,
                         "representative": list(p.representative)}
                        for p in lc.parts
                    ],
                }
                for lc in self.levels
            ],
        }


@dataclass(frozen=True)
class LimitCycle:
    states: tuple

    @property
    def period(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class TileOrbit:
    word: tuple
    sets: tuple
    label: str = ""


def kr_upper_bound(levels: Sequence[LevelComponent]) -> int:
    return sum(1 for lc in levels if lc.has_group)


def height_complexity(levels: Sequence[LevelComponent]) -> int:
    return len(levels)


def irreversibility_bound(skel: Skeleton) -> int:
    return skel.height


def complexity_report(scen: Scenario, skel: Skeleton | None = None) -> ComplexityReport:
    if skel is None:
        skel = build_skeleton(scen)
    levels = tuple(skel.levels())
    params = {
        "n": scen.n,
        "edges": [list(e) for e in scen.graph.edges()],
        "k1": scen.params.k1,
        "k2": scen.params.k2,
        "non_forceable": sorted(scen.non_forceable),
        "monotone": scen.monotone,
    }
    return ComplexityReport(kr_upper_bound(levels), height_complexity(levels), irreversibility_bound(skel), levels, params)


def limit_cycles(scen: Scenario) -> list:
    """Every cycle of the local dynamics, smallest state first; fixed points are period 1."""
    t = build_t(scen)
    tab = [int(v) + 1 for v in t.table]
    state_of = [0] * (len(tab) + 1)      # 0 unvisited, >0 walk id
    cycles = []
    for start in range(1, len(tab) + 1):
        if state_of[start]:
            continue
        walk = []
        x = start
        while not state_of[x]:
            state_of[x] = start
            walk.append(x)
            x = tab[x - 1]
        if state_of[x] == start:
            cyc = walk[walk.index(x):]
            k = cyc.index(min(cyc))
            cycles.append(LimitCycle(tuple(cyc[k:] + cyc[:k])))
    cycles.sort(key=lambda c: (c.period, c.states))
    return cycles


def tile_orbits(group: HolonomyGroup, labels: Sequence[str] | None = None) -> list:
    from .tsg import format_word

    out = []
    for perm, word in group.perm_generators:
        label = format_word(word, labels) if labels is not None else ""
        for cyc in perm_cycles(perm):
            out.append(TileOrbit(word, tuple(group.tiles[i] for i in cyc), label))
    return out


# ---------------------------------------------------------------------------
# sweeps


def sweep(scen: Scenario, k1_range: Iterable[int], k2_range: Iterable[int], jobs: int = 1) -> dict:
    """``{(k1, k2): ComplexityReport}`` over the grid."""
    cells = [(k1, k2) for k2 in k2_range for k1 in k1_range]
    scens = [scen.with_params(k1, k2) for k1, k2 in cells]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            reports = list(ex.map(complexity_report, scens, chunksize=4))
    else:
        reports = [complexity_report(s) for s in scens]
    return dict(zip(cells, reports))


# ---------------------------------------------------------------------------
# reconstruction of the study graph


def _s1_skeleton(graph: Graph) -> Skeleton:
    return build_skeleton(Scenario(graph, PercParams(1, 1), SCENARIO_SETS[1]))


def has_target_cycle(graph: Graph) -> bool:
    """Scenario 1 at (1,1): ``t`` has a cycle on exactly {6, 10, 12, 14}."""
    scen = Scenario(graph, PercParams(1, 1))
    return any(set(c.states) == {6, 10, 12, 14} for c in limit_cycles(scen))


def s1_four_levels_c4(graph: Graph) -> bool:
    """Scenario 1 at (1,1): four levels, the last one carrying a (7, C4) part."""
    levels = _s1_skeleton(graph).levels()
    return len(levels) == 4 and any(p.degree == 7 and p.group == "C4" for p in levels[3].parts)


def s1_exact_signature(graph: Graph) -> bool:
    """Scenario 1 at (1,1) lists as ``19 / 6 / 2 / (7,C4)``."""
    sig = [lc.signature() for lc in _s1_skeleton(graph).levels()]
    return sig == ["19", "6", "2", "(7,C4)"]


def s1_high_threshold_aperiodic(graph: Graph) -> bool:
    """Scenario 1: kr_upper = 0 at every k1 > 3 and k2 > 3 (k up to 5)."""
    base = Scenario(graph, PercParams(1, 1))
    return all(complexity_report(base.with_params(k1, k2)).kr_upper == 0
               for k1 in (4, 5) for k2 in (4, 5))


def s2_eight_levels_c2(graph: Graph) -> bool:
    """Scenario 2 at (1,1): eight levels with a (5, C2) part at level 7."""
    levels = build_skeleton(Scenario(graph, PercParams(1, 1), SCENARIO_SETS[2])).levels()
    return len(levels) == 8 and any(p.degree == 5 and p.group == "C2" for p in levels[6].parts)


def max_degree_at_most_3(graph: Graph) -> bool:
    return graph.max_degree <= 3


CONSTRAINTS: dict = {
    "cycle": has_target_cycle,
    "s1_levels": s1_four_levels_c4,
    "s1_signature": s1_exact_signature,
    "s1_high_k_zero": s1_high_threshold_aperiodic,
    "s2_levels": s2_eight_levels_c2,
    "max_degree_3": max_degree_at_most_3,
}
# cheap filters first; conjunctive, so order only affects cost
TARGET_CONSTRAINTS = ("cycle", "s1_levels", "s1_signature", "s1_high_k_zero", "s2_levels")


def _resolve(constraints) -> list:
    out = []
    for c in constraints:
        out.append((c, CONSTRAINTS[c]) if isinstance(c, str) else (getattr(c, "__name__", repr(c)), c))
    return out


def _passes(args) -> bool:
    code, n, names = args
    g = Graph.from_code(n, code)
    return all(CONSTRAINTS[name](g) for name in names)


def reconstruct_candidate_graphs(constraints: Iterable = TARGET_CONSTRAINTS, n: int = 5, jobs: int = 1) -> list:
    """All labelled simple graphs on ``n`` nodes passing every constraint.

    Constraints are names from ``CONSTRAINTS`` or ``graph -> bool`` callables
    (callables force a single-process scan).
    """
    resolved = _resolve(constraints)
    n_codes = 1 << (n * (n - 1) // 2)
    if jobs > 1 and all(CONSTRAINTS.get(name) is fn for name, fn in resolved):
        names = [name for name, _ in resolved]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            keep = list(ex.map(_passes, [(c, n, names) for c in range(n_codes)], chunksize=32))
        return [Graph.from_code(n, c) for c in range(n_codes) if keep[c]]
    out = []
    for code in range(n_codes):
        g = Graph.from_code(n, code)
        if all(fn(g) for _, fn in resolved):
            out.append(g)
    return out


# ---------------------------------------------------------------------------
# per-graph comparison with the target signatures


def signature_table(graph: Graph) -> dict:
    """Measured scenario signatures used by the reconstruction report."""
    out = {}
    for sid, nf in SCENARIO_SETS.items():
        scen = Scenario(graph, PercParams(1, 1), nf)
        skel = build_skeleton(scen)
        levels = skel.levels()
        out[f"scenario{sid}"] = {
            "levels_at_1_1": [lc.signature() for lc in levels],
            "height_at_1_1": len(levels),
            "kr_at_1_1": kr_upper_bound(levels),
        }
    cycles = limit_cycles(Scenario(graph, PercParams(1, 1)))
    out["scenario1"]["cycles_at_1_1"] = [list(c.states) for c in cycles if c.period > 1]
    return out


def s2_tile_orbit_t2(graph: Graph) -> bool:
    """Scenario 2 at (1,1): some holonomy generator ``t^2`` swaps tiles {6,8} and {8,10}."""
    skel = build_skeleton(Scenario(graph, PercParams(1, 1), SCENARIO_SETS[2]))
    for grp in skel.groups.values():
        for orb in tile_orbits(grp):
            if orb.word == (0, 0) and set(orb.sets) == {(6, 8), (8, 10)}:
                return True
    return False


def target_claims(graph: Graph) -> dict:
    """Which target results this graph reproduces, claim by claim."""
    s1 = Scenario(graph, PercParams(1, 1), SCENARIO_SETS[1])
    grid = [(k1, k2) for k1 in range(1, 6) for k2 in range(1, 6)]
    kr = {sid: {c: complexity_report(Scenario(graph, PercParams(*c), nf)).kr_upper for c in grid}
          for sid, nf in SCENARIO_SETS.items()}
    s2_levels = build_skeleton(Scenario(graph, PercParams(1, 1), SCENARIO_SETS[2])).levels()
    s1_levels = build_skeleton(s1).levels()
    return {
        "cycle_6_10_12_14": has_target_cycle(graph),
        "s1_four_levels": len(s1_levels) == 4,
        "s1_bottom_7_C4": bool(s1_levels) and any(p.degree == 7 and p.group == "C4" for p in s1_levels[-1].parts),
        "s1_signature_19_6_2_7": [lc.signature() for lc in s1_levels] == ["19", "6", "2", "(7,C4)"],
        "s1_kr_1_at_listed_cells": all(kr[1][c] == 1 for c in [(1, 1), (2, 1), (2, 2), (2, 3)]),
        "s1_kr_0_high_k": all(kr[1][(a, b)] == 0 for a in (4, 5) for b in (4, 5)),
        "s2_eight_levels": len(s2_levels) == 8,
        "s2_level7_5_C2": len(s2_levels) >= 7 and any(p.degree == 5 and p.group == "C2" for p in s2_levels[6].parts),
        "s2_tile_orbit_t2": s2_tile_orbit_t2(graph),
        "s2_max_kr_4": max(kr[2].values()) == 4,
        "s3_max_kr_4": max(kr[3].values()) == 4,
    }


def _claims_row(code: int) -> tuple:
    return code, target_claims(Graph.from_code(5, code))


def discrepancy_report(codes: Iterable[int] | None = None, jobs: int = 1) -> dict:
    """Per-claim hit counts and the maximal jointly satisfiable claim subsets.

    ``maximal_subsets`` lists every inclusion-maximal set of claims that
    one graph satisfies simultaneously, with the graphs achieving it.
    """
    codes = list(range(1024)) if codes is None else list(codes)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_claims_row, codes, chunksize=8))
    else:
        rows = [_claims_row(c) for c in codes]
    names = list(rows[0][1]) if rows else []
    counts = {name: sum(1 for _, r in rows if r[name]) for name in names}
    by_subset: dict = {}
    for code, r in rows:
        key = tuple(name for name in names if r[name])
        by_subset.setdefault(key, []).append(code)
    keys = list(by_subset)
    maximal = [k for k in keys if not any(set(k) < set(o) for o in keys)]
    maximal.sort(key=lambda k: (-len(k), k))
    return {
        "graphs_scanned": len(rows),
        "claim_counts": counts,
        "maximal_subsets": [
            {"claims": list(k), "missing": [n for n in names if n not in k], "graphs": by_subset[k]}
            for k in maximal
        ],
    }
