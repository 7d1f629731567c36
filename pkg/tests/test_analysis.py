import itertools

import pytest
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.combinatorics.named_groups import AbelianGroup, AlternatingGroup, CyclicGroup, DihedralGroup, SymmetricGroup

from holoperc.analysis import (
    CONSTRAINTS, complexity_report, height_complexity, identify_group, irreversibility_bound,
    kr_upper_bound, limit_cycles, reconstruct_candidate_graphs, tile_orbits,
)
from holoperc.errors import InvalidInputError
from holoperc.groups import closure
from holoperc.holonomy import Skeleton, build_skeleton
from holoperc.netmodel import Graph, PercParams, Scenario, Transformation, build_t

from conftest import cycle3, random_graph, random_scenario
from oracles import t_cycles_by_iteration


def constants(size):
    return [Transformation.constant(size, c) for c in range(1, size + 1)]


def _af(g):
    return [tuple(p.array_form) for p in g.generators]


def regular_rep(elements, mul):
    idx = {e: i for i, e in enumerate(elements)}
    return [tuple(idx[mul(x, g)] for x in elements) for g in elements]


class TestMeasures:
    def test_identity_only(self):
        skel = Skeleton([Transformation.identity(2)])
        assert kr_upper_bound(skel.levels()) == 0
        assert irreversibility_bound(skel) == 1

    def test_cycle_with_constants(self):
        assert kr_upper_bound(Skeleton([cycle3()] + constants(3)).levels()) == 1

    def test_constants_only(self):
        skel = Skeleton(constants(3))
        assert height_complexity(skel.levels()) == 1
        assert irreversibility_bound(skel) == 1

    def test_report_invariants(self, rng):
        for _ in range(40):
            scen = random_scenario(rng, n_max=4)
            skel = build_skeleton(scen)
            rep = complexity_report(scen, skel)
            assert rep.kr_upper <= rep.height_complexity == rep.irreversibility_bound == skel.height
            trivial = all(g.order == 1 for g in skel.groups.values())
            assert (rep.kr_upper == 0) == trivial
            if any(c.period > 1 for c in limit_cycles(scen)) and len(skel.gens) == 1 + scen.n_states - len(scen.non_forceable):
                assert rep.kr_upper >= 1

    def test_report_json_keys(self):
        scen = Scenario(Graph.from_code(5, 33), PercParams(1, 1))
        doc = complexity_report(scen).to_dict()
        assert {"kr_upper", "height_complexity", "irreversibility_bound", "irreversibility_definition", "levels"} <= set(doc)


class TestIdentifyGroup:
    def test_examples(self):
        assert identify_group([(1, 2, 3, 0)]) == "C4"
        assert identify_group([(1, 0, 2, 3), (0, 1, 3, 2)]) == "V4"
        assert identify_group([]) == "1"

    def test_non_bijective(self):
        with pytest.raises(InvalidInputError):
            identify_group([(0, 0, 1)])

    @pytest.mark.parametrize("group,name", [
        (SymmetricGroup(3), "S3"),
        (CyclicGroup(6), "C6"),
        (DihedralGroup(4), "D8"),
        (DihedralGroup(5), "D10"),
        (DihedralGroup(6), "D12"),
        (AlternatingGroup(4), "A4"),
        (AbelianGroup(2, 4), "C4 x C2"),
        (AbelianGroup(2, 2, 2), "C2 x C2 x C2"),
        (AbelianGroup(3, 3), "C3 x C3"),
        (AbelianGroup(2, 6), "C6 x C2"),
        (CyclicGroup(15), "C15"),
        (SymmetricGroup(4), "order-24"),
    ])
    def test_named(self, group, name):
        assert identify_group(_af(group)) == name

    def test_quaternion(self):
        # unit quaternions as (sign, axis) pairs
        table = {("1", "i"): "i", ("1", "j"): "j", ("1", "k"): "k", ("i", "i"): "-1", ("j", "j"): "-1",
                 ("k", "k"): "-1", ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j", ("j", "i"): "-k",
                 ("k", "j"): "-i", ("i", "k"): "-j"}
        elems = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]

        def mul(a, b):
            sa, a0 = (a[0] == "-"), a.lstrip("-")
            sb, b0 = (b[0] == "-"), b.lstrip("-")
            r = a0 if b0 == "1" else b0 if a0 == "1" else table[(a0, b0)]
            neg = sa ^ sb ^ r.startswith("-")
            r = r.lstrip("-")
            return ("-" + r) if neg else r

        assert identify_group(regular_rep(elems, mul)) == "Q8"

    def test_dicyclic12(self):
        # C3 : C4 as pairs (a, b) with b acting on Z3 by inversion
        elems = [(a, b) for a in range(3) for b in range(4)]

        def mul(x, y):
            a1, b1 = x
            a2, b2 = y
            return ((a1 + (a2 if b1 % 2 == 0 else -a2)) % 3, (b1 + b2) % 4)

        assert identify_group(regular_rep(elems, mul)) == "C3 : C4"

    def test_orders_match_sympy(self, rng):
        for _ in range(30):
            deg = rng.randint(2, 7)
            gens = []
            for _ in range(rng.randint(1, 3)):
                p = list(range(deg))
                rng.shuffle(p)
                gens.append(tuple(p))
            assert len(closure(gens, deg)) == PermutationGroup([Permutation(list(g)) for g in gens]).order()


class TestLimitCycles:
    def test_frozen_all_fixed(self):
        g = Graph.from_code(5, 500)
        scen = Scenario(g, PercParams(g.max_degree + 1, g.max_degree + 1))
        cycles = limit_cycles(scen)
        assert len(cycles) == 32 and all(c.period == 1 for c in cycles)

    def test_monotone_converges(self):
        for n in range(1, 5):
            for code in range(1 << (n * (n - 1) // 2)):
                g = Graph.from_code(n, code)
                for k1 in range(1, 5):
                    assert all(c.period == 1 for c in limit_cycles(Scenario(g, PercParams(k1, 1), monotone=True)))

    def test_against_iteration(self, rng):
        for _ in range(30):
            scen = random_scenario(rng, n_max=5)
            cycles = limit_cycles(scen)
            assert {frozenset(c.states) for c in cycles} == t_cycles_by_iteration(build_t(scen))
            t = build_t(scen)
            for c in cycles:
                assert c.states[0] == min(c.states)
                assert [t(x) for x in c.states] == list(c.states[1:] + c.states[:1])

    def test_periods_at_most_two(self):
        # symmetric threshold networks under synchronous update only have period 1 or 2
        for code in range(1024):
            g = Graph.from_code(5, code)
            for k1, k2 in itertools.product(range(1, 6), repeat=2):
                assert max(c.period for c in limit_cycles(Scenario(g, PercParams(k1, k2)))) <= 2


class TestTileOrbits:
    def test_trivial(self):
        skel = Skeleton(constants(3))
        assert tile_orbits(skel.holonomy_group(0)) == []

    def test_cycle(self):
        skel = Skeleton([cycle3()])
        [orb] = tile_orbits(skel.holonomy_group(0), skel.labels)
        assert orb.word == (0,) and orb.label == "c"
        assert set(orb.sets) == {(1,), (2,), (3,)}

    def test_orbit_word_acts_cyclically(self, rng):
        from holoperc.tsg import act_on_set, apply_word
        for _ in range(20):
            skel = build_skeleton(random_scenario(rng, n_max=4))
            for grp in skel.groups.values():
                for orb in tile_orbits(grp):
                    f = apply_word(orb.word, skel.gens, skel.n_states)
                    for a, b in zip(orb.sets, orb.sets[1:] + orb.sets[:1]):
                        assert act_on_set(a, f) == b


class TestReconstruction:
    def test_no_constraints(self):
        assert len(reconstruct_candidate_graphs([])) == 1024

    def test_max_degree(self):
        got = reconstruct_candidate_graphs(["max_degree_3"])
        assert 0 < len(got) < 1024
        assert all(g.max_degree <= 3 for g in got)

    def test_incremental_filters_shrink(self):
        names = ["max_degree_3", "s1_high_k_zero", "s1_levels"]
        sizes = [len(reconstruct_candidate_graphs(names[:i])) for i in range(len(names) + 1)]
        assert sizes == sorted(sizes, reverse=True)

    def test_high_k_constraint_admits_low_degree(self):
        # frozen thresholds: every graph with max degree <= 3 passes
        passing = {g.code() for g in reconstruct_candidate_graphs(["s1_high_k_zero"])}
        low = {g.code() for g in reconstruct_candidate_graphs(["max_degree_3"])}
        assert low <= passing

    def test_high_k_constraint_does_not_bound_degree(self):
        # a degree-4 node with k1 = k2 = 4 can switch, yet no group appears: star K_{1,4} passes
        star = Graph.from_edges(5, [(1, 2), (1, 3), (1, 4), (1, 5)])
        assert not build_t(Scenario(star, PercParams(4, 4))).is_identity()
        assert CONSTRAINTS["s1_high_k_zero"](star)

    def test_callable_constraint(self):
        got = reconstruct_candidate_graphs([lambda g: len(g.edges()) == 10])
        assert [g.code() for g in got] == [1023]
