import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casmc import formula as sf
from casmc.closure import ClosureSpace, SpaceRelation
from casmc.errors import FormulaError, OracleInfeasibleError
from casmc.slcs import (SpatialModel, propagate_sat, reach_sat, sat_set, surrounded_bruteforce,
                        surrounded_sat)
from helpers import path_space, random_core_formula, random_formula, random_model

p, q, r = sf.Atom("p"), sf.Atom("q"), sf.Atom("r")


def model_with(space, **sets):
    return SpatialModel.from_sets(space, sets)


def test_near_false_is_empty():
    m = model_with(path_space(), p=[0])
    assert sat_set(m, sf.Near(sf.Bottom())).ids() == []


def test_near_on_edgeless_space_is_identity():
    m = model_with(ClosureSpace(SpaceRelation(4), "forward"), p=[1, 3])
    assert sat_set(m, sf.Near(p)) == sat_set(m, p)


def test_near_on_path():
    m = model_with(path_space(), p=[0])
    assert sat_set(m, sf.Near(p)).ids() == [0, 1]


def test_undeclared_atom():
    m = model_with(path_space(), p=[0])
    with pytest.raises(FormulaError):
        sat_set(m, sf.Atom("zzz"))


def test_temporal_formula_rejected_on_spatial_model():
    m = model_with(path_space(), p=[0])
    with pytest.raises(FormulaError):
        sat_set(m, sf.EF(p))


def test_surrounded_examples():
    sp = path_space()
    m = model_with(sp)
    X = sp.carrier()
    assert surrounded_sat(m, X, sp.empty()) == X
    assert surrounded_sat(m, sp.point_set([0]), sp.point_set([1])).ids() == [0]
    assert surrounded_sat(m, sp.point_set([0]), sp.empty()).ids() == []


def test_bruteforce_examples():
    sp = path_space()
    m = model_with(sp)
    assert surrounded_bruteforce(m, sp.empty(), sp.carrier()).ids() == []
    single = ClosureSpace(SpaceRelation(1), "forward")
    ms = model_with(single)
    assert surrounded_bruteforce(ms, single.carrier(), single.empty()).ids() == [0]
    cycle = ClosureSpace(SpaceRelation(4, [(0, 1), (1, 2), (2, 3), (3, 0)]), "symmetric")
    mc = model_with(cycle)
    phi, psi = cycle.point_set([0, 2]), cycle.point_set([1, 3])
    assert surrounded_bruteforce(mc, phi, psi) == phi
    assert surrounded_sat(mc, phi, psi) == phi


def test_bruteforce_cap():
    sp = ClosureSpace(SpaceRelation(21), "forward")
    m = model_with(sp)
    with pytest.raises(OracleInfeasibleError):
        surrounded_bruteforce(m, sp.carrier(), sp.empty())
    with pytest.raises(OracleInfeasibleError):
        surrounded_bruteforce(m, sp.point_set(range(5)), sp.empty(), cap=4)
    assert surrounded_bruteforce(m, sp.point_set(range(12)), sp.empty()) == sp.point_set(range(12))


def test_propagate_examples():
    fwd = path_space("forward")
    m = model_with(fwd)
    assert propagate_sat(m, fwd.empty(), fwd.carrier()).ids() == []
    assert propagate_sat(m, fwd.carrier(), fwd.empty()).ids() == []
    assert propagate_sat(m, fwd.point_set([0]), fwd.point_set([1, 2])).ids() == [1, 2]


def test_propagate_root_only_if_psi():
    fwd = path_space("forward")
    m = model_with(fwd)
    # the root 0 is in C({0}) and in psi, so it belongs to the result
    assert propagate_sat(m, fwd.point_set([0]), fwd.point_set([0, 1])).ids() == [0, 1]
    # a gap in psi stops the propagation
    assert propagate_sat(m, fwd.point_set([0]), fwd.point_set([2])).ids() == []


def test_desugar_rewrites():
    assert sf.desugar(sf.Or(p, q)) == sf.Not(sf.And(sf.Not(p), sf.Not(q)))
    assert sf.desugar(sf.Implies(p, q)) == sf.Not(sf.And(p, sf.Not(q)))
    assert sf.desugar(sf.Near(p)) == sf.Near(p)
    assert sf.desugar(sf.Surrounded(p, q)) == sf.Surrounded(p, q)


def test_everywhere_true_is_carrier():
    m = model_with(path_space("forward"), p=[0])
    assert sat_set(m, sf.Everywhere(sf.Top())) == m.space.carrier()


def test_somewhere_on_path():
    m = model_with(path_space(), p=[2])
    assert sat_set(m, sf.Somewhere(p)).ids() == [0, 1, 2]
    # forward path: only points upstream of 0 reach it
    m = model_with(path_space("forward"), p=[0])
    assert sat_set(m, sf.Somewhere(p)).ids() == [0]


def test_reach_restricted_to_left_points():
    m = model_with(path_space("forward"), f=[1], g=[2])
    assert reach_sat(m, m.atom_set("f"), m.atom_set("g")).ids() == [1, 2]
    m = model_with(path_space("forward"), f=[0], g=[2])
    assert reach_sat(m, m.atom_set("f"), m.atom_set("g")).ids() == [2]


def test_somewhere_equals_escape_characterisation():
    # x can reach f  <=>  x is not surrounded by false inside !f
    rng = random.Random(11)
    for _ in range(200):
        m = random_model(rng, 12)
        f = sf.Atom(rng.choice(m.atoms))
        lhs = sat_set(m, sf.Somewhere(f))
        rhs = sat_set(m, sf.Not(sf.Surrounded(sf.Not(f), sf.Bottom())))
        assert lhs == rhs


def test_fixpoint_matches_bruteforce_on_random_models():
    rng = random.Random(2)
    for _ in range(200):
        m = random_model(rng, 12)
        f = random_core_formula(rng, list(m.atoms), 4)
        assert sat_set(m, f) == sat_set(m, f, surround="bruteforce")


def test_order_independence_under_relabelling():
    rng = random.Random(4)
    for _ in range(100):
        m = random_model(rng, 12)
        f = random_formula(rng, list(m.atoms), 3)
        n = m.space.size
        perm = list(range(n))
        rng.shuffle(perm)
        rel = SpaceRelation(n, [(perm[a], perm[b]) for a, b in m.space.relation.edges])
        shuffled = SpatialModel(ClosureSpace(rel, m.space.direction), m.atoms,
                                {perm[x]: names for x, names in m.valuation.items()})
        got = sat_set(shuffled, f)
        assert sorted(perm[x] for x in sat_set(m, f).ids()) == got.ids()


@st.composite
def models_and_formulas(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    m = random_model(rng, 10)
    return m, random_formula(rng, list(m.atoms), 3), random_formula(rng, list(m.atoms), 3)


@settings(max_examples=150, deadline=None)
@given(models_and_formulas())
def test_boolean_and_near_laws(arg):
    m, f, _ = arg
    s = sat_set(m, f)
    assert sat_set(m, sf.Not(sf.Not(f))) == s
    assert sat_set(m, sf.And(f, f)) == s
    assert s.issubset(sat_set(m, sf.Near(f)))


@settings(max_examples=150, deadline=None)
@given(models_and_formulas())
def test_surround_laws(arg):
    m, f, g = arg
    assert sat_set(m, sf.Surrounded(f, g)).issubset(sat_set(m, f))
    assert sat_set(m, sf.Surrounded(sf.Top(), g)) == m.space.carrier()


@settings(max_examples=150, deadline=None)
@given(models_and_formulas())
def test_somewhere_monotone(arg):
    m, f, g = arg
    small, big = sf.And(f, g), f
    assert sat_set(m, sf.Somewhere(small)).issubset(sat_set(m, sf.Somewhere(big)))


def test_surrounded_matches_bruteforce_for_each_backend(backend):
    rng = random.Random(9)
    for _ in range(100):
        m = random_model(rng, 12)
        phi = m.atom_set(m.atoms[0])
        psi = m.atom_set(m.atoms[-1])
        assert surrounded_sat(m, phi, psi) == surrounded_bruteforce(m, phi, psi)


def test_psi_point_with_direct_escape_is_not_surrounded():
    # b satisfies both phi and psi but its neighbour c is neither, so no A
    # containing b has its frontier inside psi
    sp = path_space()
    m = model_with(sp)
    phi, psi = sp.point_set([0, 1]), sp.point_set([1])
    assert surrounded_sat(m, phi, psi).ids() == [0]
    assert surrounded_bruteforce(m, phi, psi).ids() == [0]
