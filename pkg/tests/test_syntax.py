import itertools
import random

import pytest

from casmc import formula as sf
from casmc.errors import FormulaSyntaxError
from casmc.io.syntax import (format_pctl, format_spatial, parse_formula, parse_pctl,
                             parse_spatial, tokenize)
from casmc.meanfield import formula as pf
from helpers import random_formula, random_pctl

p, q, r = sf.Atom("p"), sf.Atom("q"), sf.Atom("r")


@pytest.mark.parametrize("text, ast", [
    ("p & q | r", sf.Or(sf.And(p, q), r)),
    ("p | q & r", sf.Or(p, sf.And(q, r))),
    ("!p & q", sf.And(sf.Not(p), q)),
    ("N p S q", sf.Surrounded(sf.Near(p), q)),
    ("p S q S r", sf.Surrounded(p, sf.Surrounded(q, r))),
    ("p -> q -> r", sf.Implies(p, sf.Implies(q, r))),
    ("p & q & r", sf.And(sf.And(p, q), r)),
    ("p | q S r", sf.Surrounded(sf.Or(p, q), r)),
    ("(p S q) & r", sf.And(sf.Surrounded(p, q), r)),
    ("reach(p, q | r)", sf.Reach(p, sf.Or(q, r))),
    ("E[p U q]", sf.EU(p, q)),
    ("A[true U false]", sf.AU(sf.Top(), sf.Bottom())),
    ("EF AG p", sf.EF(sf.AG(p))),
    ("somewhere p P everywhere q", sf.Propagate(sf.Somewhere(p), sf.Everywhere(q))),
])
def test_spatial_precedence(text, ast):
    assert parse_spatial(text) == ast
    assert parse_spatial(format_spatial(ast)) == ast


def test_spatial_round_trip_random():
    rng = random.Random(11)
    for _ in range(1000):
        f = random_formula(rng, ["p", "q", "r", "floor_1"], 5, temporal=rng.random() < 0.5)
        text = format_spatial(f)
        assert parse_spatial(text) == f, text
        assert format_spatial(parse_spatial(text)) == text


def test_pctl_round_trip_random():
    rng = random.Random(12)
    states = ["S", "I", "R", "s_3"]
    for _ in range(1000):
        f = random_pctl(rng, states, rng.randint(0, 3))
        text = format_pctl(f)
        assert parse_pctl(text) == f, text


BINARY = [lambda a, b: sf.And(a, b), lambda a, b: sf.Or(a, b), lambda a, b: sf.Implies(a, b),
          lambda a, b: sf.Surrounded(a, b), lambda a, b: sf.Propagate(a, b)]
UNARY = [sf.Not, sf.Near, sf.Somewhere, sf.Everywhere, sf.EX, sf.AG]


def test_all_two_operator_nestings():
    shapes = []
    for f1, f2 in itertools.product(BINARY, repeat=2):
        shapes += [f1(f2(p, q), r), f1(p, f2(q, r))]
    for u, f in itertools.product(UNARY, BINARY):
        shapes += [u(f(p, q)), f(u(p), q), f(p, u(q))]
    for f in shapes:
        assert parse_spatial(format_spatial(f)) == f


def test_pctl_examples():
    f = parse_pctl("P>=0.9 [F<=5 R]")
    assert f == pf.Prob(">=", 0.9, pf.BoundedUntil(pf.PTrue(), 5, pf.LocalAtom("R")))
    g = parse_pctl("I & {m[I] + -0.5*m[S] > 0.1} | P<0.2 [X !S]")
    assert isinstance(g, pf.POr) and isinstance(g.left, pf.PAnd)
    assert isinstance(g.left.right, pf.OccPredicate)
    assert g.right == pf.Prob("<", 0.2, pf.Next(pf.PNot(pf.LocalAtom("S"))))
    nested = parse_pctl("P>0.5 [S U<=3 P>=0.1 [X I]]")
    assert pf.prob_nesting(nested) == 2
    assert parse_pctl(format_pctl(nested)) == nested


def test_float_bounds_round_trip_exactly():
    f = pf.Prob(">=", 0.1 + 0.2, pf.Next(pf.PTrue()))
    assert parse_pctl(format_pctl(f)).bound == 0.1 + 0.2


@pytest.mark.parametrize("text, col", [
    ("p & ", 5),
    ("p S S q", 5),
    ("(p | q", 7),
    ("p $ q", 3),
    ("reach(p q)", 9),
    ("E[p q]", 5),
])
def test_spatial_errors_point_at_column(text, col):
    with pytest.raises(FormulaSyntaxError) as e:
        parse_spatial(text)
    assert e.value.column == col
    caret = e.value.caret().splitlines()
    assert caret[0] == text and caret[1].index("^") == col - 1


def test_error_line_numbers():
    with pytest.raises(FormulaSyntaxError) as e:
        parse_spatial("p &\nq &\n)")
    assert (e.value.line, e.value.column) == (3, 1)


@pytest.mark.parametrize("text", ["P>=1.5 [X S]", "P>=0.5 [S U<=-1 I]", "P [X S]", "{m[S] 0.3}", "P>=0.5 [S U I]"])
def test_pctl_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse_pctl(text)


def test_keywords_are_not_atoms():
    with pytest.raises(FormulaSyntaxError):
        parse_spatial("S & p")


def test_parse_formula_dispatch():
    assert parse_formula("p", "spatial") == p
    assert parse_formula("S", "pctl") == pf.LocalAtom("S")
    assert [t.kind for t in tokenize("p->q")] == ["ident", "op", "ident", "eof"]
