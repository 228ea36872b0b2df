"""Surface syntax for spatial, spatio-temporal and PCTL formulas.

Spatial precedence, tightest first::

    !  N  somewhere  everywhere  EX AX EF AF EG AG      (prefix)
    &                                                    (left)
    |                                                    (left)
    ->                                                   (right)
    S  P                                                 (right)

plus the bracketed forms ``reach(f, g)``, ``E[f U g]`` and ``A[f U g]``.

PCTL state formulas use ``! & |`` with the same relative precedence, local
state names, ``{c*m[s] + ... >= b}`` occupancy tests and
``P>=p [X f]`` / ``P>=p [f U<=k g]`` / ``P>=p [F<=k g]``.

``format_*`` produces text that ``parse_*`` maps back to an identical AST.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .. import formula as sf
from ..errors import FormulaSyntaxError
from ..meanfield import formula as pf

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>->|<=|>=|[!&|()\[\],{}<>+\-*])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # "num" | "ident" | "op" | "eof"
    text: str
    pos: int


def tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise _error(text, pos, f"unexpected character {text[pos]!r}")
        if m.lastgroup != "ws":
            toks.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    toks.append(Token("eof", "", len(text)))
    return toks


def _error(text, pos, message):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return FormulaSyntaxError(message, text, line, col)


class _Parser:
    keywords: frozenset = frozenset()

    def __init__(self, text):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text):
        t = self.tok
        return t.kind in ("op", "ident") and t.text == text

    def expect(self, text):
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.next()

    def fail(self, message):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise _error(self.text, t.pos, f"{message}, found {found}")

    def ident(self):
        t = self.tok
        if t.kind != "ident" or t.text in self.keywords:
            self.fail("expected an identifier")
        return self.next().text

    def number(self):
        sign = 1.0
        if self.at("-"):
            self.next()
            sign = -1.0
        t = self.tok
        if t.kind != "num":
            self.fail("expected a number")
        self.next()
        return sign * float(t.text)

    def finish(self, result):
        if self.tok.kind != "eof":
            self.fail("unexpected trailing input")
        return result


# ---------------------------------------------------------------- spatial

_PREFIX = {
    "!": sf.Not, "N": sf.Near, "somewhere": sf.Somewhere, "everywhere": sf.Everywhere,
    "EX": sf.EX, "AX": sf.AX, "EF": sf.EF, "AF": sf.AF, "EG": sf.EG, "AG": sf.AG,
}
# op -> (node, precedence, right associative)
_INFIX = {
    "S": (sf.Surrounded, 1, True),
    "P": (sf.Propagate, 1, True),
    "->": (sf.Implies, 2, True),
    "|": (sf.Or, 3, False),
    "&": (sf.And, 4, False),
}
_PREFIX_PREC = 5
_ATOMIC_PREC = 6

SPATIAL_KEYWORDS = frozenset(
    {"true", "false", "reach", "E", "A", "U"} | {k for k in _PREFIX if k.isalpha()}
    | {k for k in _INFIX if k.isalpha()}
)


class _SpatialParser(_Parser):
    keywords = SPATIAL_KEYWORDS

    def expr(self, min_prec=0):
        left = self.prefix()
        while True:
            t = self.tok
            entry = _INFIX.get(t.text) if t.kind in ("op", "ident") else None
            if entry is None or entry[1] < min_prec:
                return left
            node, prec, right_assoc = entry
            self.next()
            right = self.expr(prec if right_assoc else prec + 1)
            left = node(left, right)

    def prefix(self):
        t = self.tok
        if t.kind in ("op", "ident") and t.text in _PREFIX:
            self.next()
            return _PREFIX[t.text](self.expr(_PREFIX_PREC))
        if self.at("("):
            self.next()
            inner = self.expr()
            self.expect(")")
            return inner
        if self.at("true"):
            self.next()
            return sf.Top()
        if self.at("false"):
            self.next()
            return sf.Bottom()
        if self.at("reach"):
            self.next()
            self.expect("(")
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect(")")
            return sf.Reach(a, b)
        if self.at("E") or self.at("A"):
            node = sf.EU if self.next().text == "E" else sf.AU
            self.expect("[")
            a = self.expr()
            self.expect("U")
            b = self.expr()
            self.expect("]")
            return node(a, b)
        if t.kind == "ident" and t.text not in self.keywords:
            return sf.Atom(self.next().text)
        self.fail("expected a formula")


def parse_spatial(text) -> sf.Formula:
    """Parse a spatial or spatio-temporal formula."""
    p = _SpatialParser(text)
    return p.finish(p.expr())


_PREFIX_NAME = {v: k for k, v in _PREFIX.items()}
_INFIX_NAME = {v[0]: (k, v[1], v[2]) for k, v in _INFIX.items()}


def _spatial_prec(f):
    if type(f) in _INFIX_NAME:
        return _INFIX_NAME[type(f)][1]
    if type(f) in _PREFIX_NAME:
        return _PREFIX_PREC
    return _ATOMIC_PREC


def format_spatial(f: sf.Formula, min_prec=0) -> str:
    cls = type(f)
    if cls is sf.Top:
        s = "true"
    elif cls is sf.Bottom:
        s = "false"
    elif cls is sf.Atom:
        s = f.name
    elif cls is sf.Reach:
        s = f"reach({format_spatial(f.left)}, {format_spatial(f.right)})"
    elif cls in (sf.EU, sf.AU):
        q = "E" if cls is sf.EU else "A"
        s = f"{q}[{format_spatial(f.left)} U {format_spatial(f.right)}]"
    elif cls in _PREFIX_NAME:
        op = _PREFIX_NAME[cls]
        sep = "" if op == "!" else " "
        s = f"{op}{sep}{format_spatial(f.arg, _PREFIX_PREC)}"
    elif cls in _INFIX_NAME:
        op, prec, right_assoc = _INFIX_NAME[cls]
        lp, rp = (prec + 1, prec) if right_assoc else (prec, prec + 1)
        s = f"{format_spatial(f.left, lp)} {op} {format_spatial(f.right, rp)}"
    else:
        raise TypeError(f"cannot format {f!r}")
    return f"({s})" if _spatial_prec(f) < min_prec else s


# ---------------------------------------------------------------- pctl

PCTL_KEYWORDS = frozenset({"true", "false", "P", "X", "U", "F", "m"})
_CMP = ("<=", ">=", "<", ">")


class _PctlParser(_Parser):
    keywords = PCTL_KEYWORDS

    def expr(self):
        left = self.conj()
        while self.at("|"):
            self.next()
            left = pf.POr(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.at("&"):
            self.next()
            left = pf.PAnd(left, self.unary())
        return left

    def unary(self):
        if self.at("!"):
            self.next()
            return pf.PNot(self.unary())
        return self.primary()

    def comparator(self):
        t = self.tok
        if t.kind != "op" or t.text not in _CMP:
            self.fail("expected one of < <= >= >")
        return self.next().text

    def primary(self):
        t = self.tok
        if self.at("("):
            self.next()
            inner = self.expr()
            self.expect(")")
            return inner
        if self.at("true"):
            self.next()
            return pf.PTrue()
        if self.at("false"):
            self.next()
            return pf.PFalse()
        if self.at("{"):
            return self.occupancy()
        if self.at("P"):
            self.next()
            op = self.comparator()
            at = self.tok.pos
            bound = self.number()
            if not 0.0 <= bound <= 1.0:
                raise _error(self.text, at, "probability bound must lie in [0, 1]")
            self.expect("[")
            path = self.path()
            self.expect("]")
            return pf.Prob(op, bound, path)
        if t.kind == "ident" and t.text not in self.keywords:
            return pf.LocalAtom(self.next().text)
        self.fail("expected a state formula")

    def steps(self):
        self.expect("<=")
        t = self.tok
        if t.kind != "num" or not t.text.isdigit():
            self.fail("expected a non-negative integer step bound")
        return int(self.next().text)

    def path(self):
        if self.at("X"):
            self.next()
            return pf.Next(self.expr())
        if self.at("F"):
            self.next()
            k = self.steps()
            return pf.BoundedUntil(pf.PTrue(), k, self.expr())
        left = self.expr()
        self.expect("U")
        k = self.steps()
        return pf.BoundedUntil(left, k, self.expr())

    def occupancy(self):
        self.expect("{")
        terms = [self.term()]
        while self.at("+") or self.at("-"):
            negate = self.next().text == "-"
            state, coef = self.term()
            terms.append((state, -coef if negate else coef))
        op = self.comparator()
        bound = self.number()
        self.expect("}")
        return pf.OccPredicate(tuple(terms), op, bound)

    def term(self):
        coef = 1.0
        if not self.at("m"):
            coef = self.number()
            self.expect("*")
        self.expect("m")
        self.expect("[")
        state = self.ident()
        self.expect("]")
        return state, coef


def parse_pctl(text) -> pf.StateFormula:
    p = _PctlParser(text)
    return p.finish(p.expr())


def _num(x):
    return repr(float(x))


def format_pctl(f, min_prec=0) -> str:
    # precedence: | 1, & 2, ! 3, primary 4
    if isinstance(f, pf.POr):
        s, prec = f"{format_pctl(f.left, 1)} | {format_pctl(f.right, 2)}", 1
    elif isinstance(f, pf.PAnd):
        s, prec = f"{format_pctl(f.left, 2)} & {format_pctl(f.right, 3)}", 2
    elif isinstance(f, pf.PNot):
        s, prec = f"!{format_pctl(f.arg, 3)}", 3
    else:
        prec = 4
        if isinstance(f, pf.PTrue):
            s = "true"
        elif isinstance(f, pf.PFalse):
            s = "false"
        elif isinstance(f, pf.LocalAtom):
            s = f.state
        elif isinstance(f, pf.OccPredicate):
            terms = " + ".join(f"{_num(c)}*m[{st}]" for st, c in f.terms)
            s = f"{{{terms} {f.op} {_num(f.bound)}}}"
        elif isinstance(f, pf.Prob):
            p = f.path
            if isinstance(p, pf.Next):
                body = f"X {format_pctl(p.arg)}"
            else:
                body = f"{format_pctl(p.left)} U<={p.steps} {format_pctl(p.right)}"
            s = f"P{f.op}{_num(f.bound)} [{body}]"
        else:
            raise TypeError(f"cannot format {f!r}")
    return f"({s})" if prec < min_prec else s


def parse_formula(text, logic="spatial"):
    """Dispatch on ``logic``: ``"spatial"`` (also covers spatio-temporal) or ``"pctl"``."""
    if logic in ("spatial", "st"):
        return parse_spatial(text)
    if logic == "pctl":
        return parse_pctl(text)
    raise ValueError(f"unknown logic {logic!r}")


def format_formula(f) -> str:
    if isinstance(f, sf.Formula):
        return format_spatial(f)
    return format_pctl(f)
