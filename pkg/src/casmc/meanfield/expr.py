"""Occupancy-dependent kernel expressions.

Grammar: numbers, ``m[state]``, ``+ - * /``, unary minus, parentheses and
``min(...)`` / ``max(...)`` with one or more arguments. Expressions compile to
callables of the occupancy vector.
"""
from __future__ import annotations

import re

from ..errors import FormatError, ModelError

_TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class Expr:
    def __call__(self, m):
        raise NotImplementedError

    def states(self):
        return set()


class Const(Expr):
    def __init__(self, value):
        self.value = float(value)

    def __call__(self, m):
        return self.value

    def __repr__(self):
        return repr(self.value)


class Occ(Expr):
    def __init__(self, state, index):
        self.state = state
        self.index = index

    def __call__(self, m):
        return float(m[self.index])

    def states(self):
        return {self.state}

    def __repr__(self):
        return f"m[{self.state}]"


class BinOp(Expr):
    def __init__(self, op, left, right):
        self.op, self.left, self.right = op, left, right

    def __call__(self, m):
        a, b = self.left(m), self.right(m)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if b == 0.0:
            raise ModelError(f"division by zero evaluating {self!r}")
        return a / b

    def states(self):
        return self.left.states() | self.right.states()

    def __repr__(self):
        return f"({self.left!r} {self.op} {self.right!r})"


class Neg(Expr):
    def __init__(self, arg):
        self.arg = arg

    def __call__(self, m):
        return -self.arg(m)

    def states(self):
        return self.arg.states()

    def __repr__(self):
        return f"-{self.arg!r}"


class Call(Expr):
    def __init__(self, fn, args):
        self.fn, self.args = fn, args

    def __call__(self, m):
        vals = [a(m) for a in self.args]
        return min(vals) if self.fn == "min" else max(vals)

    def states(self):
        return set().union(*(a.states() for a in self.args))

    def __repr__(self):
        return f"{self.fn}({', '.join(map(repr, self.args))})"


def parse_expr(text, index, line=None):
    """Parse ``text`` with ``index`` mapping declared state names to positions."""
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        num, name, sym = m.groups()
        start = m.start(1) if num else m.start(2) if name else m.start(3)
        if sym is not None and sym.isspace():
            pos = m.end()
            continue
        toks.append((num and "num" or name and "name" or "sym", num or name or sym, start))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    i = 0

    def fail(msg):
        found = toks[i][1] or "end of expression"
        raise FormatError(f"{msg} at column {toks[i][2] + 1} (found {found!r}) in {text!r}", line=line)

    def peek(v):
        return toks[i][1] == v and toks[i][0] != "num"

    def take(v):
        nonlocal i
        if not peek(v):
            fail(f"expected {v!r}")
        i += 1

    def sum_():
        nonlocal i
        left = prod()
        while peek("+") or peek("-"):
            op = toks[i][1]
            i += 1
            left = BinOp(op, left, prod())
        return left

    def prod():
        nonlocal i
        left = unary()
        while peek("*") or peek("/"):
            op = toks[i][1]
            i += 1
            left = BinOp(op, left, unary())
        return left

    def unary():
        nonlocal i
        if peek("-"):
            i += 1
            return Neg(unary())
        return atom()

    def atom():
        nonlocal i
        kind, val, _ = toks[i]
        if kind == "num":
            i += 1
            return Const(val)
        if peek("("):
            i += 1
            e = sum_()
            take(")")
            return e
        if kind == "name" and val == "m":
            i += 1
            take("[")
            kind, name, _ = toks[i]
            if kind != "name":
                fail("expected a state name")
            if name not in index:
                fail(f"undeclared state {name!r}")
            i += 1
            take("]")
            return Occ(name, index[name])
        if kind == "name" and val in ("min", "max"):
            i += 1
            take("(")
            args = [sum_()]
            while peek(","):
                i += 1
                args.append(sum_())
            take(")")
            return Call(val, args)
        fail("expected a number, m[state], min(...), max(...) or '('")

    e = sum_()
    if toks[i][0] != "eof":
        fail("unexpected trailing input")
    return e
