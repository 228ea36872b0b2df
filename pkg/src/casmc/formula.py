"""AST for spatial (SLCS) and spatio-temporal formulas.

Nodes are frozen dataclasses so that equal formulas compare and hash equal.
Core spatial nodes: ``Top``, ``Atom``, ``Not``, ``And``, ``Near``,
``Surrounded``, ``Propagate`` and ``Reach``. Everything else is sugar removed
by ``desugar``. Temporal nodes keep ``EX``, ``EU``, ``AU`` as core.
"""
from __future__ import annotations

from dataclasses import dataclass


class Formula:
    __slots__ = ()

    def children(self):
        return ()

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class _Unary(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class _Binary(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


class Not(_Unary):
    pass


class Near(_Unary):
    pass


class Somewhere(_Unary):
    pass


class Everywhere(_Unary):
    pass


class And(_Binary):
    pass


class Or(_Binary):
    pass


class Implies(_Binary):
    pass


class Surrounded(_Binary):
    pass


class Propagate(_Binary):
    """Experimental: points satisfying ``right`` reached from ``left`` roots through
    ``right`` points."""


class Reach(_Binary):
    """``left`` points (or ``right`` points) from which a closure path through
    ``left`` points ends in a ``right`` point."""


# temporal operators over the Kripke component
class EX(_Unary):
    pass


class AX(_Unary):
    pass


class EF(_Unary):
    pass


class AF(_Unary):
    pass


class EG(_Unary):
    pass


class AG(_Unary):
    pass


class EU(_Binary):
    pass


class AU(_Binary):
    pass


TEMPORAL = (EX, AX, EF, AF, EG, AG, EU, AU)


def is_temporal(f: Formula) -> bool:
    return isinstance(f, TEMPORAL) or any(is_temporal(c) for c in f.children())


def atoms(f: Formula) -> set:
    if isinstance(f, Atom):
        return {f.name}
    out = set()
    for c in f.children():
        out |= atoms(c)
    return out


def depth(f: Formula) -> int:
    kids = f.children()
    return 1 + max((depth(c) for c in kids), default=0) if kids else 0


def desugar(f: Formula) -> Formula:
    """Rewrite sugar into the core grammar; core nodes pass through."""
    if isinstance(f, (Top, Atom)):
        return f
    if isinstance(f, Bottom):
        return Not(Top())
    if isinstance(f, Or):
        return Not(And(Not(desugar(f.left)), Not(desugar(f.right))))
    if isinstance(f, Implies):
        return Not(And(desugar(f.left), Not(desugar(f.right))))
    if isinstance(f, Somewhere):
        return Reach(Top(), desugar(f.arg))
    if isinstance(f, Everywhere):
        return Not(Reach(Top(), Not(desugar(f.arg))))
    if isinstance(f, EF):
        return EU(Top(), desugar(f.arg))
    if isinstance(f, AF):
        return AU(Top(), desugar(f.arg))
    if isinstance(f, AG):
        return Not(EU(Top(), Not(desugar(f.arg))))
    if isinstance(f, EG):
        return Not(AU(Top(), Not(desugar(f.arg))))
    if isinstance(f, AX):
        return Not(EX(Not(desugar(f.arg))))
    if isinstance(f, _Unary):
        return type(f)(desugar(f.arg))
    if isinstance(f, _Binary):
        return type(f)(desugar(f.left), desugar(f.right))
    raise TypeError(f"not a formula: {f!r}")
