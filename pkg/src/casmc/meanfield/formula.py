"""Bounded PCTL over a tagged object, extended with occupancy-measure predicates."""
from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Tuple

COMPARATORS = {
    "<": operator.lt,
    "<=": operator.le,
    ">=": operator.ge,
    ">": operator.gt,
}


class StateFormula:
    __slots__ = ()


class PathFormula:
    __slots__ = ()


@dataclass(frozen=True)
class PTrue(StateFormula):
    pass


@dataclass(frozen=True)
class PFalse(StateFormula):
    pass


@dataclass(frozen=True)
class LocalAtom(StateFormula):
    """Holds when the tagged object is in local state ``state``."""

    state: str


@dataclass(frozen=True)
class OccPredicate(StateFormula):
    """Linear test ``sum(c * m[state]) <op> bound`` on the current occupancy measure."""

    terms: Tuple[Tuple[str, float], ...]
    op: str
    bound: float

    def __post_init__(self):
        if self.op not in COMPARATORS:
            raise ValueError(f"unknown comparison {self.op!r}")
        object.__setattr__(self, "terms", tuple((s, float(c)) for s, c in self.terms))
        object.__setattr__(self, "bound", float(self.bound))

    def holds(self, m, index):
        value = sum(c * m[index[s]] for s, c in self.terms)
        return COMPARATORS[self.op](value, self.bound)


@dataclass(frozen=True)
class PNot(StateFormula):
    arg: StateFormula


@dataclass(frozen=True)
class PAnd(StateFormula):
    left: StateFormula
    right: StateFormula


@dataclass(frozen=True)
class POr(StateFormula):
    left: StateFormula
    right: StateFormula


@dataclass(frozen=True)
class Prob(StateFormula):
    op: str
    bound: float
    path: PathFormula

    def __post_init__(self):
        if self.op not in COMPARATORS:
            raise ValueError(f"unknown comparison {self.op!r}")
        if not 0.0 <= self.bound <= 1.0:
            raise ValueError(f"probability bound {self.bound} outside [0, 1]")
        object.__setattr__(self, "bound", float(self.bound))

    def holds(self, probability):
        return COMPARATORS[self.op](probability, self.bound)


@dataclass(frozen=True)
class Next(PathFormula):
    arg: StateFormula


@dataclass(frozen=True)
class BoundedUntil(PathFormula):
    left: StateFormula
    steps: int
    right: StateFormula

    def __post_init__(self):
        if int(self.steps) != self.steps or self.steps < 0:
            raise ValueError(f"until bound must be a non-negative integer, got {self.steps!r}")
        object.__setattr__(self, "steps", int(self.steps))


def state_children(f):
    if isinstance(f, PNot):
        return (f.arg,)
    if isinstance(f, (PAnd, POr)):
        return (f.left, f.right)
    if isinstance(f, Prob):
        p = f.path
        return (p.arg,) if isinstance(p, Next) else (p.left, p.right)
    return ()


def horizon(f) -> int:
    """Number of future steps whose occupancy measure ``f`` may inspect."""
    kids = max((horizon(c) for c in state_children(f)), default=0)
    if isinstance(f, Prob):
        return kids + (1 if isinstance(f.path, Next) else f.path.steps)
    return kids


def prob_subformulas(f) -> set:
    out = {f} if isinstance(f, Prob) else set()
    for c in state_children(f):
        out |= prob_subformulas(c)
    return out


def prob_nesting(f) -> int:
    kids = max((prob_nesting(c) for c in state_children(f)), default=0)
    return kids + 1 if isinstance(f, Prob) else kids


def local_atoms(f) -> set:
    out = {f.state} if isinstance(f, LocalAtom) else set()
    if isinstance(f, OccPredicate):
        out |= {s for s, _ in f.terms}
    for c in state_children(f):
        out |= local_atoms(c)
    return out
