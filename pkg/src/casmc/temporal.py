"""Spatio-temporal checking: CTL path quantifiers over Kripke snapshot models.

Each Kripke state carries a valuation over one shared closure space. Temporal
operators move along the Kripke component only; spatial operators act inside
one snapshot. Satisfaction sets are ``(kripke_state, point)`` pairs, held as a
``(states, points)`` uint8 matrix internally.
"""
from __future__ import annotations

from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

from .closure import ClosureSpace, PointSet
from .errors import DomainError, FormulaError, ModelError
from .formula import AU, EU, EX, And, Atom, Formula, Not, Top, desugar
from .slcs import BRUTEFORCE_CAP, SpatialModel, spatial_step


class SnapshotModel:
    def __init__(self, space: ClosureSpace, n_states: int, transitions: Iterable[Tuple[int, int]],
                 valuation: Mapping[Tuple[int, int], Iterable[str]], initial_state: int = 0,
                 atoms: Optional[Sequence[str]] = None):
        self.space = space
        self.n_states = int(n_states)
        if self.n_states < 1:
            raise ModelError("a snapshot model needs at least one kripke state")
        self.transitions = frozenset((int(a), int(b)) for a, b in transitions)
        for a, b in self.transitions:
            if not (0 <= a < self.n_states and 0 <= b < self.n_states):
                raise ModelError(f"transition ({a}, {b}) references an unknown kripke state")
        if not 0 <= initial_state < self.n_states:
            raise ModelError(f"initial state {initial_state} out of range")
        self.initial_state = int(initial_state)
        self.step = np.zeros((self.n_states, self.n_states), dtype=np.int64)
        for a, b in self.transitions:
            self.step[a, b] = 1
        for s in range(self.n_states):
            if not self.step[s].any():
                raise ModelError(f"kripke state {s} has no outgoing transition")

        val = {(int(s), int(p)): frozenset(names) for (s, p), names in valuation.items()}
        if atoms is None:
            atoms = sorted(set().union(*val.values())) if val else []
        self.atoms = tuple(atoms)
        self.valuation = val
        self._atom_masks = {a: np.zeros((self.n_states, space.size), dtype=np.uint8) for a in self.atoms}
        for (s, p), names in val.items():
            if not (0 <= s < self.n_states and 0 <= p < space.size):
                raise DomainError(f"valuation entry for state {s}, point {p} is out of range")
            for a in names:
                if a not in self._atom_masks:
                    raise FormulaError(f"state {s}, point {p} uses undeclared atom {a!r}")
                self._atom_masks[a][s, p] = 1

    def atom_mask(self, name):
        try:
            return self._atom_masks[name]
        except KeyError:
            raise FormulaError(f"undeclared atom {name!r}") from None

    def snapshot(self, s) -> SpatialModel:
        sets = {a: PointSet(m[s]) for a, m in self._atom_masks.items()}
        return SpatialModel.from_sets(self.space, sets)

    def ex(self, z):
        return (self.step @ z > 0).astype(np.uint8)

    def ax(self, z):
        return (self.step @ (1 - z.astype(np.int64)) == 0).astype(np.uint8)


def st_sat_matrix(model: SnapshotModel, f: Formula, surround="fixpoint", cap=BRUTEFORCE_CAP):
    """Satisfaction matrix ``M[s, x] == 1`` iff ``(s, x)`` satisfies ``f``."""
    core = desugar(f)
    shape = (model.n_states, model.space.size)
    carrier = SpatialModel(model.space, ())
    cache: Dict[Formula, np.ndarray] = {}

    def ev(g):
        hit = cache.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Top):
            out = np.ones(shape, dtype=np.uint8)
        elif isinstance(g, Atom):
            out = model.atom_mask(g.name)
        elif isinstance(g, Not):
            out = 1 - ev(g.arg)
        elif isinstance(g, And):
            out = ev(g.left) & ev(g.right)
        elif isinstance(g, EX):
            out = model.ex(ev(g.arg))
        elif isinstance(g, (EU, AU)):
            hold, goal = ev(g.left), ev(g.right)
            step = model.ex if isinstance(g, EU) else model.ax
            out = goal.copy()
            while True:
                nxt = goal | (hold & step(out))
                if np.array_equal(nxt, out):
                    break
                out = nxt
        else:
            subs = [ev(c) for c in g.children()]
            out = np.vstack([
                spatial_step(carrier, g, [PointSet(m[s]) for m in subs], surround, cap).mask
                for s in range(model.n_states)
            ])
        out = np.ascontiguousarray(out, dtype=np.uint8)
        cache[g] = out
        return out

    return ev(core)


def st_sat_set(model: SnapshotModel, f: Formula, surround="fixpoint", cap=BRUTEFORCE_CAP):
    """Set of ``(kripke_state, point)`` pairs satisfying ``f``."""
    m = st_sat_matrix(model, f, surround, cap)
    return frozenset((int(s), int(p)) for s, p in zip(*np.nonzero(m)))
