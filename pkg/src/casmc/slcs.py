"""Global model checking of SLCS formulas: satisfaction sets over a closure space."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence

import numpy as np

from . import kernels
from .closure import ClosureSpace, PointSet
from .errors import DomainError, FormulaError, OracleInfeasibleError
from .formula import (And, Atom, Formula, Near, Not, Propagate, Reach,
                      Surrounded, Top, desugar, is_temporal)

BRUTEFORCE_CAP = 20


@dataclass
class SpatialModel:
    """A closure space plus a valuation of atomic propositions on its points.

    ``image`` holds the source pixel array when the model was loaded from a
    picture; overlays need it.
    """

    space: ClosureSpace
    atoms: Sequence[str]
    valuation: Mapping[int, frozenset] = field(default_factory=dict)
    image: Optional[np.ndarray] = None

    def __post_init__(self):
        self.atoms = tuple(self.atoms)
        declared = set(self.atoms)
        masks = {a: np.zeros(self.space.size, dtype=np.uint8) for a in self.atoms}
        clean = {}
        for point, names in self.valuation.items():
            if not 0 <= point < self.space.size:
                raise DomainError(f"valuation for point {point} outside the carrier")
            names = frozenset(names)
            undeclared = names - declared
            if undeclared:
                raise FormulaError(f"point {point} uses undeclared atoms {sorted(undeclared)}")
            for a in names:
                masks[a][point] = 1
            clean[point] = names
        self.valuation = clean
        self._atom_sets = {a: PointSet(m) for a, m in masks.items()}

    @classmethod
    def from_sets(cls, space, atom_sets: Mapping[str, object], image=None):
        """Build a model from ``{atom: ids or PointSet}``."""
        val: Dict[int, set] = {}
        for a, ids in atom_sets.items():
            ids = ids.ids() if isinstance(ids, PointSet) else ids
            for i in ids:
                val.setdefault(int(i), set()).add(a)
        return cls(space, list(atom_sets), val, image)

    def atom_set(self, name) -> PointSet:
        try:
            return self._atom_sets[name]
        except KeyError:
            raise FormulaError(f"undeclared atom {name!r}") from None


def _check_subset(model, *sets):
    for s in sets:
        if s.size != model.space.size:
            raise DomainError(f"point set over {s.size} points, model has {model.space.size}")


def surrounded_sat(model, phi_set: PointSet, psi_set: PointSet) -> PointSet:
    """Points of ``phi_set`` from which no closure path leaves ``phi_set`` without
    first meeting ``psi_set``.

    Computed as the complement of the escape region: points that are neither
    phi nor psi contaminate their non-psi phi predecessors, transitively.
    """
    _check_subset(model, phi_set, psi_set)
    return PointSet(kernels.surrounded(*model.space.pred, phi_set.mask, psi_set.mask))


def surrounded_bruteforce(model, phi_set: PointSet, psi_set: PointSet, cap=BRUTEFORCE_CAP) -> PointSet:
    """Literal enumeration of every ``A`` within ``phi_set``; testing oracle only."""
    _check_subset(model, phi_set, psi_set)
    members = phi_set.ids()
    if len(members) > cap:
        raise OracleInfeasibleError(f"|phi| = {len(members)} exceeds the enumeration cap {cap}")
    space = model.space
    # point sets as python ints, bit i <-> point i
    succ_bits = []
    for p in members:
        bits = 1 << p
        for q in space.successors(p):
            bits |= 1 << int(q)
        succ_bits.append(bits)
    psi_bits = sum(1 << i for i in psi_set.ids())
    member_bits = [1 << p for p in members]
    k = len(members)
    closure_of = [0] * (1 << k)
    subset_bits = [0] * (1 << k)
    found = 0
    for code in range(1, 1 << k):
        low = (code & -code).bit_length() - 1
        rest = code & (code - 1)
        closure_of[code] = closure_of[rest] | succ_bits[low]
        subset_bits[code] = subset_bits[rest] | member_bits[low]
        a = subset_bits[code]
        if (closure_of[code] & ~a) & ~psi_bits == 0:
            found |= a
    return PointSet.from_ids(space.size, [i for i in range(space.size) if found >> i & 1])


def propagate_sat(model, phi_set: PointSet, psi_set: PointSet) -> PointSet:
    """Least fixpoint of ``P = (psi & C(phi)) | (psi & C(P))``."""
    _check_subset(model, phi_set, psi_set)
    space = model.space
    seeds = space.closure(phi_set) & psi_set
    return PointSet(kernels.flood(*space.succ, seeds.mask, psi_set.mask))


def reach_sat(model, f_set: PointSet, g_set: PointSet) -> PointSet:
    """Points with a closure path ``x0 .. xk`` ending in ``g_set`` whose earlier
    points all lie in ``f_set``."""
    _check_subset(model, f_set, g_set)
    return PointSet(kernels.flood(*model.space.pred, g_set.mask, f_set.mask))


def spatial_step(model, f: Formula, sub, surround="fixpoint", cap=BRUTEFORCE_CAP):
    """Evaluate the outermost core spatial operator of ``f`` given the
    satisfaction sets ``sub`` of its children."""
    size = model.space.size
    if isinstance(f, Top):
        return PointSet.full(size)
    if isinstance(f, Atom):
        return model.atom_set(f.name)
    if isinstance(f, Not):
        return sub[0].complement()
    if isinstance(f, And):
        return sub[0] & sub[1]
    if isinstance(f, Near):
        return model.space.closure(sub[0])
    if isinstance(f, Surrounded):
        if surround == "bruteforce":
            return surrounded_bruteforce(model, sub[0], sub[1], cap)
        return surrounded_sat(model, sub[0], sub[1])
    if isinstance(f, Propagate):
        return propagate_sat(model, sub[0], sub[1])
    if isinstance(f, Reach):
        return reach_sat(model, sub[0], sub[1])
    raise FormulaError(f"not a core spatial operator: {type(f).__name__}")


def sat_set(model: SpatialModel, f: Formula, surround="fixpoint", cap=BRUTEFORCE_CAP) -> PointSet:
    """Exactly the points of ``model`` satisfying ``f``.

    ``surround="bruteforce"`` evaluates every ``S`` with the enumeration oracle.
    """
    if is_temporal(f):
        raise FormulaError("temporal operators need a snapshot model")
    core = desugar(f)
    cache: Dict[Formula, PointSet] = {}

    def ev(g):
        hit = cache.get(g)
        if hit is None:
            hit = spatial_step(model, g, [ev(c) for c in g.children()], surround, cap)
            cache[g] = hit
        return hit

    return ev(core)
