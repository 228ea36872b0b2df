"""On-the-fly bounded PCTL checking of one tagged object against the mean field.

A node is a tagged state ``(s, t)``. Expanding it looks up ``K(m(t))`` and
visits at most ``S`` successors ``(s', t + 1)``; the population size never
enters. Occupancy predicates are read at the node's own time index, so
verdicts can change with ``t``.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Dict, Optional, Tuple

from ..errors import FormulaError
from . import formula as pf
from .model import PopulationModel, Trajectory


@dataclass
class Audit:
    nodes_expanded: int = 0
    max_successors: int = 0
    memo_entries: int = 0
    transient_peak: int = 0
    prob_subformulas: int = 0
    horizon: int = 0
    local_states: int = 0

    @property
    def memo_bound(self):
        return self.local_states * (self.horizon + 1) * self.prob_subformulas

    def within_bounds(self):
        return self.max_successors <= self.local_states and self.memo_entries <= self.memo_bound

    def as_dict(self):
        d = asdict(self)
        d["memo_bound"] = self.memo_bound
        return d


@dataclass
class CheckResult:
    verdict: bool
    probability: Optional[float]
    audit: Audit


class OnTheFlyChecker:
    """Memo tables live for one ``check`` call; the trajectory may be shared."""

    def __init__(self, model: PopulationModel, trajectory: Trajectory = None):
        self.model = model
        self.traj = trajectory or Trajectory(model)
        self._memo: Dict[Tuple[int, int, int], float] = {}
        self._ids: Dict[int, int] = {}
        self.audit = Audit(local_states=model.size)

    def _prepare(self, f):
        self._memo = {}
        self._ids = {}
        distinct: Dict[pf.Prob, int] = {}

        def walk(g):
            if isinstance(g, pf.Prob):
                self._ids[id(g)] = distinct.setdefault(g, len(distinct))
            for c in pf.state_children(g):
                walk(c)

        walk(f)
        self.audit = Audit(prob_subformulas=len(distinct), horizon=pf.horizon(f),
                           local_states=self.model.size)

    def check(self, s0: str, f: pf.StateFormula, t: int = 0) -> CheckResult:
        if s0 not in self.model.index:
            raise FormulaError(f"unknown local state {s0!r}")
        self._prepare(f)
        s = self.model.index[s0]
        verdict = bool(self.sat(f, s, t))
        prob = float(self.probability(f, s, t)) if isinstance(f, pf.Prob) else None
        self.audit.memo_entries = len(self._memo)
        return CheckResult(verdict, prob, self.audit)

    def sat(self, f, s, t) -> bool:
        if isinstance(f, pf.PTrue):
            return True
        if isinstance(f, pf.PFalse):
            return False
        if isinstance(f, pf.LocalAtom):
            try:
                return self.model.index[f.state] == s
            except KeyError:
                raise FormulaError(f"undeclared local state {f.state!r}") from None
        if isinstance(f, pf.OccPredicate):
            try:
                return f.holds(self.traj.measure(t), self.model.index)
            except KeyError as e:
                raise FormulaError(f"undeclared local state {e.args[0]!r}") from None
        if isinstance(f, pf.PNot):
            return not self.sat(f.arg, s, t)
        if isinstance(f, pf.PAnd):
            return self.sat(f.left, s, t) and self.sat(f.right, s, t)
        if isinstance(f, pf.POr):
            return self.sat(f.left, s, t) or self.sat(f.right, s, t)
        if isinstance(f, pf.Prob):
            return f.holds(self.probability(f, s, t))
        raise TypeError(f"not a state formula: {f!r}")

    def _successors(self, s, t):
        row = self.traj.kernel(t)[s]
        succ = [(j, p) for j, p in enumerate(row) if p > 0.0]
        self.audit.nodes_expanded += 1
        if len(succ) > self.audit.max_successors:
            self.audit.max_successors = len(succ)
        return succ

    def probability(self, f: pf.Prob, s, t) -> float:
        if id(f) not in self._ids:
            # reached through prob_until() without check(): register on the fly
            self._ids[id(f)] = len(set(self._ids.values()))
        key = (self._ids[id(f)], s, t)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        path = f.path
        if isinstance(path, pf.Next):
            p = sum(q for j, q in self._successors(s, t) if self.sat(path.arg, j, t + 1))
        else:
            cache: Dict[Tuple[int, int], float] = {}
            p = self.prob_until(s, t, path.steps, path.left, path.right, cache)
            self.audit.transient_peak = max(self.audit.transient_peak, len(cache))
        self._memo[key] = p
        return p

    def prob_until(self, s, t, k, hold, goal, cache=None) -> float:
        """Probability that ``goal`` is reached within ``k`` steps from ``(s, t)``
        along ``hold`` states."""
        if cache is None:
            cache = {}
        key = (s, t, k)
        hit = cache.get(key)
        if hit is not None:
            return hit
        if self.sat(goal, s, t):
            p = 1.0
        elif k == 0 or not self.sat(hold, s, t):
            p = 0.0
        else:
            p = 0.0
            for j, q in self._successors(s, t):
                p += q * self.prob_until(j, t + 1, k - 1, hold, goal, cache)
        cache[key] = p
        return p


def pctl_check(model: PopulationModel, s0: str, f: pf.StateFormula, trajectory: Trajectory = None) -> bool:
    return OnTheFlyChecker(model, trajectory).check(s0, f).verdict


def check(model: PopulationModel, s0: str, f: pf.StateFormula, trajectory: Trajectory = None) -> CheckResult:
    """Verdict, top-level probability (for a ``P`` formula) and audit counters."""
    return OnTheFlyChecker(model, trajectory).check(s0, f)


def expansion_audit(result: CheckResult) -> Audit:
    return result.audit


def prob_until(model: PopulationModel, s: str, t: int, k: int, hold, goal, trajectory: Trajectory = None) -> float:
    """Probability of ``hold U<=k goal`` for the tagged object at ``(s, t)``."""
    if s not in model.index:
        raise FormulaError(f"unknown local state {s!r}")
    return OnTheFlyChecker(model, trajectory).prob_until(model.index[s], t, k, hold, goal)
