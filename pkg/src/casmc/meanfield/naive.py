"""Reference checker on the explicit time-expanded tagged chain.

Every state subformula is labelled over the whole grid of ``(t, s)`` nodes,
and path probabilities come from backward matrix-vector recursion. Slow but
obviously correct; used to cross-check the on-the-fly checker.
"""
from __future__ import annotations

import numpy as np

from ..errors import FormulaError, OracleInfeasibleError
from . import formula as pf
from .model import PopulationModel, mf_step

NAIVE_CAP = 1_000_000


class TimeExpandedChain:
    def __init__(self, model: PopulationModel, horizon: int, cap=NAIVE_CAP):
        if model.size * (horizon + 1) > cap:
            raise OracleInfeasibleError(
                f"time-expanded chain has {model.size * (horizon + 1)} nodes, cap is {cap}")
        self.model = model
        self.horizon = horizon
        ms = [np.array(model.initial)]
        for t in range(horizon):
            ms.append(mf_step(model, ms[-1], time=t))
        self.measures = np.array(ms)
        # kernels at t < horizon are the only ones any path formula can use
        self.kernels = [model.kernel(m, time=t) for t, m in enumerate(ms[:-1])]

    def label(self, f, T):
        """Boolean array ``(T + 1, S)``: does ``f`` hold at node ``(t, s)``."""
        S = self.model.size
        if isinstance(f, pf.PTrue):
            return np.ones((T + 1, S), dtype=bool)
        if isinstance(f, pf.PFalse):
            return np.zeros((T + 1, S), dtype=bool)
        if isinstance(f, pf.LocalAtom):
            if f.state not in self.model.index:
                raise FormulaError(f"undeclared local state {f.state!r}")
            out = np.zeros((T + 1, S), dtype=bool)
            out[:, self.model.index[f.state]] = True
            return out
        if isinstance(f, pf.OccPredicate):
            for st, _ in f.terms:
                if st not in self.model.index:
                    raise FormulaError(f"undeclared local state {st!r}")
            col = np.array([f.holds(self.measures[t], self.model.index) for t in range(T + 1)])
            return np.repeat(col[:, None], S, axis=1)
        if isinstance(f, pf.PNot):
            return ~self.label(f.arg, T)
        if isinstance(f, pf.PAnd):
            return self.label(f.left, T) & self.label(f.right, T)
        if isinstance(f, pf.POr):
            return self.label(f.left, T) | self.label(f.right, T)
        if isinstance(f, pf.Prob):
            return np.vectorize(f.holds)(self.probabilities(f, T))
        raise TypeError(f"not a state formula: {f!r}")

    def probabilities(self, f: pf.Prob, T):
        """Path probability of ``f.path`` at every node ``(t, s)``, ``t <= T``."""
        S = self.model.size
        out = np.zeros((T + 1, S))
        path = f.path
        if isinstance(path, pf.Next):
            target = self.label(path.arg, T + 1).astype(float)
            for t in range(T + 1):
                out[t] = self.kernels[t] @ target[t + 1]
            return out
        k = path.steps
        hold = self.label(path.left, T + k)
        goal = self.label(path.right, T + k)
        for t0 in range(T + 1):
            v = goal[t0 + k].astype(float)
            for t in range(t0 + k - 1, t0 - 1, -1):
                v = np.where(goal[t], 1.0, np.where(hold[t], self.kernels[t] @ v, 0.0))
            out[t0] = v
        return out


def naive_check(model: PopulationModel, s0: str, f: pf.StateFormula, cap=NAIVE_CAP):
    """``(verdict, probability)``; probability is ``None`` unless ``f`` is a ``P`` formula."""
    if s0 not in model.index:
        raise FormulaError(f"unknown local state {s0!r}")
    chain = TimeExpandedChain(model, pf.horizon(f), cap)
    s = model.index[s0]
    verdict = bool(chain.label(f, 0)[0, s])
    prob = float(chain.probabilities(f, 0)[0, s]) if isinstance(f, pf.Prob) else None
    return verdict, prob


def pctl_check_naive(model: PopulationModel, s0: str, f: pf.StateFormula, cap=NAIVE_CAP) -> bool:
    return naive_check(model, s0, f, cap)[0]
