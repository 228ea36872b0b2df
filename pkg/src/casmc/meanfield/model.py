"""Clock-synchronous population models and their mean-field iteration."""
from __future__ import annotations

from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..errors import KernelValidityError, ModelError
from .expr import Const, Expr, parse_expr

TOL = 1e-9


def validate_measure(m, tol=TOL):
    m = np.asarray(m, dtype=float)
    if m.ndim != 1 or np.any(m < -tol) or abs(m.sum() - 1.0) > tol:
        raise ModelError(f"not an occupancy measure: {m.tolist()}")
    return m


class PopulationModel:
    """Local states plus a kernel ``K[s][s'](m)`` given by off-diagonal rules.

    ``rules`` maps ``(source, target)`` state names to an expression (text,
    number or ``Expr``). The diagonal is implicit: mass not moved stays put.
    """

    def __init__(self, states: Sequence[str], rules: Mapping[Tuple[str, str], object],
                 initial: Mapping[str, float], population: Optional[int] = None):
        self.states = tuple(states)
        if len(set(self.states)) != len(self.states) or not self.states:
            raise ModelError("local states must be distinct and non-empty")
        self.index = {s: i for i, s in enumerate(self.states)}
        self.rules: Dict[Tuple[int, int], Expr] = {}
        for (a, b), e in rules.items():
            if a not in self.index or b not in self.index:
                raise ModelError(f"rule {a} -> {b} references an undeclared state")
            if a == b:
                raise ModelError(f"rule {a} -> {a}: self-loops are implicit")
            if isinstance(e, str):
                e = parse_expr(e, self.index)
            elif not isinstance(e, Expr):
                e = Const(e)
            key = (self.index[a], self.index[b])
            if key in self.rules:
                raise ModelError(f"duplicate rule {a} -> {b}")
            self.rules[key] = e
        m0 = np.zeros(len(self.states))
        for s, v in initial.items():
            if s not in self.index:
                raise ModelError(f"initial measure names undeclared state {s!r}")
            m0[self.index[s]] = float(v)
        self.initial = validate_measure(m0)
        self.initial.flags.writeable = False
        if population is not None and population < 1:
            raise ModelError("population size must be positive")
        self.population = population

    @property
    def size(self):
        return len(self.states)

    def raw_kernel(self, m):
        S = self.size
        K = np.zeros((S, S))
        for (i, j), e in self.rules.items():
            K[i, j] = e(m)
        K[np.arange(S), np.arange(S)] = 1.0 - K.sum(axis=1)
        return K

    def kernel(self, m, time=None, tol=TOL):
        """Validated, row-renormalized transition matrix at occupancy ``m``."""
        K = self.raw_kernel(m)
        bad = np.argwhere((K < -tol) | (K > 1.0 + tol) | ~np.isfinite(K))
        if bad.size:
            i, j = bad[0]
            raise KernelValidityError(self.states[i], self.states[j], float(K[i, j]), time)
        rows = K.sum(axis=1)
        off = np.flatnonzero(np.abs(rows - 1.0) > tol)
        if off.size:
            i = off[0]
            raise KernelValidityError(self.states[i], "*", float(rows[i]), time)
        np.clip(K, 0.0, 1.0, out=K)
        K /= K.sum(axis=1, keepdims=True)
        return K

    def measure(self, fractions: Mapping[str, float]):
        m = np.zeros(self.size)
        for s, v in fractions.items():
            m[self.index[s]] = v
        return validate_measure(m)


def mf_step(model: PopulationModel, m, time=None):
    """One step of the mean-field difference equation ``m' = m K(m)``."""
    m = validate_measure(m)
    nxt = m @ model.kernel(m, time)
    if np.any(nxt < -TOL) or abs(nxt.sum() - 1.0) > TOL:
        raise ModelError(f"mean-field step left the simplex: {nxt.tolist()}")
    np.clip(nxt, 0.0, None, out=nxt)
    return nxt / nxt.sum()


class Trajectory:
    """Mean-field trajectory extended on demand; caches measures and kernels.

    Shared read-mostly by checkers and simulators for one model.
    """

    def __init__(self, model: PopulationModel):
        self.model = model
        self._measures: List[np.ndarray] = [model.initial]
        self._kernels: List[np.ndarray] = []

    def _extend(self, t):
        while len(self._measures) <= t:
            k = len(self._measures) - 1
            m = self._measures[k]
            K = self.kernel(k)
            nxt = m @ K
            if np.any(nxt < -TOL) or abs(nxt.sum() - 1.0) > TOL:
                raise ModelError(f"mean-field step {k} left the simplex: {nxt.tolist()}")
            np.clip(nxt, 0.0, None, out=nxt)
            self._measures.append(nxt / nxt.sum())

    def measure(self, t):
        self._extend(t)
        return self._measures[t]

    def kernel(self, t):
        while len(self._kernels) <= t:
            k = len(self._kernels)
            self._kernels.append(self.model.kernel(self.measure(k), time=k))
        return self._kernels[t]

    def measures(self, horizon):
        self._extend(horizon)
        return np.array(self._measures[:horizon + 1])


def mf_trajectory(model: PopulationModel, horizon: int):
    """``[m(0), ..., m(horizon)]`` as a ``(horizon + 1, S)`` array."""
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    return Trajectory(model).measures(horizon)
