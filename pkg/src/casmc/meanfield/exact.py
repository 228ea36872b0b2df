"""Exact global DTMC over occupancy count vectors for a finite population.

Used to watch ``E[m_N(t)]`` approach the mean-field trajectory as ``N`` grows.
Count vectors are encoded in mixed radix ``N + 1`` so that adding per-state
outcome vectors is integer addition of codes.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb

import numpy as np
from scipy.special import gammaln

from ..errors import ModelError, OracleInfeasibleError
from .model import PopulationModel

EXACT_CAP = 200_000


@lru_cache(maxsize=None)
def compositions(n, d):
    """All length-``d`` non-negative integer vectors summing to ``n``, as rows."""
    if d == 1:
        return np.array([[n]], dtype=np.int64)
    parts = [np.hstack([np.full((len(rest), 1), k, dtype=np.int64), rest])
             for k in range(n, -1, -1) for rest in (compositions(n - k, d - 1),)]
    out = np.vstack(parts)
    out.flags.writeable = False
    return out


class CountChain:
    def __init__(self, model: PopulationModel, N: int, cap=EXACT_CAP):
        S = model.size
        size = comb(N + S - 1, S - 1)
        if size > cap:
            raise OracleInfeasibleError(f"{size} count vectors for N={N}, S={S}; cap is {cap}")
        self.model = model
        self.N = N
        self.vectors = compositions(N, S)
        self.radix = (N + 1) ** np.arange(S, dtype=np.int64)
        codes = self.vectors @ self.radix
        self.order = np.argsort(codes)
        self.sorted_codes = codes[self.order]
        self._rows = {}

    def index_of(self, codes):
        pos = np.searchsorted(self.sorted_codes, codes)
        return self.order[pos]

    def row(self, i):
        """Successor indices and probabilities of count vector ``i``."""
        hit = self._rows.get(i)
        if hit is not None:
            return hit
        c = self.vectors[i]
        K = self.model.kernel(c / self.N)
        codes = np.zeros(1, dtype=np.int64)
        probs = np.ones(1)
        for s in np.flatnonzero(c):
            n = int(c[s])
            targets = np.flatnonzero(K[s] > 0.0)
            outcomes = compositions(n, len(targets))
            logp = (gammaln(n + 1) - gammaln(outcomes + 1).sum(axis=1)
                    + (outcomes * np.log(K[s, targets])).sum(axis=1))
            dcodes = outcomes @ self.radix[targets]
            codes = (codes[:, None] + dcodes[None, :]).ravel()
            probs = (probs[:, None] * np.exp(logp)[None, :]).ravel()
            codes, inv = np.unique(codes, return_inverse=True)
            probs = np.bincount(inv.ravel(), weights=probs)
        hit = (self.index_of(codes), probs)
        self._rows[i] = hit
        return hit

    def start(self):
        counts = self.model.initial * self.N
        rounded = np.rint(counts)
        if np.max(np.abs(counts - rounded)) > 1e-6:
            raise ModelError(f"initial measure is not a multiple of 1/{self.N}")
        p = np.zeros(len(self.vectors))
        p[self.index_of(np.array([rounded.astype(np.int64) @ self.radix]))[0]] = 1.0
        return p

    def step(self, p):
        out = np.zeros_like(p)
        for i in np.flatnonzero(p):
            cols, probs = self.row(int(i))
            out[cols] += p[i] * probs
        return out

    def expected_occupancy(self, p):
        return (p @ self.vectors) / self.N


def exact_count_dtmc(model: PopulationModel, N: int, horizon: int, cap=EXACT_CAP):
    """``E[m_N(t)]`` for ``t = 0..horizon`` as a ``(horizon + 1, S)`` array.

    Each object moves with ``K(m)`` where ``m`` is the current empirical
    occupancy; all objects move simultaneously.
    """
    if N < 1:
        raise ValueError("population must be positive")
    chain = CountChain(model, N, cap)
    p = chain.start()
    out = [chain.expected_occupancy(p)]
    for _ in range(horizon):
        p = chain.step(p)
        out.append(chain.expected_occupancy(p))
    return np.array(out)
