"""Fast simulation: tagged objects sampled against the mean-field environment."""
from __future__ import annotations

import numpy as np

from ..errors import ModelError
from .model import PopulationModel, Trajectory

RNG_ALGORITHM = "numpy.random.Generator(PCG64)"


def _draw(rng, cum):
    u = rng.random(cum.shape[0])
    return np.minimum((u[:, None] >= cum).sum(axis=1), cum.shape[1] - 1)


def fast_simulate(model: PopulationModel, tagged_count: int, horizon: int, seed: int,
                  start=None, trajectory: Trajectory = None):
    """Sample ``tagged_count`` independent traces of length ``horizon + 1``.

    Each object follows the time-inhomogeneous chain with step-``t`` matrix
    ``K(m(t))``. ``start`` is a state name, a list of names (one per object) or
    ``None`` to draw initial states from ``m(0)``.
    """
    if tagged_count < 1:
        raise ValueError("tagged_count must be at least 1")
    traj = trajectory or Trajectory(model)
    rng = np.random.default_rng(seed)
    if start is None:
        cur = _draw(rng, np.tile(np.cumsum(model.initial), (tagged_count, 1)))
    else:
        names = [start] * tagged_count if isinstance(start, str) else list(start)
        if len(names) != tagged_count:
            raise ValueError("need one start state per tagged object")
        try:
            cur = np.array([model.index[s] for s in names], dtype=np.intp)
        except KeyError as e:
            raise ModelError(f"unknown start state {e.args[0]!r}") from None
    path = [cur]
    for t in range(horizon):
        cum = np.cumsum(traj.kernel(t), axis=1)
        cur = _draw(rng, cum[cur])
        path.append(cur)
    states = model.states
    arr = np.stack(path, axis=1)
    return [[states[i] for i in row] for row in arr]
