import itertools
import random

import numpy as np
import pytest

from casmc.errors import ModelError, OracleInfeasibleError
from casmc.meanfield import PopulationModel, exact_count_dtmc, mf_trajectory
from casmc.meanfield.exact import compositions


def agent_level(model, N, horizon):
    """E[m_N(t)] from the joint chain over individual states (S**N configurations)."""
    S = model.size
    counts = np.rint(model.initial * N).astype(int)
    start = tuple(s for s in range(S) for _ in range(counts[s]))
    dist = {start: 1.0}
    out = []
    for t in range(horizon + 1):
        occ = np.zeros(S)
        for cfg, p in dist.items():
            occ += p * np.bincount(cfg, minlength=S) / N
        out.append(occ)
        if t == horizon:
            break
        nxt = {}
        for cfg, p in dist.items():
            K = model.kernel(np.bincount(cfg, minlength=S) / N)
            for moves in itertools.product(range(S), repeat=N):
                q = p
                for a, b in zip(cfg, moves):
                    q *= K[a, b]
                if q:
                    key = tuple(sorted(moves))
                    nxt[key] = nxt.get(key, 0.0) + q
        dist = nxt
    return np.array(out)


def test_compositions():
    c = compositions(3, 3)
    assert len(c) == 10 and np.all(c.sum(axis=1) == 3)
    assert len({tuple(r) for r in c}) == 10


def test_single_object_two_state_by_hand():
    m = PopulationModel(["a", "b"], {("a", "b"): 0.3}, {"a": 1.0})
    out = exact_count_dtmc(m, 1, 2)
    assert np.allclose(out, [[1, 0], [0.7, 0.3], [0.49, 0.51]], atol=1e-15)


def test_identity_kernel_is_constant():
    m = PopulationModel(["a", "b", "c"], {}, {"a": 0.25, "b": 0.25, "c": 0.5})
    out = exact_count_dtmc(m, 8, 5)
    assert np.allclose(out, np.tile(m.initial, (6, 1)), atol=1e-15)


@pytest.mark.parametrize("N", [1, 2, 5, 10])
def test_constant_kernel_matches_mean_field(N):
    m = PopulationModel(["a", "b", "c"], {("a", "b"): 0.3, ("b", "c"): 0.2, ("c", "a"): 0.1, ("a", "c"): 0.05},
                        {"a": 1.0})
    assert np.max(np.abs(exact_count_dtmc(m, N, 10) - mf_trajectory(m, 10))) <= 1e-12


@pytest.mark.parametrize("N", [2, 3, 4])
def test_density_dependent_matches_agent_level(N):
    rng = random.Random(N)
    m = PopulationModel(["S", "I", "R"],
                        {("S", "I"): "0.05 + 0.5 * m[I]", ("I", "R"): 0.3, ("R", "S"): rng.random() * 0.2},
                        {"S": (N - 1) / N, "I": 1 / N})
    assert np.max(np.abs(exact_count_dtmc(m, N, 4) - agent_level(m, N, 4))) <= 1e-12


def test_nonlinear_differs_from_mean_field_at_small_N():
    m = PopulationModel(["S", "I"], {("S", "I"): "0.8 * m[I]", ("I", "S"): 0.1}, {"S": 0.5, "I": 0.5})
    assert np.max(np.abs(exact_count_dtmc(m, 2, 6) - mf_trajectory(m, 6))) > 1e-3


def test_cap_and_integrality():
    m = PopulationModel(["a", "b", "c", "d"], {}, {"a": 1.0})
    with pytest.raises(OracleInfeasibleError):
        exact_count_dtmc(m, 200, 1, cap=1000)
    m2 = PopulationModel(["a", "b"], {}, {"a": 0.5, "b": 0.5})
    with pytest.raises(ModelError):
        exact_count_dtmc(m2, 3, 1)
