"""Pure numpy implementations of the graph kernels.

All masks are 1-d ``uint8`` arrays, adjacency is CSR (``indptr``, ``indices``)
with ``np.intp`` entries. Every function returns a fresh array.
"""
import numpy as np


def _neighbours(indptr, indices, mask):
    rows = np.flatnonzero(mask)
    if rows.size == 0:
        return indices[:0]
    starts = indptr[rows]
    counts = indptr[rows + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return indices[:0]
    # gather indices[starts[i]:starts[i]+counts[i]] for every selected row
    offs = np.repeat(starts - np.concatenate(([0], np.cumsum(counts)[:-1])), counts)
    return indices[offs + np.arange(total)]


def closure_step(indptr, indices, mask):
    out = mask.copy()
    out[_neighbours(indptr, indices, mask)] = 1
    return out


def flood(indptr, indices, seeds, allowed):
    out = seeds.copy()
    frontier = seeds.astype(bool)
    while frontier.any():
        nb = _neighbours(indptr, indices, frontier)
        nb = nb[(allowed[nb] != 0) & (out[nb] == 0)]
        frontier = np.zeros(out.shape, dtype=bool)
        frontier[nb] = True
        out[nb] = 1
    return out


def surrounded(pred_indptr, pred_indices, phi, psi):
    bad = ((phi == 0) & (psi == 0)).astype(np.uint8)
    escape = flood(pred_indptr, pred_indices, bad, ((phi != 0) & (psi == 0)).astype(np.uint8))
    touched = closure_step(pred_indptr, pred_indices, escape)
    return ((phi != 0) & (touched == 0)).astype(np.uint8)
