# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled versions of the kernels in ``_kernels_py``; same signatures and results."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.npy_intp intp


def closure_step(const intp[::1] indptr, const intp[::1] indices, const unsigned char[::1] mask):
    cdef Py_ssize_t n = mask.shape[0], a, j
    out_arr = np.array(mask, dtype=np.uint8, copy=True)
    cdef unsigned char[::1] out = out_arr
    for a in range(n):
        if mask[a]:
            for j in range(indptr[a], indptr[a + 1]):
                out[indices[j]] = 1
    return out_arr


cdef void _flood(const intp[::1] indptr, const intp[::1] indices,
                 unsigned char[::1] out, const unsigned char[::1] allowed,
                 intp[::1] queue) noexcept nogil:
    cdef Py_ssize_t n = out.shape[0], head = 0, tail = 0, y, x, j
    for y in range(n):
        if out[y]:
            queue[tail] = y
            tail += 1
    while head < tail:
        y = queue[head]
        head += 1
        for j in range(indptr[y], indptr[y + 1]):
            x = indices[j]
            if allowed[x] and not out[x]:
                out[x] = 1
                queue[tail] = x
                tail += 1


def flood(const intp[::1] indptr, const intp[::1] indices,
          const unsigned char[::1] seeds, const unsigned char[::1] allowed):
    out_arr = np.array(seeds, dtype=np.uint8, copy=True)
    queue = np.empty(seeds.shape[0], dtype=np.intp)
    _flood(indptr, indices, out_arr, allowed, queue)
    return out_arr


def surrounded(const intp[::1] pred_indptr, const intp[::1] pred_indices,
               const unsigned char[::1] phi, const unsigned char[::1] psi):
    cdef Py_ssize_t n = phi.shape[0], y, j
    escape_arr = np.empty(n, dtype=np.uint8)
    allowed_arr = np.empty(n, dtype=np.uint8)
    cdef unsigned char[::1] escape = escape_arr
    cdef unsigned char[::1] allowed = allowed_arr
    for y in range(n):
        escape[y] = (not phi[y]) and (not psi[y])
        allowed[y] = phi[y] and not psi[y]
    queue = np.empty(n, dtype=np.intp)
    _flood(pred_indptr, pred_indices, escape, allowed, queue)
    result_arr = np.array(phi, dtype=np.uint8, copy=True)
    cdef unsigned char[::1] result = result_arr
    for y in range(n):
        if escape[y]:
            result[y] = 0
            for j in range(pred_indptr[y], pred_indptr[y + 1]):
                result[pred_indices[j]] = 0
    return result_arr
