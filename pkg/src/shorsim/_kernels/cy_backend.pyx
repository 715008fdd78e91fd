# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled gate application kernel.

Same index conventions as the numpy fallback: flat complex state of length
2**n, qubit 0 most significant; the gate matrix index is MSB-first over the
``targets`` order.  Applies the gate in place, enumerating the untouched-bit
subspace with the subset-of-mask increment (base = (base - mask) & mask) and
unrolling the dominant one- and two-qubit cases.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


def apply_gate(cnp.ndarray[cnp.complex128_t, ndim=1] state, int n, object u, object targets):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] umat = np.ascontiguousarray(u, dtype=np.complex128)
    cdef int k = len(targets)
    cdef int dim = 1 << k
    cdef unsigned long long rest_count = 1ULL << (n - k)

    cdef unsigned long long target_mask = 0
    cdef unsigned long long[::1] stride = np.empty(k, dtype=np.uint64)
    cdef int i, q
    for i in range(k):
        q = targets[i]
        stride[i] = 1ULL << (n - 1 - q)   # bit weight of targets[i]
        target_mask |= stride[i]
    cdef unsigned long long rest_mask = ((1ULL << n) - 1ULL) ^ target_mask

    # offsets[g]: index contribution of gate-basis state g on the target bits
    # (gate bit k-1-i belongs to targets[i], MSB-first)
    cdef unsigned long long[::1] offsets = np.zeros(dim, dtype=np.uint64)
    cdef int g, h
    for g in range(dim):
        for i in range(k):
            if (g >> (k - 1 - i)) & 1:
                offsets[g] += stride[i]

    cdef complex[::1] psi = state
    cdef unsigned long long base = 0, r
    cdef unsigned long long o1, o2, o3
    cdef complex a0, a1, a2, a3
    cdef complex u00, u01, u10, u11

    if dim == 2:
        o1 = offsets[1]
        u00 = umat[0, 0]; u01 = umat[0, 1]
        u10 = umat[1, 0]; u11 = umat[1, 1]
        for r in range(rest_count):
            a0 = psi[base]
            a1 = psi[base + o1]
            psi[base] = u00 * a0 + u01 * a1
            psi[base + o1] = u10 * a0 + u11 * a1
            base = (base - rest_mask) & rest_mask
        return state

    if dim == 4:
        o1 = offsets[1]; o2 = offsets[2]; o3 = offsets[3]
        for r in range(rest_count):
            a0 = psi[base]
            a1 = psi[base + o1]
            a2 = psi[base + o2]
            a3 = psi[base + o3]
            psi[base] = umat[0, 0] * a0 + umat[0, 1] * a1 + umat[0, 2] * a2 + umat[0, 3] * a3
            psi[base + o1] = umat[1, 0] * a0 + umat[1, 1] * a1 + umat[1, 2] * a2 + umat[1, 3] * a3
            psi[base + o2] = umat[2, 0] * a0 + umat[2, 1] * a1 + umat[2, 2] * a2 + umat[2, 3] * a3
            psi[base + o3] = umat[3, 0] * a0 + umat[3, 1] * a1 + umat[3, 2] * a2 + umat[3, 3] * a3
            base = (base - rest_mask) & rest_mask
        return state

    cdef cnp.ndarray[cnp.complex128_t, ndim=1] scratch = np.empty(dim, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(dim, dtype=np.complex128)
    cdef complex acc
    for r in range(rest_count):
        for g in range(dim):
            scratch[g] = psi[base + offsets[g]]
        for g in range(dim):
            acc = 0
            for h in range(dim):
                acc = acc + umat[g, h] * scratch[h]
            out[g] = acc
        for g in range(dim):
            psi[base + offsets[g]] = out[g]
        base = (base - rest_mask) & rest_mask
    return state
