# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled enumeration kernel.

Semantics must match ``_kernel_py.contract`` exactly: same triple
convention, same bit order, same canonical zero. Loop counters and table
indexing are C-level; the rational arithmetic itself stays on Python ints
so results are arbitrary precision.
"""

from libc.stdlib cimport free, malloc

from math import gcd

BACKEND_NAME = "cython"

DEF MAX_BITS = 62


def contract(int n_out, int n_sum, atoms):
    cdef int n = n_out + n_sum
    cdef Py_ssize_t n_atoms, total_slots, ai, pos, slot, j3
    cdef int* arity = NULL
    cdef int* shifts = NULL
    cdef list tables, table_i
    cdef unsigned long long lim_out, lim_sum, ext, s, a, base
    cdef int k, idx, v
    cdef bint dead
    cdef object sp, sq, sr, tp, tq, tr, p, q, g
    cdef list out

    if n > MAX_BITS:
        raise ValueError(f"assignment space of {n} variables exceeds kernel limit")

    n_atoms = len(atoms)
    total_slots = 0
    for ai in range(n_atoms):
        total_slots += len(atoms[ai][0])

    arity = <int*> malloc((n_atoms if n_atoms else 1) * sizeof(int))
    shifts = <int*> malloc((total_slots if total_slots else 1) * sizeof(int))
    if arity == NULL or shifts == NULL:
        if arity != NULL:
            free(arity)
        if shifts != NULL:
            free(shifts)
        raise MemoryError()

    tables = []
    pos = 0
    try:
        for ai in range(n_atoms):
            vars_, table = atoms[ai]
            arity[ai] = len(vars_)
            for v in vars_:
                if v < 0 or v >= n:
                    raise ValueError("atom variable index out of range")
                shifts[pos] = n - 1 - v
                pos += 1
            tables.append(list(table))

        out = []
        lim_out = (<unsigned long long> 1) << n_out
        lim_sum = (<unsigned long long> 1) << n_sum
        ext = 0
        while ext < lim_out:
            base = ext << n_sum
            sp = 0
            sq = 0
            sr = 1
            s = 0
            while s < lim_sum:
                a = base | s
                tp = 1
                tq = 0
                tr = 1
                dead = 0
                slot = 0
                for ai in range(n_atoms):
                    if dead:
                        slot += arity[ai]
                        continue
                    idx = 0
                    for k in range(arity[ai]):
                        idx = (idx << 1) | <int> ((a >> shifts[slot]) & 1)
                        slot += 1
                    table_i = <list> tables[ai]
                    j3 = 3 * idx
                    p = table_i[j3]
                    q = table_i[j3 + 1]
                    if p == 0 and q == 0:
                        dead = 1
                        continue
                    tp, tq = tp * p - tq * q, tp * q + tq * p
                    tr = tr * table_i[j3 + 2]
                if not dead and (tp != 0 or tq != 0):
                    sp, sq, sr = sp * tr + tp * sr, sq * tr + tq * sr, sr * tr
                    g = gcd(sp, sq, sr)
                    if g > 1:
                        sp //= g
                        sq //= g
                        sr //= g
                s += 1
            if sp == 0 and sq == 0:
                out.append((0, 0, 1))
            else:
                out.append((sp, sq, sr))
            ext += 1
        return out
    finally:
        free(arity)
        free(shifts)
