# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: character sums, torsion scans, subgroup closure."""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, calloc, free

cnp.import_array()


cdef unsigned char* _square_table(long p) except NULL:
    cdef unsigned char* sq = <unsigned char*> calloc(p, 1)
    cdef long y
    if sq == NULL:
        raise MemoryError()
    for y in range(1, (p + 1) // 2):
        sq[(y * y) % p] = 1
    return sq


def legendre_sum(A, B, long p):
    cdef long a = A % p
    cdef long b = B % p
    cdef long x, v
    cdef long total = 0
    cdef unsigned char* sq = _square_table(p)
    try:
        for x in range(p):
            v = ((x * x % p) * x + a * x + b) % p
            if v:
                total += 1 if sq[v] else -1
    finally:
        free(sq)
    return total


def torsion_counts(A, B, long p):
    cdef long a = A % p
    cdef long b = B % p
    cdef long x, x2, f, psi
    cdef long r2 = 0, r3 = 0
    cdef long aa = (a * a) % p
    cdef unsigned char* sq = _square_table(p)
    try:
        for x in range(p):
            x2 = x * x % p
            f = (x2 * x + a * x + b) % p
            if f == 0:
                r2 += 1
            elif sq[f]:
                psi = (3 * (x2 * x2 % p) + 6 * a % p * x2 + 12 * b % p * x - aa) % p
                if psi < 0:
                    psi += p
                if psi == 0:
                    r3 += 1
    finally:
        free(sq)
    return r2, r3


def closure(cnp.int32_t[:, ::1] table, cnp.int32_t[:, ::1] elem_factors,
            cnp.int32_t[::1] pos, gens, long id_index):
    cdef Py_ssize_t n = elem_factors.shape[0]
    cdef Py_ssize_t nf = elem_factors.shape[1]
    cdef long m = table.shape[0]
    cdef Py_ssize_t ng = len(gens)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] out = np.empty(n, dtype=np.int32)
    cdef cnp.int32_t[::1] ov = out
    cdef unsigned char* seen = <unsigned char*> calloc(n, 1)
    cdef long* g = <long*> malloc((ng + 1) * sizeof(long))
    cdef Py_ssize_t head = 0, count = 1, k, f
    cdef long x, y, flat
    if seen == NULL or g == NULL:
        free(seen)
        free(g)
        raise MemoryError()
    try:
        for k in range(ng):
            g[k] = gens[k]
        ov[0] = id_index
        seen[id_index] = 1
        while head < count:
            x = ov[head]
            head += 1
            for k in range(ng):
                flat = 0
                for f in range(nf):
                    flat = flat * m + table[elem_factors[x, f], elem_factors[g[k], f]]
                y = pos[flat]
                if not seen[y]:
                    seen[y] = 1
                    ov[count] = y
                    count += 1
    finally:
        free(seen)
        free(g)
    res = out[:count].copy()
    res.sort()
    return res
