# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for small-prime linear algebra and incidence counting.

Every function here has a twin with the same signature in ``_fallback.py``.
Inputs are assumed already reduced modulo ``p``.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint8_t, int32_t, int64_t, uint64_t
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline void _inverse_table(int p, int* inv) noexcept nogil:
    cdef int x, y
    inv[0] = 0
    for x in range(1, p):
        for y in range(1, p):
            if (x * y) % p == 1:
                inv[x] = y
                break


cdef int _rref_inplace(uint8_t[:, ::1] m, int p, const int* inv, int* piv) noexcept nogil:
    cdef Py_ssize_t rows = m.shape[0], cols = m.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, k
    cdef int f, s
    cdef uint8_t t
    for c in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if m[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(cols):
                t = m[r, j]
                m[r, j] = m[k, j]
                m[k, j] = t
        s = inv[m[r, c]]
        if s != 1:
            for j in range(c, cols):
                m[r, j] = <uint8_t>((m[r, j] * s) % p)
        for i in range(rows):
            if i != r and m[i, c] != 0:
                f = p - m[i, c]
                for j in range(c, cols):
                    m[i, j] = <uint8_t>((m[i, j] + f * m[r, j]) % p)
        piv[r] = <int>c
        r += 1
    return <int>r


def rref(a, int p):
    """Reduced row echelon form of ``a``; returns (nonzero rows, pivots)."""
    cdef uint8_t[:, ::1] m = np.array(a, dtype=np.uint8, order="C", copy=True)
    cdef int inv[256]
    cdef int piv[256]
    cdef int r, i
    if m.shape[0] > 256:
        raise ValueError("too many rows for the compiled kernel")
    _inverse_table(p, inv)
    with nogil:
        r = _rref_inplace(m, p, inv, piv)
    out = np.asarray(m)[:r].copy()
    return out, tuple(piv[i] for i in range(r))


def rank(a, int p):
    cdef uint8_t[:, ::1] m = np.array(a, dtype=np.uint8, order="C", copy=True)
    cdef int inv[256]
    cdef int piv[256]
    cdef int r
    if m.shape[0] > 256:
        raise ValueError("too many rows for the compiled kernel")
    _inverse_table(p, inv)
    with nogil:
        r = _rref_inplace(m, p, inv, piv)
    return r


def rref_batch(a, int p):
    """Row-reduce a stack of matrices (N, k, n) independently.

    Returns the reduced stack (zero rows at the bottom) and the ranks.
    """
    cdef cnp.ndarray arr = np.array(a, dtype=np.uint8, order="C", copy=True)
    if arr.ndim != 3:
        raise ValueError("expected a (N, k, n) stack")
    cdef uint8_t[:, :, ::1] m = arr
    cdef Py_ssize_t N = m.shape[0], b
    cdef int64_t[::1] ranks = np.zeros(N, dtype=np.int64)
    cdef int inv[256]
    cdef int piv[256]
    if m.shape[1] > 256:
        raise ValueError("too many rows for the compiled kernel")
    _inverse_table(p, inv)
    with nogil:
        for b in range(N):
            ranks[b] = _rref_inplace(m[b], p, inv, piv)
    return arr, np.asarray(ranks)


def pairs_opposite(bases, grams, int p):
    """For each gram, whether every pair (i <= j) of lines has an invertible pairing.

    ``bases`` is (L, 2, n), ``grams`` is (G, n, n). Exits early per gram.
    """
    cdef const uint8_t[:, :, ::1] B = np.ascontiguousarray(bases, dtype=np.uint8)
    cdef const uint8_t[:, :, ::1] M = np.ascontiguousarray(grams, dtype=np.uint8)
    cdef Py_ssize_t L = B.shape[0], n = B.shape[2], G = M.shape[0]
    cdef Py_ssize_t g, i, j, r, c, k
    cdef uint8_t[::1] ok = np.ones(G, dtype=np.uint8)
    cdef int64_t* T = <int64_t*> malloc(L * 2 * n * sizeof(int64_t))
    cdef int64_t acc, P00, P01, P10, P11
    if T == NULL:
        raise MemoryError()
    try:
        with nogil:
            for g in range(G):
                # T[i, r, :] = B[i, r, :] @ M[g]
                for i in range(L):
                    for r in range(2):
                        for c in range(n):
                            acc = 0
                            for k in range(n):
                                acc += B[i, r, k] * M[g, k, c]
                            T[(i * 2 + r) * n + c] = acc % p
                for i in range(L):
                    for j in range(i, L):
                        P00 = 0; P01 = 0; P10 = 0; P11 = 0
                        for k in range(n):
                            P00 += T[(i * 2) * n + k] * B[j, 0, k]
                            P01 += T[(i * 2) * n + k] * B[j, 1, k]
                            P10 += T[(i * 2 + 1) * n + k] * B[j, 0, k]
                            P11 += T[(i * 2 + 1) * n + k] * B[j, 1, k]
                        if ((P00 % p) * (P11 % p) - (P01 % p) * (P10 % p)) % p == 0:
                            ok[g] = 0
                            break
                    if ok[g] == 0:
                        break
    finally:
        free(T)
    return np.asarray(ok).astype(bool)


def antiflag_counts(adj, lines):
    """counts[P, L] = number of points of line L adjacent to P; -1 where P is on L."""
    cdef const uint8_t[:, ::1] A = np.ascontiguousarray(adj, dtype=np.uint8)
    cdef const int32_t[:, ::1] Ls = np.ascontiguousarray(lines, dtype=np.int32)
    cdef Py_ssize_t P = A.shape[0], nl = Ls.shape[0], m = Ls.shape[1]
    cdef int32_t[:, ::1] out = np.zeros((P, nl), dtype=np.int32)
    cdef Py_ssize_t x, l, j
    cdef int32_t cnt, q
    cdef bint on
    with nogil:
        for x in range(P):
            for l in range(nl):
                cnt = 0
                on = False
                for j in range(m):
                    q = Ls[l, j]
                    if q == x:
                        on = True
                        break
                    cnt += A[x, q]
                out[x, l] = -1 if on else cnt
    return np.asarray(out)


def common_neighbours(adj):
    """Matrix of common-neighbour counts of a 0/1 adjacency matrix, via bitsets."""
    cdef const uint8_t[:, ::1] A = np.ascontiguousarray(adj, dtype=np.uint8)
    cdef Py_ssize_t n = A.shape[0], words = (n + 63) // 64
    cdef uint64_t[:, ::1] bits = np.zeros((n, words), dtype=np.uint64)
    cdef int32_t[:, ::1] out = np.zeros((n, n), dtype=np.int32)
    cdef Py_ssize_t i, j, w
    cdef int32_t c
    with nogil:
        for i in range(n):
            for j in range(n):
                if A[i, j]:
                    bits[i, j >> 6] |= (<uint64_t>1) << (j & 63)
        for i in range(n):
            for j in range(i, n):
                c = 0
                for w in range(words):
                    c += __builtin_popcountll(bits[i, w] & bits[j, w])
                out[i, j] = c
                out[j, i] = c
    return np.asarray(out)
