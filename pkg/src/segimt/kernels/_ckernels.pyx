# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels: LCS backtrace and word-level Levenshtein distance.

Semantics (including backtrace tie-breaks) must match ``_pykernels``
exactly; the test suite cross-checks both backends on random inputs.
"""

from libc.stdlib cimport free, malloc


cdef int* _to_c_array(seq, Py_ssize_t n) except NULL:
    cdef int* out = <int*> malloc(n * sizeof(int) if n > 0 else sizeof(int))
    if out == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = seq[i]
    return out


def lcs_pairs(a, b):
    """Longest common subsequence of int sequences as (i, j) index pairs."""
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t m = len(b)
    cdef Py_ssize_t width = m + 1
    cdef int* ca = _to_c_array(a, n)
    cdef int* cb = NULL
    cdef int* table = NULL
    cdef Py_ssize_t i, j
    cdef int ai, up, left
    pairs = []
    try:
        cb = _to_c_array(b, m)
        table = <int*> malloc((n + 1) * width * sizeof(int))
        if table == NULL:
            raise MemoryError()
        for j in range(width):
            table[j] = 0
        for i in range(1, n + 1):
            table[i * width] = 0
            ai = ca[i - 1]
            for j in range(1, m + 1):
                if ai == cb[j - 1]:
                    table[i * width + j] = table[(i - 1) * width + j - 1] + 1
                else:
                    up = table[(i - 1) * width + j]
                    left = table[i * width + j - 1]
                    table[i * width + j] = up if up >= left else left
        i = n
        j = m
        while i > 0 and j > 0:
            if ca[i - 1] == cb[j - 1] and table[i * width + j] == table[(i - 1) * width + j - 1] + 1:
                pairs.append((i - 1, j - 1))
                i -= 1
                j -= 1
            elif table[(i - 1) * width + j] >= table[i * width + j - 1]:
                i -= 1
            else:
                j -= 1
    finally:
        free(ca)
        free(cb)
        free(table)
    pairs.reverse()
    return pairs


def edit_distance(a, b):
    """Word-level Levenshtein distance (insert/delete/substitute, cost 1)."""
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t m = len(b)
    if n == 0:
        return m
    if m == 0:
        return n
    cdef int* ca = _to_c_array(a, n)
    cdef int* cb = NULL
    cdef int* prev = NULL
    cdef int* cur = NULL
    cdef int* tmp
    cdef Py_ssize_t i, j
    cdef int ai, best, cand, result
    try:
        cb = _to_c_array(b, m)
        prev = <int*> malloc((m + 1) * sizeof(int))
        cur = <int*> malloc((m + 1) * sizeof(int))
        if prev == NULL or cur == NULL:
            raise MemoryError()
        for j in range(m + 1):
            prev[j] = j
        for i in range(1, n + 1):
            ai = ca[i - 1]
            cur[0] = i
            for j in range(1, m + 1):
                best = prev[j - 1] + (0 if ai == cb[j - 1] else 1)
                cand = prev[j] + 1
                if cand < best:
                    best = cand
                cand = cur[j - 1] + 1
                if cand < best:
                    best = cand
                cur[j] = best
            tmp = prev
            prev = cur
            cur = tmp
        result = prev[m]
    finally:
        free(ca)
        free(cb)
        free(prev)
        free(cur)
    return result
