# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Same algorithms and summation order as ``_pykernels``."""
from libc.stdlib cimport malloc, free


cdef void _fill(Py_ssize_t pos, Py_ssize_t m, Py_ssize_t n,
                long* rows, long* cap, long* cell, list out):
    cdef Py_ssize_t i, j, ii, jj, k, size = m * n
    cdef long lo, hi, v, right, below
    if pos == size:
        out.append(tuple([cell[k] for k in range(size)]))
        return
    i = pos // n
    j = pos % n
    if j == n - 1:
        lo = rows[i]
        hi = rows[i]
    elif i == m - 1:
        lo = cap[j]
        hi = cap[j]
    else:
        right = 0
        for jj in range(j + 1, n):
            right += cap[jj]
        below = 0
        for ii in range(i + 1, m):
            below += rows[ii]
        lo = 0
        if rows[i] - right > lo:
            lo = rows[i] - right
        if cap[j] - below > lo:
            lo = cap[j] - below
        hi = rows[i] if rows[i] < cap[j] else cap[j]
    if lo > hi or hi > rows[i] or hi > cap[j]:
        return
    v = lo
    while v <= hi:
        cell[pos] = v
        rows[i] -= v
        cap[j] -= v
        _fill(pos + 1, m, n, rows, cap, cell, out)
        rows[i] += v
        cap[j] += v
        v += 1
    cell[pos] = 0


def enumerate_tables(row_sums, col_sums):
    """All nonnegative integer matrices with the given row and column sums (flat, row-major, ascending)."""
    cdef list rs = [int(r) for r in row_sums]
    cdef list cs = [int(c) for c in col_sums]
    cdef Py_ssize_t m = len(rs), n = len(cs), k
    if any(r < 0 for r in rs) or any(c < 0 for c in cs) or sum(rs) != sum(cs):
        return []
    if m == 0 or n == 0:
        return [()]
    cdef long* rows = <long*> malloc(m * sizeof(long))
    cdef long* cap = <long*> malloc(n * sizeof(long))
    cdef long* cell = <long*> malloc(m * n * sizeof(long))
    if rows == NULL or cap == NULL or cell == NULL:
        free(rows)
        free(cap)
        free(cell)
        raise MemoryError()
    cdef list out = []
    try:
        for k in range(m):
            rows[k] = rs[k]
        for k in range(n):
            cap[k] = cs[k]
        for k in range(m * n):
            cell[k] = 0
        _fill(0, m, n, rows, cap, cell, out)
    finally:
        free(rows)
        free(cap)
        free(cell)
    return out


def min_kernel_form(a, b, s):
    """Return sum_{i,j} a[i] * b[j] * min(s[i], s[j]) for ascending ``s``, in O(len(s))."""
    cdef double[:] av = _as_doubles(a)
    cdef double[:] bv = _as_doubles(b)
    cdef double[:] sv = _as_doubles(s)
    cdef Py_ssize_t n = sv.shape[0], i, k
    cdef double total = 0.0, prefix = 0.0
    cdef double* suffix = <double*> malloc((n + 1) * sizeof(double))
    if suffix == NULL:
        raise MemoryError()
    try:
        suffix[n] = 0.0
        k = n - 1
        while k >= 0:
            suffix[k] = suffix[k + 1] + bv[k]
            k -= 1
        for i in range(n):
            prefix += bv[i] * sv[i]
            total += av[i] * (prefix + sv[i] * suffix[i + 1])
    finally:
        free(suffix)
    return total


cdef double[:] _as_doubles(x):
    import numpy as np
    return np.ascontiguousarray(x, dtype=np.float64)
