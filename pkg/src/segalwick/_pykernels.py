"""Pure-Python kernels. Reference twin of ``_ckernels.pyx``; both must agree exactly."""


def enumerate_tables(row_sums, col_sums):
    """All nonnegative integer matrices with the given row and column sums.

    Matrices are returned as flat row-major tuples in ascending
    lexicographic order. Inconsistent margins give an empty list.
    """
    rows = [int(r) for r in row_sums]
    cap = [int(c) for c in col_sums]
    m, n = len(rows), len(cap)
    if any(r < 0 for r in rows) or any(c < 0 for c in cap) or sum(rows) != sum(cap):
        return []
    if m == 0 or n == 0:
        return [()]
    size = m * n
    cell = [0] * size
    out = []

    def fill(pos):
        if pos == size:
            out.append(tuple(cell))
            return
        i, j = divmod(pos, n)
        if j == n - 1:
            lo = hi = rows[i]
        elif i == m - 1:
            lo = hi = cap[j]
        else:
            right = 0
            for jj in range(j + 1, n):
                right += cap[jj]
            below = 0
            for ii in range(i + 1, m):
                below += rows[ii]
            lo = max(0, rows[i] - right, cap[j] - below)
            hi = min(rows[i], cap[j])
        if lo > hi or hi > rows[i] or hi > cap[j]:
            return
        for v in range(lo, hi + 1):
            cell[pos] = v
            rows[i] -= v
            cap[j] -= v
            fill(pos + 1)
            rows[i] += v
            cap[j] += v
        cell[pos] = 0

    fill(0)
    return out


def min_kernel_form(a, b, s):
    """Return sum_{i,j} a[i] * b[j] * min(s[i], s[j]) for ascending ``s``, in O(len(s))."""
    n = len(s)
    suffix = [0.0] * (n + 1)
    for k in range(n - 1, -1, -1):
        suffix[k] = suffix[k + 1] + b[k]
    total = 0.0
    prefix = 0.0
    for i in range(n):
        prefix += b[i] * s[i]
        total += a[i] * (prefix + s[i] * suffix[i + 1])
    return total
