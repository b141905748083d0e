"""Pure-Python kernels: LCS backtrace and word-level Levenshtein distance.

Both operate on integer id sequences (callers intern tokens to ids) and are
the fallback used when the compiled extension is unavailable. The compiled
twin in ``_ckernels.pyx`` must match these bit-for-bit, including the
backtrace tie-breaks, because effort accounting downstream depends on the
exact match set, not just its length.
"""

from __future__ import annotations

from typing import Sequence


def lcs_pairs(a: Sequence[int], b: Sequence[int]) -> list[tuple[int, int]]:
    """Longest common subsequence of ``a`` and ``b`` as index pairs.

    Returns strictly increasing (i, j) pairs with a[i] == b[j]. The
    backtrace is pinned: a diagonal move is taken whenever the tokens at
    (i-1, j-1) are equal and consistent with the table; on table ties the
    move that consumes an ``a`` element is preferred.
    """
    n, m = len(a), len(b)
    width = m + 1
    # Flat DP table, row-major: table[i*width + j] = LCS(a[:i], b[:j]).
    table = [0] * ((n + 1) * width)
    for i in range(1, n + 1):
        ai = a[i - 1]
        row = i * width
        prev = row - width
        for j in range(1, m + 1):
            if ai == b[j - 1]:
                table[row + j] = table[prev + j - 1] + 1
            else:
                up = table[prev + j]
                left = table[row + j - 1]
                table[row + j] = up if up >= left else left
    pairs: list[tuple[int, int]] = []
    i, j = n, m
    while i > 0 and j > 0:
        if a[i - 1] == b[j - 1] and table[i * width + j] == table[(i - 1) * width + j - 1] + 1:
            pairs.append((i - 1, j - 1))
            i -= 1
            j -= 1
        elif table[(i - 1) * width + j] >= table[i * width + j - 1]:
            i -= 1
        else:
            j -= 1
    pairs.reverse()
    return pairs


def edit_distance(a: Sequence[int], b: Sequence[int]) -> int:
    """Word-level Levenshtein distance (insert/delete/substitute, cost 1)."""
    n, m = len(a), len(b)
    if n == 0:
        return m
    if m == 0:
        return n
    prev = list(range(m + 1))
    cur = [0] * (m + 1)
    for i in range(1, n + 1):
        ai = a[i - 1]
        cur[0] = i
        for j in range(1, m + 1):
            cost = 0 if ai == b[j - 1] else 1
            best = prev[j - 1] + cost
            if prev[j] + 1 < best:
                best = prev[j] + 1
            if cur[j - 1] + 1 < best:
                best = cur[j - 1] + 1
            cur[j] = best
        prev, cur = cur, prev
    return prev[m]
