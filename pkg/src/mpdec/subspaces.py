"""Enumeration of complementary subspace pairs of F_q^k via Schubert cells.

generate_dec(k, q) yields a duplicate-free family Dec_q(k) of pairs
(T1, T2): T1 spans an l-dimensional subspace in column-echelon form, T2 is
the standard-basis complement on the non-pivot rows. Only l <= k/2 is
enumerated, and for even k at l = k/2 only the pivot sets containing row 0,
which removes the double counting of {U, complement(U)} pairs.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np


def grassmannian_cells(k: int, l: int, q: int):
    """Yield every l-dimensional subspace of F_q^k exactly once.

    Pivot sets run in lexicographic order; the free entries (below each
    pivot, outside other pivot rows) run in odometer order.

    Yields:
        (t1, pivots): t1 a k x l column-echelon matrix, pivots its sorted
        pivot row tuple.
    """
    if not (0 < l < k):
        return
    for pivots in combinations(range(k), l):
        yield from _cells_for_pivots(k, l, q, pivots)


def _cells_for_pivots(k: int, l: int, q: int, pivots):
    pivot_set = set(pivots)
    free = [
        (r, c)
        for c in range(l)
        for r in range(pivots[c] + 1, k)
        if r not in pivot_set
    ]
    base = np.zeros((k, l), dtype=np.int64)
    for c, p in enumerate(pivots):
        base[p, c] = 1
    n_free = len(free)
    counter = [0] * n_free
    while True:
        t1 = base.copy()
        for (r, c), v in zip(free, counter):
            t1[r, c] = v
        yield t1, tuple(pivots)
        # odometer step
        i = 0
        while i < n_free:
            counter[i] += 1
            if counter[i] < q:
                break
            counter[i] = 0
            i += 1
        else:
            return
        if n_free == 0:
            return


def complement(t1: np.ndarray, pivots, k: int) -> np.ndarray:
    """Standard-basis columns on the non-pivot rows; [T1 T2] is invertible."""
    others = [r for r in range(k) if r not in set(pivots)]
    t2 = np.zeros((k, len(others)), dtype=np.int64)
    for c, r in enumerate(others):
        t2[r, c] = 1
    return t2


def generate_dec(k: int, q: int):
    """Yield the pairs (T1, T2) of Dec_q(k).

    For k = 1 the single trivial pair (empty T1, identity T2) is produced.
    For even k and l = k/2 only pivot sets containing row 0 are used (a
    vertex cover of the complementary-pair graph), so each unordered
    decomposition {U, V} of F_q^k is tested at most once.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        yield np.zeros((1, 0), dtype=np.int64), np.eye(1, dtype=np.int64)
        return
    for l in range(1, k // 2 + 1):
        for pivots in combinations(range(k), l):
            if 2 * l == k and 0 not in pivots:
                continue
            for t1, piv in _cells_for_pivots(k, l, q, pivots):
                yield t1, complement(t1, piv, k)


def dec_count(k: int, q: int) -> int:
    """|Dec_q(k)| by direct enumeration."""
    return sum(1 for _ in generate_dec(k, q))
