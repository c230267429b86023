"""Column reduction kernel over GF(2) for coned boundary matrices."""

import heapq

import numpy as np
from numba import njit


@njit(cache=True)
def _pop_pivot(heap):
    # max-heap stored as negated rows; equal entries cancel in pairs
    while len(heap) > 0:
        top = heapq.heappop(heap)
        count = 1
        while len(heap) > 0 and heap[0] == top:
            heapq.heappop(heap)
            count += 1
        if count % 2 == 1:
            return -top
    return -1


@njit(cache=True)
def reduce_columns(indptr, indices, dims, max_dim):
    """Standard left-to-right reduction with clearing, highest dimension first.

    Returns ``low`` with ``low[j]`` the pivot row of reduced column ``j`` or
    ``-1`` when the column reduces to zero (or was cleared). The pairs are
    identical to those of the plain left-to-right algorithm.
    """
    n = len(dims)
    low = np.full(n, -1, dtype=np.int64)
    pivot_col = np.full(n, -1, dtype=np.int64)
    cleared = np.zeros(n, dtype=np.bool_)
    store_ptr = np.full(n, -1, dtype=np.int64)
    store_len = np.zeros(n, dtype=np.int64)
    store = np.empty(max(16, 2 * len(indices)), dtype=np.int64)
    used = 0

    heap = [np.int64(0)]
    heap.pop()
    for d in range(max_dim, 0, -1):
        for j in range(n):
            if dims[j] != d or cleared[j]:
                continue
            for k in range(indptr[j], indptr[j + 1]):
                heapq.heappush(heap, -indices[k])
            piv = _pop_pivot(heap)
            while piv != -1 and pivot_col[piv] != -1:
                other = pivot_col[piv]
                s = store_ptr[other]
                for k in range(s, s + store_len[other]):
                    r = store[k]
                    if r != piv:
                        heapq.heappush(heap, -r)
                piv = _pop_pivot(heap)
            if piv == -1:
                continue
            low[j] = piv
            pivot_col[piv] = j
            cleared[piv] = True
            # keep the reduced column, pivot first
            rest_start = used
            if used + 1 + len(heap) > len(store):
                grown = np.empty(2 * (used + 1 + len(heap)), dtype=np.int64)
                grown[:used] = store[:used]
                store = grown
            store[used] = piv
            used += 1
            r = _pop_pivot(heap)
            while r != -1:
                store[used] = r
                used += 1
                r = _pop_pivot(heap)
            store_ptr[j] = rest_start
            store_len[j] = used - rest_start
    return low
