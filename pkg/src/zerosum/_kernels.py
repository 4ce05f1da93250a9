"""Compiled inner loop of the Davenport search.

Subsets of a group with at most 64 elements are uint64 bitmasks (bit i is
the element with canonical index i). Maps on subsets (translations,
automorphisms) are applied through per-byte lookup tables.
"""

from __future__ import annotations

import numpy as np
from numba import njit, types
from numba.typed import Dict

MAX_BITS = 64


def byte_luts(maps: np.ndarray) -> np.ndarray:
    """``lut[t, b, v]`` = image bitmask of byte value ``v`` at byte position ``b`` under ``maps[t]``.

    ``maps[t, x]`` is the index of the image of element ``x``.
    """
    T, n = maps.shape
    nbytes = (n + 7) // 8
    lut = np.zeros((T, nbytes, 256), dtype=np.uint64)
    vals = np.arange(256)
    for b in range(nbytes):
        for bit in range(8):
            x = 8 * b + bit
            if x >= n:
                break
            has = ((vals >> bit) & 1).astype(bool)
            img = np.left_shift(np.uint64(1), maps[:, x].astype(np.uint64))  # (T,)
            lut[:, b, has] |= img[:, None]
    return lut


@njit(cache=True)
def _apply(lut, t, a):
    out = np.uint64(0)
    for b in range(lut.shape[1]):
        v = (a >> np.uint64(8 * b)) & np.uint64(255)
        out |= lut[t, b, v]
    return out


@njit(cache=True)
def _popcount(a):
    c = 0
    while a:
        a &= a - np.uint64(1)
        c += 1
    return c


@njit(cache=True)
def _canon(lut_aut, a):
    best = _apply(lut_aut, 0, a)
    for t in range(1, lut_aut.shape[0]):
        img = _apply(lut_aut, t, a)
        if img < best:
            best = img
    return best


@njit(cache=True)
def davenport_dfs(n, lut_tr, lut_aut, neg, max_states):
    """Longest zero-sum free sequence. Returns (length, path, states, capped)."""
    one = np.uint64(1)
    sums = np.zeros(n + 2, dtype=np.uint64)
    cand = np.zeros((n + 2, n), dtype=np.int64)
    child = np.zeros((n + 2, n), dtype=np.uint64)
    ncand = np.zeros(n + 2, dtype=np.int64)
    pos = np.zeros(n + 2, dtype=np.int64)
    path = np.zeros(n + 2, dtype=np.int64)
    best_path = np.zeros(n + 2, dtype=np.int64)
    best = 0
    seen = Dict.empty(key_type=types.uint64, value_type=types.int64)
    keys = np.zeros(n, dtype=np.int64)
    tmp_g = np.zeros(n, dtype=np.int64)
    tmp_c = np.zeros(n, dtype=np.uint64)

    d = 0
    sums[0] = np.uint64(0)
    expand = True
    while d >= 0:
        if expand:
            expand = False
            a = sums[d]
            ncand[d] = 0
            pos[d] = 0
            if d > best:
                best = d
                for i in range(d):
                    best_path[i] = path[i]
            size = _popcount(a)
            if d + (n - 1 - size) > best:
                k = _canon(lut_aut, a)
                prev = seen.get(k, -1)
                if prev < d:
                    if len(seen) >= max_states:
                        return best, best_path[:best].copy(), len(seen), True
                    seen[k] = d
                    m = 0
                    for g in range(1, n):
                        if (a >> np.uint64(neg[g])) & one:
                            continue
                        c = a | _apply(lut_tr, g, a) | (one << np.uint64(g))
                        s = _popcount(c)
                        if d + 1 + (n - 1 - s) <= best:
                            continue
                        tmp_g[m] = g
                        tmp_c[m] = c
                        keys[m] = s * n + g
                        m += 1
                    order = np.argsort(keys[:m])
                    for i in range(m):
                        cand[d, i] = tmp_g[order[i]]
                        child[d, i] = tmp_c[order[i]]
                    ncand[d] = m
        if pos[d] < ncand[d]:
            i = pos[d]
            pos[d] += 1
            c = child[d, i]
            if d + 1 + (n - 1 - _popcount(c)) <= best:
                continue
            path[d] = cand[d, i]
            d += 1
            sums[d] = c
            expand = True
        else:
            d -= 1
    return best, best_path[:best].copy(), len(seen), False
