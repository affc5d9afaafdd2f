"""Compiled bitmap kernels.

A family table is a uint8 array indexed by edge masks over the lex edge
slots; entry 1 means the graph belongs to the family.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np
from numba import njit


@njit(cache=True)
def _connected_on(adj, nodes, low_idx):
    if nodes == 0:
        return True
    seen = nodes & -nodes
    frontier = seen
    while frontier:
        nb = 0
        f = frontier
        while f:
            low = f & -f
            nb |= adj[low_idx[low]]
            f ^= low
        nb &= nodes
        frontier = nb & ~seen
        seen |= nb
    return seen == nodes


@njit(cache=True)
def _fill(k, ei, ej, out, l, lowbits, removals):
    n = ei.shape[0]
    low_idx = np.zeros(1 << k, np.int64)
    for v in range(k):
        low_idx[1 << v] = v
    adj = np.zeros(k, np.int64)
    base = np.zeros(k, np.int64)
    full = (1 << k) - 1
    nlow = 1 << lowbits
    mind = min(l, k - 1)
    for hi in range(out.shape[0] >> lowbits):
        for v in range(k):
            base[v] = 0
        hh = hi << lowbits
        for s in range(lowbits, n):
            if (hh >> s) & 1:
                base[ei[s]] |= 1 << ej[s]
                base[ej[s]] |= 1 << ei[s]
        for lo in range(nlow):
            for v in range(k):
                adj[v] = base[v]
            for s in range(lowbits):
                if (lo >> s) & 1:
                    adj[ei[s]] |= 1 << ej[s]
                    adj[ej[s]] |= 1 << ei[s]
            ok = True
            # an l-connected graph on more than l nodes has min degree >= l
            for v in range(k):
                a = adj[v]
                c = 0
                while a:
                    a &= a - 1
                    c += 1
                if c < mind:
                    ok = False
                    break
            if ok:
                ok = _connected_on(adj, full, low_idx)
            if ok:
                for r in range(removals.shape[0]):
                    if not _connected_on(adj, full & ~removals[r], low_idx):
                        ok = False
                        break
            out[hh + lo] = ok


def family_table(k: int, l: int) -> np.ndarray:
    """Membership table of all graphs on k nodes.

    l = 0 accepts every graph, l = 1 connected graphs, l >= 2 graphs that
    stay connected after deleting any l - 1 nodes.
    """
    edges = [(i, j) for i in range(k) for j in range(i + 1, k)]
    n = len(edges)
    out = np.zeros(1 << n, np.uint8)
    if l == 0:
        out[:] = 1
        return out
    ei = np.array([e[0] for e in edges], np.int64)
    ej = np.array([e[1] for e in edges], np.int64)
    if l >= 2 and k - (l - 1) >= 0:
        removals = np.array(
            [sum(1 << v for v in c) for c in combinations(range(k), l - 1)],
            np.int64,
        )
    else:
        removals = np.zeros(0, np.int64)
    _fill(k, ei, ej, out, l, min(8, n), removals)
    return out


@njit(cache=True)
def degree_counts(table, n):
    counts = np.zeros(n + 1, np.int64)
    for h in range(table.shape[0]):
        if table[h]:
            x = h
            c = 0
            while x:
                x &= x - 1
                c += 1
            counts[c] += 1
    return counts


def combine_tables(tables: list[np.ndarray]) -> np.ndarray:
    """Product table; the first table occupies the lowest bits."""
    out = tables[0]
    for t in tables[1:]:
        out = np.outer(t, out).ravel()
    return out


CRITICAL = 255


def matching_levels(table: np.ndarray, n: int) -> np.ndarray:
    """Sequential element matching in slot order 0..n-1.

    At step j every unmatched member H pairs with H ^ (1 << j) when that is
    an unmatched member too. level[H] records j; unmatched members keep
    CRITICAL and non-members are never read.
    """
    cur = table.astype(bool)
    level = np.full(table.shape[0], CRITICAL, np.uint8)
    for j in range(n):
        v = cur.reshape(-1, 2, 1 << j)
        lv = level.reshape(-1, 2, 1 << j)
        m = v[:, 0, :] & v[:, 1, :]
        lo = lv[:, 0, :]
        hi = lv[:, 1, :]
        lo[m] = j
        hi[m] = j
        v[:, 0, :] &= ~m
        v[:, 1, :] &= ~m
        del m
    return level, np.flatnonzero(cur)
