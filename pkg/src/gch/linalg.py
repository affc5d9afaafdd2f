"""Sparse and dense exact linear algebra over Z, Q and F_p.

Matrices are passed as lists of sparse columns (dict row -> value).
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import gcd

from .errors import CapacityError

EXACT_NNZ_LIMIT = 50_000
DENSE_LIMIT = 400_000


def _transpose(cols: list[dict[int, int]]) -> list[dict[int, int]]:
    rows: dict[int, dict[int, int]] = {}
    for j, col in enumerate(cols):
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
    return list(rows.values())


class _Eliminator:
    """Row-wise sparse Gaussian elimination with Markowitz-style pivots.

    Rows are dicts col -> value. `reduce` is supplied by subclasses and
    returns the new row after eliminating the pivot column.
    """

    def __init__(self, rows: list[dict[int, int]]):
        self.rows = {i: r for i, r in enumerate(rows) if r}
        self.col_rows: dict[int, set[int]] = {}
        for i, r in self.rows.items():
            for c in r:
                self.col_rows.setdefault(c, set()).add(i)
        self.heap = [(len(r), i) for i, r in self.rows.items()]
        heapq.heapify(self.heap)

    def _pop_row(self, accept):
        stash = []
        found = None
        while self.heap:
            size, i = heapq.heappop(self.heap)
            r = self.rows.get(i)
            if r is None or len(r) != size:
                continue
            if accept(r):
                found = i
                break
            stash.append((size, i))
        for item in stash:
            heapq.heappush(self.heap, item)
        return found

    def _pivot_col(self, r, accept_entry):
        best = None
        for c, v in r.items():
            if accept_entry(v):
                key = (len(self.col_rows[c]), abs(v), c)
                if best is None or key < best[0]:
                    best = (key, c)
        return best[1]

    def _set_row(self, i, new, old_cols):
        for c in old_cols - new.keys():
            self.col_rows[c].discard(i)
        for c in new.keys() - old_cols:
            self.col_rows.setdefault(c, set()).add(i)
        if new:
            self.rows[i] = new
            heapq.heappush(self.heap, (len(new), i))
        else:
            del self.rows[i]

    def eliminate(self, accept_entry, reduce) -> int:
        """Pivot while some row has an acceptable entry; returns pivot count."""
        count = 0
        has = lambda r: any(accept_entry(v) for v in r.values())  # noqa: E731
        while True:
            i = self._pop_row(has)
            if i is None:
                return count
            r = self.rows.pop(i)
            c = self._pivot_col(r, accept_entry)
            for cc in r:
                self.col_rows[cc].discard(i)
            for j in list(self.col_rows[c]):
                s = self.rows[j]
                old = set(s)
                self._set_row(j, reduce(s, r, c), old)
            count += 1


def rank_mod_p(cols: list[dict[int, int]], p: int) -> int:
    rows = [{c: v % p for c, v in r.items() if v % p} for r in _transpose(cols)]
    el = _Eliminator(rows)

    def reduce(s, r, c):
        f = s[c] * pow(r[c], -1, p) % p
        out = dict(s)
        for cc, v in r.items():
            x = (out.get(cc, 0) - f * v) % p
            if x:
                out[cc] = x
            else:
                out.pop(cc, None)
        return out

    return el.eliminate(lambda v: True, reduce)


def _unit_reduce(s, r, c):
    f = s[c] * r[c]  # r[c] is a unit
    out = dict(s)
    for cc, v in r.items():
        x = out.get(cc, 0) - f * v
        if x:
            out[cc] = x
        else:
            out.pop(cc, None)
    return out


def _ff_reduce(s, r, c):
    a, b = r[c], s[c]
    out = {}
    for cc in s.keys() | r.keys():
        x = a * s.get(cc, 0) - b * r.get(cc, 0)
        if x:
            out[cc] = x
    g = 0
    for v in out.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        out = {cc: v // g for cc, v in out.items()}
    return out


def _nnz(cols) -> int:
    return sum(len(c) for c in cols)


def _check_exact(cols, limit):
    nnz = _nnz(cols)
    if limit is not None and nnz > limit:
        raise CapacityError(f"exact elimination refused: {nnz} nonzeros exceed {limit}")


def rank_exact(cols: list[dict[int, int]], limit: int | None = EXACT_NNZ_LIMIT) -> int:
    """Rank over Q by fraction-free elimination."""
    _check_exact(cols, limit)
    el = _Eliminator(_transpose(cols))
    n = el.eliminate(lambda v: abs(v) == 1, _unit_reduce)
    return n + el.eliminate(lambda v: True, _ff_reduce)


def invariant_factors(cols: list[dict[int, int]], limit: int | None = EXACT_NNZ_LIMIT) -> list[int]:
    """Nonzero Smith invariant factors, in divisibility order."""
    _check_exact(cols, limit)
    el = _Eliminator(_transpose(cols))
    units = el.eliminate(lambda v: abs(v) == 1, _unit_reduce)
    rest = list(el.rows.values())
    if not rest:
        return [1] * units
    colset = sorted({c for r in rest for c in r})
    if len(rest) * len(colset) > DENSE_LIMIT:
        raise CapacityError(f"dense Smith form of a {len(rest)}x{len(colset)} block")
    where = {c: j for j, c in enumerate(colset)}
    dense = [[0] * len(colset) for _ in rest]
    for i, r in enumerate(rest):
        for c, v in r.items():
            dense[i][where[c]] = v
    return [1] * units + smith_form(dense).diagonal


@dataclass
class SmithForm:
    """U A V = diag(diagonal) padded with zeros; U, V unimodular.

    Transforms are kept only when requested.
    """

    diagonal: list[int]
    U: list[list[int]] | None = None
    V: list[list[int]] | None = None
    Vinv: list[list[int]] | None = None

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_form(a: list[list[int]], transforms: bool = False) -> SmithForm:
    """Dense Smith normal form over Z.

    Pivots are chosen by smallest absolute value, then lowest column.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    if m * n > DENSE_LIMIT:
        raise CapacityError(f"dense Smith form of a {m}x{n} matrix")
    a = [list(map(int, row)) for row in a]
    U = _identity(m) if transforms else None
    V = _identity(n) if transforms else None
    Vi = _identity(n) if transforms else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if U:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if V:
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(src, dst, f):  # row dst += f * row src
        ra, rd = a[src], a[dst]
        for t in range(n):
            if ra[t]:
                rd[t] += f * ra[t]
        if U:
            us, ud = U[src], U[dst]
            for t in range(m):
                if us[t]:
                    ud[t] += f * us[t]

    def add_col(src, dst, f):  # col dst += f * col src
        for row in a:
            if row[src]:
                row[dst] += f * row[src]
        if V:
            for row in V:
                if row[src]:
                    row[dst] += f * row[src]
            # inverse: row src of Vinv -= f * row dst
            vs, vd = Vi[src], Vi[dst]
            for t in range(n):
                if vd[t]:
                    vs[t] -= f * vd[t]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        if U:
            U[i] = [-x for x in U[i]]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                if row[j] and (best is None or (abs(row[j]), j, i) < best[0]):
                    best = ((abs(row[j]), j, i), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    if a[i][t]:
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    if a[t][j]:
                        done = False
            if done:
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if a[i][j] % p), None)
                if bad is None:
                    break
                add_row(bad[0], t, 1)
                continue
            # move the smallest remaining entry of row/column t to the pivot
            cands = [(abs(a[i][t]), 0, i) for i in range(t, m) if a[i][t]]
            cands += [(abs(a[t][j]), 1, j) for j in range(t, n) if a[t][j]]
            _, kind, idx = min(cands)
            if kind == 0:
                swap_rows(t, idx)
            else:
                swap_cols(t, idx)
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    return SmithForm([a[i][i] for i in range(t)], U, V, Vi)


def mat_vec(M: list[list[int]], x: list[int]) -> list[int]:
    return [sum(r[j] * x[j] for j in range(len(x)) if r[j]) for r in M]
