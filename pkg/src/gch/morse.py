"""Discrete Morse reduction of a family complex.

Members are paired by sequential element matching over the edge slots in
order 0..n-1, which is acyclic. Every matched pair has incidence +-1, so
the Morse complex on the unmatched cells computes integral homology.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from ._kernels import CRITICAL, matching_levels
from .complex import BoundaryMatrix, FamilyComplex


def _incidence(upper: int, slot: int) -> int:
    return -1 if (upper & ((1 << slot) - 1)).bit_count() % 2 else 1


class MorseComplex:
    def __init__(self, X: FamilyComplex):
        self.X = X
        level, crit = matching_levels(X.table, X.n_slots)
        self.level = level
        crit = crit.astype(np.int64)
        deg = np.bitwise_count(crit) - 1
        self.critical = {int(d): crit[deg == d] for d in np.unique(deg)}

    def count(self, d: int) -> int:
        c = self.critical.get(d)
        return 0 if c is None else int(c.shape[0])

    @cached_property
    def degrees(self) -> list[int]:
        return sorted(self.critical)

    def _flow(self, mask: int) -> dict[int, int]:
        """Morse boundary of a critical cell as {critical mask: coefficient}."""
        table, level = self.X.table, self.level
        pending: dict[int, int] = {}

        def push_faces(cell, coef, skip=-1):
            for p, s in enumerate(_bits(cell)):
                face = cell & ~(1 << s)
                if s != skip and face and table[face]:
                    pending[face] = pending.get(face, 0) + (coef if p % 2 == 0 else -coef)

        push_faces(mask, 1)
        out: dict[int, int] = {}
        while pending:
            x, a = pending.popitem()
            if a == 0:
                continue
            j = int(level[x])
            if j == CRITICAL:
                out[x] = out.get(x, 0) + a
            elif not x >> j & 1:
                # x is the lower cell of the pair (x, y); replace x by the
                # other faces of y, which is a homologous move
                y = x | (1 << j)
                push_faces(y, -a * _incidence(y, j), skip=j)
            # upper cells of pairs contribute nothing
        return {m: c for m, c in out.items() if c}

    def boundary_matrix(self, d: int) -> BoundaryMatrix:
        cols_g = self.critical.get(d, np.zeros(0, np.int64))
        rows_g = self.critical.get(d - 1, np.zeros(0, np.int64))
        shape = (int(rows_g.shape[0]), int(cols_g.shape[0]))
        rows, cols, vals = [], [], []
        if shape[0] and shape[1]:
            index = {int(m): i for i, m in enumerate(rows_g)}
            for c, m in enumerate(cols_g.tolist()):
                for face, v in sorted(self._flow(m).items()):
                    rows.append(index[face])
                    cols.append(c)
                    vals.append(v)
        arr = lambda x: np.array(x, np.int64)  # noqa: E731
        return BoundaryMatrix(d, shape, arr(rows), arr(cols), arr(vals))


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out
