"""Cyclic symmetry of the 2-connected complex and E1-class dimensions."""
from __future__ import annotations

from math import factorial

import numpy as np

from ..complex import Chain, build_complex
from ..errors import CapacityError, InputError
from ..graphs import GraphFamily, LabeledGraph, edge_list, relabel
from ..homology import cycle_representatives, homology
from ..linalg import rank_exact

MATRIX_MAX_NODES = 5


def rotation(k: int) -> list[int]:
    """Node map i -> i + 1 (mod k) as a 1-based image list."""
    return [i % k + 1 for i in range(1, k + 1)]


def power(perm: list[int], t: int) -> list[int]:
    out = list(range(1, len(perm) + 1))
    for _ in range(t):
        out = [perm[x - 1] for x in out]
    return out


def act(c: Chain, perm: list[int]) -> Chain:
    if len(c.groups) != 1:
        raise InputError("node permutations act on single-group chains")
    terms: dict[int, int] = {}
    for g, v in c.items():
        h, s = relabel(g, perm)
        terms[h.mask] = terms.get(h.mask, 0) + s * v
    return Chain(c.groups, c.family, c.degree, terms)


def rotation_matrix(i: int) -> list[list[int]]:
    """Matrix of the rotation on H_{2i-2} of the 2-connected complex on i+1 nodes."""
    k = i + 1
    if k > MATRIX_MAX_NODES:
        raise CapacityError(f"the action matrix is built for at most {MATRIX_MAX_NODES} nodes")
    X = build_complex(k, GraphFamily(2))
    basis = cycle_representatives(X, 2 * i - 2)
    rho = rotation(k)
    cols = [basis.coordinates(act(z, rho)) for z in basis.representatives]
    return [[cols[j][r] for j in range(len(cols))] for r in range(len(cols))]


def _trace_dim(i: int) -> int:
    k = i + 1
    X = build_complex(k, GraphFamily(2))
    h = homology(X)
    top = 2 * i - 2
    if h.nonzero_degrees() != [top]:
        raise InputError("trace formula needs homology in a single degree")
    masks = np.flatnonzero(X.table).astype(np.int64)
    total = 0
    for t in range(k):
        perm = power(rotation(k), t)
        el = edge_list(k)
        target = [el.index(tuple(sorted((perm[a - 1], perm[b - 1])))) for a, b in el]
        img = np.zeros_like(masks)
        for s, ts in enumerate(target):
            img |= ((masks >> s) & 1) << ts
        lefschetz = 0
        for m in masks[img == masks].tolist():
            _, sign = relabel(LabeledGraph(k, m), perm)
            lefschetz += (-1) ** (m.bit_count() - 1) * sign
        total += (-1) ** top * lefschetz
    if total % k:
        raise ArithmeticError("character average is not an integer")
    return total // k


def invariant_subspace_dim(i: int, method: str = "matrix") -> int:
    """Dimension of the rotation-invariant part of H_{2i-2}(2-connected, i+1 nodes) over Q.

    'matrix' averages the action matrix over the rotation group; 'trace'
    averages Lefschetz numbers of the rotations on the chain groups.
    """
    if i < 2:
        raise InputError("order must be at least 2")
    if method == "trace":
        return _trace_dim(i)
    if method != "matrix":
        raise InputError(f"unknown method {method!r}")
    R = rotation_matrix(i)
    m = len(R)
    acc = [[int(r == c) for c in range(m)] for r in range(m)]
    Rt = [row[:] for row in acc]
    for _ in range(i):
        Rt = [[sum(Rt[r][t] * R[t][c] for t in range(m)) for c in range(m)] for r in range(m)]
        acc = [[acc[r][c] + Rt[r][c] for c in range(m)] for r in range(m)]
    cols = [{r: acc[r][c] for r in range(m) if acc[r][c]} for c in range(m)]
    return rank_exact(cols, limit=None)


def invariant_bound(i: int) -> int:
    return factorial(i - 1)


def class_dimensions(i: int, n: int) -> list[int]:
    """Dimensions of the first-page cohomology classes of order i in the space of knots in R^n."""
    if n < 3 or i < 1:
        raise InputError("need i >= 1 and n >= 3")
    if i == 1:
        return []
    if i == 2:
        return [2 * n - 6]
    if i == 3:
        return [3 * (n - 3), 3 * (n - 3) + 1]
    raise InputError("class dimensions are tabulated for orders 1, 2 and 3")
