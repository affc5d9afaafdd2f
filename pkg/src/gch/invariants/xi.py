"""Joins of 2-connected complexes and their split boundary."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial, prod
from typing import Sequence

from ..complex import Chain, Layout, boundary_chain, lambda_complex
from ..errors import InputError
from ..graphs import GraphFamily, LabeledGraph, bits, edge_list, is_l_connected, permutation_sign
from ..homology import HomologySummary, RankMode, homology, is_cycle

TWO_CONNECTED = GraphFamily(2)


def xi_rank(parts: Sequence[int]) -> int:
    if any(a < 2 for a in parts):
        raise InputError("group sizes must be >= 2")
    return prod(factorial(a - 2) for a in parts)


def xi_degree(parts: Sequence[int]) -> int:
    """Degree in which the join complex has its homology."""
    return 2 * sum(parts) - 3 * len(parts) - 1


def lambda_homology(parts: Sequence[int], mode: RankMode = RankMode(),
                    threads: int | None = None) -> HomologySummary:
    return homology(lambda_complex(tuple(parts)), mode, threads=threads)


def check_lambda(parts: Sequence[int], mode: RankMode = RankMode()) -> tuple[bool, HomologySummary]:
    h = lambda_homology(parts, mode)
    ok = h.betti == {xi_degree(parts): xi_rank(parts)} and not h.torsion
    return ok, h


def _block_sign(sizes: Sequence[int], order: Sequence[int]) -> int:
    """Sign of moving consecutive blocks of the given sizes into `order`."""
    sign = 1
    for x in range(len(order)):
        for y in range(x + 1, len(order)):
            if order[x] > order[y] and sizes[order[x]] * sizes[order[y]] % 2:
                sign = -sign
    return sign


@dataclass(frozen=True, eq=False)
class XiClass:
    """Element of the join of per-group chain groups, with an explicit group order.

    terms maps a tuple of per-group edge masks to a coefficient; points
    names the nodes of every group.
    """

    parts: tuple[int, ...]
    points: tuple[tuple[int, ...], ...]
    terms: dict[tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.points) != len(self.parts) or any(
                len(p) != a for p, a in zip(self.points, self.parts)):
            raise InputError("points do not match group sizes")
        clean = {tuple(k): v for k, v in sorted(self.terms.items()) if v}
        if len({sum(m.bit_count() for m in k) for k in clean}) > 1:
            raise InputError("terms of mixed degree")
        object.__setattr__(self, "terms", clean)

    @classmethod
    def from_chain(cls, c: Chain, points: Sequence[Sequence[int]] | None = None) -> XiClass:
        lay = c.layout
        if points is None:
            points, start = [], 1
            for a in c.groups:
                points.append(tuple(range(start, start + a)))
                start += a
            if len(c.groups) == 1:
                points = [tuple(range(1, c.groups[0] + 1))]
        terms = {tuple(lay.split(m)): v for m, v in c.terms.items()}
        return cls(tuple(c.groups), tuple(tuple(p) for p in points), terms)

    @classmethod
    def empty(cls) -> XiClass:
        return cls((), (), {(): 1})

    @property
    def degree(self) -> int:
        if not self.terms:
            raise InputError("the zero class has no degree")
        return sum(m.bit_count() for m in next(iter(self.terms))) - 1

    def factor_degrees(self) -> list[int]:
        key = next(iter(self.terms))
        return [m.bit_count() - 1 for m in key]

    def to_chain(self) -> Chain:
        if not self.parts:
            raise InputError("the empty join has no chain")
        lay = Layout(self.parts)
        terms = {sum(m << o for m, o in zip(k, lay.offsets)): v for k, v in self.terms.items()}
        return Chain(self.parts, TWO_CONNECTED, self.degree, terms)

    def is_cycle(self) -> bool:
        return not self.parts or not self.terms or is_cycle(self.to_chain())

    def join(self, other: XiClass) -> XiClass:
        terms: dict[tuple[int, ...], int] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                terms[k1 + k2] = terms.get(k1 + k2, 0) + v1 * v2
        return XiClass(self.parts + other.parts, self.points + other.points, terms)

    def reorder(self, order: Sequence[int]) -> XiClass:
        """Put group order[0] first, then order[1], and so on."""
        if sorted(order) != list(range(len(self.parts))):
            raise InputError(f"{order!r} is not an ordering of {len(self.parts)} groups")
        terms = {}
        for k, v in self.terms.items():
            sizes = [m.bit_count() for m in k]
            terms[tuple(k[o] for o in order)] = v * _block_sign(sizes, order)
        return XiClass(tuple(self.parts[o] for o in order),
                       tuple(self.points[o] for o in order), terms)

    def merge(self, m: int) -> XiClass:
        """Undo a split: glue groups m and m+1, which share exactly one point."""
        p1, p2 = self.points[m], self.points[m + 1]
        if len(set(p1) & set(p2)) != 1:
            raise InputError("groups to merge must share exactly one point")
        pts = tuple(sorted(set(p1) | set(p2)))
        a = len(pts)
        terms = {}
        for k, v in self.terms.items():
            e1 = [(p1[i - 1], p1[j - 1]) for i, j in LabeledGraph(self.parts[m], k[m]).edges]
            e2 = [(p2[i - 1], p2[j - 1]) for i, j in LabeledGraph(self.parts[m + 1], k[m + 1]).edges]
            loc = {p: n for n, p in enumerate(pts, 1)}
            slots = [edge_list(a).index((loc[x], loc[y])) for x, y in e1 + e2]
            g = sum(1 << s for s in slots)
            key = k[:m] + (g,) + k[m + 2:]
            terms[key] = terms.get(key, 0) + v * permutation_sign(slots)
        parts = self.parts[:m] + (a,) + self.parts[m + 2:]
        points = self.points[:m] + (pts,) + self.points[m + 2:]
        return XiClass(parts, points, terms)

    def __add__(self, other: XiClass) -> XiClass:
        if (self.parts, self.points) != (other.parts, other.points):
            raise InputError("classes live over different groups")
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return XiClass(self.parts, self.points, terms)

    def __eq__(self, other):
        if not isinstance(other, XiClass):
            return NotImplemented
        return (self.parts, self.points, self.terms) == (other.parts, other.points, other.terms)

    def encode(self) -> str:
        """'-1*{1-2}x{2-3}', edges written with point names."""
        if not self.terms:
            return "0"
        out = []
        for k, v in self.terms.items():
            factors = []
            for a, pts, mask in zip(self.parts, self.points, k):
                edges = LabeledGraph(a, mask).edges
                factors.append("{" + ";".join(f"{pts[i - 1]}-{pts[j - 1]}" for i, j in edges) + "}")
            term = f"{abs(v)}*" + "x".join(factors)
            if out:
                out.append(("+ " if v > 0 else "- ") + term)
            else:
                out.append(term if v > 0 else "-" + term)
        return " ".join(out)

    def __str__(self):
        return self.encode()


def join_chain(c1: XiClass, c2: XiClass, group_order: Sequence[int] | None = None) -> XiClass:
    """Join of two cycles; group_order lists the joined groups in the wanted order."""
    for c in (c1, c2):
        if not c.is_cycle():
            raise InputError("join factors must be cycles")
    out = c1.join(c2)
    if group_order is not None:
        out = out.reorder(group_order)
    return out


def _components(g: LabeledGraph, nodes: int) -> list[int]:
    adj = g.adjacency()
    comps = []
    left = nodes
    while left:
        seen = left & -left
        frontier = seen
        while frontier:
            nb = 0
            for v in bits(frontier):
                nb |= adj[v]
            nb &= nodes
            frontier = nb & ~seen
            seen |= nb
        comps.append(seen)
        left &= ~seen
    return comps


def stu_boundary(parts: Sequence[int], group: int, tau: int, c: Chain | XiClass,
                 blocks: tuple[Sequence[int], Sequence[int]]) -> XiClass:
    """Terms of the unreduced boundary of c where only the graph of `group`
    stops being 2-connected and deleting point tau splits it into exactly
    the two blocks. Each such graph is cut at tau into the graphs on
    block + tau; the sign of reordering its edges accordingly is applied.
    """
    x = c if isinstance(c, XiClass) else XiClass.from_chain(c)
    parts = tuple(parts)
    if x.parts != parts:
        raise InputError(f"class groups {x.parts} differ from {parts}")
    if not x.is_cycle():
        raise InputError("stu_boundary needs a cycle")
    if not 0 <= group < len(parts):
        raise InputError(f"no group {group}")
    pts = x.points[group]
    b1, b2 = (tuple(sorted(b)) for b in blocks)
    if tau not in pts or sorted(b1 + b2 + (tau,)) != sorted(pts) or not b1 or not b2:
        raise InputError("tau and the blocks must partition the points of the group")
    loc = {p: n for n, p in enumerate(pts)}
    want = {sum(1 << loc[p] for p in b1), sum(1 << loc[p] for p in b2)}
    side1 = tuple(sorted(b1 + (tau,)))
    side2 = tuple(sorted(b2 + (tau,)))
    new_parts = parts[:group] + (len(side1), len(side2)) + parts[group + 1:]
    new_points = x.points[:group] + (side1, side2) + x.points[group + 1:]
    if not x.terms:
        return XiClass(new_parts, new_points, {})
    a = parts[group]
    full = (1 << a) - 1
    raw = boundary_chain(x.to_chain(), quotient=False)
    lay = raw.layout
    terms: dict[tuple[int, ...], int] = {}
    for mask, v in raw.terms.items():
        key = tuple(lay.split(mask))
        bad = [n for n, (b, m) in enumerate(zip(parts, key))
               if not is_l_connected(LabeledGraph(b, m), 2)]
        if bad != [group]:
            continue
        g = LabeledGraph(a, key[group])
        if set(_components(g, full & ~(1 << loc[tau]))) != want:
            continue
        halves, order = [], []
        for side in (side1, side2):
            sub = {p: n for n, p in enumerate(side, 1)}
            edges = [(i, j) for i, j in g.edges if pts[i - 1] in sub and pts[j - 1] in sub]
            halves.append(LabeledGraph.from_edges(
                len(side), [(sub[pts[i - 1]], sub[pts[j - 1]]) for i, j in edges]).mask)
            order += edges
        rank = {e: n for n, e in enumerate(order)}
        sign = permutation_sign([rank[e] for e in g.edges])
        new = key[:group] + tuple(halves) + key[group + 1:]
        terms[new] = terms.get(new, 0) + v * sign
    return XiClass(new_parts, new_points, terms)
