"""Labeled simple graphs stored as bitmasks over lex-ordered edge slots."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, InputError

MAX_NODES = 12
# bitmap tables are built for at most this many edge slots
MAX_TABLE_BITS = 28
MAX_ENUMERATION = 5_000_000


def _check_k(k: int) -> None:
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= MAX_NODES:
        raise InputError(f"node count must be in 1..{MAX_NODES}, got {k!r}")


@lru_cache(maxsize=None)
def edge_list(k: int) -> tuple[tuple[int, int], ...]:
    """All edges (i, j), i < j, on nodes 1..k in lexicographic order."""
    return tuple((i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1))


@lru_cache(maxsize=None)
def _slot_map(k: int) -> dict[tuple[int, int], int]:
    return {e: s for s, e in enumerate(edge_list(k))}


def lex_slot(edge: tuple[int, int], k: int) -> int:
    i, j = edge
    if i > j:
        i, j = j, i
    if not (1 <= i < j <= k):
        raise InputError(f"edge {edge} is not an edge on {k} nodes")
    return _slot_map(k)[(i, j)]


def slot_count(k: int) -> int:
    return k * (k - 1) // 2


@dataclass(frozen=True, order=True)
class LabeledGraph:
    k: int
    mask: int

    def __post_init__(self):
        _check_k(self.k)
        if not 0 <= self.mask < (1 << slot_count(self.k)):
            raise InputError(f"edge mask {self.mask} out of range for k={self.k}")

    @classmethod
    def from_edges(cls, k: int, edges: Iterable[tuple[int, int]]) -> LabeledGraph:
        _check_k(k)
        mask = 0
        for e in edges:
            s = lex_slot(tuple(e), k)
            if mask >> s & 1:
                raise InputError(f"repeated edge {e}")
            mask |= 1 << s
        return cls(k, mask)

    @classmethod
    def parse(cls, text: str) -> LabeledGraph:
        """Inverse of `encode`: '4:1-2;2-3', '3:' for the empty graph."""
        try:
            head, sep, body = text.strip().partition(":")
            k = int(head)
            edges = []
            for part in filter(None, body.split(";")):
                a, b = part.split("-")
                edges.append((int(a), int(b)))
        except ValueError as exc:
            raise InputError(f"cannot parse graph {text!r}") from exc
        if not sep:
            raise InputError(f"cannot parse graph {text!r}")
        return cls.from_edges(k, edges)

    def encode(self) -> str:
        return f"{self.k}:" + ";".join(f"{i}-{j}" for i, j in self.edges)

    def __str__(self):
        return self.encode()

    @property
    def edges(self) -> list[tuple[int, int]]:
        el = edge_list(self.k)
        return [el[s] for s in bits(self.mask)]

    @property
    def edge_count(self) -> int:
        return self.mask.bit_count()

    def has_edge(self, edge: tuple[int, int]) -> bool:
        return bool(self.mask >> lex_slot(edge, self.k) & 1)

    def remove_edge(self, edge: tuple[int, int]) -> LabeledGraph:
        s = lex_slot(edge, self.k)
        if not self.mask >> s & 1:
            raise InputError(f"{edge} is not an edge of {self}")
        return LabeledGraph(self.k, self.mask & ~(1 << s))

    def adjacency(self) -> list[int]:
        """Neighbour bitmask of every node (bit v-1 stands for node v)."""
        adj = [0] * self.k
        for i, j in self.edges:
            adj[i - 1] |= 1 << (j - 1)
            adj[j - 1] |= 1 << (i - 1)
        return adj


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _connected_on(adj: Sequence[int], nodes: int) -> bool:
    if nodes == 0:
        return True
    seen = nodes & -nodes
    frontier = seen
    while frontier:
        nb = 0
        for v in bits(frontier):
            nb |= adj[v]
        nb &= nodes
        frontier = nb & ~seen
        seen |= nb
    return seen == nodes


def is_connected(g: LabeledGraph) -> bool:
    return _connected_on(g.adjacency(), (1 << g.k) - 1)


def is_l_connected(g: LabeledGraph, l: int) -> bool:
    """Connected, and still connected after deleting any l - 1 nodes.

    Graphs left with at most one node count as connected, so K2 is
    2-connected.
    """
    if l < 1 or g.k - l + 1 < 1:
        raise InputError(f"l={l} is out of range for k={g.k}")
    adj = g.adjacency()
    full = (1 << g.k) - 1
    if not _connected_on(adj, full):
        return False
    for removed in combinations(range(g.k), l - 1):
        drop = sum(1 << v for v in removed)
        if not _connected_on(adj, full & ~drop):
            return False
    return True


def relabel(g: LabeledGraph, perm: Sequence[int]) -> tuple[LabeledGraph, int]:
    """Apply the node map i -> perm[i-1].

    The sign is the parity of the permutation that carries the image edges,
    listed in the order of the source edges, into lex order.
    """
    k = g.k
    if sorted(perm) != list(range(1, k + 1)):
        raise InputError(f"{perm!r} is not a permutation of 1..{k}")
    slots = [lex_slot((perm[i - 1], perm[j - 1]), k) for i, j in g.edges]
    return LabeledGraph(k, sum(1 << s for s in slots)), permutation_sign(slots)


def permutation_sign(seq: Sequence[int]) -> int:
    """Parity of the permutation sorting `seq` (distinct values)."""
    order = sorted(range(len(seq)), key=seq.__getitem__)
    seen = [False] * len(seq)
    sign = 1
    for i in range(len(seq)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class GraphFamily:
    """Monotone graph property: all graphs, or l-connected graphs (l >= 1)."""

    connectivity: int = 0

    def __post_init__(self):
        if self.connectivity < 0:
            raise InputError("connectivity must be non-negative")

    @classmethod
    def all(cls) -> GraphFamily:
        return cls(0)

    @classmethod
    def connected(cls) -> GraphFamily:
        return cls(1)

    @classmethod
    def l_connected(cls, l: int) -> GraphFamily:
        if l < 2:
            raise InputError("l-connected families need l >= 2")
        return cls(l)

    @classmethod
    def parse(cls, name: str, l: int | None = None) -> GraphFamily:
        name = name.strip()
        if name == "all":
            return cls.all()
        if name == "connected":
            return cls.connected()
        if name == "2-connected":
            return cls(2)
        if name.startswith("l-connected"):
            _, _, tail = name.partition(":")
            value = int(tail) if tail else l
            if value is None:
                raise InputError("l-connected needs a value for l")
            return cls.l_connected(value)
        raise InputError(f"unknown family {name!r}")

    @property
    def name(self) -> str:
        if self.connectivity == 0:
            return "all"
        if self.connectivity == 1:
            return "connected"
        if self.connectivity == 2:
            return "2-connected"
        return f"l-connected:{self.connectivity}"

    def validate(self, k: int) -> None:
        _check_k(k)
        l = self.connectivity
        # K2 is admitted as 2-connected; otherwise l <= k - 1
        if l >= 2 and l > max(k - 1, 2):
            raise InputError(f"{self.name} needs l <= k-1 (k={k})")

    def contains(self, g: LabeledGraph) -> bool:
        if self.connectivity == 0:
            return True
        return is_l_connected(g, self.connectivity)


@lru_cache(maxsize=8)
def _cached_table(k: int, l: int) -> np.ndarray:
    from ._kernels import family_table

    table = family_table(k, l)
    table.setflags(write=False)
    return table


def membership_table(k: int, family: GraphFamily) -> np.ndarray:
    """uint8 table over all 2^C(k,2) edge masks."""
    family.validate(k)
    if slot_count(k) > MAX_TABLE_BITS:
        raise CapacityError(f"bitmap tables stop at {MAX_TABLE_BITS} edge slots (k={k})")
    return _cached_table(k, family.connectivity)


def enumerate_graphs(k: int, family: GraphFamily, edge_count: int) -> list[LabeledGraph]:
    """Family members with the given edge count, by increasing mask."""
    family.validate(k)
    n = slot_count(k)
    if not 0 <= edge_count <= n:
        return []
    if n <= MAX_TABLE_BITS and k <= 8:
        table = membership_table(k, family)
        masks = np.flatnonzero(table)
        masks = masks[np.bitwise_count(masks) == edge_count]
        return [LabeledGraph(k, int(m)) for m in masks]
    if comb(n, edge_count) > MAX_ENUMERATION:
        raise CapacityError(
            f"{comb(n, edge_count)} candidate graphs with {edge_count} edges on {k} nodes"
        )
    out = []
    for slots in combinations(range(n), edge_count):
        g = LabeledGraph(k, sum(1 << s for s in slots))
        if family.contains(g):
            out.append(g)
    out.sort()
    return out
