"""Multi-indices, configuration classes and A-collections of points on a line."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from string import ascii_lowercase
from typing import Sequence

from .errors import InputError


@dataclass(frozen=True)
class MultiIndex:
    """Group sizes (all >= 2, non-increasing) and a number b of stars."""

    parts: tuple[int, ...]
    b: int = 0

    def __post_init__(self):
        parts = tuple(sorted((int(a) for a in self.parts), reverse=True))
        if any(a < 2 for a in parts):
            raise InputError(f"group sizes must be >= 2, got {self.parts}")
        if self.b < 0:
            raise InputError("b must be non-negative")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str, b: int = 0) -> MultiIndex:
        body = text.strip().strip("()")
        try:
            parts = tuple(int(x) for x in body.replace(" ", "").split(",") if x)
        except ValueError as exc:
            raise InputError(f"cannot parse multi-index {text!r}") from exc
        return cls(parts, b)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def count(self) -> int:
        return len(self.parts)

    @property
    def complexity(self) -> int:
        return self.size - self.count + self.b

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")" + (f"+{self.b}*" if self.b else "")


def _label(i: int) -> str:
    if i >= len(ascii_lowercase):
        raise InputError("too many groups to label")
    return ascii_lowercase[i]


def canonical_labels(labels: Sequence) -> str:
    """Relabel groups a, b, c, ... by first appearance."""
    seen: dict = {}
    return "".join(_label(seen.setdefault(x, len(seen))) for x in labels)


@dataclass(frozen=True)
class AConfiguration:
    """Group labels of points 1..|A| on a line, e.g. 'aabab'."""

    labels: str

    def __post_init__(self):
        if not self.labels or not self.labels.isalpha():
            raise InputError(f"bad configuration {self.labels!r}")
        canon = canonical_labels(self.labels)
        sizes = Counter(canon)
        if any(v < 2 for v in sizes.values()):
            raise InputError(f"every group needs at least two points: {self.labels!r}")
        object.__setattr__(self, "labels", canon)

    @classmethod
    def parse(cls, text: str) -> AConfiguration:
        return cls(text.strip())

    def encode(self) -> str:
        return self.labels

    def __str__(self):
        return self.labels

    @property
    def groups(self) -> list[tuple[int, ...]]:
        """Point positions (1-based) of each group, in label order."""
        out: dict[str, list[int]] = {}
        for pos, ch in enumerate(self.labels, 1):
            out.setdefault(ch, []).append(pos)
        return [tuple(v) for v in out.values()]

    @property
    def multiindex(self) -> MultiIndex:
        return MultiIndex(tuple(len(g) for g in self.groups))

    def rotate(self, shift: int = 1) -> AConfiguration:
        s = shift % len(self.labels)
        return AConfiguration(self.labels[s:] + self.labels[:s])


def stickiness(J: AConfiguration) -> int:
    A = J.multiindex
    return A.complexity - A.count


def enumerate_configuration_classes(A: MultiIndex, cyclic: bool = False) -> list[AConfiguration]:
    """All ways to split points 1..|A| into groups of the sizes in A.

    Groups of equal size are interchangeable. With cyclic=True classes are
    also identified under rotation of the points.
    """
    n = A.size
    out: list[str] = []
    labels = [""] * n

    def rec(free: list[int], sizes: Counter, group: int):
        if not free:
            out.append("".join(labels))
            return
        first, rest = free[0], free[1:]
        for s in sorted(sizes):
            if not sizes[s]:
                continue
            sizes[s] -= 1
            for others in combinations(rest, s - 1):
                for p in (first, *others):
                    labels[p] = _label(group)
                rec([p for p in rest if p not in others], sizes, group + 1)
            sizes[s] += 1

    rec(list(range(n)), Counter(A.parts), 0)
    configs = sorted(set(out))
    if cyclic:
        configs = sorted({min(canonical_labels(c[s:] + c[:s]) for s in range(n)) for c in configs})
    return [AConfiguration(c) for c in configs]


def is_simple_configuration(A: MultiIndex) -> tuple[bool, str | None]:
    """Simple types: I = all 2s, II = 2s plus one star, III = one 3 and 2s."""
    parts, b = A.parts, A.b
    if b == 0 and parts and all(a == 2 for a in parts):
        return True, "I"
    if b == 1 and all(a == 2 for a in parts):
        return True, "II"
    if b == 0 and parts and parts[0] == 3 and all(a == 2 for a in parts[1:]):
        return True, "III"
    return False, None


@dataclass(frozen=True)
class ACollection:
    """Groups of points on the real line; coincidences across groups allowed.

    A group of two equal points stands for a tangency condition.
    """

    groups: tuple[tuple, ...]

    def __post_init__(self):
        groups = tuple(tuple(g) for g in self.groups)
        for g in groups:
            if len(g) < 2:
                raise InputError("every group needs at least two points")
            if len(g) > 2 and len(set(g)) != len(g):
                raise InputError(f"group {g} repeats a point")
        object.__setattr__(self, "groups", groups)

    @property
    def multiindex(self) -> MultiIndex:
        return MultiIndex(tuple(len(g) for g in self.groups))

    def two_color_graph(self) -> tuple[list[tuple[int, int]], list[tuple[int, int]], list[tuple[int, int]]]:
        """(nodes, black edges, white edges); nodes are (group, member).

        Black edges join all members of a group. The copies of one geometric
        point are chained by white edges in node order. The second member of
        a degenerate pair (x, x) stands for the derivative condition at x: it
        has no white edge to ordinary copies of x, only to the second members
        of other degenerate pairs at x.
        """
        nodes = [(g, m) for g, grp in enumerate(self.groups) for m in range(len(grp))]
        black = [((g, a), (g, b)) for g, grp in enumerate(self.groups)
                 for a, b in combinations(range(len(grp)), 2)]
        at: dict = {}
        for g, grp in enumerate(self.groups):
            degenerate = len(grp) == 2 and grp[0] == grp[1]
            for m, x in enumerate(grp):
                key = ("jet", x) if degenerate and m == 1 else ("point", x)
                at.setdefault(key, []).append((g, m))
        white = [(a, b) for copies in at.values() for a, b in zip(copies, copies[1:])]
        return nodes, black, white


def is_A_set(J: ACollection) -> bool:
    """True iff no simple cycle of the two-colour graph uses a white edge,
    i.e. every white edge is a bridge."""
    nodes, black, white = J.two_color_graph()
    index = {v: i for i, v in enumerate(nodes)}
    edges = [(index[a], index[b]) for a, b in black + white]
    for w in white:
        a, b = index[w[0]], index[w[1]]
        adj: dict[int, list[int]] = {}
        for u, v in edges:
            if {u, v} == {a, b}:
                continue
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        seen, stack = {a}, [a]
        while stack:
            u = stack.pop()
            for v in adj.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if b in seen:
            return False
    return True
