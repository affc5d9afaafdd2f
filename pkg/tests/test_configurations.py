from collections import Counter
from itertools import combinations
from math import factorial, prod

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gch.configurations import (
    ACollection,
    AConfiguration,
    MultiIndex,
    canonical_labels,
    enumerate_configuration_classes,
    is_A_set,
    is_simple_configuration,
    stickiness,
)
from gch.errors import InputError


def condition_rank(groups):
    """Rank of the linear conditions a collection imposes on one coordinate.

    Unknowns are the values at the distinct points and the derivatives at
    the points of degenerate pairs.
    """
    points = sorted({x for g in groups for x in g})
    jets = sorted({g[0] for g in groups if len(g) == 2 and g[0] == g[1]})
    col = {("v", x): i for i, x in enumerate(points)}
    col.update({("d", x): len(points) + i for i, x in enumerate(jets)})
    rows = []
    for g in groups:
        if len(g) == 2 and g[0] == g[1]:
            r = [0] * len(col)
            r[col["d", g[0]]] = 1
            rows.append(r)
            continue
        for a, b in zip(g, g[1:]):
            r = [0] * len(col)
            r[col["v", a]] += 1
            r[col["v", b]] -= 1
            rows.append(r)
    return int(np.linalg.matrix_rank(np.array(rows, dtype=float)))


def rho_minus_c(J):
    """Distinct unknowns minus components of the two-colour graph."""
    nodes, black, white = J.two_color_graph()
    parent = {v: v for v in nodes}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in black + white:
        parent[find(a)] = find(b)
    comps = len({find(v) for v in nodes})
    points = {x for g in J.groups for x in g}
    jets = {g[0] for g in J.groups if len(g) == 2 and g[0] == g[1]}
    return len(points) + len(jets) - comps


def set_partitions(n):
    def rec(i, labels, top):
        if i == n:
            yield tuple(labels)
            return
        for x in range(top + 1):
            yield from rec(i + 1, labels + [x], max(top, x + 1))
    yield from rec(0, [], 0)


def all_collections(max_points):
    shapes = [MultiIndex(p) for n in range(2, max_points + 1) for p in partitions(n)]
    for A in shapes:
        for labels in set_partitions(A.size):
            groups, pos = [], 0
            for a in A.parts:
                groups.append(labels[pos:pos + a])
                pos += a
            if any(len(g) > 2 and len(set(g)) < len(g) for g in groups):
                continue
            yield ACollection(groups)


def partitions(n, largest=None):
    largest = largest or n
    if n == 0:
        yield ()
        return
    for a in range(min(n, largest), 1, -1):
        for rest in partitions(n - a, a):
            yield (a, *rest)


class TestMultiIndex:
    def test_basics(self):
        A = MultiIndex.parse("(2,3,2)", b=1)
        assert A.parts == (3, 2, 2) and A.size == 7 and A.count == 3
        assert A.complexity == 5
        assert str(A) == "(3,2,2)+1*"

    def test_rejects(self):
        for bad in ("(1,2)", "(a)"):
            with pytest.raises(InputError):
                MultiIndex.parse(bad)
        with pytest.raises(InputError):
            MultiIndex((2,), b=-1)

    def test_simple_types(self):
        assert is_simple_configuration(MultiIndex((2, 2))) == (True, "I")
        assert is_simple_configuration(MultiIndex((2,), 1)) == (True, "II")
        assert is_simple_configuration(MultiIndex((), 1)) == (True, "II")
        assert is_simple_configuration(MultiIndex((3, 2))) == (True, "III")
        assert is_simple_configuration(MultiIndex((3, 3))) == (False, None)
        assert is_simple_configuration(MultiIndex((4,))) == (False, None)
        assert is_simple_configuration(MultiIndex((3,), 1)) == (False, None)


class TestConfigurations:
    def test_canonical(self):
        assert canonical_labels("xyxy") == "abab"
        assert AConfiguration("bbaa").labels == "aabb"
        with pytest.raises(InputError):
            AConfiguration("aab")

    def test_groups(self):
        with pytest.raises(InputError):
            AConfiguration("abcab")
        J = AConfiguration("abacbc")
        assert J.groups == [(1, 3), (2, 5), (4, 6)]
        assert J.multiindex.parts == (2, 2, 2)
        assert J.rotate().labels == "abcacb"

    @pytest.mark.parametrize("i", range(1, 6))
    def test_chord_counts(self, i):
        classes = enumerate_configuration_classes(MultiIndex((2,) * i))
        assert len(classes) == prod(range(1, 2 * i, 2))
        assert len({c.labels for c in classes}) == len(classes)

    def test_cyclic_counts(self):
        got = [len(enumerate_configuration_classes(MultiIndex((2,) * i), cyclic=True))
               for i in range(1, 5)]
        assert got == [1, 2, 5, 18]

    @given(st.lists(st.integers(2, 4), min_size=1, max_size=3))
    def test_class_count_formula(self, parts):
        A = MultiIndex(tuple(parts))
        sym = prod(factorial(m) for m in Counter(A.parts).values())
        want = factorial(A.size) // (prod(factorial(a) for a in A.parts) * sym)
        classes = enumerate_configuration_classes(A)
        assert len(classes) == want
        assert all(Counter(len(g) for g in c.groups) == Counter(A.parts) for c in classes)

    def test_stickiness_examples(self):
        assert stickiness(AConfiguration("aabb")) == 0
        assert stickiness(AConfiguration("aaa")) == 1
        assert stickiness(AConfiguration("aaabb")) == 1
        assert stickiness(AConfiguration("aaaa")) == 2

    def test_stickiness_range(self):
        for n in range(2, 9):
            for parts in partitions(n):
                A = MultiIndex(parts)
                for J in enumerate_configuration_classes(A):
                    assert 0 <= stickiness(J) <= A.complexity - 1
                    # twice the complexity minus the number of distinct points
                    assert stickiness(J) == 2 * A.complexity - A.size


class TestASets:
    def test_examples(self):
        assert is_A_set(ACollection(((1, 2), (3, 4))))
        assert not is_A_set(ACollection(((1, 2), (1, 3), (2, 3))))
        assert is_A_set(ACollection(((1, 2), (1, 3), (1, 4))))
        assert not is_A_set(ACollection(((1, 2), (1, 2))))
        assert is_A_set(ACollection(((1, 1), (1, 2))))
        assert not is_A_set(ACollection(((1, 1), (1, 1))))
        assert is_A_set(ACollection(((1, 2, 3), (3, 4))))
        assert not is_A_set(ACollection(((1, 2, 3), (2, 3))))

    def test_two_color_graph(self):
        nodes, black, white = ACollection(((1, 1), (1, 2), (1, 3))).two_color_graph()
        assert len(nodes) == 6 and len(black) == 3
        assert white == [((0, 0), (1, 0)), ((1, 0), (2, 0))]

    def test_rejects(self):
        with pytest.raises(InputError):
            ACollection(((1,),))
        with pytest.raises(InputError):
            ACollection(((1, 1, 2),))

    def test_triples_of_pairs(self):
        """Three pairs from six points fail exactly for the pattern xy, xz, yz."""
        pairs = list(combinations(range(1, 7), 2))
        for trio in combinations(pairs, 3):
            pts = Counter(x for p in trio for x in p)
            triangle = len(pts) == 3
            assert is_A_set(ACollection(trio)) == (not triangle)

    def test_exhaustive_against_rank(self):
        seen = 0
        for J in all_collections(7):
            want = condition_rank(J.groups) == J.multiindex.size - J.multiindex.count
            assert is_A_set(J) == want, J.groups
            assert (rho_minus_c(J) == J.multiindex.size - J.multiindex.count) == want
            seen += 1
        assert seen == 784
