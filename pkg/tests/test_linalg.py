from itertools import combinations
from math import gcd

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from gch.errors import CapacityError
from gch.linalg import invariant_factors, mat_vec, rank_exact, rank_mod_p, smith_form


def to_cols(a):
    a = [list(r) for r in a]
    n = len(a[0]) if a else 0
    return [{i: a[i][j] for i in range(len(a)) if a[i][j]} for j in range(n)]


def determinantal_factors(a):
    """Invariant factors from gcds of minors."""
    m, n = len(a), len(a[0])
    M = sympy.Matrix(a)
    divisors = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rs in combinations(range(m), k):
            for cs in combinations(range(n), k):
                g = gcd(g, int(M.extract(list(rs), list(cs)).det()))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[i] // divisors[i - 1] for i in range(1, len(divisors))]


matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n),
                           min_size=m, max_size=m)))

sparse_pm = st.integers(1, 6).flatmap(
    lambda m: st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.sampled_from([0, 0, 1, -1]), min_size=n, max_size=n),
                           min_size=m, max_size=m)))


def test_diag_example():
    assert smith_form([[2, 0], [0, 3]]).diagonal == [1, 6]
    assert invariant_factors(to_cols([[2, 0], [0, 3]])) == [1, 6]


def test_zero_and_empty():
    assert smith_form([[0, 0], [0, 0]]).diagonal == []
    assert smith_form([]).diagonal == []
    assert invariant_factors([{}, {}]) == []
    assert rank_mod_p([], 7) == 0


def test_torsion_example():
    a = [[1, 1, 0], [1, -1, 0], [0, 0, 3]]
    assert smith_form(a).diagonal == [1, 1, 6]
    assert smith_form(a).diagonal == determinantal_factors(a)
    assert rank_mod_p(to_cols(a), 2) == 2
    assert rank_mod_p(to_cols(a), 3) == 2
    assert rank_mod_p(to_cols(a), 5) == 3


@given(matrices)
def test_smith_against_minors(a):
    want = determinantal_factors(a)
    assert smith_form(a).diagonal == want
    assert invariant_factors(to_cols(a), limit=None) == want


@given(matrices)
def test_transforms(a):
    s = smith_form(a, transforms=True)
    m, n = len(a), len(a[0])
    D = np.array(s.U, dtype=object) @ np.array(a, dtype=object) @ np.array(s.V, dtype=object)
    want = np.zeros((m, n), dtype=object)
    for i, f in enumerate(s.diagonal):
        want[i, i] = f
    assert (D == want).all()
    assert (np.array(s.V, dtype=object) @ np.array(s.Vinv, dtype=object)
            == np.eye(n, dtype=int)).all()
    assert abs(sympy.Matrix(s.U).det()) == 1


@given(sparse_pm)
def test_ranks(a):
    want = sympy.Matrix(a).rank()
    cols = to_cols(a)
    assert rank_exact(cols) == want
    for p in (2, 3, 2147483647):
        assert rank_mod_p(cols, p) <= want
    assert rank_mod_p(cols, 2147483647) == want


@given(sparse_pm)
def test_sparse_factors(a):
    assert invariant_factors(to_cols(a)) == determinantal_factors(a)


def test_exact_limit():
    cols = [{i: 1} for i in range(10)]
    with pytest.raises(CapacityError):
        rank_exact(cols, limit=5)
    assert rank_exact(cols, limit=None) == 10


def test_mat_vec():
    assert mat_vec([[1, 2], [3, 4]], [1, -1]) == [-1, -1]
