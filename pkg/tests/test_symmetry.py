from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gch.complex import Chain, boundary_chain, build_complex
from gch.errors import CapacityError, InputError
from gch.graphs import GraphFamily
from gch.homology import is_cycle
from gch.invariants.symmetry import (
    act,
    class_dimensions,
    invariant_bound,
    invariant_subspace_dim,
    power,
    rotation,
    rotation_matrix,
)

TWO = GraphFamily(2)


def test_rotation():
    assert rotation(4) == [2, 3, 4, 1]
    assert power(rotation(4), 4) == [1, 2, 3, 4]
    assert power(rotation(5), 2) == [3, 4, 5, 1, 2]


@given(st.data())
def test_act_commutes_with_boundary(data):
    X = build_complex(5, TWO)
    d = data.draw(st.sampled_from([d for d in X.degrees if X.generator_count(d)]))
    gens = X.generators(d).tolist()
    picks = data.draw(st.lists(st.sampled_from(gens), min_size=1, max_size=4, unique=True))
    coefs = data.draw(st.lists(st.integers(-2, 2), min_size=len(picks), max_size=len(picks)))
    c = Chain((5,), TWO, d, dict(zip(picks, coefs)))
    perm = list(data.draw(st.permutations(range(1, 6))))
    assert act(boundary_chain(c), perm) == boundary_chain(act(c, perm))


def test_act_group_law():
    X = build_complex(4, TWO)
    c = Chain((4,), TWO, 4, {int(m): 1 for m in X.generators(4)})
    for p in permutations(range(1, 5)):
        for q in ([2, 1, 3, 4], [2, 3, 4, 1]):
            pq = [p[x - 1] for x in q]
            assert act(act(c, q), p) == act(c, pq)


@pytest.mark.parametrize("i", [2, 3, 4])
def test_rotation_matrix_order(i):
    R = np.array(rotation_matrix(i), dtype=object)
    acc = np.eye(len(R), dtype=object)
    for _ in range(i + 1):
        acc = acc @ R
    assert (acc == np.eye(len(R), dtype=int)).all()
    assert abs(int(round(np.linalg.det(R.astype(float))))) == 1


@pytest.mark.parametrize("i,want", [(2, 1), (3, 1), (4, 2)])
def test_invariant_dims(i, want):
    assert invariant_subspace_dim(i) == want == invariant_subspace_dim(i, "trace")
    assert want <= invariant_bound(i)


def test_rotated_cycles_stay_cycles():
    from gch.homology import cycle_representatives
    X = build_complex(4, TWO)
    for z in cycle_representatives(X, 4).representatives:
        assert is_cycle(act(z, rotation(4)))


def test_limits():
    with pytest.raises(CapacityError):
        rotation_matrix(5)
    with pytest.raises(InputError):
        invariant_subspace_dim(1)
    with pytest.raises(InputError):
        invariant_subspace_dim(3, "guess")
    with pytest.raises(InputError):
        act(Chain((3, 3), TWO, 5, {}), [1, 2, 3])


def test_class_dimensions():
    assert class_dimensions(2, 3) == [0]
    assert class_dimensions(3, 3) == [0, 1]
    assert class_dimensions(1, 7) == []
    assert class_dimensions(2, 5) == [4]
    assert class_dimensions(3, 4) == [3, 4]
    for bad in ((4, 3), (2, 2), (0, 3)):
        with pytest.raises(InputError):
            class_dimensions(*bad)
