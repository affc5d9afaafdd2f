"""Named consistency checks, each returning (passed, details)."""
from __future__ import annotations

from itertools import permutations, product
from math import factorial

from .complex import Chain, FamilyComplex, boundary_graph, build_complex
from .graphs import GraphFamily, LabeledGraph, edge_list
from .homology import (
    RankMode,
    boundary_witness,
    homology,
    is_cycle,
    verify_basis,
)
from .invariants.chords import weight_space, weight_space_dim_modular
from .invariants.symmetry import invariant_bound, invariant_subspace_dim
from .invariants.xi import check_lambda, xi_degree, xi_rank

CONNECTED = GraphFamily.connected()
TWO_CONNECTED = GraphFamily(2)
K4 = LabeledGraph.from_edges(4, edge_list(4))
PAIRINGS = (((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3)))


def linear_graphs(k: int) -> list[Chain]:
    """Paths through all k nodes starting at node 1, as unit chains."""
    out = []
    for rest in permutations(range(2, k + 1)):
        order = (1, *rest)
        g = LabeledGraph.from_edges(k, zip(order, order[1:]))
        out.append(Chain.from_graphs(CONNECTED, {g: 1}))
    return out


def pairing_chains() -> list[Chain]:
    """For each split of the four nodes into two pairs, the cycle
    (K4 minus one pair edge) +- (K4 minus the other)."""
    out = []
    for e, f in PAIRINGS:
        a, b = K4.remove_edge(e), K4.remove_edge(f)
        for s in (1, -1):
            c = Chain.from_graphs(TWO_CONNECTED, {a: 1, b: s})
            if is_cycle(c):
                out.append(c)
                break
    return out


def pairing_relation() -> tuple[tuple[int, ...], Chain] | None:
    """Signs e_j with sum e_j c_j equal to the boundary of K4."""
    chains = pairing_chains()
    target = boundary_graph(K4, TWO_CONNECTED)
    for signs in product((1, -1), repeat=3):
        total = signs[0] * chains[0]
        for s, c in zip(signs[1:], chains[1:]):
            total = total + s * c
        if total == target:
            return signs, total
    return None


def _summary(h) -> dict:
    return {"betti": {str(d): b for d, b in sorted(h.betti.items())},
            "torsion": {str(d): t for d, t in sorted(h.torsion.items())}}


def _theorem(family: GraphFamily, degree, rank, max_nodes: int, threads=None):
    rows, ok = [], True
    for k in range(3, max_nodes + 1):
        mode = RankMode.exact() if k <= 6 else RankMode.certified()
        h = homology(build_complex(k, family), mode, threads=threads)
        good = h.betti == {degree(k): rank(k)} and not h.torsion
        ok &= good
        rows.append({"k": k, "mode": mode.kind, **_summary(h), "expected": {str(degree(k)): rank(k)},
                     "passed": good})
    return ok, rows


def check_theorem1(max_nodes: int = 6, threads=None):
    return _theorem(CONNECTED, lambda k: k - 2, lambda k: factorial(k - 1), max_nodes, threads)


def check_theorem2(max_nodes: int = 6, threads=None):
    return _theorem(TWO_CONNECTED, lambda k: 2 * k - 4, lambda k: factorial(k - 2), max_nodes, threads)


def check_theorem1b(max_nodes: int = 6):
    rows, ok = [], True
    for k in range(3, max_nodes + 1):
        good = verify_basis(build_complex(k, CONNECTED), linear_graphs(k), k - 2)
        ok &= good
        rows.append({"k": k, "candidates": factorial(k - 1), "passed": good})
    return ok, rows


def _counts(X: FamilyComplex) -> dict:
    return {str(d): X.generator_count(d) for d in X.degrees if X.generator_count(d)}


def check_example1():
    X1, X2 = build_complex(3, CONNECTED), build_complex(3, TWO_CONNECTED)
    h1, h2 = homology(X1), homology(X2)
    details = {"connected": {"counts": _counts(X1), **_summary(h1)},
               "2-connected": {"counts": _counts(X2), **_summary(h2)}}
    ok = (_counts(X1) == {"1": 3, "2": 1} and h1.betti == {1: 2} and not h1.torsion
          and _counts(X2) == {"2": 1} and h2.betti == {2: 1} and not h2.torsion)
    return ok, details


def check_example2():
    X = build_complex(4, TWO_CONNECTED)
    h = homology(X)
    chains = pairing_chains()
    pairs = {f"{a}{b}": verify_basis(X, [chains[a], chains[b]], 4)
             for a in range(3) for b in range(a + 1, 3)}
    all_three = verify_basis(X, chains, 4)
    relation = pairing_relation()
    witness = boundary_witness(X, relation[1]) if relation else None
    details = {"counts": _counts(X), **_summary(h), "chains": [c.encode() for c in chains],
               "pairs_pass": pairs, "all_three_pass": all_three,
               "witness": witness.encode() if witness is not None else None}
    ok = (_counts(X) == {"3": 3, "4": 6, "5": 1} and h.betti == {4: 2} and not h.torsion
          and len(chains) == 3 and all(pairs.values()) and not all_three and witness is not None)
    return ok, details


def check_pairing_relation():
    X = build_complex(4, TWO_CONNECTED)
    relation = pairing_relation()
    if relation is None:
        return False, {"signs": None}
    signs, total = relation
    witness = boundary_witness(X, total)
    singles = [boundary_witness(X, c) is None for c in pairing_chains()]
    ok = witness is not None and witness.items() in ([(K4, 1)], [(K4, -1)]) and all(singles)
    return ok, {"signs": list(signs), "witness": witness.encode() if witness else None,
                "single_chains_nonbounding": singles}


def multiindices(max_size: int) -> list[tuple[int, ...]]:
    out = []

    def rec(left, largest, acc):
        if acc:
            out.append(tuple(acc))
        for a in range(min(largest, left), 1, -1):
            rec(left - a, a, acc + [a])

    rec(max_size, max_size, [])
    return sorted(out, key=lambda p: (sum(p), p))


def check_corollary1(max_size: int = 8):
    rows, ok = [], True
    for parts in multiindices(max_size):
        good, h = check_lambda(parts)
        ok &= good
        rows.append({"parts": list(parts), **_summary(h),
                     "expected": {str(xi_degree(parts)): xi_rank(parts)}, "passed": good})
    return ok, rows


def check_prop8prime(max_order: int = 4):
    rows, ok = [], True
    for i in range(2, max_order + 1):
        dim = invariant_subspace_dim(i)
        good = dim <= invariant_bound(i) and (i != 2 or dim == 1)
        ok &= good
        rows.append({"order": i, "invariant_dim": dim, "bound": invariant_bound(i), "passed": good})
    return ok, rows


def check_weight_spaces(max_order: int = 5):
    rows, ok = [], True
    known = {1: 0, 2: 1, 3: 1}
    for i in range(1, max_order + 1):
        exact = weight_space(i)[0]
        modular = weight_space_dim_modular(i)
        good = all(m == exact for m in modular) and known.get(i, exact) == exact
        ok &= good
        rows.append({"order": i, "dim": exact, "modular": modular, "passed": good})
    return ok, rows


CHECKS = {
    "theorem1": check_theorem1,
    "theorem1b": check_theorem1b,
    "theorem2": check_theorem2,
    "example1": check_example1,
    "example2": check_example2,
    "fig1-relation": check_pairing_relation,
    "corollary1": check_corollary1,
    "prop8prime-bound": check_prop8prime,
    "weight-spaces": check_weight_spaces,
}
