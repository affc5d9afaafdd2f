"""Homology of family complexes over Z, Q and F_p."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from .complex import BoundaryMatrix, Chain, FamilyComplex, boundary_chain
from .errors import CapacityError, CertificationError, InputError
from .linalg import (
    DENSE_LIMIT,
    EXACT_NNZ_LIMIT,
    invariant_factors,
    mat_vec,
    rank_exact,
    rank_mod_p,
    smith_form,
)

DEFAULT_PRIMES = (2147483647, 2147483629)


def _is_prime(p: int) -> bool:
    if not 2 <= p < 1 << 31:
        return False
    return all(p % q for q in range(2, isqrt(p) + 1))


@dataclass(frozen=True)
class RankMode:
    """kind is 'exact', 'modp' or 'certified'."""

    kind: str = "exact"
    primes: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("exact", "modp", "certified"):
            raise InputError(f"unknown rank mode {self.kind!r}")
        want = {"exact": 0, "modp": 1, "certified": 2}[self.kind]
        if len(self.primes) != want:
            raise InputError(f"{self.kind} mode takes {want} prime(s)")
        for p in self.primes:
            if not _is_prime(p):
                raise InputError(f"{p} is not a prime below 2**31")

    @classmethod
    def exact(cls) -> RankMode:
        return cls("exact")

    @classmethod
    def modp(cls, p: int = DEFAULT_PRIMES[0]) -> RankMode:
        return cls("modp", (p,))

    @classmethod
    def certified(cls, p1: int = DEFAULT_PRIMES[0], p2: int = DEFAULT_PRIMES[1]) -> RankMode:
        return cls("certified", (p1, p2))

    @property
    def label(self) -> str:
        return self.kind if self.kind == "exact" else f"{self.kind}:" + ",".join(map(str, self.primes))


@dataclass
class HomologySummary:
    betti: dict[int, int]
    torsion: dict[int, list[int]]
    mode: RankMode
    certified: bool
    ranks: dict[int, int] = field(default_factory=dict)
    counts: dict[int, int] = field(default_factory=dict)

    def betti_at(self, d: int) -> int:
        return self.betti.get(d, 0)

    def nonzero_degrees(self) -> list[int]:
        return sorted(d for d, b in self.betti.items() if b)

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * b for d, b in self.betti.items())


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("GCH_THREADS", "1")))
    except ValueError:
        raise InputError("GCH_THREADS must be an integer") from None


@dataclass(frozen=True)
class SmithNormalFormResult:
    invariant_factors: list[int]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_normal_form(M: BoundaryMatrix, limit: int | None = EXACT_NNZ_LIMIT) -> SmithNormalFormResult:
    return SmithNormalFormResult(invariant_factors(M.columns(), limit))


def rank(M: BoundaryMatrix, mode: RankMode = RankMode(), limit: int | None = EXACT_NNZ_LIMIT) -> int:
    if mode.kind == "exact":
        return rank_exact(M.columns(), limit)
    return _rank_and_torsion(M, mode, limit)[0]


def _rank_and_torsion(bm: BoundaryMatrix, mode: RankMode, limit: int | None):
    cols = bm.columns()
    if not bm.nnz:
        return 0, []
    if mode.kind == "exact":
        inv = invariant_factors(cols, limit)
        return len(inv), [f for f in inv if f > 1]
    ranks = [rank_mod_p(cols, p) for p in mode.primes]
    if len(set(ranks)) > 1:
        raise CertificationError(
            f"degree {bm.degree}: ranks {ranks} disagree for primes {mode.primes}")
    return ranks[0], []


def _morse(X: FamilyComplex):
    from .morse import MorseComplex

    m = getattr(X, "_morse", None)
    if m is None:
        m = MorseComplex(X)
        X._morse = m
    return m


def homology(X: FamilyComplex, mode: RankMode = RankMode(), method: str = "morse",
             threads: int | None = None, exact_limit: int | None = EXACT_NNZ_LIMIT) -> HomologySummary:
    """Betti numbers (and torsion in exact mode) of X.

    method='morse' reduces first and works on the critical cells;
    method='direct' uses the full boundary matrices.
    """
    if method == "morse":
        M = _morse(X)
        counts = {d: M.count(d) for d in M.degrees}
        matrix = M.boundary_matrix
    elif method == "direct":
        counts = {d: X.generator_count(d) for d in X.degrees if X.generator_count(d)}
        matrix = X.boundary_matrix
    else:
        raise InputError(f"unknown method {method!r}")
    degrees = sorted(counts)
    work = [d for d in degrees if d - 1 in counts]
    threads = threads or default_threads()

    def job(d):
        return _rank_and_torsion(matrix(d), mode, exact_limit)

    if threads > 1 and len(work) > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = dict(zip(work, pool.map(job, work)))
    else:
        results = {d: job(d) for d in work}
    ranks = {d: results[d][0] if d in results else 0 for d in degrees}
    betti, torsion = {}, {}
    for d in degrees:
        b = counts[d] - ranks[d] - ranks.get(d + 1, 0)
        if b:
            betti[d] = b
        tors = results[d + 1][1] if d + 1 in results else []
        if tors:
            torsion[d] = tors
    return HomologySummary(betti, torsion, mode, mode.kind != "modp", ranks, counts)


def rational_ranks(X: FamilyComplex) -> dict[int, int]:
    """Exact rank over Q of every full boundary map, from exact Betti numbers."""
    h = homology(X, RankMode.exact())
    ranks, prev = {}, 0
    for d in X.degrees:
        ranks[d] = prev
        prev = X.generator_count(d) - h.betti_at(d) - prev
    return ranks


def is_cycle(c: Chain) -> bool:
    return boundary_chain(c).is_zero()


def _check_chain(X: FamilyComplex, c: Chain) -> dict[int, int]:
    if c.family != X.family:
        raise InputError("chain and complex use different families")
    return X.chain_vector(c)


def _dense(X: FamilyComplex, d: int) -> list[list[int]]:
    rows, cols = X.generator_count(d - 1), X.generator_count(d)
    if rows * cols > DENSE_LIMIT:
        raise CapacityError(f"degree {d} boundary is {rows}x{cols}, above the dense bound")
    return X.boundary_matrix(d).to_dense().tolist() if rows and cols else [[0] * cols for _ in range(rows)]


def boundary_witness(X: FamilyComplex, c: Chain, over: str = "integers") -> Chain | None:
    """A chain x with boundary(x) = c, or None when none exists.

    Over the rationals the witness may need a common denominator; the
    returned chain is then scaled so that its boundary is a multiple of c.
    """
    if over not in ("integers", "rationals"):
        raise InputError(f"unknown coefficient ring {over!r}")
    vec = _check_chain(X, c)
    d = c.degree
    n_up = X.generator_count(d + 1)
    target = [vec.get(i, 0) for i in range(X.generator_count(d))]
    if not any(target):
        return Chain(X.groups, X.family, d + 1, {})
    if n_up == 0:
        return None
    snf = smith_form(_dense(X, d + 1), transforms=True)
    uc = mat_vec(snf.U, target)
    r = snf.rank
    if any(uc[r:]):
        return None
    if over == "integers":
        if any(uc[i] % snf.diagonal[i] for i in range(r)):
            return None
        y = [uc[i] // snf.diagonal[i] for i in range(r)] + [0] * (n_up - r)
    else:
        ys = [Fraction(uc[i], snf.diagonal[i]) for i in range(r)]
        den = 1
        for q in ys:
            den = den * q.denominator // gcd(den, q.denominator)
        y = [int(q * den) for q in ys] + [0] * (n_up - r)
    x = mat_vec(snf.V, y)
    return X.vector_chain(d + 1, dict(enumerate(x)))


def is_boundary(X: FamilyComplex, c: Chain, over: str = "integers") -> bool:
    return boundary_witness(X, c, over) is not None


@dataclass
class HomologyBasis:
    """Integral representatives of the free part of H_d(X).

    Coordinates of a cycle are integer up to torsion.
    """

    X: FamilyComplex
    degree: int
    representatives: list[Chain]
    torsion: list[int]
    _kernel_rows: list[list[int]]
    _U: list[list[int]]
    _rank: int

    def coordinates(self, z: Chain) -> list[int]:
        """Coordinates of the class of cycle z in the representative basis."""
        if not is_cycle(z):
            raise InputError("coordinates are defined for cycles only")
        vec = _check_chain(self.X, z)
        v = [vec.get(i, 0) for i in range(self.X.generator_count(self.degree))]
        kappa = mat_vec(self._kernel_rows, v)
        return mat_vec(self._U, kappa)[self._rank:self._rank + len(self.representatives)]


def cycle_representatives(X: FamilyComplex, d: int) -> HomologyBasis:
    """Cycles whose classes form a basis of H_d(X) modulo torsion.

    The kernel lattice of the boundary is taken from a Smith form; the image
    of the next boundary is expressed in that lattice and a second Smith form
    splits off its complement.
    """
    n = X.generator_count(d)
    if n == 0:
        return HomologyBasis(X, d, [], [], [], [], 0)
    down = _dense(X, d) if d > 0 and X.generator_count(d - 1) else [[0] * n]
    s1 = smith_form(down, transforms=True)
    r1 = s1.rank
    kernel_rows = s1.Vinv[r1:]  # rows of V^-1 giving kernel coordinates
    K = [[s1.V[i][j] for j in range(r1, n)] for i in range(n)]
    z = n - r1
    if X.generator_count(d + 1):
        B = _dense(X, d + 1)
        Y = [[sum(kr[t] * B[t][j] for t in range(n) if kr[t]) for j in range(len(B[0]))]
             for kr in kernel_rows]
    else:
        Y = [[] for _ in range(z)]
    if Y and Y[0]:
        s2 = smith_form(Y, transforms=True)
        U, r2, diag = s2.U, s2.rank, s2.diagonal
    else:
        U, r2, diag = [[int(i == j) for j in range(z)] for i in range(z)], 0, []
    Uinv = _unimodular_inverse(U)
    reps = []
    for col in range(r2, z):
        vec = [sum(K[i][t] * Uinv[t][col] for t in range(z) if Uinv[t][col]) for i in range(n)]
        reps.append(X.vector_chain(d, dict(enumerate(vec))))
    return HomologyBasis(X, d, reps, [f for f in diag if f > 1], kernel_rows, U, r2)


def _unimodular_inverse(U: list[list[int]]) -> list[list[int]]:
    n = len(U)
    s = smith_form(U, transforms=True)
    # U = S^-1 diag(+-1) T^-1 and here diag is all ones: U^-1 = V * S
    assert s.diagonal == [1] * n
    return [[sum(s.V[i][t] * s.U[t][j] for t in range(n)) for j in range(n)] for i in range(n)]


def verify_basis(X: FamilyComplex, candidates: list[Chain], d: int,
                 prime: int = DEFAULT_PRIMES[0]) -> bool:
    """True iff the candidates are cycles whose classes form a basis of H_d over Q."""
    h = homology(X, RankMode.exact())
    if len(candidates) != h.betti_at(d):
        return False
    if any(c.degree != d or not is_cycle(c) for c in candidates):
        return False
    if not candidates:
        return True
    n = X.generator_count(d)
    r_d = rational_ranks(X)[d]
    kernel_dim = n - r_d
    up = X.boundary_matrix(d + 1).columns() if X.generator_count(d + 1) else []
    cols = up + [_check_chain(X, c) for c in candidates]
    # rank_p <= rank_Q <= kernel_dim, so reaching kernel_dim mod p settles it
    if rank_mod_p(cols, prime) == kernel_dim:
        return True
    return rank_exact(cols, limit=None) == kernel_dim
