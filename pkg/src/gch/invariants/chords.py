"""Linear chord diagrams, the 1T/4T relations and weight systems."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Mapping, Sequence

from ..errors import CapacityError, InputError
from ..linalg import invariant_factors, rank_mod_p

MAX_ORDER = 6
PRIMES = (2147483647, 2147483629)


@dataclass(frozen=True, order=True)
class ChordDiagram:
    """i chords pairing the points 1..2i; chords are sorted (p < q) pairs."""

    order: int
    chords: tuple[tuple[int, int], ...]

    def __post_init__(self):
        chords = tuple(sorted(tuple(sorted(c)) for c in self.chords))
        points = sorted(p for c in chords for p in c)
        if len(chords) != self.order or points != list(range(1, 2 * self.order + 1)):
            raise InputError(f"{chords} is not a chord diagram of order {self.order}")
        object.__setattr__(self, "chords", chords)

    @classmethod
    def parse(cls, text: str) -> ChordDiagram:
        try:
            head, sep, body = text.strip().partition(":")
            chords = [tuple(int(x) for x in part.split("-")) for part in filter(None, body.split(";"))]
            order = int(head)
        except ValueError as exc:
            raise InputError(f"cannot parse chord diagram {text!r}") from exc
        if not sep:
            raise InputError(f"cannot parse chord diagram {text!r}")
        return cls(order, tuple(chords))

    def encode(self) -> str:
        return f"{self.order}:" + ";".join(f"{p}-{q}" for p, q in self.chords)

    def __str__(self):
        return self.encode()

    def crosses(self, a: tuple[int, int], b: tuple[int, int]) -> bool:
        return a[0] < b[0] < a[1] < b[1] or b[0] < a[0] < b[1] < a[1]

    def has_isolated_chord(self) -> bool:
        return any(not any(self.crosses(c, d) for d in self.chords if d != c) for c in self.chords)

    def restrict(self, keep: Sequence[tuple[int, int]]) -> ChordDiagram:
        """Sub-diagram on the given chords, points renumbered in order."""
        pts = sorted(p for c in keep for p in c)
        pos = {p: i for i, p in enumerate(pts, 1)}
        return ChordDiagram(len(keep), tuple((pos[p], pos[q]) for p, q in keep))


def _matchings(points: list[int]) -> Iterator[list[tuple[int, int]]]:
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for i, q in enumerate(rest):
        for m in _matchings(rest[:i] + rest[i + 1:]):
            yield [(first, q)] + m


def _check_order(i: int) -> None:
    if not 0 <= i <= MAX_ORDER:
        raise CapacityError(f"order {i} is outside 0..{MAX_ORDER}")


@lru_cache(maxsize=None)
def enumerate_diagrams(i: int) -> tuple[ChordDiagram, ...]:
    """All (2i-1)!! diagrams of order i in lexicographic order of chords."""
    _check_order(i)
    return tuple(ChordDiagram(i, tuple(m)) for m in _matchings(list(range(1, 2 * i + 1))))


@lru_cache(maxsize=None)
def diagram_index(i: int) -> dict[ChordDiagram, int]:
    return {d: n for n, d in enumerate(enumerate_diagrams(i))}


@dataclass(frozen=True)
class TripleConfiguration:
    """Three points t1 < t2 < t3 to be joined plus i - 2 chords, on 2i - 1 points."""

    order: int
    triple: tuple[int, int, int]
    chords: tuple[tuple[int, int], ...]

    def split(self, c: int) -> tuple[ChordDiagram, ChordDiagram]:
        """Resolve the point triple[c] into two neighbours c- < c+.

        In the first diagram the smaller of the two other triple points is
        joined to c-, in the second to c+.
        """
        t = self.triple[c]
        shift = lambda p: p + 1 if p > t else p  # noqa: E731
        a, b = (shift(x) for n, x in enumerate(self.triple) if n != c)
        base = tuple((shift(p), shift(q)) for p, q in self.chords)
        plus = ChordDiagram(self.order, base + ((a, t), (b, t + 1)))
        minus = ChordDiagram(self.order, base + ((a, t + 1), (b, t)))
        return plus, minus


def triple_configurations(i: int) -> Iterator[TripleConfiguration]:
    if i < 2:
        return
    for triple in combinations(range(1, 2 * i), 3):
        rest = [p for p in range(1, 2 * i) if p not in triple]
        for m in _matchings(rest):
            yield TripleConfiguration(i, triple, tuple(m))


@lru_cache(maxsize=None)
def split_signs() -> tuple[int, int, int]:
    """Coefficient of each triangle vertex in the split boundary of the triangle."""
    from ..complex import Chain
    from ..graphs import GraphFamily, LabeledGraph
    from .xi import stu_boundary

    tri = LabeledGraph.from_edges(3, [(1, 2), (1, 3), (2, 3)])
    c = Chain.from_graphs(GraphFamily(2), {tri: 1})
    out = []
    for tau in (1, 2, 3):
        a, b = (x for x in (1, 2, 3) if x != tau)
        terms = stu_boundary((3,), 0, tau, c, ((a,), (b,))).terms
        (coef,) = terms.values()
        out.append(coef)
    return tuple(out)


@dataclass
class RelationSystem:
    order: int
    diagrams: tuple[ChordDiagram, ...]
    rows: list[dict[int, int]]
    kinds: list[str]

    def columns(self) -> list[dict[int, int]]:
        cols: list[dict[int, int]] = [dict() for _ in self.diagrams]
        for r, row in enumerate(self.rows):
            for c, v in row.items():
                cols[c][r] = v
        return cols

    def to_triplets(self) -> str:
        lines = [f"{len(self.rows)} {len(self.diagrams)}"]
        for r, row in enumerate(self.rows):
            lines += [f"{r} {c} {v}" for c, v in sorted(row.items())]
        return "\n".join(lines) + "\n"


def four_term_rows(i: int) -> RelationSystem:
    """1T rows (diagrams with an isolated chord) followed by 4T rows.

    For each triple configuration and split point c let
    D_c = s_c * (first - second) with s_c the split sign of c; the rows are
    D_1 - D_2 and D_2 - D_3.
    """
    diagrams = enumerate_diagrams(i)
    index = diagram_index(i)
    rows, kinds = [], []
    for n, d in enumerate(diagrams):
        if d.has_isolated_chord():
            rows.append({n: 1})
            kinds.append("1T")
    signs = split_signs()
    for cfg in triple_configurations(i):
        D = []
        for c in range(3):
            plus, minus = cfg.split(c)
            D.append({index[plus]: signs[c], index[minus]: -signs[c]})
        for x, y in ((0, 1), (1, 2)):
            row: dict[int, int] = dict(D[x])
            for col, v in D[y].items():
                row[col] = row.get(col, 0) - v
            row = {col: v for col, v in row.items() if v}
            if row:
                rows.append(row)
                kinds.append("4T")
    return RelationSystem(i, diagrams, rows, kinds)


@dataclass(frozen=True)
class WeightSystem:
    """Rational function on the order-i diagrams, listed as in enumerate_diagrams."""

    order: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.values)
        if len(vals) != len(enumerate_diagrams(self.order)):
            raise InputError("wrong number of values for this order")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_mapping(cls, i: int, values: Mapping[ChordDiagram, Fraction | int]) -> WeightSystem:
        index = diagram_index(i)
        vals = [Fraction(0)] * len(index)
        for d, v in values.items():
            vals[index[d]] = Fraction(v)
        return cls(i, tuple(vals))

    @classmethod
    def unit(cls) -> WeightSystem:
        return cls(0, (Fraction(1),))

    def __call__(self, d: ChordDiagram) -> Fraction:
        return self.values[diagram_index(self.order)[d]]

    def satisfies_relations(self) -> bool:
        system = four_term_rows(self.order)
        return all(sum(v * self.values[c] for c, v in row.items()) == 0 for row in system.rows)


def _nullspace(rows: list[dict[int, int]], n: int) -> list[list[Fraction]]:
    """Basis of {x : row . x = 0 for all rows} over Q, via sparse reduced echelon form."""
    pivots: dict[int, dict[int, Fraction]] = {}  # pivot column -> reduced row
    for row in rows:
        r = {c: Fraction(v) for c, v in row.items()}
        # pivot rows are fully reduced, so one pass clears every pivot column
        for c in [c for c in r if c in pivots]:
            f = r[c]
            for cc, v in pivots[c].items():
                x = r.get(cc, 0) - f * v
                if x:
                    r[cc] = x
                else:
                    r.pop(cc, None)
        if not r:
            continue
        p = min(r)
        inv = 1 / r[p]
        r = {c: v * inv for c, v in r.items()}
        for q, prow in pivots.items():
            f = prow.get(p)
            if f:
                for cc, v in r.items():
                    x = prow.get(cc, 0) - f * v
                    if x:
                        prow[cc] = x
                    else:
                        prow.pop(cc, None)
        pivots[p] = r
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for p, prow in pivots.items():
            if f in prow:
                vec[p] = -prow[f]
        basis.append(vec)
    return basis


@lru_cache(maxsize=None)
def weight_space(i: int) -> tuple[int, tuple[WeightSystem, ...]]:
    """Dimension and an exact basis of the weight systems of order i."""
    system = four_term_rows(i)
    basis = _nullspace(system.rows, len(system.diagrams))
    return len(basis), tuple(WeightSystem(i, tuple(v)) for v in basis)


def weight_space_dim_modular(i: int, primes: Sequence[int] = PRIMES) -> list[int]:
    """Dimension from the rank of the relation matrix modulo each prime."""
    system = four_term_rows(i)
    n = len(system.diagrams)
    cols = system.columns()
    return [n - rank_mod_p(cols, p) for p in primes]


def relation_invariant_factors(i: int) -> list[int]:
    """Smith invariant factors of the relation matrix (rows = relations)."""
    return invariant_factors(four_term_rows(i).columns(), limit=None)


def evaluate_product(w1: WeightSystem, w2: WeightSystem, d: ChordDiagram) -> Fraction:
    """Sum over splittings of the chords of d into parts of orders i1 and i2."""
    if d.order != w1.order + w2.order:
        raise InputError("diagram order must equal the sum of the weight system orders")
    total = Fraction(0)
    for left in combinations(d.chords, w1.order):
        right = [c for c in d.chords if c not in left]
        total += w1(d.restrict(left)) * w2(d.restrict(right))
    return total


def product(w1: WeightSystem, w2: WeightSystem) -> WeightSystem:
    i = w1.order + w2.order
    return WeightSystem(i, tuple(evaluate_product(w1, w2, d) for d in enumerate_diagrams(i)))
