"""Chain complexes spanned by the members of a monotone graph family.

A complex may carry several node groups. Its edge slots are then the lex
slots of the first group followed by those of the second and so on, and a
generator is a tuple holding one graph per group (every graph nonempty and
in the family). With a single group generators are plain graphs. In both
cases a generator with e edges sits in degree e - 1, and faces that leave
the family are dropped.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Union

import numpy as np

from .errors import CapacityError, InputError
from .graphs import (
    MAX_TABLE_BITS,
    GraphFamily,
    LabeledGraph,
    bits,
    membership_table,
    slot_count,
)

DEFAULT_MAX_GENERATORS = 2_000_000

Key = Union[LabeledGraph, tuple]


class Layout:
    """Edge-slot layout of a tuple of node groups."""

    def __init__(self, groups: tuple[int, ...]):
        if not groups:
            raise InputError("at least one node group is required")
        self.groups = tuple(int(a) for a in groups)
        self.sizes = [slot_count(a) for a in self.groups]
        self.offsets = [sum(self.sizes[:i]) for i in range(len(self.groups))]
        self.n = sum(self.sizes)

    def __eq__(self, other):
        return isinstance(other, Layout) and self.groups == other.groups

    def __hash__(self):
        return hash(self.groups)

    def split(self, mask: int) -> list[int]:
        return [(mask >> o) & ((1 << s) - 1) for o, s in zip(self.offsets, self.sizes)]

    def key(self, mask: int) -> Key:
        parts = [LabeledGraph(a, m) for a, m in zip(self.groups, self.split(mask))]
        return parts[0] if len(parts) == 1 else tuple(parts)

    def mask(self, key: Key) -> int:
        graphs = (key,) if isinstance(key, LabeledGraph) else tuple(key)
        if tuple(g.k for g in graphs) != self.groups:
            raise InputError(f"{key!r} does not match node groups {self.groups}")
        return sum(g.mask << o for g, o in zip(graphs, self.offsets))

    def encode(self, mask: int) -> str:
        key = self.key(mask)
        graphs = (key,) if isinstance(key, LabeledGraph) else key
        return "|".join(g.encode() for g in graphs)


def _in_family(layout: Layout, family: GraphFamily, mask: int) -> bool:
    for a, m in zip(layout.groups, layout.split(mask)):
        if m == 0 and len(layout.groups) > 1:
            return False
        if not family.contains(LabeledGraph(a, m)):
            return False
    return mask != 0


def _face_terms(mask: int) -> Iterator[tuple[int, int]]:
    for p, s in enumerate(bits(mask)):
        yield mask & ~(1 << s), (-1) ** p


@dataclass(frozen=True, eq=False)
class Chain:
    """Integer combination of generators of one degree."""

    groups: tuple[int, ...]
    family: GraphFamily
    degree: int
    terms: Mapping[int, int] = field(default_factory=dict)  # mask -> coefficient

    def __post_init__(self):
        clean = {int(m): int(c) for m, c in sorted(self.terms.items()) if c}
        for m in clean:
            if m.bit_count() != self.degree + 1:
                raise InputError(f"term of degree {m.bit_count() - 1} in a degree {self.degree} chain")
        object.__setattr__(self, "terms", clean)

    @classmethod
    def from_graphs(cls, family: GraphFamily, items: Mapping[Key, int] | list[tuple[Key, int]],
                    degree: int | None = None) -> Chain:
        pairs = list(items.items()) if isinstance(items, Mapping) else list(items)
        if not pairs:
            if degree is None:
                raise InputError("an empty chain needs an explicit degree")
            raise InputError("an empty chain needs node groups; use Chain(...) directly")
        first = pairs[0][0]
        groups = (first.k,) if isinstance(first, LabeledGraph) else tuple(g.k for g in first)
        layout = Layout(groups)
        terms: dict[int, int] = {}
        for key, c in pairs:
            m = layout.mask(key)
            terms[m] = terms.get(m, 0) + c
        if degree is None:
            degree = pairs[0][0].edge_count - 1 if isinstance(first, LabeledGraph) else sum(
                g.edge_count for g in first) - 1
        return cls(groups, family, degree, terms)

    @property
    def layout(self) -> Layout:
        return Layout(self.groups)

    @property
    def k(self) -> int:
        return self.groups[0] if len(self.groups) == 1 else sum(self.groups)

    def items(self) -> list[tuple[Key, int]]:
        lay = self.layout
        return [(lay.key(m), c) for m, c in self.terms.items()]

    def coefficient(self, key: Key) -> int:
        return self.terms.get(self.layout.mask(key), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def _compatible(self, other: Chain) -> None:
        if (self.groups, self.degree) != (other.groups, other.degree):
            raise InputError("chains live in different chain groups")

    def __add__(self, other: Chain) -> Chain:
        self._compatible(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Chain(self.groups, self.family, self.degree, terms)

    def __neg__(self) -> Chain:
        return Chain(self.groups, self.family, self.degree, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Chain) -> Chain:
        return self + (-other)

    def __rmul__(self, scalar: int) -> Chain:
        return Chain(self.groups, self.family, self.degree,
                     {m: scalar * c for m, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return (self.groups, self.degree, self.terms) == (other.groups, other.degree, other.terms)

    def encode(self) -> str:
        """'1*3:1-3;2-3 - 1*3:1-2;2-3'; groups are separated by '|'."""
        if not self.terms:
            return "0"
        lay = self.layout
        out = []
        for m, c in self.terms.items():
            term = f"{abs(c)}*{lay.encode(m)}"
            if not out:
                out.append(term if c > 0 else "-" + term)
            else:
                out.append(("+ " if c > 0 else "- ") + term)
        return " ".join(out)

    def __str__(self):
        return self.encode()

    @classmethod
    def parse(cls, text: str, family: GraphFamily, groups: tuple[int, ...] | None = None,
              degree: int | None = None) -> Chain:
        text = text.strip()
        if text == "0":
            if groups is None or degree is None:
                raise InputError("the zero chain needs groups and degree")
            return cls(tuple(groups), family, degree, {})
        tokens = text.replace("+ ", "+").replace("- ", "-").split()
        pairs = []
        for tok in tokens:
            sign = -1 if tok.startswith("-") else 1
            tok = tok.lstrip("+-")
            coef, star, body = tok.partition("*")
            if not star:
                raise InputError(f"cannot parse chain term {tok!r}")
            try:
                c = sign * int(coef)
            except ValueError as exc:
                raise InputError(f"bad coefficient in {tok!r}") from exc
            graphs = tuple(LabeledGraph.parse(p) for p in body.split("|"))
            pairs.append((graphs[0] if len(graphs) == 1 else graphs, c))
        chain = cls.from_graphs(family, pairs)
        if groups is not None and chain.groups != tuple(groups):
            raise InputError(f"chain groups {chain.groups} differ from {tuple(groups)}")
        return chain


def boundary_terms(mask: int, keep) -> dict[int, int]:
    out: dict[int, int] = {}
    for face, sign in _face_terms(mask):
        if face and keep(face):
            out[face] = out.get(face, 0) + sign
    return out


def boundary_graph(g: LabeledGraph, family: GraphFamily) -> Chain:
    """Alternating sum of the one-edge deletions of g that stay in the family."""
    family.validate(g.k)
    if not family.contains(g):
        raise InputError(f"{g} is not in the {family.name} family")
    if g.mask == 0:
        raise InputError("the empty graph is not a generator")
    lay = Layout((g.k,))
    terms = boundary_terms(g.mask, lambda m: _in_family(lay, family, m))
    return Chain((g.k,), family, g.edge_count - 2, terms)


def boundary_chain(c: Chain, quotient: bool = True) -> Chain:
    """Boundary of a chain. With quotient=False no face is discarded."""
    lay = c.layout
    if quotient:
        keep = lambda m: _in_family(lay, c.family, m)  # noqa: E731
        family = c.family
    else:
        keep = lambda m: True  # noqa: E731
        family = GraphFamily.all()
    terms: dict[int, int] = {}
    for m, coef in c.terms.items():
        for face, s in boundary_terms(m, keep).items():
            terms[face] = terms.get(face, 0) + s * coef
    return Chain(c.groups, family, c.degree - 1, terms)


@dataclass(frozen=True, eq=False)
class BoundaryMatrix:
    """Sparse integer matrix of the boundary from degree d to degree d - 1."""

    degree: int
    shape: tuple[int, int]
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    @property
    def nnz(self) -> int:
        return int(self.vals.shape[0])

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, np.int64)
        np.add.at(out, (self.rows, self.cols), self.vals)
        return out

    def columns(self) -> list[dict[int, int]]:
        cols: list[dict[int, int]] = [dict() for _ in range(self.shape[1])]
        for r, c, v in zip(self.rows.tolist(), self.cols.tolist(), self.vals.tolist()):
            cols[c][r] = v
        return cols

    def to_triplets(self) -> str:
        lines = [f"{self.shape[0]} {self.shape[1]}"]
        lines += [f"{r} {c} {v}" for r, c, v in zip(self.rows.tolist(), self.cols.tolist(), self.vals.tolist())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_triplets(cls, text: str, degree: int = 0) -> BoundaryMatrix:
        lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        try:
            shape = (int(lines[0][0]), int(lines[0][1]))
            data = np.array([[int(x) for x in ln] for ln in lines[1:]], np.int64).reshape(-1, 3)
        except (ValueError, IndexError) as exc:
            raise InputError("malformed triplet matrix") from exc
        return cls(degree, shape, data[:, 0], data[:, 1], data[:, 2])


class FamilyComplex:
    """Lazily materialised complex over a tuple of node groups."""

    def __init__(self, groups: tuple[int, ...], family: GraphFamily,
                 max_generators: int = DEFAULT_MAX_GENERATORS):
        self.layout = Layout(tuple(groups))
        self.family = family
        for a in self.layout.groups:
            family.validate(a)
        if self.layout.n > MAX_TABLE_BITS:
            raise CapacityError(
                f"{self.layout.n} edge slots exceed the bitmap bound of {MAX_TABLE_BITS}")
        self.max_generators = max_generators
        self._gens: dict[int, np.ndarray] = {}
        self._bd: dict[int, BoundaryMatrix] = {}

    @property
    def groups(self) -> tuple[int, ...]:
        return self.layout.groups

    @property
    def k(self) -> int:
        return self.groups[0] if len(self.groups) == 1 else sum(self.groups)

    @property
    def n_slots(self) -> int:
        return self.layout.n

    @cached_property
    def table(self) -> np.ndarray:
        from ._kernels import combine_tables

        tables = []
        for a in self.groups:
            t = membership_table(a, self.family)
            if len(self.groups) > 1:
                t = t.copy()
                t[0] = 0
            tables.append(t)
        out = combine_tables(tables) if len(tables) > 1 else tables[0].copy()
        out[0] = 0
        return out

    @cached_property
    def counts(self) -> np.ndarray:
        """counts[d] is the number of generators in degree d."""
        from ._kernels import degree_counts

        return degree_counts(self.table, self.n_slots)[1:]

    @property
    def degrees(self) -> range:
        return range(self.n_slots)

    def generator_count(self, d: int) -> int:
        return int(self.counts[d]) if 0 <= d < self.n_slots else 0

    def euler_characteristic(self) -> int:
        return int(sum((-1) ** d * int(c) for d, c in enumerate(self.counts)))

    def contains(self, mask: int) -> bool:
        return 0 <= mask < self.table.shape[0] and bool(self.table[mask])

    def generators(self, d: int) -> np.ndarray:
        """Sorted int64 edge masks of the degree-d generators."""
        if d not in self._gens:
            count = self.generator_count(d)
            if count > self.max_generators:
                raise CapacityError(
                    f"degree {d} has {count} generators (bound {self.max_generators})")
            if count == 0:
                self._gens[d] = np.zeros(0, np.int64)
            else:
                masks = np.flatnonzero(self.table).astype(np.int64)
                self._gens[d] = masks[np.bitwise_count(masks) == d + 1]
        return self._gens[d]

    def keys(self, d: int) -> list[Key]:
        return [self.layout.key(int(m)) for m in self.generators(d)]

    def boundary_matrix(self, d: int) -> BoundaryMatrix:
        if d in self._bd:
            return self._bd[d]
        cols_g = self.generators(d)
        rows_g = self.generators(d - 1) if d > 0 else np.zeros(0, np.int64)
        shape = (rows_g.shape[0], cols_g.shape[0])
        r_all, c_all, v_all = [], [], []
        if shape[0] and shape[1]:
            col_idx = np.arange(shape[1], dtype=np.int64)
            for s in range(self.n_slots):
                bit = np.int64(1) << s
                sel = (cols_g & bit) != 0
                if not sel.any():
                    continue
                src = cols_g[sel]
                faces = src ^ bit
                pos = np.searchsorted(rows_g, faces)
                pos[pos >= shape[0]] = 0
                hit = rows_g[pos] == faces
                below = np.bitwise_count(src & (bit - 1))
                signs = np.where(below % 2 == 0, 1, -1).astype(np.int64)
                r_all.append(pos[hit])
                c_all.append(col_idx[sel][hit])
                v_all.append(signs[hit])
        if r_all:
            rows = np.concatenate(r_all)
            cols = np.concatenate(c_all)
            vals = np.concatenate(v_all)
            order = np.lexsort((rows, cols))
            rows, cols, vals = rows[order], cols[order], vals[order]
        else:
            rows = cols = vals = np.zeros(0, np.int64)
        bm = BoundaryMatrix(d, shape, rows, cols, vals)
        self._bd[d] = bm
        return bm

    def chain_vector(self, c: Chain) -> dict[int, int]:
        """Sparse coordinate vector of a chain over generators(c.degree)."""
        if c.groups != self.groups:
            raise InputError(f"chain groups {c.groups} differ from complex groups {self.groups}")
        gens = self.generators(c.degree)
        out = {}
        for m, coef in c.terms.items():
            i = int(np.searchsorted(gens, m))
            if i >= gens.shape[0] or gens[i] != m:
                raise InputError(f"{self.layout.encode(m)} is not a generator of the complex")
            out[i] = coef
        return out

    def vector_chain(self, d: int, vec: Mapping[int, int]) -> Chain:
        gens = self.generators(d)
        return Chain(self.groups, self.family, d, {int(gens[i]): c for i, c in vec.items() if c})

    def chain(self, items) -> Chain:
        c = Chain.from_graphs(self.family, items)
        if c.groups != self.groups:
            raise InputError("chain does not live in this complex")
        return c


def build_complex(k: int, family: GraphFamily,
                  max_generators: int = DEFAULT_MAX_GENERATORS) -> FamilyComplex:
    return FamilyComplex((k,), family, max_generators)


def lambda_complex(parts: tuple[int, ...],
                   max_generators: int = DEFAULT_MAX_GENERATORS) -> FamilyComplex:
    """Join of the 2-connected complexes of the given group sizes."""
    if not parts or any(a < 2 for a in parts):
        raise InputError(f"group sizes must be >= 2, got {parts}")
    return FamilyComplex(tuple(parts), GraphFamily(2), max_generators)
