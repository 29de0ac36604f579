"""Finite unitary magmas, maps between finite carriers, and basic constructions.

Elements are the indices ``0..size-1``.  The unit is stored explicitly and
need not be index 0; only :func:`enumerate_magmas` pins it there.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Callable, Iterable, Iterator, Sequence

from .report import StructuralError, ValidationReport


@dataclass(frozen=True)
class FiniteMagma:
    size: int
    unit: int
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.size < 1:
            raise StructuralError(f"magma size must be positive, got {self.size}")
        if not 0 <= self.unit < self.size:
            raise StructuralError(f"unit {self.unit} outside carrier of size {self.size}")
        table = tuple(tuple(int(v) for v in row) for row in self.table)
        if len(table) != self.size or any(len(row) != self.size for row in table):
            raise StructuralError(f"table is not {self.size}x{self.size}")
        for i, row in enumerate(table):
            for j, v in enumerate(row):
                if not 0 <= v < self.size:
                    raise StructuralError(f"table[{i}][{j}] = {v} is not an element")
        object.__setattr__(self, "table", table)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], unit: int = 0) -> FiniteMagma:
        return cls(len(rows), unit, tuple(tuple(r) for r in rows))

    @classmethod
    def from_function(cls, size: int, unit: int, op: Callable[[int, int], int]) -> FiniteMagma:
        return cls(size, unit, tuple(tuple(op(a, b) for b in range(size)) for a in range(size)))

    def op(self, a: int, b: int) -> int:
        return self.table[a][b]

    @property
    def elements(self) -> range:
        return range(self.size)

    def flat(self) -> tuple[int, ...]:
        return tuple(v for row in self.table for v in row)

    def __repr__(self) -> str:
        return f"FiniteMagma(size={self.size}, unit={self.unit}, table={[list(r) for r in self.table]})"


@dataclass(frozen=True)
class ElementMap:
    """A function ``{0..dom-1} -> {0..cod-1}`` given by its value list."""

    dom: int
    cod: int
    values: tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        if self.dom < 0 or self.cod < 0:
            raise StructuralError("map sizes must be non-negative")
        if len(values) != self.dom:
            raise StructuralError(f"map has {len(values)} values, expected {self.dom}")
        for i, v in enumerate(values):
            if not 0 <= v < self.cod:
                raise StructuralError(f"map value {v} at {i} outside codomain of size {self.cod}")
        object.__setattr__(self, "values", values)

    def __call__(self, i: int) -> int:
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return self.dom

    @classmethod
    def identity(cls, n: int) -> ElementMap:
        return cls(n, n, tuple(range(n)))

    @classmethod
    def constant(cls, dom: int, cod: int, value: int) -> ElementMap:
        return cls(dom, cod, (value,) * dom)

    @classmethod
    def of(cls, values: Sequence[int], cod: int) -> ElementMap:
        return cls(len(values), cod, tuple(values))

    def then(self, other: ElementMap) -> ElementMap:
        """``other ∘ self`` (apply self first)."""
        if self.cod != other.dom:
            raise StructuralError(f"cannot compose: codomain {self.cod} vs domain {other.dom}")
        return ElementMap(self.dom, other.cod, tuple(other.values[v] for v in self.values))

    def is_bijective(self) -> bool:
        return self.dom == self.cod and len(set(self.values)) == self.dom

    def inverse(self) -> ElementMap:
        if not self.is_bijective():
            raise ValueError("map is not a bijection")
        inv = [0] * self.dom
        for i, v in enumerate(self.values):
            inv[v] = i
        return ElementMap(self.dom, self.dom, tuple(inv))


@dataclass(frozen=True)
class StructureFlags:
    associative: bool
    left_loop: bool
    medial: bool
    commutative: bool


# -- verification ------------------------------------------------------------

def verify_unitary_magma(m: FiniteMagma) -> ValidationReport:
    report = ValidationReport()
    u = m.unit
    for i in m.elements:
        if m.table[u][i] != i:
            report.add("unit_left", i, got=m.table[u][i])
        if m.table[i][u] != i:
            report.add("unit_right", i, got=m.table[i][u])
    return report


def check_morphism(f: ElementMap, m1: FiniteMagma, m2: FiniteMagma) -> ValidationReport:
    """Report every failure of ``f`` to be a unitary magma morphism ``m1 -> m2``."""
    if f.dom != m1.size or f.cod != m2.size:
        raise StructuralError(
            f"map {f.dom}->{f.cod} does not match magmas {m1.size}->{m2.size}")
    report = ValidationReport()
    if f(m1.unit) != m2.unit:
        report.add("unit", m1.unit, got=f(m1.unit), expected=m2.unit)
    t1, t2, v = m1.table, m2.table, f.values
    for a in m1.elements:
        for b in m1.elements:
            lhs = v[t1[a][b]]
            rhs = t2[v[a]][v[b]]
            if lhs != rhs:
                report.add("hom", a, b, lhs=lhs, rhs=rhs)
    return report


def is_morphism(f: ElementMap, m1: FiniteMagma, m2: FiniteMagma) -> bool:
    if f.dom != m1.size or f.cod != m2.size or f(m1.unit) != m2.unit:
        return False
    t1, t2, v = m1.table, m2.table, f.values
    return all(v[t1[a][b]] == t2[v[a]][v[b]] for a in m1.elements for b in m1.elements)


# -- structural predicates ---------------------------------------------------

def associativity_witness(m: FiniteMagma) -> tuple[int, int, int] | None:
    t = m.table
    for a, b, c in product(m.elements, repeat=3):
        if t[t[a][b]][c] != t[a][t[b][c]]:
            return a, b, c
    return None


def is_associative(m: FiniteMagma) -> bool:
    return associativity_witness(m) is None


def is_commutative(m: FiniteMagma) -> bool:
    t = m.table
    return all(t[a][b] == t[b][a] for a in m.elements for b in m.elements)


def is_left_loop(m: FiniteMagma) -> bool:
    """Every right translation ``u -> u + b`` is a bijection."""
    n = m.size
    return all(len({m.table[u][b] for u in range(n)}) == n for b in range(n))


def is_loop(m: FiniteMagma) -> bool:
    n = m.size
    return is_left_loop(m) and all(len(set(row)) == n for row in m.table)


def is_medial(m: FiniteMagma) -> bool:
    t = m.table
    for x, y, z, w in product(m.elements, repeat=4):
        if t[t[x][y]][t[z][w]] != t[t[x][z]][t[y][w]]:
            return False
    return True


def classify_properties(m: FiniteMagma) -> StructureFlags:
    return StructureFlags(
        associative=is_associative(m),
        left_loop=is_left_loop(m),
        medial=is_medial(m),
        commutative=is_commutative(m),
    )


def left_difference(m: FiniteMagma, x: int, b: int) -> int:
    """The unique ``u`` with ``u + b = x`` in a left loop."""
    sols = [u for u in m.elements if m.table[u][b] == x]
    if len(sols) != 1:
        raise ValueError(f"{x} - {b} has {len(sols)} solutions; not a left loop")
    return sols[0]


# -- constructions -----------------------------------------------------------

def trivial_magma() -> FiniteMagma:
    return FiniteMagma(1, 0, ((0,),))


def cyclic_group(n: int) -> FiniteMagma:
    return FiniteMagma.from_function(n, 0, lambda a, b: (a + b) % n)


def direct_product(m1: FiniteMagma, m2: FiniteMagma) -> FiniteMagma:
    """Componentwise product; the pair ``(i, j)`` is encoded as ``i*m2.size + j``."""
    n2 = m2.size

    def op(a, b):
        i, j = divmod(a, n2)
        k, l = divmod(b, n2)
        return m1.table[i][k] * n2 + m2.table[j][l]

    return FiniteMagma.from_function(m1.size * n2, m1.unit * n2 + m2.unit, op)


def adjoin_poles(x: FiniteMagma) -> FiniteMagma:
    """Extend ``(X, ., 1)`` to ``X ⊔ {0, ∞}``.

    The new elements get indices ``x.size`` (zero) and ``x.size + 1``
    (infinity).  Both poles absorb ``X``, each is idempotent, and their
    product in either order is the unit of ``X``.
    """
    n = x.size
    zero, inf = n, n + 1

    def op(a, b):
        if a < n and b < n:
            return x.table[a][b]
        if a == x.unit:
            return b
        if b == x.unit:
            return a
        if a < n:
            return b
        if b < n:
            return a
        if a == b:
            return a
        return x.unit

    return FiniteMagma.from_function(n + 2, x.unit, op)


def adjoin_poles_map(f: ElementMap) -> ElementMap:
    """Extend a map ``X -> Y`` to ``X ⊔ {0,∞} -> Y ⊔ {0,∞}`` fixing the poles."""
    return ElementMap(f.dom + 2, f.cod + 2, f.values + (f.cod, f.cod + 1))


def restrict(m: FiniteMagma, subset: Iterable[int]) -> tuple[FiniteMagma, tuple[int, ...]]:
    """Restrict ``m`` to a closed subset containing the unit.

    Returns the submagma, relabelled ``0..k-1`` in increasing order of the
    original indices, together with the list of original indices.
    """
    elems = tuple(sorted(set(subset)))
    pos = {e: i for i, e in enumerate(elems)}
    if m.unit not in pos:
        raise ValueError("subset does not contain the unit")
    rows = []
    for a in elems:
        row = []
        for b in elems:
            c = m.table[a][b]
            if c not in pos:
                raise NotClosedError((a, b), c)
            row.append(pos[c])
        rows.append(tuple(row))
    return FiniteMagma(len(elems), pos[m.unit], tuple(rows)), elems


class NotClosedError(ValueError):
    def __init__(self, pair, result):
        super().__init__(f"{pair[0]} + {pair[1]} = {result} leaves the subset")
        self.pair = pair
        self.result = result


# -- enumeration and search --------------------------------------------------

def count_magmas(n: int) -> int:
    if n < 1:
        raise StructuralError("magma size must be at least 1")
    return n ** ((n - 1) ** 2)


def enumerate_magmas(n: int) -> Iterator[FiniteMagma]:
    """All unitary magmas on ``{0..n-1}`` with unit 0.

    Free entries are the ``(n-1)**2`` products of non-unit elements, varied
    in row-major lexicographic order.
    """
    if n < 1:
        raise StructuralError("magma size must be at least 1")
    free = [(a, b) for a in range(1, n) for b in range(1, n)]
    base = [[0] * n for _ in range(n)]
    for i in range(n):
        base[0][i] = base[i][0] = i
    for values in product(range(n), repeat=len(free)):
        for (a, b), v in zip(free, values):
            base[a][b] = v
        yield FiniteMagma(n, 0, tuple(tuple(r) for r in base))


def find_isomorphism(m1: FiniteMagma, m2: FiniteMagma) -> ElementMap | None:
    if m1.size != m2.size:
        return None
    n = m1.size
    others1 = [a for a in m1.elements if a != m1.unit]
    others2 = [a for a in m2.elements if a != m2.unit]
    t1, t2 = m1.table, m2.table
    for perm in permutations(others2):
        f = [0] * n
        f[m1.unit] = m2.unit
        for a, b in zip(others1, perm):
            f[a] = b
        if all(f[t1[a][b]] == t2[f[a]][f[b]] for a in range(n) for b in range(n)):
            return ElementMap(n, n, tuple(f))
    return None


def all_maps(dom: int, cod: int) -> Iterator[ElementMap]:
    for values in product(range(cod), repeat=dom):
        yield ElementMap(dom, cod, values)


def morphisms(m1: FiniteMagma, m2: FiniteMagma) -> Iterator[ElementMap]:
    """Every unitary magma morphism ``m1 -> m2``, by exhaustive search."""
    for f in all_maps(m1.size, m2.size):
        if is_morphism(f, m1, m2):
            yield f
