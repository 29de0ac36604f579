"""B-actions ``phi: X x B x X x B -> X``, semidirect products and the
morphism criteria attached to them."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

from .magma import ElementMap, FiniteMagma, check_morphism, is_morphism, verify_unitary_magma
from .points import RetractionPoint
from .report import PreconditionError, StructuralError, ValidationReport


@dataclass(frozen=True)
class Action:
    """A dense action table, row-major over ``(x, b, x', b')``."""

    B: FiniteMagma
    x_size: int
    zero: int
    phi: tuple[int, ...]

    def __post_init__(self):
        nx, nb = self.x_size, self.B.size
        if nx < 1:
            raise StructuralError("X must be non-empty")
        if not 0 <= self.zero < nx:
            raise StructuralError(f"zero {self.zero} outside X of size {nx}")
        phi = tuple(int(v) for v in self.phi)
        if len(phi) != nx * nb * nx * nb:
            raise StructuralError(f"phi has {len(phi)} entries, expected {nx * nb * nx * nb}")
        if any(not 0 <= v < nx for v in phi):
            raise StructuralError("phi value outside X")
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_function(cls, B: FiniteMagma, x_size: int, zero: int, fn) -> Action:
        r = range(x_size)
        return cls(B, x_size, zero, tuple(
            fn(x, b, x2, b2) for x, b, x2, b2 in product(r, B.elements, r, B.elements)))

    def index(self, x: int, b: int, x2: int, b2: int) -> int:
        nx, nb = self.x_size, self.B.size
        return ((x * nb + b) * nx + x2) * nb + b2

    def __call__(self, x: int, b: int, x2: int, b2: int) -> int:
        nx, nb = self.x_size, self.B.size
        return self.phi[((x * nb + b) * nx + x2) * nb + b2]

    def n00(self, x: int, b: int) -> int:
        """``phi(x, 0, 0, b)``."""
        return self(x, self.B.unit, self.zero, b)

    def x_magma(self) -> FiniteMagma:
        """``X`` with ``x + x' = phi(x, 0, x', 0)`` and unit ``zero``."""
        u = self.B.unit
        return FiniteMagma.from_function(self.x_size, self.zero, lambda x, y: self(x, u, y, u))

    def same_base(self, other: Action) -> bool:
        return self.B == other.B


def product_action(X: FiniteMagma, B: FiniteMagma) -> Action:
    """``phi(x, b, x', b') = x + x'``; its semidirect product is ``X x B``."""
    return Action.from_function(B, X.size, X.unit, lambda x, b, x2, b2: X.table[x][x2])


def trivial_action(B: FiniteMagma) -> Action:
    return Action(B, 1, 0, (0,) * (B.size * B.size))


def verify_action(a: Action) -> ValidationReport:
    B, u, z = a.B, a.B.unit, a.zero
    X = range(a.x_size)
    report = ValidationReport()
    for v in verify_unitary_magma(B):
        report.add("B." + v.axiom, *v.witness, **v.detail)
    for x in X:
        left, right = a(x, u, z, u), a(z, u, x, u)
        if left != x or right != x:
            report.add("act1", x, left=left, right=right)
    for x in X:
        for b in B.elements:
            vals = (a(x, b, z, u), a(x, u, z, b), a(z, u, x, b))
            if len(set(vals)) != 1:
                report.add("act2", x, b, values=vals)
    for b in B.elements:
        for b2 in B.elements:
            if a(z, b, z, b2) != z:
                report.add("act3", b, b2, got=a(z, b, z, b2))
    for x, b, x2, b2 in product(X, B.elements, X, B.elements):
        lhs = a(x, b, x2, b2)
        n1, n2 = a.n00(x, b), a.n00(x2, b2)
        inner = a(n1, b, n2, b2)
        rhs = a.n00(inner, B.table[b][b2])
        if lhs != rhs:
            report.add("act4", x, b, x2, b2, lhs=lhs, rhs=rhs,
                       n00_xb=n1, n00_x2b2=n2, inner=inner)
    return report


def require_action(a: Action) -> None:
    report = verify_action(a)
    if not report.valid:
        raise PreconditionError("not a valid action", report)


@dataclass(frozen=True)
class SemidirectProduct:
    action: Action
    pairs: tuple[tuple[int, int], ...]
    magma: FiniteMagma
    index: dict = field(compare=False, repr=False)

    @property
    def unit(self) -> int:
        return self.magma.unit

    def __len__(self):
        return len(self.pairs)


def admissible(a: Action, x: int, b: int) -> bool:
    return a.n00(x, b) == x


def semidirect_product(a: Action) -> SemidirectProduct:
    """Admissible pairs in lexicographic order with ``(x,b)+(x',b') = (phi(x,b,x',b'), b+b')``."""
    require_action(a)
    bt = a.B.table
    pairs = tuple((x, b) for x in range(a.x_size) for b in a.B.elements if admissible(a, x, b))
    index = {pr: i for i, pr in enumerate(pairs)}
    rows = []
    for x, b in pairs:
        row = []
        for x2, b2 in pairs:
            res = (a(x, b, x2, b2), bt[b][b2])
            if res not in index:
                raise AssertionError(f"admissible pairs not closed at {(x, b)} + {(x2, b2)}")
            row.append(index[res])
        rows.append(tuple(row))
    magma = FiniteMagma(len(pairs), index[(a.zero, a.B.unit)], tuple(rows))
    return SemidirectProduct(a, pairs, magma, index)


def canonical_point(a: Action) -> RetractionPoint:
    """``(X ⋊ B, <1,0>, pi_X, <0,1>, pi_B)``."""
    sdp = semidirect_product(a)
    n, u, z = len(sdp), a.B.unit, a.zero
    return RetractionPoint(
        A=sdp.magma, B=a.B, x_size=a.x_size,
        k=ElementMap(a.x_size, n, tuple(sdp.index[(x, u)] for x in range(a.x_size))),
        q=ElementMap(n, a.x_size, tuple(x for x, _ in sdp.pairs)),
        s=ElementMap(a.B.size, n, tuple(sdp.index[(z, b)] for b in a.B.elements)),
        p=ElementMap(n, a.B.size, tuple(b for _, b in sdp.pairs)),
    )


def membership_report(a: Action) -> ValidationReport:
    """``(x,b)`` is admissible iff ``(x,b) = (x,0) + (0,b)`` computed with the pair operation."""
    u, z, bt = a.B.unit, a.zero, a.B.table
    report = ValidationReport()
    for x in range(a.x_size):
        for b in a.B.elements:
            summed = (a(x, u, z, b), bt[u][b])
            if admissible(a, x, b) != (summed == (x, b)):
                report.add("membership", x, b, sum=summed)
    return report


def closure_report(a: Action) -> ValidationReport:
    report = ValidationReport()
    bt = a.B.table
    for x, b, x2, b2 in product(range(a.x_size), a.B.elements, range(a.x_size), a.B.elements):
        if admissible(a, x, b) and admissible(a, x2, b2):
            v = a(x, b, x2, b2)
            if a.n00(v, bt[b][b2]) != v:
                report.add("closure", x, b, x2, b2, value=v)
    return report


# -- B-morphisms ---------------------------------------------------------------

def _check_same_base(a: Action, a2: Action, f: ElementMap) -> None:
    if not a.same_base(a2):
        raise StructuralError("actions are over different magmas B")
    if (f.dom, f.cod) != (a.x_size, a2.x_size):
        raise StructuralError("f must map X to X'")


def b_morphism_check(a: Action, a2: Action, f: ElementMap) -> ValidationReport:
    """``phi'(f(x), b, f(x'), b') = f(phi(x, b, x', b'))`` for all arguments."""
    _check_same_base(a, a2, f)
    if f(a.zero) != a2.zero:
        raise PreconditionError("f does not preserve zero")
    report = ValidationReport()
    r = range(a.x_size)
    for x, b, x2, b2 in product(r, a.B.elements, r, a.B.elements):
        lhs = a2(f(x), b, f(x2), b2)
        rhs = f(a(x, b, x2, b2))
        if lhs != rhs:
            report.add("B-morphism", x, b, x2, b2, lhs=lhs, rhs=rhs)
    return report


def induced_sdp_morphism(a: Action, a2: Action, f: ElementMap) -> ElementMap:
    """``(x, b) -> (f(x), b)`` between semidirect products."""
    report = b_morphism_check(a, a2, f)
    if not report.valid:
        raise PreconditionError("f is not a B-morphism", report)
    s1, s2 = semidirect_product(a), semidirect_product(a2)
    g = ElementMap(len(s1), len(s2), tuple(s2.index[(f(x), b)] for x, b in s1.pairs))
    check = check_morphism(g, s1.magma, s2.magma)
    if not check.valid:
        raise AssertionError(f"induced map is not a morphism: {check!r}")
    return g


# -- morphisms out of and into a semidirect product ---------------------------

def check_hom_out_sdp(a: Action, u: ElementMap, v: ElementMap, Z: FiniteMagma) -> ValidationReport:
    """``u(phi(x,b,x',b')) + v(b+b') = (u(x)+v(b)) + (u(x')+v(b'))`` on admissible pairs."""
    if (u.dom, u.cod) != (a.x_size, Z.size) or (v.dom, v.cod) != (a.B.size, Z.size):
        raise StructuralError("u must be X->Z and v must be B->Z")
    if not is_morphism(u, a.x_magma(), Z):
        raise PreconditionError("u is not a morphism from the induced X-magma")
    if not is_morphism(v, a.B, Z):
        raise PreconditionError("v is not a morphism B -> Z")
    sdp = semidirect_product(a)
    zt, bt = Z.table, a.B.table
    report = ValidationReport()
    for x, b in sdp.pairs:
        for x2, b2 in sdp.pairs:
            lhs = zt[u(a(x, b, x2, b2))][v(bt[b][b2])]
            rhs = zt[zt[u(x)][v(b)]][zt[u(x2)][v(b2)]]
            if lhs != rhs:
                report.add("eq14", x, b, x2, b2, lhs=lhs, rhs=rhs)
    return report


def hom_out_sdp(a: Action, u: ElementMap, v: ElementMap, Z: FiniteMagma) -> ElementMap | None:
    """``w(x, b) = u(x) + v(b)`` when it is a morphism ``X ⋊ B -> Z``."""
    if not check_hom_out_sdp(a, u, v, Z).valid:
        return None
    sdp = semidirect_product(a)
    return ElementMap(len(sdp), Z.size, tuple(Z.table[u(x)][v(b)] for x, b in sdp.pairs))


def check_hom_into_sdp(a: Action, f: ElementMap, g: ElementMap, Z: FiniteMagma) -> ValidationReport:
    """``f(z1 + z2) = phi(f(z1), g(z1), f(z2), g(z2))`` plus admissibility of every ``(f(z), g(z))``."""
    if (f.dom, f.cod) != (Z.size, a.x_size) or (g.dom, g.cod) != (Z.size, a.B.size):
        raise StructuralError("f must be Z->X and g must be Z->B")
    if f(Z.unit) != a.zero:
        raise PreconditionError("f does not send the unit to zero")
    if not is_morphism(g, Z, a.B):
        raise PreconditionError("g is not a morphism Z -> B")
    report = ValidationReport()
    for z in Z.elements:
        if not admissible(a, f(z), g(z)):
            report.add("admissible", z, pair=(f(z), g(z)))
    for z1 in Z.elements:
        for z2 in Z.elements:
            lhs = f(Z.table[z1][z2])
            rhs = a(f(z1), g(z1), f(z2), g(z2))
            if lhs != rhs:
                report.add("eq15", z1, z2, lhs=lhs, rhs=rhs)
    return report


def hom_into_sdp(a: Action, f: ElementMap, g: ElementMap, Z: FiniteMagma) -> ElementMap | None:
    if not check_hom_into_sdp(a, f, g, Z).valid:
        return None
    sdp = semidirect_product(a)
    return ElementMap(Z.size, len(sdp), tuple(sdp.index[(f(z), g(z))] for z in Z.elements))


def crossed_form(a: Action) -> dict[tuple[int, int], int] | None:
    """``xi(b, x') = phi(0, b, x', 0)`` when ``phi(x,b,x',b') = x + xi(b, x')`` everywhere."""
    u, z = a.B.unit, a.zero
    xi = {(b, x2): a(z, b, x2, u) for b in a.B.elements for x2 in range(a.x_size)}
    r = range(a.x_size)
    for x, b, x2, b2 in product(r, a.B.elements, r, a.B.elements):
        if a(x, b, x2, b2) != a(x, u, xi[(b, x2)], u):
            return None
    return xi


def check_crossed_homomorphism(a: Action, f: ElementMap, g: ElementMap,
                               Z: FiniteMagma) -> ValidationReport | None:
    """``f(z1 + z2) = f(z1) + xi(g(z1), f(z2))``; ``None`` unless phi has the crossed form."""
    xi = crossed_form(a)
    if xi is None:
        return None
    u = a.B.unit
    report = ValidationReport()
    for z1 in Z.elements:
        for z2 in Z.elements:
            lhs = f(Z.table[z1][z2])
            rhs = a(f(z1), u, xi[(g(z1), f(z2))], u)
            if lhs != rhs:
                report.add("crossed", z1, z2, lhs=lhs, rhs=rhs)
    return report


# -- transporting a morphism of X-structures ----------------------------------

@dataclass
class TransportConditions:
    """Conditions for extending ``f: X -> X'`` to the semidirect products.

    ``transport_identity``: ``n'(f(phi(x,b,x',b')), b+b') = phi'(n'(f x, b), b, n'(f x', b'), b')``.
    ``pointwise_lift``: ``(x, b) -> n'(f(x), b)`` is a morphism extending ``f``.
    ``lift``: some morphism agrees with ``f`` on ``(x, 0)`` and fixes ``(0, b)``.
    ``lift_over_b``: such a morphism also commutes with the projections to ``B``.
    ``lift_over_x``: such a morphism is ``f`` on the ``X`` coordinate.
    ``b_morphism``: ``f`` commutes with ``phi`` outright.

    The first four should agree with each other, and so should the last two.
    ``lift_map`` and ``lift_over_x_map`` are the morphisms found by exhaustive
    search (or ``None``); ``iso`` is ``None`` when ``f`` is not a bijective
    B-morphism.
    """

    lift_over_b: bool
    lift: bool
    pointwise_lift: bool
    transport_identity: bool
    lift_over_x: bool
    b_morphism: bool
    iso: bool | None
    lift_map: ElementMap | None
    lift_over_x_map: ElementMap | None
    identity_witness: tuple | None = None
    b_morphism_witness: tuple | None = None

    @property
    def lift_conditions_agree(self) -> bool:
        return self.lift_over_b == self.lift == self.pointwise_lift == self.transport_identity

    @property
    def projection_conditions_agree(self) -> bool:
        return self.lift_over_x == self.b_morphism

    @property
    def consistent(self) -> bool:
        return self.lift_conditions_agree and self.projection_conditions_agree and self.iso is not False


def _search_morphisms(src: SemidirectProduct, dst: SemidirectProduct,
                      allowed, limit: int = 1_000_000) -> list[ElementMap]:
    """All morphisms ``src -> dst`` whose value at each pair lies in ``allowed(pair)``."""
    choices = [[j for j, pr in enumerate(dst.pairs) if allowed(src_pair, pr)]
               for src_pair in src.pairs]
    total = 1
    for c in choices:
        total *= len(c)
    if total > limit:
        raise PreconditionError(f"morphism search space {total} exceeds {limit}")
    found = []
    for values in product(*choices):
        g = ElementMap(len(src), len(dst), values)
        if is_morphism(g, src.magma, dst.magma):
            found.append(g)
    return found


def f_transport_check(a: Action, a2: Action, f: ElementMap) -> TransportConditions:
    _check_same_base(a, a2, f)
    if not is_morphism(f, a.x_magma(), a2.x_magma()):
        raise PreconditionError("f is not a morphism of the induced X-magmas")
    B, u = a.B, a.B.unit
    bt = B.table
    s1, s2 = semidirect_product(a), semidirect_product(a2)

    identity_witness = None
    for x, b, x2, b2 in product(range(a.x_size), B.elements, range(a.x_size), B.elements):
        lhs = a2.n00(f(a(x, b, x2, b2)), bt[b][b2])
        rhs = a2(a2.n00(f(x), b), b, a2.n00(f(x2), b2), b2)
        if lhs != rhs:
            identity_witness = (x, b, x2, b2)
            break

    def g1(x, b):
        return a2.n00(f(x), b)

    pointwise_lift = all(g1(x, u) == f(x) for x in range(a.x_size)) and all(
        g1(a(x, b, x2, b2), bt[b][b2]) == a2(g1(x, b), b, g1(x2, b2), b2)
        for x, b in s1.pairs for x2, b2 in s1.pairs)

    def boundary(pair, img):
        x, b = pair
        if b == u:
            return img == (f(x), u)
        if x == a.zero:
            return img == (a2.zero, b)
        return True

    lifts = _search_morphisms(s1, s2, boundary)
    lifts_over_b = [g for g in lifts if all(s2.pairs[g(i)][1] == b for i, (_, b) in enumerate(s1.pairs))]
    lifts_over_x = [g for g in lifts if all(s2.pairs[g(i)][0] == f(x) for i, (x, _) in enumerate(s1.pairs))]
    if len(lifts) > 1:
        raise AssertionError("morphism out of a semidirect product is not unique on its boundary")

    bm = b_morphism_check(a, a2, f)
    iso = None
    if bm.valid and f.is_bijective():
        g = induced_sdp_morphism(a, a2, f)
        iso = g.is_bijective() and check_morphism(g.inverse(), s2.magma, s1.magma).valid
    return TransportConditions(
        lift_over_b=bool(lifts_over_b), lift=bool(lifts), pointwise_lift=pointwise_lift, transport_identity=identity_witness is None,
        lift_over_x=bool(lifts_over_x), b_morphism=bm.valid, iso=iso,
        lift_map=lifts[0] if lifts else None,
        lift_over_x_map=lifts_over_x[0] if lifts_over_x else None,
        identity_witness=identity_witness,
        b_morphism_witness=bm[0].witness if bm else None,
    )


def all_b_morphisms(a: Action, a2: Action) -> Iterator[ElementMap]:
    """Exhaustive search over maps ``X -> X'`` preserving zero."""
    for values in product(range(a2.x_size), repeat=a.x_size):
        if values[a.zero] != a2.zero:
            continue
        f = ElementMap(a.x_size, a2.x_size, values)
        if b_morphism_check(a, a2, f).valid:
            yield f
