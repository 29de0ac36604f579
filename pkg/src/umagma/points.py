"""Retraction points ``(A, k, q, s, p)`` from a finite set ``X`` to a magma ``B``.

``k: X -> A`` and ``q: A -> X`` are plain maps, ``s: B -> A`` and
``p: A -> B`` are morphisms, and every ``a`` decomposes as
``a = k(q(a)) + s(p(a))``.  The zero of ``X`` is always ``q(unit of A)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .magma import (
    ElementMap,
    FiniteMagma,
    check_morphism,
    direct_product,
    is_morphism,
    restrict,
    verify_unitary_magma,
)
from .report import PreconditionError, StructuralError, ValidationReport


@dataclass(frozen=True)
class RetractionPoint:
    A: FiniteMagma
    B: FiniteMagma
    x_size: int
    k: ElementMap
    q: ElementMap
    s: ElementMap
    p: ElementMap

    def __post_init__(self):
        a, b, x = self.A.size, self.B.size, self.x_size
        for name, f, dom, cod in (("k", self.k, x, a), ("q", self.q, a, x),
                                  ("s", self.s, b, a), ("p", self.p, a, b)):
            if (f.dom, f.cod) != (dom, cod):
                raise StructuralError(
                    f"{name} is {f.dom}->{f.cod}, expected {dom}->{cod}")

    @property
    def zero_x(self) -> int:
        return self.q(self.A.unit)

    def ks(self, x: int, b: int) -> int:
        """``k(x) + s(b)`` in ``A``."""
        return self.A.table[self.k.values[x]][self.s.values[b]]

    def same_ends(self, other: RetractionPoint) -> bool:
        return self.x_size == other.x_size and self.B == other.B


def verify_point(pt: RetractionPoint) -> ValidationReport:
    A, B = pt.A, pt.B
    k, q, s, p = pt.k.values, pt.q.values, pt.s.values, pt.p.values
    report = ValidationReport()
    for v in verify_unitary_magma(A):
        report.add("A." + v.axiom, *v.witness, **v.detail)
    for v in verify_unitary_magma(B):
        report.add("B." + v.axiom, *v.witness, **v.detail)
    for v in check_morphism(pt.p, A, B):
        report.add("p_morphism." + v.axiom, *v.witness, **v.detail)
    for v in check_morphism(pt.s, B, A):
        report.add("s_morphism." + v.axiom, *v.witness, **v.detail)
    for b in B.elements:
        if p[s[b]] != b:
            report.add("ps=1", b, got=p[s[b]])
    for x in range(pt.x_size):
        if p[k[x]] != B.unit:
            report.add("pk=0", x, got=p[k[x]])
    for x in range(pt.x_size):
        if q[k[x]] != x:
            report.add("qk=1", x, got=q[k[x]])
    zero = q[A.unit]
    for b in B.elements:
        if q[s[b]] != zero:
            report.add("qs=q0", b, got=q[s[b]], zero=zero)
    for a in A.elements:
        got = A.table[k[q[a]]][s[p[a]]]
        if got != a:
            report.add("kq+sp=1", a, got=got)
    return report


def require_valid(pt: RetractionPoint) -> None:
    report = verify_point(pt)
    if not report.valid:
        raise PreconditionError("not a valid retraction point", report)


def induced_x_magma(pt: RetractionPoint) -> FiniteMagma:
    """The structure on ``X``: unit ``q(0)``, ``x + x' = q(k(x) + k(x'))``."""
    k, q, t = pt.k.values, pt.q.values, pt.A.table
    m = FiniteMagma.from_function(pt.x_size, pt.zero_x, lambda x, y: q[t[k[x]][k[y]]])
    report = verify_unitary_magma(m)
    if not report.valid:
        raise PreconditionError("induced structure on X is not unitary", report)
    return m


def direct_product_point(X: FiniteMagma, B: FiniteMagma) -> RetractionPoint:
    """``X x B`` with the injections, projections and ``q`` the first projection."""
    A = direct_product(X, B)
    nb = B.size
    return RetractionPoint(
        A=A, B=B, x_size=X.size,
        k=ElementMap(X.size, A.size, tuple(x * nb + B.unit for x in X.elements)),
        q=ElementMap(A.size, X.size, tuple(a // nb for a in A.elements)),
        s=ElementMap(nb, A.size, tuple(X.unit * nb + b for b in B.elements)),
        p=ElementMap(A.size, nb, tuple(a % nb for a in A.elements)),
    )


# -- the identities every point satisfies ------------------------------------

def identity_report(pt: RetractionPoint) -> ValidationReport:
    """Exhaustively check the four families of identities derived from the axioms."""
    A, B = pt.A, pt.B
    t, k, q, s = A.table, pt.k.values, pt.q.values, pt.s.values
    zero_a, u = A.unit, B.unit
    zero = q[zero_a]
    report = ValidationReport()
    kq0 = k[zero]
    if kq0 != zero_a:
        report.add("kq(0)=0", got=kq0)
    X = range(pt.x_size)
    for x in X:
        left, right = q[t[k[x]][kq0]], q[t[kq0][k[x]]]
        if left != x or right != x:
            report.add("q-unit", x, left=left, right=right)
    for x in X:
        for b in B.elements:
            a = t[k[x]][s[b]]
            forms = (
                q[a],
                q[t[t[k[x]][zero_a]][t[zero_a][s[b]]]],
                q[t[a][t[zero_a][zero_a]]],
                q[t[t[zero_a][zero_a]][a]],
            )
            if len(set(forms)) != 1:
                report.add("q-brackets", x, b, values=forms)
    for b in B.elements:
        for b2 in B.elements:
            if q[t[s[b]][s[b2]]] != zero:
                report.add("qss=q(0)", b, b2, got=q[t[s[b]][s[b2]]])
    for x, b, x2, b2 in product(X, B.elements, X, B.elements):
        lhs = q[t[t[k[x]][s[b]]][t[k[x2]][s[b2]]]]
        uu = q[t[k[x]][s[b]]]
        vv = q[t[k[x2]][s[b2]]]
        w = q[t[t[k[uu]][s[b]]][t[k[vv]][s[b2]]]]
        rhs = q[t[k[w]][s[B.table[b][b2]]]]
        if lhs != rhs:
            report.add("q-sum", x, b, x2, b2, lhs=lhs, rhs=rhs, w=w)
    return report


def decomposition_holds(pt: RetractionPoint) -> bool:
    return all(pt.A.table[pt.k(pt.q(a))][pt.s(pt.p(a))] == a for a in pt.A.elements)


def pair_map(pt: RetractionPoint) -> list[tuple[int, int]]:
    """``a -> (q(a), p(a))`` as a list indexed by ``a``."""
    return [(pt.q(a), pt.p(a)) for a in pt.A.elements]


def pair_map_is_bijection(pt: RetractionPoint) -> bool:
    pairs = pair_map(pt)
    return len(set(pairs)) == len(pairs) == pt.x_size * pt.B.size


def schreier_witness(pt: RetractionPoint) -> tuple[int, int] | None:
    """First ``(x, b)`` with ``q(k(x) + s(b)) != x``."""
    for x in range(pt.x_size):
        for b in pt.B.elements:
            if pt.q(pt.ks(x, b)) != x:
                return x, b
    return None


# -- morphisms out of and into A ----------------------------------------------

def check_out_morphism(pt: RetractionPoint, u: ElementMap, v: ElementMap,
                       Z: FiniteMagma) -> ValidationReport:
    """Whether ``w(a) = u(q(a)) + v(p(a))`` is a morphism ``A -> Z``."""
    if (u.dom, u.cod) != (pt.x_size, Z.size) or (v.dom, v.cod) != (pt.B.size, Z.size):
        raise StructuralError("u must be X->Z and v must be B->Z")
    if not is_morphism(v, pt.B, Z):
        raise PreconditionError("v is not a morphism B -> Z", check_morphism(v, pt.B, Z))
    if u(pt.zero_x) != Z.unit:
        raise PreconditionError("u does not send q(0) to the unit of Z")
    A, zt = pt.A, Z.table
    w = [zt[u(pt.q(a))][v(pt.p(a))] for a in A.elements]
    report = ValidationReport()
    for a in A.elements:
        for a2 in A.elements:
            lhs = w[A.table[a][a2]]
            rhs = zt[w[a]][w[a2]]
            if lhs != rhs:
                report.add("out", a, a2, lhs=lhs, rhs=rhs)
    return report


def out_morphism(pt: RetractionPoint, u: ElementMap, v: ElementMap,
                 Z: FiniteMagma) -> ElementMap | None:
    """The unique morphism ``w`` with ``wk = u`` and ``ws = v``, if any."""
    if not check_out_morphism(pt, u, v, Z).valid:
        return None
    w = ElementMap(pt.A.size, Z.size,
                   tuple(Z.table[u(pt.q(a))][v(pt.p(a))] for a in pt.A.elements))
    assert pt.k.then(w) == u and pt.s.then(w) == v
    return w


def check_in_morphism(pt: RetractionPoint, f: ElementMap, g: ElementMap,
                      Z: FiniteMagma) -> ValidationReport:
    """Whether ``h(z) = k(f(z)) + s(g(z))`` is a morphism with ``qh = f``.

    The ``in`` entries are the morphism equation; ``qh=f`` entries record
    elements whose pair ``(f(z), g(z))`` is not recovered by ``q``.
    """
    if (f.dom, f.cod) != (Z.size, pt.x_size) or (g.dom, g.cod) != (Z.size, pt.B.size):
        raise StructuralError("f must be Z->X and g must be Z->B")
    if not is_morphism(g, Z, pt.B):
        raise PreconditionError("g is not a morphism Z -> B", check_morphism(g, Z, pt.B))
    if f(Z.unit) != pt.zero_x:
        raise PreconditionError("f does not send the unit of Z to q(0)")
    t = pt.A.table
    h = [pt.ks(f(z), g(z)) for z in Z.elements]
    report = ValidationReport()
    for z in Z.elements:
        for z2 in Z.elements:
            lhs = h[Z.table[z][z2]]
            rhs = t[h[z]][h[z2]]
            if lhs != rhs:
                report.add("in", z, z2, lhs=lhs, rhs=rhs)
    for z in Z.elements:
        if pt.q(h[z]) != f(z):
            report.add("qh=f", z, got=pt.q(h[z]), expected=f(z))
    return report


def in_morphism(pt: RetractionPoint, f: ElementMap, g: ElementMap,
                Z: FiniteMagma) -> ElementMap | None:
    if not check_in_morphism(pt, f, g, Z).valid:
        return None
    h = ElementMap(Z.size, pt.A.size, tuple(pt.ks(f(z), g(z)) for z in Z.elements))
    assert h.then(pt.q) == f and h.then(pt.p) == g
    return h


# -- pullback and composition --------------------------------------------------

def pullback_point(pt: RetractionPoint, g: ElementMap, Z: FiniteMagma) -> RetractionPoint:
    """Pull ``pt`` back along a morphism ``g: Z -> B``.

    The middle object is ``{(a, z) : p(a) = g(z)}`` inside ``A x Z``, listed
    in lexicographic order of pairs.
    """
    if (g.dom, g.cod) != (Z.size, pt.B.size):
        raise StructuralError("g must be Z -> B")
    if not is_morphism(g, Z, pt.B):
        raise PreconditionError("g is not a morphism Z -> B", check_morphism(g, Z, pt.B))
    nz = Z.size
    prod = direct_product(pt.A, Z)
    carrier = [a * nz + z for a in pt.A.elements for z in Z.elements if pt.p(a) == g(z)]
    P, elems = restrict(prod, carrier)
    pos = {e: i for i, e in enumerate(elems)}
    return RetractionPoint(
        A=P, B=Z, x_size=pt.x_size,
        k=ElementMap(pt.x_size, P.size,
                     tuple(pos[pt.k(x) * nz + Z.unit] for x in range(pt.x_size))),
        q=ElementMap(P.size, pt.x_size, tuple(pt.q(e // nz) for e in elems)),
        s=ElementMap(nz, P.size, tuple(pos[pt.s(g(z)) * nz + z] for z in Z.elements)),
        p=ElementMap(P.size, nz, tuple(e % nz for e in elems)),
    )


def check_composable(pt: RetractionPoint, pt2: RetractionPoint) -> ValidationReport:
    """``(k(x) + s k'(y)) + s s'(c) = k(x) + s(k'(y) + s'(c))`` for all x, y, c.

    ``pt2`` is a point whose middle magma is the base ``B`` of ``pt``.
    """
    if pt2.A != pt.B:
        raise StructuralError("middle magma of the second point must be the base of the first")
    t, k, s = pt.A.table, pt.k.values, pt.s.values
    bt, k2, s2 = pt.B.table, pt2.k.values, pt2.s.values
    report = ValidationReport()
    for x in range(pt.x_size):
        for y in range(pt2.x_size):
            for c in pt2.B.elements:
                lhs = t[t[k[x]][s[k2[y]]]][s[s2[c]]]
                rhs = t[k[x]][s[bt[k2[y]][s2[c]]]]
                if lhs != rhs:
                    report.add("composable", x, y, c, lhs=lhs, rhs=rhs)
    return report


def composite_candidate(pt: RetractionPoint, pt2: RetractionPoint) -> tuple[RetractionPoint, list[tuple[int, int]]]:
    """The tuple ``(A, pi_1, q'', s s', p' p)`` from ``A x_B Y`` to ``C``.

    Built without checking composability; returns the point together with the
    list of pairs ``(a, y)`` that index its kernel set.
    """
    if pt2.A != pt.B:
        raise StructuralError("middle magma of the second point must be the base of the first")
    A = pt.A
    pairs = [(a, y) for a in A.elements for y in range(pt2.x_size) if pt.p(a) == pt2.k(y)]
    pos = {pr: i for i, pr in enumerate(pairs)}
    q2 = []
    for a in A.elements:
        y = pt2.q(pt.p(a))
        first = A.table[pt.k(pt.q(a))][pt.s(pt2.k(y))]
        q2.append(pos[(first, y)])
    point = RetractionPoint(
        A=A, B=pt2.B, x_size=len(pairs),
        k=ElementMap(len(pairs), A.size, tuple(a for a, _ in pairs)),
        q=ElementMap(A.size, len(pairs), tuple(q2)),
        s=pt2.s.then(pt.s),
        p=pt.p.then(pt2.p),
    )
    return point, pairs


def compose_points(pt: RetractionPoint, pt2: RetractionPoint) -> RetractionPoint | None:
    """The composite point, when the candidate tuple is a retraction point.

    This is decided on the candidate itself, independently of
    :func:`check_composable`.  That identity is sufficient, and it is
    necessary on the triples ``(q(a), q'p(a), p'p(a))``, but a pair can
    compose while the identity fails at a triple no ``a`` reaches.
    """
    point, _ = composite_candidate(pt, pt2)
    return point if verify_point(point).valid else None


def composition_report(pt: RetractionPoint, pt2: RetractionPoint) -> ValidationReport:
    """Why a composite is refused: the failing axioms of the candidate,
    followed by the failing triples of the composability identity."""
    point, _ = composite_candidate(pt, pt2)
    report = ValidationReport()
    for v in verify_point(point):
        report.add("composite." + v.axiom, *v.witness, **v.detail)
    report.extend(check_composable(pt, pt2))
    return report


def check_composition_sufficient(pt: RetractionPoint) -> ValidationReport:
    """``k(x) + s(b + b') = (k(x) + s(b)) + s(b')`` for all x, b, b'."""
    t, bt = pt.A.table, pt.B.table
    report = ValidationReport()
    for x in range(pt.x_size):
        for b in pt.B.elements:
            for b2 in pt.B.elements:
                lhs = pt.ks(x, bt[b][b2])
                rhs = t[pt.ks(x, b)][pt.s(b2)]
                if lhs != rhs:
                    report.add("k+s(b+b')", x, b, b2, lhs=lhs, rhs=rhs)
    return report


# -- split short five lemma ----------------------------------------------------

@dataclass(frozen=True)
class Transport:
    """Outcome of :func:`ssfl_transport`: the inverse, or the failed conditions."""

    beta: ElementMap | None
    report: ValidationReport

    @property
    def verified(self) -> bool:
        return self.beta is not None and self.report.valid


def check_compatible(pt: RetractionPoint, pt2: RetractionPoint,
                     alpha: ElementMap) -> ValidationReport:
    """Morphism-hood of ``alpha`` plus ``alpha k = k'``, ``alpha s = s'``, ``q' alpha = q``."""
    if not pt.same_ends(pt2):
        raise StructuralError("points do not share X and B")
    if (alpha.dom, alpha.cod) != (pt.A.size, pt2.A.size):
        raise StructuralError("alpha must be A -> A'")
    report = ValidationReport()
    for v in check_morphism(alpha, pt.A, pt2.A):
        report.add("alpha_morphism." + v.axiom, *v.witness, **v.detail)
    for x in range(pt.x_size):
        if alpha(pt.k(x)) != pt2.k(x):
            report.add("alpha.k=k'", x)
    for b in pt.B.elements:
        if alpha(pt.s(b)) != pt2.s(b):
            report.add("alpha.s=s'", b)
    for a in pt.A.elements:
        if pt2.q(alpha(a)) != pt.q(a):
            report.add("q'.alpha=q", a)
    return report


def ssfl_transport(pt: RetractionPoint, pt2: RetractionPoint, alpha: ElementMap) -> Transport:
    report = check_compatible(pt, pt2, alpha)
    if not report.valid:
        return Transport(None, report)
    beta = ElementMap(pt2.A.size, pt.A.size,
                      tuple(pt.ks(pt2.q(y), pt2.p(y)) for y in pt2.A.elements))
    for y in pt2.A.elements:
        if alpha(beta(y)) != y:
            report.add("alpha.beta=1", y)
    for a in pt.A.elements:
        if beta(alpha(a)) != a:
            report.add("beta.alpha=1", a)
    return Transport(beta, report)
