from dataclasses import replace
import pytest
from hypothesis import given, settings, strategies as st

from umagma.actions import Action, canonical_point
from umagma.classify import enumerate_points
from umagma.examples import adjoin_poles_point, inversion_action, s3_point
from umagma.magma import (ElementMap, FiniteMagma, all_maps, cyclic_group, direct_product,
                          enumerate_magmas,
                          is_morphism, morphisms, trivial_magma)
from umagma.points import (RetractionPoint, check_composable, check_compatible,
                           check_in_morphism, check_out_morphism, composite_candidate,
                           compose_points, composition_report, decomposition_holds, direct_product_point,
                           identity_report, in_morphism, induced_x_magma, out_morphism,
                           pair_map_is_bijection, pullback_point, schreier_witness,
                           ssfl_transport, verify_point)
from umagma.report import PreconditionError, StructuralError

import oracles
from conftest import order2_magmas, partners, points_x2

Z2 = cyclic_group(2)


def lists(pt):
    return ([list(r) for r in pt.A.table], pt.A.unit, [list(r) for r in pt.B.table], pt.B.unit,
            pt.x_size, pt.k.values, pt.q.values, pt.s.values, pt.p.values)


def test_direct_product_point_is_valid():
    pt = direct_product_point(cyclic_group(3), Z2)
    assert verify_point(pt).valid
    assert pair_map_is_bijection(pt) and schreier_witness(pt) is None
    assert induced_x_magma(pt) == cyclic_group(3)


@pytest.mark.parametrize("field,axiom", [
    ("q", "qk=1"),
    ("s", "ps=1"),
    ("k", "pk=0"),
])
def test_broken_maps_are_reported(field, axiom):
    pt = direct_product_point(Z2, Z2)
    m = getattr(pt, field)
    values = list(m.values)
    if field == "q":
        values[pt.k(1)] = 0
    elif field == "s":
        values[1] = 0
    else:
        values[1] = pt.s(1)
    broken = replace(pt, **{field: ElementMap(m.dom, m.cod, tuple(values))})
    report = verify_point(broken)
    assert axiom in report.axioms()
    assert report.first(axiom).witness


def test_decomposition_failure_is_reported():
    pt = direct_product_point(Z2, Z2)
    # q collapses everything: qk = 1 fails and so does kq + sp = 1
    q = ElementMap(4, 2, (0, 0, 0, 0))
    report = verify_point(replace(pt, q=q))
    assert {"qk=1", "kq+sp=1"} <= report.axioms()


def test_structural_size_mismatch():
    pt = direct_product_point(Z2, Z2)
    with pytest.raises(StructuralError):
        replace(pt, k=ElementMap(3, 4, (0, 1, 2)))


def test_identity_families_on_examples():
    for pt in (s3_point(), adjoin_poles_point(Z2, Z2), direct_product_point(Z2, Z2)):
        assert identity_report(pt).valid
        assert decomposition_holds(pt)


def test_agrees_with_definition_oracle():
    for B in order2_magmas():
        for pt in points_x2(B):
            assert oracles.point_ok(*lists(pt))


def test_pair_map_criterion():
    # bijective pair map exactly when q(k(x) + s(b)) = x for all x, b
    seen = set()
    for B in order2_magmas():
        for pt in points_x2(B):
            seen.add(pair_map_is_bijection(pt))
            assert pair_map_is_bijection(pt) == (schreier_witness(pt) is None)
    assert seen == {True, False}


# -- morphisms out of and into A ------------------------------------------------

def _small_targets():
    return [trivial_magma()] + list(enumerate_magmas(2)) + list(enumerate_magmas(3))[::10]


def test_out_morphism_matches_brute_force():
    checked = 0
    for pt in list(points_x2(Z2))[::40] + [direct_product_point(Z2, Z2)]:
        for Z in _small_targets():
            At = [list(r) for r in pt.A.table]
            Zt = [list(r) for r in Z.table]
            for v in morphisms(pt.B, Z):
                for u in all_maps(pt.x_size, Z.size):
                    if u(pt.zero_x) != Z.unit:
                        continue
                    w = out_morphism(pt, u, v, Z)
                    ref = oracles.morphisms_with(
                        At, pt.A.unit, Zt, Z.unit,
                        lambda h: all(h[pt.k(x)] == u(x) for x in range(pt.x_size))
                        and all(h[pt.s(b)] == v(b) for b in pt.B.elements))
                    assert len(ref) <= 1
                    assert (w.values if w else None) == (ref[0] if ref else None)
                    checked += 1
    assert checked > 100


def test_in_morphism_matches_brute_force():
    for pt in list(points_x2(Z2))[::40] + [adjoin_poles_point(Z2, trivial_magma())]:
        At = [list(r) for r in pt.A.table]
        for Z in _small_targets():
            Zt = [list(r) for r in Z.table]
            for g in morphisms(Z, pt.B):
                for f in all_maps(Z.size, pt.x_size):
                    if f(Z.unit) != pt.zero_x:
                        continue
                    h = in_morphism(pt, f, g, Z)
                    ref = oracles.morphisms_with(
                        Zt, Z.unit, At, pt.A.unit,
                        lambda h: all(pt.q(h[z]) == f(z) and pt.p(h[z]) == g(z)
                                      for z in Z.elements))
                    assert len(ref) <= 1
                    assert (h.values if h else None) == (ref[0] if ref else None)


def test_morphism_equation_alone_does_not_give_qh_equal_f():
    # h(z) = k(f(z)) + s(g(z)) is a morphism here, but q(h(1)) = 0 != f(1)
    A = FiniteMagma.from_rows([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    pt = RetractionPoint(A=A, B=Z2, x_size=2,
                         k=ElementMap(2, 3, (0, 2)), q=ElementMap(3, 2, (0, 0, 1)),
                         s=ElementMap(2, 3, (0, 1)), p=ElementMap(3, 2, (0, 1, 0)))
    assert verify_point(pt).valid
    f = g = ElementMap.identity(2)
    report = check_in_morphism(pt, f, g, Z2)
    assert "in" not in report.axioms()
    assert report.axioms() == {"qh=f"}
    assert report.first().witness == (1,)
    assert in_morphism(pt, f, g, Z2) is None


def test_out_morphism_preconditions():
    pt = direct_product_point(Z2, Z2)
    with pytest.raises(PreconditionError):
        check_out_morphism(pt, ElementMap(2, 2, (1, 0)), ElementMap.identity(2), Z2)
    with pytest.raises(PreconditionError):
        check_in_morphism(pt, ElementMap(2, 2, (0, 1)), ElementMap(2, 2, (1, 0)), Z2)


# -- pullback and composition ---------------------------------------------------

def test_pullback_along_identity_is_isomorphic():
    pt = s3_point()
    back = pullback_point(pt, ElementMap.identity(2), Z2)
    assert verify_point(back).valid
    assert back.A.size == pt.A.size


def test_pullback_rejects_non_morphism():
    pt = s3_point()
    with pytest.raises(PreconditionError):
        pullback_point(pt, ElementMap(2, 2, (1, 0)), Z2)


def test_composition_with_direct_products():
    pt = s3_point()
    found = partners(Z2)
    assert len(found) >= 2
    for pt2 in found:
        assert check_composable(pt, pt2).valid
        composite = compose_points(pt, pt2)
        assert composite is not None and verify_point(composite).valid
        assert composite.B == pt2.B
        assert composite.x_size == sum(1 for a in pt.A.elements for y in range(pt2.x_size)
                                       if pt.p(a) == pt2.k(y))


# A point over the three-element magma B below, and a partner with middle
# magma B, for which the composite exists although the composability
# identity fails at (x, y, c) = (1, 1, 1): no element of A reaches that triple.
_B3 = FiniteMagma.from_rows([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
_PHI_B3 = (0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 1,
           1, 1, 1, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 0, 0, 0)
_PARTNER_B3 = RetractionPoint(A=_B3, B=Z2, x_size=2,
                              k=ElementMap(2, 3, (0, 2)), q=ElementMap(3, 2, (0, 0, 1)),
                              s=ElementMap(2, 3, (0, 1)), p=ElementMap(3, 2, (0, 1, 0)))

# An action of Z2 x Z2 on two elements whose canonical point does not
# compose with the direct-product partner.
_PHI_V4 = (0, 0, 0, 0, 1, 1, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1,
           0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 1, 1, 0, 0, 1, 1, 0, 1, 0, 1, 0, 1, 0,
           0, 0, 0, 0, 0, 1, 0, 1, 1, 0, 1, 1, 1, 0, 1, 0)


def test_composite_exists_where_identity_fails_off_the_reachable_triples():
    pt = canonical_point(Action(_B3, 2, 0, _PHI_B3))
    pt2 = _PARTNER_B3
    assert verify_point(pt2).valid
    eq = check_composable(pt, pt2)
    assert eq.first().witness == (1, 1, 1)
    composite = compose_points(pt, pt2)
    assert composite is not None and verify_point(composite).valid
    # the failing triple is not of the form (q(a), q'(p(a)), p'(p(a)))
    reachable = {(pt.q(a), pt2.q(pt.p(a)), pt2.p(pt.p(a))) for a in pt.A.elements}
    assert all(v.witness not in reachable for v in eq)
    assert composition_report(pt, pt2).axioms() == {"composable"}


def test_refused_composite_carries_witnesses():
    V4 = direct_product(Z2, Z2)
    pt = canonical_point(Action(V4, 2, 0, _PHI_V4))
    pt2 = direct_product_point(Z2, Z2)
    assert pt2.A == V4
    assert compose_points(pt, pt2) is None
    report = composition_report(pt, pt2)
    assert "composite.kq+sp=1" in report.axioms() and "composable" in report.axioms()


def test_composite_kernel_set():
    pt = s3_point()
    pt2 = direct_product_point(trivial_magma(), Z2)
    composite, pairs = composite_candidate(pt, pt2)
    assert pairs == [(a, 0) for a in pt.A.elements if pt.p(a) == pt2.k(0)]


# -- equivalence transport -------------------------------------------------------

def test_ssfl_on_isomorphic_copy():
    pt = canonical_point(inversion_action())
    n = pt.A.size
    sigma = [0] + list(range(n - 1, 0, -1))
    inv = [sigma.index(i) for i in range(n)]
    A2 = FiniteMagma.from_rows([[sigma[pt.A.table[inv[a]][inv[b]]] for b in range(n)]
                                for a in range(n)])
    pt2 = RetractionPoint(
        A=A2, B=pt.B, x_size=pt.x_size,
        k=ElementMap(pt.x_size, n, tuple(sigma[v] for v in pt.k.values)),
        q=ElementMap(n, pt.x_size, tuple(pt.q(inv[a]) for a in range(n))),
        s=ElementMap(2, n, tuple(sigma[v] for v in pt.s.values)),
        p=ElementMap(n, 2, tuple(pt.p(inv[a]) for a in range(n))),
    )
    assert verify_point(pt2).valid
    alpha = ElementMap(n, n, tuple(sigma))
    assert check_compatible(pt, pt2, alpha).valid
    transport = ssfl_transport(pt, pt2, alpha)
    assert transport.verified and transport.beta.values == tuple(inv)


def test_ssfl_rejects_incompatible_map():
    pt = s3_point()
    alpha = ElementMap.constant(pt.A.size, pt.A.size, pt.A.unit)
    transport = ssfl_transport(pt, pt, alpha)
    assert not transport.verified and transport.beta is None
    assert "alpha.k=k'" in transport.report.axioms()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(range(1544)))
def test_enumerated_points_have_morphic_p_and_s(i):
    pts = points_x2(Z2)
    pt = pts[i % len(pts)]
    assert is_morphism(pt.p, pt.A, pt.B) and is_morphism(pt.s, pt.B, pt.A)
    assert identity_report(pt).valid
