import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from umagma.actions import Action, canonical_point, verify_action
from umagma.batch import OK, roundtrip_census, roundtrip_codes
from umagma.classify import (SearchTooLarge, action_plans, count_actions, enumerate_actions,
                             enumerate_points, equivalent_points, phi_of_point, point_key,
                             quotient_points, quotient_report)
from umagma.magma import cyclic_group, enumerate_magmas, trivial_magma
from umagma.points import RetractionPoint, ssfl_transport

import oracles
from conftest import order2_magmas, points_x2

Z2 = cyclic_group(2)


def rows(m):
    return [list(r) for r in m.table]


def as_tuple(pt):
    return (tuple(map(tuple, pt.A.table)), pt.k.values, pt.q.values, pt.s.values, pt.p.values)


@pytest.mark.parametrize("nx,B", [(1, trivial_magma()), (1, Z2), (2, trivial_magma()),
                                  (3, trivial_magma())]
                         + [(2, m) for m in enumerate_magmas(2)])
def test_actions_match_unpruned_scan(nx, B):
    for zero in range(nx):
        lib = [a.phi for a in enumerate_actions(nx, B, zero)]
        ref = oracles.unpruned_actions(nx, rows(B), B.unit, zero)
        assert lib == ref
        assert count_actions(nx, B, zero) == len(ref)
        assert all(verify_action(a).valid for a in enumerate_actions(nx, B, zero))


def test_known_counts():
    assert count_actions(2, Z2) == 130
    assert count_actions(1, cyclic_group(3)) == 1


def test_plan_batches_agree_with_scalar_tables():
    for plan in action_plans(2, Z2):
        arr = plan.batch(0, plan.count)
        assert [tuple(int(v) for v in r) for r in arr] == list(plan.tables())
        assert all(plan.table_at(i) == t for i, t in enumerate(plan.tables()))


def test_search_refusals():
    B3 = list(enumerate_magmas(3))[0]
    with pytest.raises(SearchTooLarge) as err:
        next(enumerate_actions(2, B3, max_candidates=1000))
    assert err.value.estimate > err.value.bound == 1000
    with pytest.raises(SearchTooLarge):
        next(enumerate_points(2, Z2, 5))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_points_match_raw_scan(n):
    for B in order2_magmas():
        for zero_x in (0, None):
            lib = {as_tuple(pt) for pt in enumerate_points(2, B, n, zero_x=zero_x)}
            ref = {P for m in range(1, n + 1) for P in oracles.raw_points(2, rows(B), m, zero_x)}
            assert lib == ref


def test_size_four_points_match_relabelled_canonical_points():
    for B in order2_magmas():
        acts = {z: [a.phi for a in enumerate_actions(2, B, z)] for z in (0, 1)}
        lib = {as_tuple(pt) for pt in points_x2(B) if pt.A.size == 4}
        ref = oracles.relabelled_points(2, rows(B), 4, (0, 1), acts)
        assert lib == ref and len(lib) > 0


def test_enumeration_order_and_counts():
    pts = points_x2(Z2, 0)
    assert [point_key(p) for p in pts] == sorted(point_key(p) for p in pts)
    assert len(pts) == 772
    assert len(points_x2(Z2)) == 1544


def test_phi_of_point_matches_independent_formula():
    for pt in points_x2(Z2)[::7]:
        At = rows(pt.A)
        ref = oracles.phi_lists(At, rows(Z2), 2, pt.k.values, pt.q.values, pt.s.values)
        assert phi_of_point(pt).phi == ref


def test_equivalence_matches_map_search():
    pts = points_x2(Z2)[::19]
    seen = set()
    for i, pt in enumerate(pts):
        for pt2 in pts[i:]:
            alpha = equivalent_points(pt, pt2)
            assert (alpha is not None) == oracles.equivalence_exists(as_tuple(pt), as_tuple(pt2))
            if alpha is not None:
                assert ssfl_transport(pt, pt2, alpha).verified
            seen.add(alpha is not None)
    assert seen == {True, False}


def test_quotient_by_equivalence():
    pts = points_x2(Z2, 0)
    classes = quotient_points(pts)
    assert len(classes) == 130 == count_actions(2, Z2)
    assert sum(len(c.members) for c in classes) == len(pts)
    for c in classes[::10]:
        for m in c.members[:3]:
            assert equivalent_points(pts[m], c.representative) is not None
    report = quotient_report(pts, count_actions(2, Z2))
    assert report["totals"] == {"points": 772, "classes": 130, "actions": 130}
    assert report["checks"]["classes_equal_actions"]


def test_quotient_rejects_mixed_ends():
    a = canonical_point(next(enumerate_actions(1, Z2)))
    b = canonical_point(next(enumerate_actions(2, Z2)))
    with pytest.raises(Exception):
        quotient_points([a, b])


# -- compiled round trip ---------------------------------------------------------

def _scalar_ok(a: Action) -> bool:
    return phi_of_point(canonical_point(a)) == a


def test_batch_codes_agree_with_scalar_path():
    for B in order2_magmas():
        for zero in (0, 1):
            acts = list(enumerate_actions(2, B, zero))
            tables = np.asarray([a.phi for a in acts], dtype=np.int8)
            codes = roundtrip_codes(tables, 2, 2, zero, B.unit, np.asarray(B.table))
            assert (codes == OK).all()
            assert all(_scalar_ok(a) for a in acts)


def test_batch_flags_corrupted_tables():
    B = Z2
    acts = list(enumerate_actions(2, B, 0))
    valid = {a.phi for a in acts}
    corrupted = []
    for a in acts:
        for i in range(len(a.phi)):
            phi = list(a.phi)
            phi[i] ^= 1
            if tuple(phi) not in valid:
                corrupted.append(phi)
    codes = roundtrip_codes(np.asarray(corrupted, dtype=np.int8), 2, 2, 0, 0,
                            np.asarray(B.table))
    # OK would certify an action, and every action with zero 0 is in `valid`
    assert len(corrupted) > 100 and (codes != OK).all()


def test_census_over_small_cases():
    c = roundtrip_census(2, Z2)
    assert c.ok and c.actions == 130
    c = roundtrip_census(3, trivial_magma(), zero=2)
    assert c.ok and c.actions == count_actions(3, trivial_magma(), 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 129))
def test_canonical_point_round_trip(i):
    a = list(enumerate_actions(2, Z2))[i]
    pt = canonical_point(a)
    assert isinstance(pt, RetractionPoint)
    assert phi_of_point(pt) == a
    assert equivalent_points(pt, canonical_point(phi_of_point(pt))) is not None
