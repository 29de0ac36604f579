"""Points to actions and back: the classifying action of a point, the
canonical point of an action, equivalence of points, exhaustive enumeration
of both sides, and the quotient of a point set by equivalence."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable, Iterator, Sequence

import numpy as np

from .actions import Action, canonical_point
from .magma import ElementMap, FiniteMagma
from .points import RetractionPoint, require_valid, ssfl_transport
from .report import PreconditionError, StructuralError

DEFAULT_MAX_CANDIDATES = 10_000_000
DEFAULT_MAX_A = 4


class SearchTooLarge(ValueError):
    """Refusal to run an enumeration whose size exceeds the configured bound."""

    def __init__(self, estimate: int, bound: int, what: str = "search space"):
        super().__init__(f"{what} has {estimate} candidates, above the bound {bound}")
        self.estimate = estimate
        self.bound = bound


def phi_of_point(pt: RetractionPoint) -> Action:
    """``phi(x, b, x', b') = q((k(x) + s(b)) + (k(x') + s(b')))``."""
    require_valid(pt)
    return _phi_unchecked(pt)


def _phi_unchecked(pt: RetractionPoint) -> Action:
    t, q = pt.A.table, pt.q.values
    nx, B = pt.x_size, pt.B
    ks = [[pt.ks(x, b) for b in B.elements] for x in range(nx)]
    phi = tuple(q[t[ks[x][b]][ks[x2][b2]]]
                for x in range(nx) for b in B.elements
                for x2 in range(nx) for b2 in B.elements)
    return Action(B, nx, pt.zero_x, phi)


def _action_key(a: Action) -> tuple:
    return a.zero, a.phi


def equivalent_points(pt: RetractionPoint, pt2: RetractionPoint) -> ElementMap | None:
    """A morphism ``alpha: A -> A'`` with ``alpha k = k'``, ``alpha s = s'``,
    ``q' alpha = q`` when the two points have the same classifying action."""
    if not pt.same_ends(pt2):
        raise StructuralError("points do not share X and B")
    if phi_of_point(pt) != phi_of_point(pt2):
        return None
    return _equivalence_witness(pt, pt2)


def _equivalence_witness(pt: RetractionPoint, pt2: RetractionPoint) -> ElementMap:
    alpha = ElementMap(pt.A.size, pt2.A.size,
                       tuple(pt2.ks(pt.q(a), pt.p(a)) for a in pt.A.elements))
    transport = ssfl_transport(pt, pt2, alpha)
    if not transport.verified:
        raise AssertionError(f"equal actions but alpha fails: {transport.report!r}")
    return alpha


# -- action enumeration ------------------------------------------------------

@dataclass(frozen=True)
class ActionPlan:
    """Every action sharing one choice of ``phi(x, 0, 0, b)``.

    Each table position is either fixed (``template >= 0``) or copies one of
    the free ``slots``.  Slots are numbered by first position in the table and
    their choices are ascending, so counting through slot values in
    mixed radix walks the tables in lexicographic order.
    """

    B: FiniteMagma
    x_size: int
    n00: tuple[tuple[int, ...], ...]
    template: tuple[int, ...]
    slot_of: tuple[int, ...]
    choices: tuple[tuple[int, ...], ...]

    @property
    def count(self) -> int:
        c = 1
        for ch in self.choices:
            c *= len(ch)
        return c

    def table_at(self, index: int) -> tuple[int, ...]:
        values = []
        for ch in reversed(self.choices):
            index, r = divmod(index, len(ch))
            values.append(ch[r])
        values.reverse()
        return tuple(t if t >= 0 else values[s] for t, s in zip(self.template, self.slot_of))

    def tables(self) -> Iterator[tuple[int, ...]]:
        template, slot_of = self.template, self.slot_of
        for values in product(*self.choices):
            yield tuple(t if t >= 0 else values[s] for t, s in zip(template, slot_of))

    def batch(self, start: int, stop: int) -> np.ndarray:
        """Tables ``start..stop-1`` of this plan as an ``int8`` array."""
        idx = np.arange(start, stop, dtype=np.int64)
        nslots = len(self.choices)
        vals = np.empty((len(idx), max(nslots, 1)), dtype=np.int8)
        for s in range(nslots - 1, -1, -1):
            ch = np.asarray(self.choices[s], dtype=np.int8)
            idx, r = np.divmod(idx, len(ch))
            vals[:, s] = ch[r]
        template = np.asarray(self.template, dtype=np.int8)
        out = np.broadcast_to(template, (stop - start, len(template))).copy()
        free = np.flatnonzero(template < 0)
        if len(free):
            out[:, free] = vals[:, np.asarray(self.slot_of, dtype=np.int64)[free]]
        return out


def _idempotents_fixing(n: int, zero: int) -> list[tuple[int, ...]]:
    out = []
    for values in product(range(n), repeat=n):
        if values[zero] == zero and all(values[values[i]] == values[i] for i in range(n)):
            out.append(values)
    return out


def action_plans(x_size: int, B: FiniteMagma, zero: int = 0) -> list[ActionPlan]:
    """One plan per admissible ``phi(-, 0, 0, b)``, in lexicographic order of it.

    ``phi(-, 0, 0, b)`` must be an idempotent fixing zero (and the identity at
    ``b = 0``).  Given it, act4 forces ``phi(x,b,x',b')`` to equal its value at
    the reduced arguments ``(n(x,b), b, n(x',b'), b')``, whose value must be
    fixed by ``n(-, b+b')``; act1-act3 pin the remaining reduced entries on
    the boundary.
    """
    if x_size < 1:
        raise StructuralError("X must be non-empty")
    nx, nb, u = x_size, B.size, B.unit
    idem = _idempotents_fixing(nx, zero)
    others = [b for b in B.elements if b != u]
    plans = []
    for combo in product(idem, repeat=len(others)):
        cols = {u: tuple(range(nx))}
        cols.update(zip(others, combo))
        n = tuple(tuple(cols[b][x] for b in B.elements) for x in range(nx))
        fixed_pts = {b: tuple(x for x in range(nx) if cols[b][x] == x) for b in B.elements}
        template, slot_of, choices = [], [], []
        slot_ids: dict[tuple, int] = {}
        for x, b, x2, b2 in product(range(nx), B.elements, range(nx), B.elements):
            y, y2 = n[x][b], n[x2][b2]
            if b2 == u and y2 == zero:
                value = y
            elif b == u and y == zero:
                value = y2
            elif y == zero and y2 == zero:
                value = zero
            elif b == u and y2 == zero:
                value = n[y][b2]
            else:
                value = -1
            if value >= 0:
                template.append(value)
                slot_of.append(-1)
                continue
            key = (y, b, y2, b2)
            if key not in slot_ids:
                slot_ids[key] = len(choices)
                choices.append(fixed_pts[B.table[b][b2]])
            template.append(-1)
            slot_of.append(slot_ids[key])
        plans.append(ActionPlan(B, nx, n, tuple(template), tuple(slot_of), tuple(choices)))
    plans.sort(key=lambda p: p.table_at(0))
    return plans


def count_actions(x_size: int, B: FiniteMagma, zero: int = 0) -> int:
    return sum(p.count for p in action_plans(x_size, B, zero))


def enumerate_actions(x_size: int, B: FiniteMagma, zero: int = 0,
                      max_candidates: int = DEFAULT_MAX_CANDIDATES) -> Iterator[Action]:
    """Every action on ``{0..x_size-1}`` with the given zero, in lexicographic table order."""
    plans = action_plans(x_size, B, zero)
    total = sum(p.count for p in plans)
    if total > max_candidates:
        raise SearchTooLarge(total, max_candidates, "action enumeration")
    for phi in heapq.merge(*(p.tables() for p in plans)):
        yield Action(B, x_size, zero, phi)


# -- point enumeration -------------------------------------------------------

def count_point_candidates(x_size: int, B: FiniteMagma, max_a: int) -> int:
    """Upper bound on map tuples examined: one ``p`` per candidate table shape."""
    total = 0
    for n in range(1, max_a + 1):
        total += B.size ** (n - 1) * n ** ((n - 1) ** 2)
    return total


def _points_of_size(n: int, x_size: int, B: FiniteMagma,
                    zero_x: int | None) -> list[RetractionPoint]:
    u = B.unit
    found = []
    for p_rest in product(B.elements, repeat=n - 1):
        p = (u,) + p_rest
        fibers = {b: [a for a in range(n) if p[a] == b] for b in B.elements}
        if any(not fibers[b] for b in B.elements):
            continue
        kernel = fibers[u]
        if len(kernel) != x_size:
            continue
        s_choices = [[0] if b == u else fibers[b] for b in B.elements]
        for s in product(*s_choices):
            for k in permutations(kernel):
                zero = k.index(0)
                if zero_x is not None and zero != zero_x:
                    continue
                q_fixed: dict[int, int] = {k[x]: x for x in range(x_size)}
                for b in B.elements:
                    q_fixed[s[b]] = zero
                if any(q_fixed[k[x]] != x for x in range(x_size)):
                    continue
                free_q = [a for a in range(n) if a not in q_fixed]
                for q_rest in product(range(x_size), repeat=len(free_q)):
                    q = dict(q_fixed)
                    q.update(zip(free_q, q_rest))
                    qv = tuple(q[a] for a in range(n))
                    found.extend(_tables_for(n, x_size, B, p, s, k, qv, fibers))
    return found


def _tables_for(n, x_size, B, p, s, k, q, fibers) -> Iterator[RetractionPoint]:
    bt = B.table
    fixed: dict[tuple[int, int], int] = {}

    def pin(a, b, v):
        if fixed.get((a, b), v) != v:
            return False
        fixed[(a, b)] = v
        return True

    for a in range(n):
        if not (pin(0, a, a) and pin(a, 0, a)):
            return
    for b in B.elements:
        for b2 in B.elements:
            if not pin(s[b], s[b2], s[bt[b][b2]]):
                return
    for a in range(n):
        if not pin(k[q[a]], s[p[a]], a):
            return
    cells = []
    for a in range(n):
        for b in range(n):
            allowed = fibers[bt[p[a]][p[b]]]
            if (a, b) in fixed:
                if fixed[(a, b)] not in allowed:
                    return
            else:
                cells.append(((a, b), allowed))
    rows = [[fixed.get((a, b), 0) for b in range(n)] for a in range(n)]
    kmap = ElementMap(x_size, n, k)
    qmap = ElementMap(n, x_size, q)
    smap = ElementMap(B.size, n, s)
    pmap = ElementMap(n, B.size, p)
    for values in product(*(c[1] for c in cells)):
        for ((a, b), _), v in zip(cells, values):
            rows[a][b] = v
        A = FiniteMagma(n, 0, tuple(tuple(r) for r in rows))
        yield RetractionPoint(A, B, x_size, kmap, qmap, smap, pmap)


def point_key(pt: RetractionPoint) -> tuple:
    return pt.A.size, pt.A.flat(), pt.k.values, pt.q.values, pt.s.values, pt.p.values


def enumerate_points(x_size: int, B: FiniteMagma, max_a: int, zero_x: int | None = 0,
                     max_a_bound: int = DEFAULT_MAX_A) -> Iterator[RetractionPoint]:
    """Every valid point whose middle magma lives on ``{0..n-1}`` with unit 0, ``n <= max_a``.

    ``zero_x`` pins the zero ``q(0)`` of ``X`` the way :func:`enumerate_actions`
    pins the zero of its actions; pass ``None`` to range over every labelling.

    Ordered by ``n``, then table, then ``(k, q, s, p)``.  Candidates are
    generated from the maps first: ``p`` fixes the fibre each product must
    land in, and ``s`` being a morphism plus ``a = k(q(a)) + s(p(a))`` pin
    further entries, so only tables compatible with the maps are visited.
    """
    if x_size < 1:
        raise StructuralError("X must be non-empty")
    if max_a > max_a_bound:
        raise SearchTooLarge(count_point_candidates(x_size, B, max_a), max_a_bound,
                             f"point enumeration up to |A| = {max_a}")
    for n in range(1, max_a + 1):
        yield from sorted(_points_of_size(n, x_size, B, zero_x), key=point_key)


# -- quotient ------------------------------------------------------------------

@dataclass(frozen=True)
class EquivalenceClass:
    representative: RetractionPoint
    members: tuple
    classifying_action: Action


def quotient_points(points: Sequence[RetractionPoint],
                    ids: Sequence | None = None) -> list[EquivalenceClass]:
    """Group points by classifying action, in order of first appearance."""
    if not points:
        return []
    ids = list(range(len(points))) if ids is None else list(ids)
    first = points[0]
    groups: dict[tuple, list] = {}
    actions: dict[tuple, Action] = {}
    for pid, pt in zip(ids, points):
        if not pt.same_ends(first):
            raise StructuralError(f"point {pid} has different ends")
        a = phi_of_point(pt)
        key = _action_key(a)
        groups.setdefault(key, []).append(pid)
        actions.setdefault(key, a)
    return [EquivalenceClass(canonical_point(actions[key]), tuple(members), actions[key])
            for key, members in groups.items()]


def quotient_report(points: Sequence[RetractionPoint], action_count: int,
                    ids: Sequence | None = None) -> dict:
    from .io import action_to_doc

    classes = quotient_points(points, ids)
    return {
        "kind": "quotient",
        "classes": [{"action": action_to_doc(c.classifying_action),
                     "class_size": len(c.members),
                     "members": list(c.members)} for c in classes],
        "totals": {"points": len(points), "classes": len(classes), "actions": action_count},
        "checks": {"classes_equal_actions": len(classes) == action_count},
    }
