"""Worked examples and the particular-case identities of classifying actions.

Continuous examples (the interval magma and the sphere) are checked on
seeded samples with pole cases evaluated exactly.  Finite examples build
points that the rest of the package can enumerate, classify and compare.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations, product

import numpy as np

from .actions import Action, canonical_point
from .classify import SearchTooLarge, phi_of_point, quotient_points
from .magma import (ElementMap, FiniteMagma, adjoin_poles, adjoin_poles_map, cyclic_group,
                    direct_product, is_associative, is_left_loop, is_loop, is_medial,
                    left_difference, restrict, trivial_magma, NotClosedError)
from .points import (RetractionPoint, check_composition_sufficient, direct_product_point,
                     induced_x_magma, pair_map, require_valid, verify_point)
from .report import PreconditionError, StructuralError, ValidationReport

DEFAULT_SEED = 20240517
DEFAULT_SAMPLES = 10_000
RATIONAL_TOL = 1e-12
TRIG_TOL = 1e-9
DEFAULT_MEDIAL_CAP = 10_000


# -- the interval magma ---------------------------------------------------------

def _interval(b: float) -> float:
    b = float(b)
    if not -1.0 <= b <= 1.0:
        raise StructuralError(f"{b} is outside [-1, 1]")
    return b


def is_pole(b: float) -> bool:
    return b == 1.0 or b == -1.0


def _clamp_interior(r: float) -> float:
    # Rounding must not turn an interior result into a pole.
    return max(math.nextafter(-1.0, 0.0), min(math.nextafter(1.0, 0.0), r))


def interval_oplus(b: float, b2: float) -> float:
    """``b + b2`` on ``[-1, 1]`` with unit 0 and exact poles at ``±1``.

    Interior pairs give ``(b + b2) / (b b2 + 1)``; the denominator is
    evaluated as ``((1+b)(1+b2) + (1-b)(1-b2)) / 2``, which is the same
    number without cancellation near ``b b2 = -1``.  A pole absorbs any
    interior operand, equal poles are idempotent and opposite poles give 0.
    """
    b, b2 = _interval(b), _interval(b2)
    if b == 0.0:
        return b2
    if b2 == 0.0:
        return b
    if is_pole(b) and is_pole(b2):
        return b if b == b2 else 0.0
    if is_pole(b):
        return b
    if is_pole(b2):
        return b2
    den = ((1.0 + b) * (1.0 + b2) + (1.0 - b) * (1.0 - b2)) / 2.0
    return _clamp_interior((b + b2) / den)


def to_halfline(b: float) -> float:
    """``(1 + b) / (1 - b)`` with ``-1 -> 0`` and ``+1 -> inf``."""
    b = _interval(b)
    if b == -1.0:
        return 0.0
    if b == 1.0:
        return math.inf
    return (1.0 + b) / (1.0 - b)


def from_halfline(y: float) -> float:
    """``(y - 1) / (y + 1)`` with ``0 -> -1`` and ``inf -> +1``."""
    if y == 0.0:
        return -1.0
    if y == math.inf:
        return 1.0
    if not y > 0.0:
        raise StructuralError(f"{y} is outside [0, inf]")
    return _clamp_interior((y - 1.0) / (y + 1.0))


def halfline_mul(y: float, y2: float) -> float:
    """Multiplication on ``[0, inf]`` with the poles adjoined: ``0 * inf = 1``."""
    poles = (0.0, math.inf)
    if y == 1.0:
        return y2
    if y2 == 1.0:
        return y
    if y in poles and y2 in poles:
        return y if y == y2 else 1.0
    if y in poles:
        return y
    if y2 in poles:
        return y2
    return y * y2


# dictionary between the three special interval elements and the adjoined table
_POLE_INDEX = {0.0: 0, -1.0: 1, 1.0: 2}


def halfline_transport_check(samples: int = DEFAULT_SAMPLES, tol: float = RATIONAL_TOL,
                             seed: int = DEFAULT_SEED) -> ValidationReport:
    """Check that ``from_halfline`` carries multiplication to ``interval_oplus``.

    Interior samples are compared within ``tol`` (relative for values on the
    half-line).  The pole rows are compared exactly with
    :func:`umagma.magma.adjoin_poles` over the trivial magma, reading
    ``0, -1, +1`` as ``1, 0, inf``.
    """
    if samples < 1 or not tol > 0:
        raise PreconditionError("samples must be positive and tol must be > 0")
    rng = np.random.default_rng(seed)
    bs = rng.uniform(-1.0, 1.0, size=(samples, 2))
    report = ValidationReport()
    for i, (b, b2) in enumerate(bs.tolist()):
        direct = interval_oplus(b, b2)
        via = from_halfline(to_halfline(b) * to_halfline(b2))
        if abs(direct - via) > tol:
            report.add("oplus=g(f*f)", i, b=b, b2=b2, direct=direct, via=via)
        back = from_halfline(to_halfline(b))
        if abs(back - b) > tol:
            report.add("g.f=1", i, b=b, got=back)
        y = to_halfline(b2)
        again = to_halfline(from_halfline(y))
        if abs(again - y) > tol * max(1.0, y):
            report.add("f.g=1", i, y=y, got=again)
    table = adjoin_poles(trivial_magma()).table
    for b, b2 in product(_POLE_INDEX, repeat=2):
        got = interval_oplus(b, b2)
        expected = table[_POLE_INDEX[b]][_POLE_INDEX[b2]]
        if _POLE_INDEX.get(got) != expected:
            report.add("pole-table", b, b2, got=got, expected=expected)
        if to_halfline(got) != halfline_mul(to_halfline(b), to_halfline(b2)):
            report.add("pole-halfline", b, b2, got=got)
    for i, b in enumerate(bs[:, 0].tolist()):
        for pole in (-1.0, 1.0):
            for lhs, rhs in ((interval_oplus(pole, b), halfline_mul(to_halfline(pole), to_halfline(b))),
                             (interval_oplus(b, pole), halfline_mul(to_halfline(b), to_halfline(pole)))):
                if to_halfline(lhs) != rhs:
                    report.add("pole-absorbs", i, pole, b=b, got=lhs)
    return report


def interval_nonassociativity() -> tuple[float, float]:
    """``((+1) + (-1)) + (-1)`` and ``(+1) + ((-1) + (-1))``."""
    return (interval_oplus(interval_oplus(1.0, -1.0), -1.0),
            interval_oplus(1.0, interval_oplus(-1.0, -1.0)))


# -- the sphere ---------------------------------------------------------------

def normalize_angle(t: float) -> float:
    """Representative of ``t`` modulo ``2 pi`` in ``(-pi, pi]``."""
    r = math.remainder(t, 2.0 * math.pi)
    return math.pi if r <= -math.pi else r


def angle_distance(t: float, t2: float) -> float:
    return abs(math.remainder(t - t2, 2.0 * math.pi))


def sphere_phi(t: float, b: float, t2: float, b2: float) -> float:
    """Angles add while both heights are interior; a pole on either side gives 0."""
    if is_pole(_interval(b)) or is_pole(_interval(b2)):
        return 0.0
    return normalize_angle(t + t2)


def sphere_n00(t: float, b: float) -> float:
    return sphere_phi(t, 0.0, 0.0, b)


def sphere_admissible(t: float, b: float) -> bool:
    return sphere_n00(t, b) == t


def sphere_embed(t: float, b: float) -> tuple[float, float, float]:
    """The unit vector at angle ``t`` and height ``b``."""
    r = math.sqrt(max(0.0, 1.0 - b * b))
    return (r * math.cos(t), r * math.sin(t), b)


def sphere_p(v) -> float:
    return v[2]


def sphere_q(v) -> float:
    if is_pole(v[2]):
        return 0.0
    return normalize_angle(math.atan2(v[1], v[0]))


def sphere_s(z: float) -> tuple[float, float, float]:
    return (math.sqrt(max(0.0, 1.0 - z * z)), 0.0, z)


def sphere_k(t: float) -> tuple[float, float, float]:
    return (math.cos(t), math.sin(t), 0.0)


def _sphere_sum(t, b, t2, b2):
    """The product of admissible pairs ``(t, b) + (t2, b2)``."""
    return sphere_phi(t, b, t2, b2), interval_oplus(b, b2)


def _sphere_axioms(report, tag, t, b, t2, b2, tol):
    exact = tol == 0.0

    def close(u, v):
        return u == v if exact else angle_distance(u, v) <= tol

    z = 0.0
    if not (close(sphere_phi(t, z, z, z), t) and close(sphere_phi(z, z, t, z), t)):
        report.add("act1", tag, t)
    vals = (sphere_phi(t, b, z, z), sphere_phi(t, z, z, b), sphere_phi(z, z, t, b))
    if not (close(vals[0], vals[1]) and close(vals[1], vals[2])):
        report.add("act2", tag, t, b, values=vals)
    if sphere_phi(z, b, z, b2) != 0.0:
        report.add("act3", tag, b, b2)
    lhs = sphere_phi(t, b, t2, b2)
    inner = sphere_phi(sphere_n00(t, b), b, sphere_n00(t2, b2), b2)
    rhs = sphere_n00(inner, interval_oplus(b, b2))
    if not close(lhs, rhs):
        report.add("act4", tag, t, b, t2, b2, lhs=lhs, rhs=rhs)


def sphere_pole_census(angles) -> list[tuple[float, float]]:
    """Admissible pairs among ``angles x {-1, +1}``."""
    return sorted({(t, b) for t in angles for b in (-1.0, 1.0) if sphere_admissible(t, b)})


def sphere_verify(samples: int = DEFAULT_SAMPLES, tol: float = TRIG_TOL,
                  seed: int = DEFAULT_SEED) -> ValidationReport:
    """Action axioms, point maps and admissible pairs of the sphere example."""
    if samples < 1 or not tol > 0:
        raise PreconditionError("samples must be positive and tol must be > 0")
    rng = np.random.default_rng(seed)
    report = ValidationReport()
    ts = rng.uniform(-math.pi, math.pi, size=(samples, 2)).tolist()
    bs = rng.uniform(-1.0, 1.0, size=(samples, 2)).tolist()

    # every pole combination, exactly, on a handful of angles
    heights = (-1.0, 1.0, None)
    for i, (t, t2) in enumerate(ts[:16] + [[0.0, 0.0], [math.pi, math.pi]]):
        for h, h2 in product(heights, repeat=2):
            if h is None and h2 is None:
                continue
            b = bs[i % len(bs)][0] if h is None else h
            b2 = bs[i % len(bs)][1] if h2 is None else h2
            _sphere_axioms(report, "pole", t, b, t2, b2, 0.0)

    for (t, t2), (b, b2) in zip(ts, bs):
        _sphere_axioms(report, "interior", t, b, t2, b2, tol)

    # point maps on sampled unit vectors, plus both poles
    vs = rng.normal(size=(samples, 3))
    vs /= np.linalg.norm(vs, axis=1, keepdims=True)
    vectors = [tuple(v) for v in vs.tolist()] + [(0.0, 0.0, 1.0), (0.0, 0.0, -1.0)]
    for i, v in enumerate(vectors):
        z = v[2]
        if sphere_p(sphere_s(z)) != z:
            report.add("ps=1", i, z=z)
        if sphere_q(sphere_s(z)) != 0.0:
            report.add("qs=q0", i, z=z)
        t, b = sphere_q(v), sphere_p(v)
        if not sphere_admissible(t, b):
            report.add("pair-admissible", i, t=t, b=b)
        # kq(v) + sp(v), computed in the semidirect product and embedded
        back = sphere_embed(*_sphere_sum(t, 0.0, 0.0, b))
        if max(abs(u - w) for u, w in zip(back, v)) > tol:
            report.add("kq+sp=1", i, v=v, got=back)
    for i, (t, _) in enumerate(ts):
        if sphere_p(sphere_k(t)) != 0.0:
            report.add("pk=0", i, t=t)
        if angle_distance(sphere_q(sphere_k(t)), t) > tol:
            report.add("qk=1", i, t=t)

    # admissible pairs: every interior height, and angle 0 at the poles
    for i, ((t, _), (b, _)) in enumerate(zip(ts, bs)):
        for height in (b, -1.0, 1.0):
            expected = not is_pole(height) or t == 0.0
            if sphere_admissible(t, height) != expected:
                report.add("admissible", i, t=t, b=height)
    census = sphere_pole_census([0.0, math.pi] + [t for t, _ in ts])
    if census != [(0.0, -1.0), (0.0, 1.0)]:
        report.add("two-poles", census=census)
    return report


# -- a finite analogue of the sphere -----------------------------------------

def adjoin_poles_point(S: FiniteMagma, H: FiniteMagma) -> RetractionPoint:
    """The point from ``S`` to ``H`` with two poles adjoined.

    ``A`` is ``S x H`` with poles adjoined, ``k(x) = (x, 1)``, ``s(h) = (1, h)``,
    ``p`` the second projection extended to the poles and ``q`` the first
    projection sending both poles to the unit of ``S``.
    """
    SH = direct_product(S, H)
    A, B = adjoin_poles(SH), adjoin_poles(H)
    nh, n = H.size, SH.size
    proj_h = ElementMap(n, nh, tuple(a % nh for a in SH.elements))
    pt = RetractionPoint(
        A=A, B=B, x_size=S.size,
        k=ElementMap(S.size, A.size, tuple(x * nh + H.unit for x in S.elements)),
        q=ElementMap(A.size, S.size, tuple(a // nh for a in SH.elements) + (S.unit, S.unit)),
        s=ElementMap(B.size, A.size, tuple(S.unit * nh + h for h in H.elements) + (n, n + 1)),
        p=adjoin_poles_map(proj_h),
    )
    require_valid(pt)
    return pt


# -- the medial order ---------------------------------------------------------

@dataclass
class MedialOrder:
    """Points obtained from every admissible choice of differences."""

    B: FiniteMagma
    carrier: tuple[tuple[int, int], ...]
    points: list[RetractionPoint]
    formula: list[ValidationReport]
    classes: int


def medial_order_point(B: FiniteMagma, cap: int = DEFAULT_MEDIAL_CAP) -> MedialOrder:
    """Points on ``A = {(x, b) : x = u + b for some u}`` inside ``B x B``.

    ``k(x) = (x, 0)``, ``s(b) = (b, b)``, ``p`` is the second projection and
    ``q(x, b)`` ranges over the solutions ``u`` of ``u + b = x`` (with
    ``q(b, b) = 0`` and ``q(x, 0) = x``).  Every choice that yields a valid
    point is returned.  For each, the classifying action is checked against
    ``((u + u') + (b + b')) - (b + b')``: its value must solve that
    subtraction, and must be the solution whenever there is only one.
    """
    if not is_medial(B):
        raise PreconditionError("B is not medial")
    n, t, u0 = B.size, B.table, B.unit
    carrier = sorted({(t[u][b], b) for u in B.elements for b in B.elements})
    BB = direct_product(B, B)
    try:
        A, elems = restrict(BB, (x * n + b for x, b in carrier))
    except NotClosedError as exc:
        report = ValidationReport()
        report.add("closure", *exc.pair, result=exc.result)
        raise PreconditionError("order carrier is not closed", report) from exc
    carrier = tuple(divmod(e, n) for e in elems)
    pos = {pr: i for i, pr in enumerate(carrier)}

    options = []
    for x, b in carrier:
        if x == b:
            options.append((u0,))
        elif b == u0:
            options.append((x,))
        else:
            options.append(tuple(u for u in B.elements if t[u][b] == x))
    total = math.prod(len(o) for o in options)
    if total > cap:
        raise SearchTooLarge(total, cap, "choice functions")

    k = ElementMap(n, A.size, tuple(pos[(x, u0)] for x in B.elements))
    s = ElementMap(n, A.size, tuple(pos[(b, b)] for b in B.elements))
    p = ElementMap(A.size, n, tuple(b for _, b in carrier))
    points, formula = [], []
    for choice in product(*options):
        pt = RetractionPoint(A=A, B=B, x_size=n, k=k, q=ElementMap(A.size, n, choice), s=s, p=p)
        if verify_point(pt).valid:
            points.append(pt)
            formula.append(_medial_formula_report(pt))
    classes = len(quotient_points(points)) if points else 0
    return MedialOrder(B, carrier, points, formula, classes)


def _medial_formula_report(pt: RetractionPoint) -> ValidationReport:
    B, t = pt.B, pt.B.table
    phi = phi_of_point(pt)
    report = ValidationReport()
    for u, b, u2, b2 in product(B.elements, repeat=4):
        c = t[b][b2]
        w = t[t[u][u2]][c]
        v = phi(u, b, u2, b2)
        sols = [y for y in B.elements if t[y][c] == w]
        if t[v][c] != w:
            report.add("medial.solves", u, b, u2, b2, got=v, target=w)
        elif len(sols) == 1 and v != sols[0]:
            report.add("medial.unique", u, b, u2, b2, got=v, expected=sols[0])
    return report


# -- trace flags and the particular-case ladder --------------------------------

FLAG_NAMES = ("kks", "sks", "oneks", "kss", "ksk", "kso")


@dataclass(frozen=True)
class TraceFlags:
    """Which bracketings of ``k``, ``s`` and ``1_A`` reassociate.

    ``oneks`` stands for ``1_A + (k + s) = (1_A + k) + s`` and ``kso`` for
    ``k + (s + 1_A) = (k + s) + 1_A``.  ``witnesses`` maps each false flag to
    the first failing argument tuple.
    """

    kks: bool
    sks: bool
    oneks: bool
    kss: bool
    ksk: bool
    kso: bool
    witnesses: dict = field(default_factory=dict, compare=False)

    def holds(self, *names: str) -> bool:
        return all(getattr(self, n) for n in names)


def _first_failure(triples, t):
    for a, b, c in triples:
        if t[a][t[b][c]] != t[t[a][b]][c]:
            return a, b, c
    return None


def trace_flags(pt: RetractionPoint) -> TraceFlags:
    t = pt.A.table
    K, S, A = pt.k.values, pt.s.values, tuple(pt.A.elements)
    # witnesses are reported as element indices of A
    families = {
        "kks": product(K, K, S),
        "sks": product(S, K, S),
        "oneks": product(A, K, S),
        "kss": product(K, S, S),
        "ksk": product(K, S, K),
        "kso": product(K, S, A),
    }
    witnesses = {}
    for name, triples in families.items():
        w = _first_failure(triples, t)
        if w is not None:
            witnesses[name] = w
    return TraceFlags(**{n: n not in witnesses for n in FLAG_NAMES}, witnesses=witnesses)


@dataclass(frozen=True)
class CaseResult:
    item: int
    flags: tuple[str, ...]
    hypothesis: bool
    conclusion: bool
    witness: tuple | None


LADDER = {
    1: ("kks",),
    2: ("sks",),
    3: ("oneks",),
    4: ("kss",),
    5: ("ksk",),
    6: ("kso",),
    7: ("kks", "ksk"),
    8: ("sks", "kss"),
    9: ("oneks", "kss", "ksk"),
    10: ("kso", "kks", "sks"),
}


def _ladder_identities(phi: Action):
    """For each item, ``(lhs, rhs)`` as functions of ``(x, b, x', b')``."""
    u, z, bt = phi.B.unit, phi.zero, phi.B.table

    def plus_at(x, c, x2):          # x +_c x'
        return phi(x, u, x2, c)

    def xi_up(x, b, x2):            # xi^x(b, x')
        return phi(x, b, x2, u)

    def xi_low(c, b, x2):           # xi_c(b, x')
        return phi(z, b, x2, c)

    def rho_up(b, c, x):            # rho^b_c(x)
        return phi(x, b, z, c)

    def add(x, x2):
        return phi(x, u, x2, u)

    def xi(b, x2):
        return phi(z, b, x2, u)

    def rho(c, x):
        return phi(x, u, z, c)

    return {
        1: (lambda x, b, x2, b2: plus_at(x, b2, x2), lambda x, b, x2, b2: rho(b2, add(x, x2))),
        2: (lambda x, b, x2, b2: xi_low(b2, b, x2), lambda x, b, x2, b2: rho_up(b, b2, xi(b, x2))),
        3: (phi, lambda x, b, x2, b2: rho_up(b, b2, xi_up(x, b, x2))),
        4: (lambda x, b, x2, b2: rho_up(b, b2, x), lambda x, b, x2, b2: rho(bt[b][b2], x)),
        5: (lambda x, b, x2, b2: xi_up(x, b, x2), lambda x, b, x2, b2: plus_at(x, b, xi(b, x2))),
        6: (phi, lambda x, b, x2, b2: plus_at(x, bt[b][b2], xi_low(b2, b, x2))),
        7: (lambda x, b, x2, b2: xi_up(x, b, x2), lambda x, b, x2, b2: rho(b, add(x, xi(b, x2)))),
        8: (lambda x, b, x2, b2: xi_low(b2, b, x2), lambda x, b, x2, b2: rho(bt[b][b2], xi(b, x2))),
        9: (phi, lambda x, b, x2, b2: rho(bt[b][b2], add(x, xi(b, x2)))),
        10: (phi, lambda x, b, x2, b2: rho(bt[b][b2], add(x, xi(b, x2)))),
    }


def ladder(pt: RetractionPoint) -> list[CaseResult]:
    """Every item evaluated exhaustively, whether or not its hypothesis holds."""
    phi = phi_of_point(pt)
    flags = trace_flags(pt)
    X, Bs = range(pt.x_size), pt.B.elements
    out = []
    for item, (lhs, rhs) in _ladder_identities(phi).items():
        witness = None
        for args in product(X, Bs, X, Bs):
            if lhs(*args) != rhs(*args):
                witness = args
                break
        names = LADDER[item]
        out.append(CaseResult(item, names, flags.holds(*names), witness is None, witness))
    return out


def particular_case_check(pt: RetractionPoint) -> ValidationReport:
    """Violations are items whose hypothesis holds but whose identity fails."""
    report = ValidationReport()
    for r in ladder(pt):
        if r.hypothesis and not r.conclusion:
            report.add(f"item{r.item}", *r.witness, flags=list(r.flags))
    return report


# -- monoids and left loops -----------------------------------------------------

class StructureReport(ValidationReport):
    """Violations plus which of the two branches applied."""

    def __init__(self, *args):
        super().__init__(*args)
        self.branches: dict[str, bool] = {"monoid": False, "left_loop": False}

    @property
    def applicable(self) -> bool:
        return any(self.branches.values())

    def to_json(self) -> dict:
        out = super().to_json()
        out["branches"] = {k: ("checked" if v else "not applicable") for k, v in self.branches.items()}
        return out


def special_structure_check(pt: RetractionPoint) -> StructureReport:
    """The simplified forms that hold when ``A`` is a monoid or a left loop."""
    require_valid(pt)
    report = StructureReport()
    A = pt.A
    if is_associative(A):
        report.branches["monoid"] = True
        _monoid_branch(pt, report)
    if is_left_loop(A):
        report.branches["left_loop"] = True
        _left_loop_branch(pt, report)
    return report


def _monoid_branch(pt: RetractionPoint, report: ValidationReport) -> None:
    phi = phi_of_point(pt)
    B, bt = pt.B, pt.B.table
    u, z = B.unit, pt.zero_x
    X = range(pt.x_size)
    if not is_associative(induced_x_magma(pt)):
        report.add("monoid.X")
    if not is_associative(B):
        report.add("monoid.B")

    fixed = {(x, b) for x in X for b in B.elements if phi(x, u, z, b) == x}
    pairs = pair_map(pt)
    if set(pairs) != fixed or len(set(pairs)) != len(pairs):
        report.add("monoid.pairs", image=sorted(set(pairs)), fixed=sorted(fixed))
    for a, (x, b) in enumerate(pairs):
        if pt.ks(x, b) != a:
            report.add("monoid.inverse", a, got=pt.ks(x, b))
    for x, b in sorted(fixed):
        if pairs[pt.ks(x, b)] != (x, b):
            report.add("monoid.inverse", x, b)

    for x, b, x2, b2 in product(X, B.elements, X, B.elements):
        # rho_{b+b'}(x + xi(b, x'))
        rhs = phi(phi(x, u, phi(z, b, x2, u), u), u, z, bt[b][b2])
        if phi(x, b, x2, b2) != rhs:
            report.add("monoid.phi", x, b, x2, b2, lhs=phi(x, b, x2, b2), rhs=rhs)
    for v in check_composition_sufficient(pt):
        report.add("monoid." + v.axiom, *v.witness, **v.detail)


def _left_loop_branch(pt: RetractionPoint, report: ValidationReport) -> None:
    phi = phi_of_point(pt)
    A, B, t, bt = pt.A, pt.B, pt.A.table, pt.B.table
    u, z = B.unit, pt.zero_x
    k, s = pt.k, pt.s
    X = range(pt.x_size)
    for x, b in product(X, B.elements):
        if phi(x, u, z, b) != x:
            report.add("loop.rho", x, b, got=phi(x, u, z, b))
    for a in A.elements:
        expected = left_difference(A, a, s(pt.p(a)))
        if k(pt.q(a)) != expected:
            report.add("loop.kq", a, got=k(pt.q(a)), expected=expected)
    for b, x in product(B.elements, X):
        expected = left_difference(A, t[s(b)][k(x)], s(b))
        if k(phi(z, b, x, u)) != expected:
            report.add("loop.xi", b, x, got=k(phi(z, b, x, u)), expected=expected)
    for x, b, x2, b2 in product(X, B.elements, X, B.elements):
        expected = left_difference(A, t[pt.ks(x, b)][pt.ks(x2, b2)], s(bt[b][b2]))
        if k(phi(x, b, x2, b2)) != expected:
            report.add("loop.phi", x, b, x2, b2, got=k(phi(x, b, x2, b2)), expected=expected)
    pairs = pair_map(pt)
    if sorted(pairs) != [(x, b) for x in X for b in B.elements]:
        report.add("loop.pairs", image=sorted(set(pairs)))
    for a, (x, b) in enumerate(pairs):
        if pt.ks(x, b) != a:
            report.add("loop.inverse", a, got=pt.ks(x, b))


# -- small fixtures ----------------------------------------------------------------

def symmetric_group_3() -> FiniteMagma:
    """Permutations of ``{0, 1, 2}`` in lexicographic order, composed right to left."""
    perms = list(permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    return FiniteMagma.from_function(
        6, 0, lambda i, j: index[tuple(perms[i][perms[j][x]] for x in range(3))])


def inversion_action() -> Action:
    """``Z2`` acting on ``Z3`` by negation: ``phi(x, b, x', b') = x + (-1)^b x'``."""
    return Action.from_function(cyclic_group(2), 3, 0,
                                lambda x, b, x2, b2: (x + (-x2 if b else x2)) % 3)


def s3_point() -> RetractionPoint:
    return canonical_point(inversion_action())


def find_nonassociative_loops(n: int, limit: int = 1) -> list[FiniteMagma]:
    """Nonassociative loops of order ``n`` with unit 0, by row-wise backtracking."""
    found: list[FiniteMagma] = []
    rows = [list(range(n))] + [[i] + [-1] * (n - 1) for i in range(1, n)]

    def fill(r: int, c: int) -> bool:
        if r == n:
            m = FiniteMagma(n, 0, tuple(map(tuple, rows)))
            if not is_associative(m):
                found.append(m)
            return len(found) >= limit
        if c == n:
            return fill(r + 1, 1)
        used_row = set(rows[r][:c])
        used_col = {rows[i][c] for i in range(r)}
        for v in range(n):
            if v in used_row or v in used_col:
                continue
            rows[r][c] = v
            if fill(r, c + 1):
                return True
        rows[r][c] = -1
        return False

    fill(1, 1)
    return found


def left_loop_points(L: FiniteMagma) -> list[RetractionPoint]:
    """Direct-product points whose middle magma is a left loop built from ``L``."""
    if not is_loop(L):
        raise PreconditionError("expected a loop")
    T, Z2 = trivial_magma(), cyclic_group(2)
    return [direct_product_point(L, T), direct_product_point(T, L), direct_product_point(L, Z2)]
