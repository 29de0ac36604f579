"""Compiled round trip ``action -> canonical point -> classifying action``.

Exhaustive censuses run to tens of millions of actions, too many for the
object-level path in :mod:`umagma.classify`.  The kernel below performs the
same steps on raw tables: collect admissible pairs, build the semidirect
product table, read off ``k, q, s, p`` and recompute ``phi`` through them.
Status ``OK`` means the candidate is a valid point whose classifying action
is the input table, so the table is itself an action.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .classify import action_plans
from .magma import FiniteMagma

# Kernel status codes.
OK = 0
NOT_CLOSED = 1
NO_UNIT = 2
K_UNDEFINED = 3
S_UNDEFINED = 4
ZERO_MISMATCH = 5
PHI_MISMATCH = 6
DECOMPOSITION = 7
S_NOT_MORPHISM = 8
NOT_UNITAL = 9

STATUS_NAMES = {
    NOT_CLOSED: "admissible pairs not closed",
    NO_UNIT: "(0, 0) not admissible",
    K_UNDEFINED: "(x, 0) not admissible",
    S_UNDEFINED: "(0, b) not admissible",
    ZERO_MISMATCH: "q(0) differs from zero",
    PHI_MISMATCH: "recomputed phi differs",
    DECOMPOSITION: "kq + sp != 1",
    S_NOT_MORPHISM: "s not a morphism",
    NOT_UNITAL: "(0, 0) not a two-sided unit",
}


@njit(cache=True)
def _roundtrip_row(phi, nx, nb, zero, u, bt, pos, px, pb, sdp, kk, ss):
    n = 0
    for x in range(nx):
        for b in range(nb):
            if phi[((x * nb + u) * nx + zero) * nb + b] == x:
                pos[x, b] = n
                px[n] = x
                pb[n] = b
                n += 1
            else:
                pos[x, b] = -1
    for i in range(n):
        for j in range(n):
            v = phi[((px[i] * nb + pb[i]) * nx + px[j]) * nb + pb[j]]
            r = pos[v, bt[pb[i], pb[j]]]
            if r < 0:
                return NOT_CLOSED
            sdp[i, j] = r
    unit = pos[zero, u]
    if unit < 0:
        return NO_UNIT
    for x in range(nx):
        kk[x] = pos[x, u]
        if kk[x] < 0:
            return K_UNDEFINED
    for b in range(nb):
        ss[b] = pos[zero, b]
        if ss[b] < 0:
            return S_UNDEFINED
    if px[unit] != zero:
        return ZERO_MISMATCH
    for i in range(n):
        if sdp[unit, i] != i or sdp[i, unit] != i:
            return NOT_UNITAL
    for i in range(n):
        if sdp[kk[px[i]], ss[pb[i]]] != i:
            return DECOMPOSITION
    for b in range(nb):
        for b2 in range(nb):
            if sdp[ss[b], ss[b2]] != ss[bt[b, b2]]:
                return S_NOT_MORPHISM
    for x in range(nx):
        for b in range(nb):
            a1 = sdp[kk[x], ss[b]]
            for x2 in range(nx):
                for b2 in range(nb):
                    a2 = sdp[kk[x2], ss[b2]]
                    if px[sdp[a1, a2]] != phi[((x * nb + b) * nx + x2) * nb + b2]:
                        return PHI_MISMATCH
    return OK


@njit(cache=True)
def roundtrip_codes(tables, nx, nb, zero, u, bt):
    """Status code per row of ``tables`` (one flattened action per row)."""
    m = tables.shape[0]
    out = np.zeros(m, dtype=np.int8)
    pos = np.empty((nx, nb), dtype=np.int64)
    px = np.empty(nx * nb, dtype=np.int64)
    pb = np.empty(nx * nb, dtype=np.int64)
    sdp = np.empty((nx * nb, nx * nb), dtype=np.int64)
    kk = np.empty(nx, dtype=np.int64)
    ss = np.empty(nb, dtype=np.int64)
    for r in range(m):
        out[r] = _roundtrip_row(tables[r], nx, nb, zero, u, bt, pos, px, pb, sdp, kk, ss)
    return out


@dataclass
class RoundTripCensus:
    B: FiniteMagma
    x_size: int
    actions: int = 0
    failure_count: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failure_count == 0


def roundtrip_census(x_size: int, B: FiniteMagma, zero: int = 0,
                     batch_size: int = 1 << 20, keep: int = 10) -> RoundTripCensus:
    """Run the round trip over every action with the given ``X`` and ``B``.

    Failures keep the first ``keep`` offending tables with their status.
    """
    census = RoundTripCensus(B, x_size)
    bt = np.asarray(B.table, dtype=np.int64)
    for plan in action_plans(x_size, B, zero):
        for start in range(0, plan.count, batch_size):
            stop = min(plan.count, start + batch_size)
            tables = plan.batch(start, stop)
            codes = roundtrip_codes(tables, x_size, B.size, zero, B.unit, bt)
            census.actions += stop - start
            bad = np.flatnonzero(codes)
            census.failure_count += len(bad)
            for r in bad[: max(0, keep - len(census.failures))]:
                census.failures.append((tuple(int(v) for v in tables[r]), int(codes[r])))
    return census
