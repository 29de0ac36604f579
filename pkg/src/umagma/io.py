"""JSON documents for magmas, maps, points and actions.

Every document names its ``kind``; unknown fields are rejected.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .actions import Action, SemidirectProduct
from .magma import ElementMap, FiniteMagma
from .points import RetractionPoint
from .report import StructuralError


class DocumentError(StructuralError):
    pass


def _fields(doc: Any, kind: str, required: set[str], optional: set[str] = frozenset()) -> dict:
    if not isinstance(doc, dict):
        raise DocumentError(f"{kind} document must be an object")
    if doc.get("kind") != kind:
        raise DocumentError(f"expected kind {kind!r}, got {doc.get('kind')!r}")
    keys = set(doc) - {"kind"}
    missing = required - keys
    unknown = keys - required - set(optional)
    if missing:
        raise DocumentError(f"{kind} document missing fields {sorted(missing)}")
    if unknown:
        raise DocumentError(f"{kind} document has unknown fields {sorted(unknown)}")
    return doc


def _int(v, what):
    if isinstance(v, bool) or not isinstance(v, int):
        raise DocumentError(f"{what} must be an integer")
    return v


def _ints(v, what):
    if not isinstance(v, list):
        raise DocumentError(f"{what} must be a list")
    return [_int(x, what) for x in v]


def magma_to_doc(m: FiniteMagma) -> dict:
    return {"kind": "magma", "size": m.size, "unit": m.unit, "table": [list(r) for r in m.table]}


def magma_from_doc(doc: Any) -> FiniteMagma:
    d = _fields(doc, "magma", {"size", "unit", "table"})
    if not isinstance(d["table"], list):
        raise DocumentError("table must be a list of rows")
    rows = [_ints(r, "table row") for r in d["table"]]
    return FiniteMagma(_int(d["size"], "size"), _int(d["unit"], "unit"), tuple(map(tuple, rows)))


def map_to_doc(f: ElementMap) -> dict:
    return {"kind": "map", "dom": f.dom, "cod": f.cod, "values": list(f.values)}


def map_from_doc(doc: Any) -> ElementMap:
    d = _fields(doc, "map", {"dom", "cod", "values"})
    return ElementMap(_int(d["dom"], "dom"), _int(d["cod"], "cod"), tuple(_ints(d["values"], "values")))


def point_to_doc(pt: RetractionPoint) -> dict:
    return {
        "kind": "point",
        "A": magma_to_doc(pt.A),
        "B": magma_to_doc(pt.B),
        "x_size": pt.x_size,
        "k": list(pt.k.values),
        "q": list(pt.q.values),
        "s": list(pt.s.values),
        "p": list(pt.p.values),
    }


def point_from_doc(doc: Any) -> RetractionPoint:
    d = _fields(doc, "point", {"A", "B", "x_size", "k", "q", "s", "p"})
    A, B = magma_from_doc(d["A"]), magma_from_doc(d["B"])
    nx = _int(d["x_size"], "x_size")
    return RetractionPoint(
        A=A, B=B, x_size=nx,
        k=ElementMap(nx, A.size, tuple(_ints(d["k"], "k"))),
        q=ElementMap(A.size, nx, tuple(_ints(d["q"], "q"))),
        s=ElementMap(B.size, A.size, tuple(_ints(d["s"], "s"))),
        p=ElementMap(A.size, B.size, tuple(_ints(d["p"], "p"))),
    )


def action_to_doc(a: Action) -> dict:
    return {"kind": "action", "B": magma_to_doc(a.B), "x_size": a.x_size,
            "zero": a.zero, "phi": list(a.phi)}


def action_from_doc(doc: Any) -> Action:
    d = _fields(doc, "action", {"B", "x_size", "zero", "phi"})
    return Action(magma_from_doc(d["B"]), _int(d["x_size"], "x_size"),
                  _int(d["zero"], "zero"), tuple(_ints(d["phi"], "phi")))


def sdp_to_doc(sdp: SemidirectProduct) -> dict:
    return {"kind": "sdp", "pairs": [list(p) for p in sdp.pairs], "magma": magma_to_doc(sdp.magma)}


LOADERS = {
    "magma": magma_from_doc,
    "map": map_from_doc,
    "point": point_from_doc,
    "action": action_from_doc,
}


def from_doc(doc: Any):
    if not isinstance(doc, dict) or doc.get("kind") not in LOADERS:
        kind = doc.get("kind") if isinstance(doc, dict) else None
        raise DocumentError(f"unknown document kind {kind!r}")
    return LOADERS[doc["kind"]](doc)


def load(path: str | Path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{path}: {exc}") from exc
    return from_doc(doc)


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2) + "\n"
