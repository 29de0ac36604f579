"""Command-line interface.

Exit status: 0 when every check passes, 1 when a checked structure is
invalid or two points are not equivalent, 2 for usage, input or parse errors
and for refused searches.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import examples as ex
from .actions import Action, canonical_point, semidirect_product, verify_action
from .classify import (DEFAULT_MAX_A, DEFAULT_MAX_CANDIDATES, SearchTooLarge, count_actions,
                       enumerate_actions, enumerate_points, equivalent_points, phi_of_point,
                       quotient_report)
from .io import (DocumentError, action_to_doc, dumps, load, magma_to_doc, map_to_doc,
                 point_to_doc, sdp_to_doc)
from .magma import ElementMap, FiniteMagma, cyclic_group, verify_unitary_magma
from .points import RetractionPoint, compose_points, composition_report, pullback_point, verify_point
from .report import PreconditionError, StructuralError, ValidationReport

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load_as(path: str, cls, what: str):
    obj = load(path)
    if not isinstance(obj, cls):
        raise UsageError(f"{path}: expected a {what} document")
    return obj


def _report_doc(target: str, report: ValidationReport) -> dict:
    return {"kind": "verification", "target": target, "valid": report.valid,
            "violations": [v.to_json() for v in report]}


def _b_magma(args) -> FiniteMagma:
    if args.b_file is None:
        raise UsageError("--b-file is required")
    return _load_as(args.b_file, FiniteMagma, "magma")


def _positive(name: str, value) -> None:
    if value is not None and value < 1:
        raise UsageError(f"{name} must be positive")


# -- subcommands --------------------------------------------------------------

def cmd_verify(args):
    obj = load(args.file)
    if isinstance(obj, FiniteMagma):
        report, target = verify_unitary_magma(obj), "magma"
    elif isinstance(obj, RetractionPoint):
        report, target = verify_point(obj), "point"
    elif isinstance(obj, Action):
        report, target = verify_action(obj), "action"
    else:
        raise UsageError("verify expects a magma, point or action document")
    return _report_doc(target, report), report.valid


def _invalid(target: str, exc: PreconditionError) -> tuple[dict, bool]:
    report = exc.report if exc.report is not None else ValidationReport()
    doc = _report_doc(target, report)
    doc["error"] = str(exc)
    return doc, False


def cmd_build(args):
    if args.what in ("sdp", "canonical-point"):
        a = _load_as(args.inputs[0], Action, "action")
        report = verify_action(a)
        if not report.valid:
            return _report_doc("action", report), False
        if args.what == "sdp":
            return sdp_to_doc(semidirect_product(a)), True
        return point_to_doc(canonical_point(a)), True
    if args.what == "pullback":
        if len(args.inputs) != 3:
            raise UsageError("build pullback POINT MAP MAGMA")
        pt = _load_as(args.inputs[0], RetractionPoint, "point")
        g = _load_as(args.inputs[1], ElementMap, "map")
        Z = _load_as(args.inputs[2], FiniteMagma, "magma")
        report = verify_point(pt)
        if not report.valid:
            return _report_doc("point", report), False
        try:
            return point_to_doc(pullback_point(pt, g, Z)), True
        except PreconditionError as exc:
            return _invalid("map", exc)
    # compose
    if len(args.inputs) != 2:
        raise UsageError("build compose POINT POINT")
    pt = _load_as(args.inputs[0], RetractionPoint, "point")
    pt2 = _load_as(args.inputs[1], RetractionPoint, "point")
    for target, p in (("point", pt), ("point", pt2)):
        report = verify_point(p)
        if not report.valid:
            return _report_doc(target, report), False
    composite = compose_points(pt, pt2)
    if composite is None:
        return _report_doc("composable", composition_report(pt, pt2)), False
    return point_to_doc(composite), True


def cmd_classify(args):
    pt = _load_as(args.point, RetractionPoint, "point")
    report = verify_point(pt)
    if not report.valid:
        return _report_doc("point", report), False
    return action_to_doc(phi_of_point(pt)), True


def cmd_equivalent(args):
    pt = _load_as(args.first, RetractionPoint, "point")
    pt2 = _load_as(args.second, RetractionPoint, "point")
    for p in (pt, pt2):
        report = verify_point(p)
        if not report.valid:
            return _report_doc("point", report), False
    if not pt.same_ends(pt2):
        raise UsageError("points do not share X and B")
    alpha = equivalent_points(pt, pt2)
    doc = {"kind": "equivalence", "equivalent": alpha is not None,
           "alpha": map_to_doc(alpha) if alpha is not None else None}
    if alpha is None:
        a, a2 = phi_of_point(pt), phi_of_point(pt2)
        i = next(i for i, (u, v) in enumerate(zip(a.phi, a2.phi)) if u != v) \
            if a.phi != a2.phi else None
        doc["witness"] = {"zero": [a.zero, a2.zero]} if i is None else {
            "argument": list(_unindex(a, i)), "values": [a.phi[i], a2.phi[i]]}
    return doc, alpha is not None


def _unindex(a: Action, i: int) -> tuple[int, int, int, int]:
    nb = a.B.size
    i, b2 = divmod(i, nb)
    i, x2 = divmod(i, a.x_size)
    x, b = divmod(i, nb)
    return x, b, x2, b2


def _zero(args) -> int | None:
    return None if args.any_zero else 0


def cmd_enumerate(args):
    _positive("--x", args.x)
    B = _b_magma(args)
    if args.what == "actions":
        zeros = range(args.x) if args.any_zero else (0,)
        items = [action_to_doc(a) for z in zeros for a in
                 enumerate_actions(args.x, B, z, max_candidates=args.max_candidates)]
    else:
        _positive("--max-a", args.max_a)
        items = [point_to_doc(p) for p in
                 enumerate_points(args.x, B, args.max_a, zero_x=_zero(args))]
    return {"kind": "enumeration", "what": args.what, "count": len(items), "items": items}, True


def cmd_quotient(args):
    _positive("--x", args.x)
    _positive("--max-a", args.max_a)
    B = _b_magma(args)
    points = list(enumerate_points(args.x, B, args.max_a, zero_x=_zero(args)))
    zeros = range(args.x) if args.any_zero else (0,)
    n_actions = sum(count_actions(args.x, B, z) for z in zeros)
    doc = quotient_report(points, n_actions)
    return doc, doc["checks"]["classes_equal_actions"]


def cmd_examples(args):
    _positive("--samples", args.samples)
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    if args.name == "interval":
        report = ex.halfline_transport_check(args.samples, args.tol, args.seed)
        lhs, rhs = ex.interval_nonassociativity()
        if lhs == rhs:
            report.add("nonassociative", lhs=lhs, rhs=rhs)
        doc = _report_doc("interval", report)
        doc["nonassociativity"] = {"(+1+-1)+-1": lhs, "+1+(-1+-1)": rhs}
        return doc, report.valid
    if args.name == "sphere":
        report = ex.sphere_verify(args.samples, args.tol, args.seed)
        return _report_doc("sphere", report), report.valid
    if args.name == "adjoin":
        S = _load_as(args.b_file, FiniteMagma, "magma") if args.b_file else cyclic_group(2)
        H = cyclic_group(2)
        pt = ex.adjoin_poles_point(S, H)
        report = verify_point(pt)
        report.extend(ex.particular_case_check(pt))
        flags = ex.trace_flags(pt)
        doc = _report_doc("adjoin", report)
        doc["point"] = point_to_doc(pt)
        doc["trace_flags"] = {n: getattr(flags, n) for n in ex.FLAG_NAMES}
        return doc, report.valid
    # medial
    B = _load_as(args.b_file, FiniteMagma, "magma") if args.b_file else cyclic_group(2)
    try:
        result = ex.medial_order_point(B, cap=args.max_candidates)
    except PreconditionError as exc:
        return _invalid("medial", exc)
    report = ValidationReport()
    for r in result.formula:
        report.extend(r)
    doc = _report_doc("medial", report)
    doc["B"] = magma_to_doc(B)
    doc["points"] = len(result.points)
    doc["classes"] = result.classes
    return doc, report.valid


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="umagma", description=__doc__.splitlines()[0])
    parser.add_argument("--out", help="write the report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a magma, point or action document")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("build", help="semidirect product, canonical point, pullback, composite")
    p.add_argument("what", choices=["sdp", "canonical-point", "pullback", "compose"])
    p.add_argument("inputs", nargs="+")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("classify", help="classifying action of a point")
    p.add_argument("point")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("equivalent", help="equivalence witness for two points")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_equivalent)

    for name, func in (("enumerate", cmd_enumerate), ("quotient", cmd_quotient)):
        p = sub.add_parser(name)
        if name == "enumerate":
            p.add_argument("what", choices=["actions", "points"])
        p.add_argument("--x", type=int, required=True, help="size of X")
        p.add_argument("--b-file", help="magma document for B")
        p.add_argument("--max-a", type=int, default=DEFAULT_MAX_A)
        p.add_argument("--max-candidates", type=int, default=DEFAULT_MAX_CANDIDATES)
        p.add_argument("--any-zero", action="store_true",
                       help="let the zero of X be any element instead of 0")
        p.set_defaults(func=func)

    p = sub.add_parser("examples", help="run an example suite")
    p.add_argument("name", choices=["interval", "sphere", "adjoin", "medial"])
    p.add_argument("--samples", type=int, default=ex.DEFAULT_SAMPLES)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=ex.DEFAULT_SEED)
    p.add_argument("--b-file", help="magma document (adjoin: S, medial: B)")
    p.add_argument("--max-candidates", type=int, default=ex.DEFAULT_MEDIAL_CAP)
    p.set_defaults(func=cmd_examples)

    # --out is accepted after the subcommand as well
    for action in sub.choices.values():
        action.add_argument("--out", default=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "tol", "unset") is None:
        args.tol = ex.TRIG_TOL if args.name == "sphere" else ex.RATIONAL_TOL
    try:
        doc, ok = args.func(args)
        status = EXIT_OK if ok else EXIT_INVALID
    except (UsageError, DocumentError, StructuralError, OSError, SearchTooLarge) as exc:
        doc, status = {"kind": "error", "error": str(exc)}, EXIT_USAGE
    except PreconditionError as exc:
        doc, status = {"kind": "error", "error": str(exc)}, EXIT_INVALID
    text = dumps(doc)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
