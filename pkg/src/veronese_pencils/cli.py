"""Command-line front end.

Subcommands:

    classify      label one pencil from JSON (file or inline)
    census        full line census, classifier / oracle / both
    verify        the whole verification battery for one q
    stabilizer    brute-force stabiliser order of a pencil
    point-census  point counts of PG(5,q) by class
    canon         print the canonical representative of a class

Exit codes: 0 success, 2 malformed input, 3 dependent basis, 4 field
errors (including size caps), 5 classifier/oracle mismatch or failed
verification.  All machine output is JSON on stdout; ``--format text``
renders censuses as aligned columns.  Reports are byte-identical across
runs and across ``--parallel`` settings.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import orbits
from .classify import (all_labels, canonical_rep, classify, expected_counts,
                       expected_stabilizer_order, InvalidLabelForField,
                       parse_label, pencil_of_conics)
from .gf import FieldError, FieldTooLarge, field_of_order
from .pencil import DependentBasis, invariant_profile, make_pencil
from .symspace import point_census, ZeroMatrix

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_DEPENDENT = 3
EXIT_FIELD = 4
EXIT_MISMATCH = 5


class _InputError(ValueError):
    pass


def _field_from_args(args):
    modulus = None
    if getattr(args, "modulus", None):
        try:
            modulus = [int(x) for x in args.modulus.split(",")]
        except ValueError:
            raise _InputError(f"bad --modulus {args.modulus!r}")
    return field_of_order(args.q, modulus=modulus)


def _load_pencil_doc(args, fld):
    if getattr(args, "inline", None):
        text = args.inline
    elif getattr(args, "pencil", None):
        with open(args.pencil, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        raise _InputError("one of --pencil or --inline is required")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _InputError(f"bad JSON: {exc}")
    if not isinstance(doc, dict):
        raise _InputError("pencil document must be a JSON object")
    if "q" in doc and doc["q"] != fld.q:
        raise _InputError(f"document q = {doc['q']} does not match --q {fld.q}")
    mats = []
    for name in ("A", "B"):
        if name not in doc:
            raise _InputError(f"pencil document is missing {name!r}")
        arr = doc[name]
        if (not isinstance(arr, list) or len(arr) != 6
                or not all(isinstance(x, int) and 0 <= x < fld.q for x in arr)):
            raise _InputError(f"{name} must be a list of 6 codes in [0, {fld.q})")
        mats.append(tuple(arr))
    return mats[0], mats[1]


def _profile_dict(prof):
    out = {
        "rankDistribution": list(prof.dist),
        "hasCommonRadical": prof.has_common_radical,
        "rank2Points": [
            {"point": list(point), "class": {"rank": pc.rank, "subtype": pc.subtype},
             "detMultiplicity": mult}
            for point, pc, mult in prof.rank2_points
        ],
    }
    if prof.ext_count is not None:
        out["extCount"] = prof.ext_count
        out["qMod4"] = prof.q_mod4
    if prof.nucleus_count is not None:
        out["nucleusCount"] = prof.nucleus_count
    return out


def _emit(obj):
    print(json.dumps(obj, indent=2, sort_keys=False))


def cmd_classify(args):
    fld = _field_from_args(args)
    a, b = _load_pencil_doc(args, fld)
    p = make_pencil(a, b, fld)
    label = classify(p, fld)
    prof = invariant_profile(p, fld)
    by_label, _ = expected_counts(fld)
    _emit({
        "q": fld.q,
        "label": label.text,
        "rankDistribution": list(prof.dist),
        "profile": _profile_dict(prof),
        "expectedStabilizerOrder": expected_stabilizer_order(label, fld),
        "expectedOrbitSize": by_label[label],
    })
    return EXIT_OK


def _census_text(report):
    lines = [f"census q={report.q} mode={report.mode}"]
    lines.append(f"{'label':>6}  {'orbits':>6}  {'lines':>10}")
    for text, entry in report.per_label.items():
        lines.append(f"{text:>6}  {entry['orbits']:>6}  {entry['lines']:>10}")
    lines.append(f"{'total':>6}  {'':>6}  {report.total_lines:>10}")
    lines.append(f"consistent: {report.consistent}")
    return "\n".join(lines)


def cmd_census(args):
    fld = _field_from_args(args)
    report = orbits.census(fld, mode=args.mode, parallel=args.parallel)
    if args.format == "text":
        print(_census_text(report))
    else:
        _emit(report.as_dict())
    return EXIT_OK if report.consistent else EXIT_MISMATCH


def cmd_stabilizer(args):
    fld = _field_from_args(args)
    a, b = _load_pencil_doc(args, fld)
    p = make_pencil(a, b, fld)
    rep = orbits.stabilizer_order(p, fld)
    _emit({
        "q": fld.q,
        "pencil": [list(p.a), list(p.b)],
        "order": rep.order,
        "sampleElements": [[list(r) for r in m] for m in rep.sample_elements],
    })
    return EXIT_OK


def cmd_point_census(args):
    fld = _field_from_args(args)
    counts = point_census(fld)
    _emit({"q": fld.q, **counts})
    return EXIT_OK


def cmd_canon(args):
    fld = _field_from_args(args)
    try:
        label = parse_label(args.label)
    except ValueError as exc:
        raise _InputError(str(exc))
    p = canonical_rep(label, fld)
    forms = pencil_of_conics(label, fld)
    _emit({
        "q": fld.q,
        "label": label.text,
        "A": list(p.a),
        "B": list(p.b),
        "pencilOfConics": [list(forms[0]), list(forms[1])],
        "expectedStabilizerOrder": expected_stabilizer_order(label, fld),
    })
    return EXIT_OK


def cmd_verify(args):
    fld = _field_from_args(args)
    q = fld.q
    if q > orbits.STABILIZER_MAX_Q:
        raise FieldTooLarge(f"verify needs q <= {orbits.STABILIZER_MAX_Q}")
    failures = 0

    def check(name, ok, detail=""):
        nonlocal failures
        if not ok:
            failures += 1
        tail = f"  {detail}" if detail else ""
        print(f"{'PASS' if ok else 'FAIL'}  {name}{tail}")

    counts = point_census(fld)
    n = q * q + q + 1
    if q % 2 == 0:
        expected = {"rank1": n, "rank3": q ** 5 - q * q,
                    "nucleus": n, "non_nucleus": (q * q - 1) * n}
    else:
        expected = {"rank1": n, "rank3": q ** 5 - q * q,
                    "exterior": q * (q + 1) * n // 2, "interior": q * (q - 1) * n // 2}
    check("point census", counts == expected, f"{counts}")

    mode = "both" if q <= orbits.ORACLE_MAX_Q else "classifier"
    try:
        report = orbits.census(fld, mode=mode, parallel=args.parallel)
        check(f"line census ({mode})", report.consistent,
              f"total {report.total_lines}")
    except orbits.MismatchDetected as exc:
        check(f"line census ({mode})", False, str(exc))

    for label in all_labels(fld):
        rep = canonical_rep(label, fld)
        got = orbits.stabilizer_order(rep, fld).order
        want = expected_stabilizer_order(label, fld)
        check(f"{label.text} stabilizer: found {got}, expected {want}", got == want)

    try:
        lemmas = orbits.lemma_checks(fld)
        check("counting lemmas", True, f"{lemmas}")
    except orbits.CheckFailed as exc:
        check("counting lemmas", False, str(exc))

    if q <= orbits.ORACLE_MAX_Q:
        try:
            fm = orbits.form_model_census(fld)
            check("pencils-of-conics census", fm.consistent,
                  f"{fm.orbit_count} classes")
        except orbits.MismatchDetected as exc:
            check("pencils-of-conics census", False, str(exc))

    return EXIT_OK if failures == 0 else EXIT_MISMATCH


def build_parser():
    parser = argparse.ArgumentParser(
        prog="veronese-pencils",
        description="Classify pencils of conics over GF(q) and verify the "
                    "published orbit tables by brute force.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, pencil_input=False):
        p.add_argument("--q", type=int, required=True, help="field order (prime power)")
        p.add_argument("--modulus", help="comma-separated modulus digits, constant first")
        if pencil_input:
            group = p.add_mutually_exclusive_group(required=True)
            group.add_argument("--pencil", help="path to a pencil JSON document")
            group.add_argument("--inline", help="pencil JSON document inline")

    p = sub.add_parser("classify", help="classify one pencil")
    add_common(p, pencil_input=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("census", help="census of all lines of PG(5,q)")
    add_common(p)
    p.add_argument("--mode", choices=("classifier", "oracle", "both"),
                   default="classifier")
    p.add_argument("--parallel", type=int, default=None,
                   help=f"worker count (default ${orbits.THREADS_ENV} or 1)")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("verify", help="run the verification battery")
    add_common(p)
    p.add_argument("--parallel", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stabilizer", help="brute-force stabiliser order")
    add_common(p, pencil_input=True)
    p.set_defaults(func=cmd_stabilizer)

    p = sub.add_parser("point-census", help="point counts of PG(5,q)")
    add_common(p)
    p.set_defaults(func=cmd_point_census)

    p = sub.add_parser("canon", help="canonical representative of a class")
    add_common(p)
    p.add_argument("--label", required=True, help='class label, e.g. "o13x"')
    p.set_defaults(func=cmd_canon)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except DependentBasis as exc:
        print(f"error: dependent basis: {exc}", file=sys.stderr)
        return EXIT_DEPENDENT
    except ZeroMatrix as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except InvalidLabelForField as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (FieldError, FieldTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FIELD
    except orbits.MismatchDetected as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.witness:
            print(json.dumps({"witness": exc.witness}), file=sys.stderr)
        return EXIT_MISMATCH
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
