"""
Command-line surface: `python -m svarc <command> ...`.

Exit codes: 0 ok, 1 the mathematical check failed (or raised), 2 usage or
input format, 3 a bundled example disagrees with its golden file.
"""

import argparse
import json
import logging
import os
import sys

import numpy as np

from .errors import FormatError, SvarcError, UnboundedNerve, UnknownInstance
from .model.category import Subcategory
from .model.cochain import (
    CochainComplex,
    induced_cochain_map,
    ker_generators,
    relative_complex,
)
from .model.cup import cup_classes, cup_length, validate_pairing
from .model.factorization import multiplication_pairing, pullback_system, zero_pairing
from .model.fibration import classify
from .model.instances import BUNDLED, load_bundled
from .model.secat import HOMOTOPIC, STRICT, secat, sections, svarc_bound
from .util.serialize import (
    bound_report,
    category_to_dict,
    cohomology_report,
    cup_length_report,
    dumps,
    fibration_report,
    parse_subcategory,
    read_category,
    read_functor,
    read_system,
    secat_report,
    to_dot,
)

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")
GOLDEN_DIR = os.path.join(DATA_DIR, "golden")

OK, FAILED, USAGE, MISMATCH = 0, 1, 2, 3


def _emit(args, report, text):
    if getattr(args, "json", False):
        print(dumps(report))
    else:
        print(text)


def _pairing(kind, D):
    if kind == "zero":
        return zero_pairing(D)
    groups = set(D.value.values())
    if len(groups) != 1 or next(iter(groups)).ngens != 1:
        raise FormatError("--pairing ring needs a constant system with a cyclic group")
    pairing = multiplication_pairing(D)
    validate_pairing(pairing)
    return pairing


def _read_any(path):
    with open(path, "r") as f:
        try:
            raw = json.load(f)
        except json.JSONDecodeError as e:
            raise FormatError(f"cannot read {path}: {e}") from e
    if "obj_map" in raw:
        return read_functor(path)
    return read_category(path)


def cmd_validate(args):
    thing = _read_any(args.file)
    if hasattr(thing, "obj_map"):
        c = thing.target
        report = {
            "kind": "functor",
            "source": thing.source.name,
            "target": thing.target.name,
            "objects": len(thing.source.objects),
            "morphisms": len(thing.source.morphisms),
        }
        text = f"functor {thing.source} -> {thing.target}: valid"
    else:
        c = thing
        dim = c.nerve_dimension
        report = {
            "kind": "category",
            "name": c.name,
            "objects": len(c.objects),
            "morphisms": len(c.morphisms),
            "nerve_dimension": "unbounded" if dim is None else dim,
        }
        text = (
            f"category {c}: {len(c.objects)} objects, {len(c.morphisms)} morphisms, "
            f"nerve dimension {report['nerve_dimension']}"
        )
    if args.dot:
        report["dot"] = to_dot(c)
        text = text + "\n" + report["dot"]
    _emit(args, report, text)
    return OK


def _degrees(cx, max_degree):
    return range(0, (cx.max_degree if max_degree is None else max_degree) + 1)


def cmd_cohomology(args):
    c = read_category(args.file)
    D = read_system(args.system, c)
    if args.relative:
        u = parse_subcategory(args.relative, c)
        cx = relative_complex(c, u, D, max_degree=args.max_degree)
    else:
        cx = CochainComplex(c, D, max_degree=args.max_degree)
    groups = [cohomology_report(cx.cohomology(n)) for n in _degrees(cx, args.max_degree)]
    text = "\n".join(
        f"H^{g['degree']}({cx.name}; {D}) = {g['group']}" for g in groups
    )
    _emit(args, {"complex": cx.name, "cohomology": groups}, text)
    return OK


def cmd_cup_length(args):
    c = read_category(args.file)
    restrict_to = None
    if args.kernel_of:
        P = read_functor(args.kernel_of)
        if category_to_dict(P.target) != category_to_dict(c):
            raise FormatError(f"the target of {args.kernel_of} is not the category in {args.file}")
        c = P.target
    D = read_system(args.system, c)
    pairing = _pairing(args.pairing, D)
    cx = CochainComplex(c, D, max_degree=args.max_degree)
    cap = cx.max_degree if args.max_degree is None else args.max_degree
    if args.kernel_of:
        pulled = pullback_system(P, D)
        source = CochainComplex(P.source, pulled, max_degree=args.max_degree)
        restrict_to = {
            k: ker_generators(P, D, k, args.max_degree, target=cx, source=source, pulled=pulled)
            for k in range(1, cap + 1)
        }
    result = cup_length(cx, pairing, restrict_to=restrict_to, degree_cap=cap)
    what = "ker P^*" if args.kernel_of else f"H^*({c}; {D})"
    _emit(args, cup_length_report(result), f"cup-length of {what} = {result}")
    return OK


def cmd_check(args):
    P = read_functor(args.functor)
    report = classify(P)
    holds = {
        "fibration": report.is_fibration,
        "opfibration": report.is_opfibration,
        "bifibration": report.is_bifibration,
        "covering": report.is_covering,
    }[args.property]
    out = fibration_report(report)
    out["property"] = args.property
    out["holds"] = holds
    text = f"{P.source} -> {P.target} is {'' if holds else 'not '}a {args.property}"
    if not holds:
        keys = ("fibration", "opfibration") if args.property == "bifibration" else (args.property,)
        for key in keys:
            for w in report.witnesses.get(key, [])[:1]:
                text += f"\n  witness ({key}): {w}"
    _emit(args, out, text)
    return OK if holds else FAILED


def cmd_secat(args):
    P = read_functor(args.functor)
    kind = HOMOTOPIC if args.homotopic else STRICT
    result = secat(P, kind, show_pbar=args.progress)
    name = "Sg" if args.homotopic else "sc"
    lines = [f"{name} = {result.value}"]
    if result.certificate is not None:
        for u, w in zip(result.certificate.pieces, result.certificate.sections):
            lines.append(f"  piece {u.label()}: section {dict(sorted(w.section.mor_map.items()))}")
    _emit(args, secat_report(result), "\n".join(lines))
    return OK


def cmd_svarc_bound(args):
    P = read_functor(args.functor)
    D = read_system(args.system, P.target)
    pairing = _pairing(args.pairing, D)
    report = svarc_bound(
        P, D, pairing, degree_cap=args.max_degree, check_homotopic=args.homotopic, show_pbar=args.progress
    )
    text = f"cpl(ker P^*) = {report.cpl} <= Sg = {report.sg}: {'holds' if report.holds else 'FAILS'}"
    _emit(args, bound_report(report), text)
    return OK if report.holds else FAILED


def _parallel_arrows_numbers(instance):
    S, D = instance.category, instance.system
    cx = CochainComplex(S, D)
    rel = relative_complex(S, instance.relative, D)
    alternate = CochainComplex(S, instance.extra["alternate_system"])
    return {
        "H0": str(cx.cohomology(0)),
        "H1": str(cx.cohomology(1)),
        "H2": str(cx.cohomology(2)),
        "relative_H0": str(rel.cohomology(0)),
        "relative_H1": str(rel.cohomology(1)),
        "alternate_H1": str(alternate.cohomology(1)),
        "cup_length": cup_length(cx, instance.pairing).value,
    }


def _doblecir_numbers(instance):
    P, D = instance.functor, instance.system
    report = classify(P)
    target = CochainComplex(P.target, D)
    source = CochainComplex(P.source, pullback_system(P, D))
    pulled = induced_cochain_map(P, source, target, 1)([1, 0])
    witness = [0, 1, -1, 0]
    bound = svarc_bound(P, D, instance.pairing, check_homotopic=True)
    return {
        "covering": report.is_covering,
        "bifibration": report.is_bifibration,
        "sc": bound.sg,
        "Sg": bound.sg_homotopic,
        "pullback_of_(1,0)": [int(v) for v in pulled],
        "coboundary_witness": witness,
        "witness_matches": np.array_equal(source.coboundary(0)(witness), pulled),
        "cup_length_kernel": bound.cpl.value,
        "holds": bound.holds,
    }


def _groupoid_numbers(instance):
    P = instance.functor
    report = classify(P)
    return {
        "covering": report.is_covering,
        "bifibration": report.is_bifibration,
        "sections_over_base": len(list(sections(P, Subcategory.whole(P.target)))),
        "sc": str(secat(P, STRICT).value),
        "Sg": str(secat(P, HOMOTOPIC).value),
    }


def _projective_plane_numbers(instance):
    P, D = instance.functor, instance.system
    cx = CochainComplex(P.target, D)
    f = cx.cohomology(1).class_of([1, 0, 0, 1, 1, 0])
    square = cup_classes([f, f], instance.pairing)
    total = CochainComplex(P.source, pullback_system(P, D))
    bound = svarc_bound(P, D, instance.pairing)
    return {
        "H1": str(cx.cohomology(1)),
        "H2": str(cx.cohomology(2)),
        "generator_nonzero": not f.is_zero(),
        "cup_square": [int(v) for v in square.representative],
        "cup_square_nonzero": not square.is_zero(),
        "H1_total": str(total.cohomology(1)),
        "cup_length_kernel": bound.cpl.value,
        "sc": bound.sg,
        "holds": bound.holds,
        "strict": bound.cpl.value < bound.sg,
    }


def _small_numbers(instance):
    cx = CochainComplex(instance.category, instance.system)
    numbers = {f"H{n}": str(cx.cohomology(n)) for n in range(cx.max_degree + 2)}
    numbers["cup_length"] = cup_length(cx, instance.pairing).value
    return numbers


REPRODUCERS = {
    "parallel_arrows_S": _parallel_arrows_numbers,
    "doblecir_covering": _doblecir_numbers,
    "groupoid_to_Z2": _groupoid_numbers,
    "projective_plane_covering": _projective_plane_numbers,
    "interval_m": _small_numbers,
    "terminal": _small_numbers,
}


def reproduce(name):
    return REPRODUCERS[name](load_bundled(name))


def read_golden(name):
    path = os.path.join(GOLDEN_DIR, f"{name}.json")
    with open(path, "r") as f:
        return json.load(f)


def compare(computed, golden):
    """Keys whose computed value differs from the golden one."""
    computed = json.loads(json.dumps(computed))
    return {
        key: {"expected": golden.get(key), "computed": computed.get(key)}
        for key in sorted(set(golden) | set(computed))
        if golden.get(key) != computed.get(key)
    }


def cmd_examples(args):
    if args.action == "list":
        _emit(args, {"examples": list(BUNDLED)}, "\n".join(BUNDLED))
        return OK
    if args.all:
        names = list(BUNDLED)
    elif args.name:
        names = [args.name]
    else:
        raise FormatError("examples run needs a name or --all")
    results, code = {}, OK
    lines = []
    for name in names:
        if name not in REPRODUCERS:
            load_bundled(name)  # raises UnknownInstance
        computed = reproduce(name)
        diff = compare(computed, read_golden(name))
        results[name] = {"numbers": computed, "mismatches": diff}
        lines.append(f"{name}: {'ok' if not diff else 'MISMATCH'}")
        lines += [f"  {k} = {v}" for k, v in computed.items()]
        for key, d in diff.items():
            lines.append(f"  ! {key}: expected {d['expected']}, computed {d['computed']}")
        if diff:
            logging.warning(f"{name} differs from its golden file on {sorted(diff)}")
            code = MISMATCH
    _emit(args, results, "\n".join(lines))
    return code


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="JSON output")
    common.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS, help="debug logging")

    parser = argparse.ArgumentParser(
        prog="svarc",
        description="Cohomology of small categories, sectional category and the Svarc genus bound",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="validate a category or functor file")
    p.add_argument("file")
    p.add_argument("--dot", action="store_true", help="print the category in Graphviz DOT")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cohomology", parents=[common], help="H^n(C; D) or H^n(C, U; D)")
    p.add_argument("file")
    p.add_argument("--system", required=True, help="system file, or constant:<group> such as constant:Z/2")
    p.add_argument("--relative", help="comma separated ids generating U")
    p.add_argument("--max-degree", type=int)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("cup-length", parents=[common], help="cup-length of H^*(C; D) or of ker P^*")
    p.add_argument("file")
    p.add_argument("--system", required=True)
    p.add_argument("--pairing", choices=["ring", "zero"], default="ring")
    p.add_argument("--kernel-of", help="functor file P with target the category")
    p.add_argument("--max-degree", type=int)
    p.set_defaults(func=cmd_cup_length)

    p = sub.add_parser("check", parents=[common], help="is a functor a (op/bi)fibration or covering")
    p.add_argument("functor")
    p.add_argument("property", choices=["fibration", "opfibration", "bifibration", "covering"])
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("secat", parents=[common], help="sectional category (or Svarc genus) of a functor")
    p.add_argument("functor")
    p.add_argument("--homotopic", action="store_true", help="homotopic sections (Svarc genus)")
    p.add_argument("--progress", action="store_true", help="show progress bars")
    p.set_defaults(func=cmd_secat)

    p = sub.add_parser("svarc-bound", parents=[common], help="cup-length of ker P^* against Sg(P)")
    p.add_argument("functor")
    p.add_argument("--system", required=True)
    p.add_argument("--pairing", choices=["ring", "zero"], default="ring")
    p.add_argument("--max-degree", type=int)
    p.add_argument("--homotopic", action="store_true", help="also compute Sg with homotopic sections")
    p.add_argument("--progress", action="store_true")
    p.set_defaults(func=cmd_svarc_bound)

    p = sub.add_parser("examples", parents=[common], help="bundled examples against their golden numbers")
    p.add_argument("action", choices=["run", "list"])
    p.add_argument("name", nargs="?")
    p.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_examples)
    return parser


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    logging.basicConfig(
        level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    try:
        return args.func(args)
    except (FormatError, UnboundedNerve, UnknownInstance) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except SvarcError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return FAILED


def main():
    sys.exit(run())
