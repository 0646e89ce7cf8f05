"""Command-line front end.

Every command writes exactly one JSON document to stdout; human-readable
diagnostics go to stderr.  Exit codes: 0 success (including infinite-cost
results), 2 usage error, 3 input validation error, 4 class or precondition
violation, 5 oracle budget exceeded.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .binary_solvers import dispatch
from .cfc import (
    CROSS_FREE,
    LAMINAR,
    build_laminar_forest,
    build_network,
    check_convexity,
    check_family,
    crossfree_to_laminar,
    forest_to_dot,
    solve_cfc,
)
from .errors import (
    BudgetExceeded,
    ClassViolation,
    FormatError,
    GenerationError,
    InstanceError,
)
from .flow import network_to_dot
from .formats import (
    dumps,
    parse_instance,
    serialize_instance,
)
from .instances import BinaryInstance, CountInstance
from .renaming import recognize_renamable, solve_renamable
from .testkit import (
    DEFAULT_BUDGET,
    fixtures,
    gen_matching_encoding,
    gen_maxcut,
    gen_nested_gcc,
    gen_profile,
    gen_soft_gcc,
    oracle_binary,
    oracle_count,
)
from .triangles import Scheme, check_jwp, profile_report

NAMED_GRAPHS = {
    "k3": (3, [(0, 1), (0, 2), (1, 2)]),
    "p3": (3, [(0, 1), (1, 2)]),
    "c5": (5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]),
    "petersen": (
        10,
        [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
         (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
         (5, 7), (7, 9), (9, 6), (6, 8), (8, 5)],
    ),
}


def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}")


def _emit(doc):
    sys.stdout.write(dumps(doc))


def _load(path, want=None):
    inst = parse_instance(_read_text(path))
    if want is not None and not isinstance(inst, want):
        raise FormatError(f"expected a {want.__name__} document")
    return inst


def _parse_graph(args):
    if args.named:
        return NAMED_GRAPHS[args.named]
    if args.edges is None:
        raise FormatError("either --named or --edges is required")
    edges = []
    vertices = args.vertices or 0
    if args.edges.strip():
        for part in args.edges.split(","):
            try:
                u, v = part.split("-")
                u, v = int(u), int(v)
            except ValueError:
                raise FormatError(f"malformed edge {part!r}; expected like 0-1")
            edges.append((u, v))
            vertices = max(vertices, u + 1, v + 1)
    return vertices, edges


def cmd_classify(args):
    inst = _load(args.file, BinaryInstance)
    _emit(profile_report(inst, Scheme(args.scheme)))
    return 0


def cmd_solve(args):
    inst = _load(args.file, BinaryInstance)
    result = dispatch(inst, oracle_budget=args.oracle_budget, validate=not args.no_validate)
    _emit(result.to_doc())
    return 0


def cmd_solve_cfc(args):
    inst = _load(args.file, CountInstance)
    if args.dot_network or args.dot_forest:
        lam = crossfree_to_laminar(inst)
        forest = build_laminar_forest(lam)
        if args.dot_forest:
            with open(args.dot_forest, "w", encoding="utf-8") as handle:
                handle.write(forest_to_dot(forest, lam))
        if args.dot_network:
            net = build_network(forest, lam)
            with open(args.dot_network, "w", encoding="utf-8") as handle:
                handle.write(network_to_dot(net))
    result = solve_cfc(inst)
    _emit(result.to_doc())
    return 0


def cmd_check(args):
    inst = _load(args.file)
    prop = args.property
    doc = {"property": prop}
    if prop == "jwp":
        if not isinstance(inst, BinaryInstance):
            raise FormatError("the jwp check applies to binary instances")
        holds, witness = check_jwp(inst)
        doc["holds"] = holds
        if witness is not None:
            doc["witness"] = list(witness)
    elif prop == "convex":
        if not isinstance(inst, CountInstance):
            raise FormatError("the convex check applies to count instances")
        holds = True
        for k, aset in enumerate(inst.sets):
            ok, at = check_convexity(aset.g)
            if not ok:
                holds = False
                doc["witness"] = {"set": k, "count": at}
                break
        doc["holds"] = holds
    else:
        if not isinstance(inst, CountInstance):
            raise FormatError("family checks apply to count instances")
        kind, witness = check_family([a.members for a in inst.sets], inst.universe())
        if prop == "laminar":
            doc["holds"] = kind == LAMINAR
        else:
            doc["holds"] = kind in (LAMINAR, CROSS_FREE)
        doc["kind"] = kind
        if witness is not None:
            i, j = witness
            doc["witness"] = {
                "sets": [i, j],
                "members": [sorted(inst.sets[i].members), sorted(inst.sets[j].members)],
            }
    _emit(doc)
    return 0


def cmd_rename(args):
    inst = _load(args.file, CountInstance)
    ren = recognize_renamable(inst)
    if ren is None:
        _emit({"renamable": False})
        return 0
    result = solve_renamable(inst)
    _emit({
        "renamable": True,
        "renaming": [bool(f) for f in ren.flags],
        "result": result.to_doc(),
    })
    return 0


def cmd_gen(args):
    if args.kind == "profile":
        inst = gen_profile(
            args.n, args.d, frozenset(args.types.split(",")), Scheme(args.scheme), args.seed
        )
    elif args.kind == "maxcut":
        vertices, edges = _parse_graph(args)
        inst = gen_maxcut(vertices, edges)
    elif args.kind == "matching":
        vertices, edges = _parse_graph(args)
        inst = gen_matching_encoding(vertices, edges)
    elif args.kind == "soft-gcc":
        bounds = _parse_bounds(args.bounds)
        inst = gen_soft_gcc(args.n, args.d, bounds)
    elif args.kind == "nested-gcc":
        groups = [tuple(int(v) for v in grp.split("-")) for grp in args.groups.split(",")]
        bounds_list = _parse_bounds(args.bounds)
        bounds = {}
        k = 0
        for gi in range(len(groups)):
            for val in range(args.d):
                bounds[(gi, val)] = bounds_list[k % len(bounds_list)]
                k += 1
        inst = gen_nested_gcc(args.n, args.d, groups, bounds)
    else:  # fixture
        table = fixtures()
        if args.name not in table:
            raise FormatError(f"unknown fixture {args.name!r}; have {sorted(table)}")
        inst = table[args.name]
    text = serialize_instance(inst)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    sys.stdout.write(text)
    return 0


def _parse_bounds(spec):
    out = []
    for part in spec.split(","):
        lo, hi = part.split(":")
        out.append((int(lo), int(hi)))
    return out


def cmd_oracle(args):
    inst = _load(args.file)
    if isinstance(inst, BinaryInstance):
        result = oracle_binary(inst, budget=args.budget)
    else:
        result = oracle_count(inst, budget=args.budget)
    _emit(result.to_doc())
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="vcspkit",
        description="Classify and solve binary VCSPs by triangle patterns; "
        "solve cross-free convex count instances by convex flow.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="triangle profile and dichotomy verdict")
    p.add_argument("file")
    p.add_argument("--scheme", required=True,
                   choices=[s.value for s in Scheme])
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("solve", help="dispatch a binary instance to its class solver")
    p.add_argument("file")
    p.add_argument("--oracle-budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--no-validate", action="store_true",
                   help="skip in-solver profile checks")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("solve-cfc", help="solve a cross-free convex count instance")
    p.add_argument("file")
    p.add_argument("--dot-network", metavar="PATH")
    p.add_argument("--dot-forest", metavar="PATH")
    p.set_defaults(func=cmd_solve_cfc)

    p = sub.add_parser("check", help="check a structural property")
    p.add_argument("file")
    p.add_argument("--property", required=True,
                   choices=["laminar", "crossfree", "convex", "jwp"])
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("rename", help="recognise and solve a renamable instance")
    p.add_argument("file")
    p.set_defaults(func=cmd_rename)

    p = sub.add_parser("gen", help="emit a generated instance")
    p.add_argument("kind", choices=["profile", "maxcut", "matching", "soft-gcc",
                                    "nested-gcc", "fixture"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", metavar="FILE")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--types", default="=", help="comma-separated target types")
    p.add_argument("--scheme", default="order", choices=[s.value for s in Scheme])
    p.add_argument("--named", choices=sorted(NAMED_GRAPHS))
    p.add_argument("--edges", help="comma-separated edges like 0-1,1-2")
    p.add_argument("--vertices", type=int)
    p.add_argument("--bounds", default="0:1", help="comma-separated lo:hi pairs")
    p.add_argument("--groups", default="0", help="variable groups like 0-1-2,0-1")
    p.add_argument("--name", help="fixture name")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="exhaustive optimum within a budget")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        _emit({"error": {"kind": "format", "message": str(exc)}})
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ClassViolation, GenerationError) as exc:
        doc = {"error": {"kind": "class", "message": str(exc)}}
        if getattr(exc, "witness", None) is not None:
            doc["error"]["witness"] = exc.witness
        _emit(doc)
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except BudgetExceeded as exc:
        _emit({"error": {"kind": "budget", "message": str(exc)}})
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except InstanceError as exc:
        _emit({"error": {"kind": "instance", "message": str(exc)}})
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
