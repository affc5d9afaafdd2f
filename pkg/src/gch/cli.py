"""Command-line front end; every command prints one JSON document."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from . import checks
from .complex import build_complex
from .configurations import (
    ACollection,
    AConfiguration,
    MultiIndex,
    enumerate_configuration_classes,
    is_A_set,
    is_simple_configuration,
    stickiness,
)
from .errors import GchError, InputError, VerificationError
from .graphs import GraphFamily
from .homology import DEFAULT_PRIMES, RankMode, cycle_representatives, default_threads, homology
from .invariants.chords import (
    enumerate_diagrams,
    four_term_rows,
    product,
    relation_invariant_factors,
    weight_space,
    weight_space_dim_modular,
)
from .invariants.symmetry import class_dimensions
from .invariants.xi import XiClass, lambda_homology, stu_boundary, xi_degree, xi_rank
from .complex import lambda_complex


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _parts(text: str) -> tuple[int, ...]:
    return MultiIndex.parse(text).parts


def _family(args) -> GraphFamily:
    return GraphFamily.parse(args.family, args.l)


def _mode(args) -> RankMode:
    if args.mode == "exact":
        return RankMode.exact()
    if args.mode == "modp":
        return RankMode.modp(args.prime or DEFAULT_PRIMES[0])
    if args.prime:
        return RankMode.certified(args.prime, args.prime2 or DEFAULT_PRIMES[1])
    return RankMode.certified()


def _threads(args) -> int:
    return args.threads if args.threads else default_threads()


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise InputError(f"--{n.replace('_', '-')} is required")


def cmd_homology(args):
    _need(args, "nodes")
    t0 = time.perf_counter()
    X = build_complex(args.nodes, _family(args))
    h = homology(X, _mode(args), method=args.method, threads=_threads(args))
    return {
        "k": args.nodes,
        "family": X.family.name,
        "mode": args.mode,
        "betti": {str(d): b for d, b in sorted(h.betti.items())},
        "torsion": {str(d): t for d, t in sorted(h.torsion.items())},
        "certified": h.certified,
        "elapsed_ms": int((time.perf_counter() - t0) * 1000),
    }


def cmd_basis(args):
    _need(args, "nodes")
    X = build_complex(args.nodes, _family(args))
    h = homology(X)
    degree = args.degree if args.degree is not None else (h.nonzero_degrees() or [0])[0]
    out = {"k": args.nodes, "family": X.family.name, "degree": degree, "betti": h.betti_at(degree)}
    if args.candidates == "linear":
        if X.family.connectivity != 1:
            raise InputError("linear candidates are defined for the connected family")
        from .homology import verify_basis

        out["candidates"] = "linear"
        out["valid"] = verify_basis(X, checks.linear_graphs(args.nodes), degree)
    else:
        basis = cycle_representatives(X, degree)
        out["representatives"] = [c.encode() for c in basis.representatives]
    return out


def cmd_verify(args):
    fn = checks.CHECKS[args.check]
    kwargs = {}
    if args.check in ("theorem1", "theorem2", "theorem1b") and args.max_nodes:
        kwargs["max_nodes"] = args.max_nodes
    if args.check in ("theorem1", "theorem2"):
        kwargs["threads"] = _threads(args)
    if args.check == "corollary1" and args.max_size:
        kwargs["max_size"] = args.max_size
    if args.check in ("prop8prime-bound", "weight-spaces") and args.order:
        kwargs["max_order"] = args.order
    passed, details = fn(**kwargs)
    out = {"check": args.check, "passed": passed, "details": details}
    if not passed:
        raise VerificationError(json.dumps(out, separators=(",", ":")))
    return out


def cmd_ws(args):
    _need(args, "order")
    i = args.order
    if args.action == "dim":
        if args.mode == "exact":
            return {"order": i, "dim": weight_space(i)[0]}
        dims = weight_space_dim_modular(i)
        if len(set(dims)) > 1:
            raise VerificationError(f"modular dimensions disagree: {dims}")
        return {"order": i, "dim": dims[0]}
    if args.action == "relations":
        system = four_term_rows(i)
        if args.export:
            with open(args.export, "w") as fh:
                fh.write(system.to_triplets())
        factors = relation_invariant_factors(i)
        return {"order": i, "diagrams": len(system.diagrams),
                "rows_1t": system.kinds.count("1T"), "rows_4t": system.kinds.count("4T"),
                "rank": len(factors), "nontrivial_factors": [f for f in factors if f > 1]}
    _need(args, "with_order")
    j = args.with_order
    diagrams = enumerate_diagrams(i + j)
    results = []
    for a, w1 in enumerate(weight_space(i)[1]):
        for b, w2 in enumerate(weight_space(j)[1]):
            w = product(w1, w2)
            results.append({"left": a, "right": b, "satisfies_relations": w.satisfies_relations(),
                            "values": {diagrams[n].encode(): _frac(v)
                                       for n, v in enumerate(w.values) if v}})
    return {"order": i, "with_order": j, "products": results}


def _parse_groups(text: str) -> tuple[tuple, ...]:
    def token(x):
        x = x.strip()
        try:
            return Fraction(x)
        except ValueError:
            return x

    groups = tuple(tuple(token(x) for x in g.split(",")) for g in text.split(";") if g.strip())
    if not groups:
        raise InputError("no groups given")
    return groups


def cmd_config(args):
    if args.action == "classes":
        _need(args, "parts")
        A = MultiIndex(_parts(args.parts))
        classes = enumerate_configuration_classes(A, cyclic=args.cyclic)
        simple, kind = is_simple_configuration(A)
        return {"parts": list(A.parts), "complexity": A.complexity, "simple": simple, "type": kind,
                "count": len(classes), "classes": [c.encode() for c in classes]}
    if args.action == "is-a-set":
        _need(args, "groups")
        groups = _parse_groups(args.groups)
        J = ACollection(groups)
        return {"groups": [[str(x) for x in g] for g in J.groups], "is_a_set": is_A_set(J)}
    _need(args, "config")
    J = AConfiguration.parse(args.config)
    A = J.multiindex
    return {"config": J.encode(), "parts": list(A.parts), "complexity": A.complexity,
            "stickiness": stickiness(J)}


def cmd_xi(args):
    _need(args, "parts")
    parts = tuple(int(x) for x in args.parts.split(","))
    if args.action == "rank":
        return {"parts": list(parts), "rank": xi_rank(parts), "degree": xi_degree(parts)}
    if args.action == "homology":
        h = lambda_homology(parts, threads=_threads(args))
        return {"parts": list(parts), "betti": {str(d): b for d, b in sorted(h.betti.items())},
                "torsion": {str(d): t for d, t in sorted(h.torsion.items())},
                "expected_degree": xi_degree(parts), "expected_rank": xi_rank(parts)}
    _need(args, "tau", "blocks")
    try:
        blocks = tuple(tuple(int(x) for x in b.split(",")) for b in args.blocks.split(";"))
    except ValueError as exc:
        raise InputError(f"cannot parse blocks {args.blocks!r}") from exc
    if len(blocks) != 2:
        raise InputError("exactly two blocks are required")
    X = lambda_complex(parts)
    degree = xi_degree(parts)
    reps = cycle_representatives(X, degree).representatives
    results = []
    for z in reps:
        x = stu_boundary(parts, args.group, args.tau, XiClass.from_chain(z), blocks)
        results.append({"cycle": z.encode(), "split": x.encode()})
    return {"parts": list(parts), "group": args.group, "tau": args.tau,
            "blocks": [list(b) for b in blocks], "results": results}


def cmd_dims(args):
    _need(args, "order", "n")
    return {"order": args.order, "n": args.n, "dimensions": class_dimensions(args.order, args.n)}


def _common(p: argparse.ArgumentParser):
    p.add_argument("--family", default="connected")
    p.add_argument("--l", type=int)
    p.add_argument("--nodes", type=int)
    p.add_argument("--mode", choices=["exact", "modp", "certified"], default="exact")
    p.add_argument("--prime", type=int)
    p.add_argument("--prime2", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--out", choices=["json", "csv"], default="json")
    p.add_argument("--threads", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gch", description="Homology of graph complexes")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("homology")
    _common(p)
    p.add_argument("--method", choices=["morse", "direct"], default="morse")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("basis")
    _common(p)
    p.add_argument("--degree", type=int)
    p.add_argument("--candidates", choices=["linear"])
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("verify")
    _common(p)
    p.add_argument("--check", choices=sorted(checks.CHECKS), required=True)
    p.add_argument("--max-nodes", type=int)
    p.add_argument("--max-size", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ws")
    p.add_argument("action", choices=["dim", "relations", "product"])
    _common(p)
    p.add_argument("--with-order", type=int)
    p.add_argument("--export")
    p.set_defaults(func=cmd_ws)

    p = sub.add_parser("config")
    p.add_argument("action", choices=["classes", "is-a-set", "stickiness"])
    _common(p)
    p.add_argument("--parts")
    p.add_argument("--cyclic", action="store_true")
    p.add_argument("--groups")
    p.add_argument("--config")
    p.set_defaults(func=cmd_config)

    p = sub.add_parser("xi")
    p.add_argument("action", choices=["rank", "homology", "stu"])
    _common(p)
    p.add_argument("--parts")
    p.add_argument("--group", type=int, default=0)
    p.add_argument("--tau", type=int)
    p.add_argument("--blocks")
    p.set_defaults(func=cmd_xi)

    p = sub.add_parser("dims")
    _common(p)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_dims)
    return parser


def _csv(obj: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if "betti" in obj:
        w.writerow(["degree", "betti", "torsion"])
        degrees = sorted({int(d) for d in obj["betti"]} | {int(d) for d in obj.get("torsion", {})})
        for d in degrees:
            w.writerow([d, obj["betti"].get(str(d), 0),
                        " ".join(map(str, obj.get("torsion", {}).get(str(d), [])))])
        return buf.getvalue()
    w.writerow(["key", "value"])
    for key, value in obj.items():
        if not isinstance(value, (dict, list)):
            value = json.dumps(value) if isinstance(value, bool) or value is None else value
        else:
            value = json.dumps(value, separators=(",", ":"))
        w.writerow([key, value])
    return buf.getvalue()


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "threads", None) is not None and args.threads < 1:
            raise InputError("--threads must be positive")
        result = args.func(args)
    except VerificationError as exc:
        print(exc, file=sys.stdout if str(exc).startswith("{") else sys.stderr)
        return exc.exit_code
    except GchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.out == "csv":
        sys.stdout.write(_csv(result))
    else:
        sys.stdout.write(json.dumps(result, separators=(",", ":")) + "\n")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
