"""Command line front end.

Line-oriented reports ending in a VERDICT line; exit codes: 0 success or
positive verdict, 1 negative verdict, 2 unknown, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import gogio
from .fcip import fcip_abelian, fcip_bruteforce_sample, fcip_zero_check
from .fgip import decide_components, fgip_certify, w_construction
from .gog import gog_core, gog_core_at, reduce_gog, validate_gog
from .gogio import ParseError
from .morphism import (ImmersionFailure, is_covering, is_immersion,
                       realize_subgroup, validate_morphism)
from .pullback import build_product


class CliError(Exception):
    pass


def _load_gog(path):
    try:
        data = gogio.load(path)
        return gogio.parse_gog(data)
    except (OSError, json.JSONDecodeError, ParseError, ValueError) as exc:
        raise CliError(f"cannot read graph of groups from {path}: {exc}")


def _load_decorated_or_gog(path):
    try:
        data = gogio.load(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read {path}: {exc}")
    if isinstance(data, dict) and data.get("decorated"):
        try:
            return "decorated", gogio.parse_decorated(data), None
        except (ParseError, KeyError, ValueError) as exc:
            raise CliError(f"bad decorated file {path}: {exc}")
    A, base = gogio.parse_gog(data)
    return "gog", A, base


def _load_immersion(path, A):
    try:
        data = gogio.load(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read {path}: {exc}")
    try:
        if isinstance(data, dict) and "generators" in data:
            base = 0
            paths = [gogio.parse_apath(p, A, base) for p in data["generators"]]
            m, b = realize_subgroup(A, base, paths)
            return m, b
        m, b = gogio.parse_morphism(data, A)
        return m, (b or 0)
    except (ParseError, KeyError, ValueError) as exc:
        raise CliError(f"bad immersion file {path}: {exc}")


def _emit(lines, out=None):
    for line in lines:
        print(line, file=out if out is not None else sys.stdout)


def _write_optional(path, payload):
    if path:
        with open(path, "w") as fh:
            if isinstance(payload, str):
                fh.write(payload)
            else:
                json.dump(payload, fh, indent=2, sort_keys=True)
                fh.write("\n")


def cmd_validate(args):
    A, base = _load_gog(args.input)
    violations = validate_gog(A)
    lines = [f"vertices: {A.graph.nv}", f"edge-pairs: {A.graph.n_pairs}"]
    for v in violations:
        lines.append("violation: " + " ".join(str(x) for x in v))
    lines.append(f"VERDICT: {'ok' if not violations else 'invalid'}")
    _emit(lines)
    return 0 if not violations else 1


def cmd_reduce(args):
    A, base = _load_gog(args.input)
    R, b2 = reduce_gog(A, base or 0)
    lines = [f"vertices: {R.graph.nv}", f"edge-pairs: {R.graph.n_pairs}",
             f"basepoint: {R.graph.vnames[b2]}"]
    _write_optional(args.out, gogio.serialize_gog(R, basepoint=b2))
    lines.append("VERDICT: ok")
    _emit(lines)
    return 0


def cmd_core(args):
    A, base = _load_gog(args.input)
    if args.at is not None:
        names = {n: i for i, n in enumerate(A.graph.vnames)}
        if args.at not in names:
            raise CliError(f"unknown vertex {args.at!r}")
        C, b = gog_core_at(A, names[args.at])
    else:
        C = gog_core(A)
    lines = [f"vertices: {C.graph.nv}", f"edge-pairs: {C.graph.n_pairs}"]
    _write_optional(args.out, gogio.serialize_gog(C))
    lines.append("VERDICT: ok")
    _emit(lines)
    return 0


def cmd_immersion_check(args):
    A, _ = _load_gog(args.gog)
    m, base = _load_immersion(args.morphism, A)
    violations = validate_morphism(m)
    lines = []
    for v in violations:
        lines.append("violation: " + " ".join(str(x) for x in v))
    if violations:
        lines.append("VERDICT: invalid-morphism")
        _emit(lines)
        return 1
    try:
        cert = is_immersion(m)
    except ImmersionFailure as exc:
        lines.append(f"failure: {exc.kind} {exc.witness}")
        lines.append("VERDICT: not-immersion")
        _emit(lines)
        return 1
    lines.extend(cert.report(m).splitlines())
    cov = is_covering(m, cert)
    lines.append(f"covering: {'yes' if cov is True else 'no' if cov is False else 'not-decidable'}")
    lines.append("VERDICT: immersion")
    _emit(lines)
    return 0


def cmd_pullback(args):
    A, _ = _load_gog(args.gog)
    m1, b1 = _load_immersion(args.first, A)
    m2, b2 = _load_immersion(args.second, A)
    frag = build_product(m1, m2, budget=args.budget)
    lines = frag.dump().splitlines()
    ray = frag.ray_certificate()
    if ray:
        lines.append(f"ray-certificate: {ray['verdict']} "
                     f"(period {ray['period']}, ascent {ray['ascent']})")
    _write_optional(args.dot, frag.dot())
    _write_optional(args.out, frag.to_json())
    lines.append(f"VERDICT: {'complete' if frag.complete else 'budget-exhausted'}")
    _emit(lines)
    return 0


def cmd_intersect(args):
    A, _ = _load_gog(args.gog)
    m1, b1 = _load_immersion(args.first, A)
    m2, b2 = _load_immersion(args.second, A)
    frag = build_product(m1, m2, budget=args.budget)
    gens, exact = frag.intersection_generators()
    lines = []
    for i, p in enumerate(gens):
        lines.append(f"generator {i}: {p!r}")
    lines.append(f"flag: {'exact' if exact else 'lower-bound'}")
    ray = frag.ray_certificate()
    if ray:
        lines.append(f"ray-certificate: {ray['verdict']}")
        lines.append("intersection: provably not finitely generated")
    lines.append(f"VERDICT: {'exact' if exact else 'lower-bound'}")
    _emit(lines)
    return 0


def cmd_fcip(args):
    try:
        data = gogio.load(args.input)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read {args.input}: {exc}")
    kind = data.get("kind")
    if kind == "abelian":
        G = gogio.parse_group_spec(data["group"])
        A = G.subgroup([G.parse(x) for x in data["A"]])
        B = G.subgroup([G.parse(x) for x in data["B"]])
        C = G.subgroup([G.parse(x) for x in data["C"]])
        rep = fcip_abelian(G, B, C, A)
        lines = rep.lines()
        lines.append(f"VERDICT: {rep.verdict}")
        _emit(lines)
        return 0 if rep.verdict is True else 1
    if kind == "zero-check":
        G = gogio.parse_group_spec(data["group"])
        subs = [G.subgroup([G.parse(x) for x in gens]) for gens in data["subgroups"]]
        ok = fcip_zero_check(subs)
        _emit([f"VERDICT: {ok}"])
        return 0 if ok else 1
    if kind == "sample":
        G = gogio.parse_group_spec(data["group"])
        A = G.subgroup([G.parse(x) for x in data["A"]])
        B = G.subgroup([G.parse(x) for x in data["B"]])
        C = G.subgroup([G.parse(x) for x in data["C"]])
        if "offsets" in data:
            offsets = [G.parse(x) for x in data["offsets"]]
        else:
            from random import Random
            from .words import wreduce
            rng = Random(args.seed)
            offsets = [()]
            for _ in range(24):
                w = wreduce(tuple(rng.choice(
                    [i for i in range(1, G.rank + 1)] +
                    [-i for i in range(1, G.rank + 1)])
                    for _ in range(rng.randint(1, 4))))
                offsets.append(w)
        rep = fcip_bruteforce_sample(G, A, B, C, offsets,
                                     int(data.get("length_bound", 4)))
        lines = rep.lines()
        lines.append("VERDICT: sampled-evidence")
        _emit(lines)
        return 0
    raise CliError(f"unknown fcip request kind {kind!r}")


def cmd_decide_fgip(args):
    what, obj, base = _load_decorated_or_gog(args.input)
    if what == "decorated":
        verdict = decide_components(obj)
    else:
        verdict = fgip_certify(obj)
    _emit(verdict.lines())
    return {"yes": 0, "no": 1, "unknown": 2}[verdict.answer]


def cmd_w_construct(args):
    A, _ = _load_gog(args.input)
    W, d, book = w_construction(A)
    lines = [f"w-vertices: {W.graph.nv}", f"w-edge-pairs: {W.graph.n_pairs}"]
    for p in range(W.graph.n_pairs):
        lines.append(f"edge {W.graph.enames[p]}: "
                     f"{W.graph.vnames[W.graph.org[p]]} -> "
                     f"{W.graph.vnames[W.graph.tgt[p]]} "
                     f"indices=({d.idx_alpha[p]},{d.idx_omega[p]})")
    _write_optional(args.out, gogio.serialize_gog(W))
    lines.append("VERDICT: ok")
    _emit(lines)
    return 0


def cmd_export_dot(args):
    A, _ = _load_gog(args.input)
    dot = A.graph.dot()
    _write_optional(args.out, dot + "\n")
    if not args.out:
        _emit(dot.splitlines())
        return 0
    _emit(["VERDICT: ok"])
    return 0


def make_parser():
    ap = argparse.ArgumentParser(prog="gogroups",
                                 description="graphs of groups toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a graph-of-groups file")
    p.add_argument("input")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("reduce", help="collapse non-reduced edges")
    p.add_argument("input")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("core", help="core of a graph of groups")
    p.add_argument("input")
    p.add_argument("--at", help="vertex name for the pointed core")
    p.add_argument("--out")
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("immersion-check",
                       help="validate a morphism and its immersion certificate")
    p.add_argument("gog")
    p.add_argument("morphism")
    p.set_defaults(func=cmd_immersion_check)

    p = sub.add_parser("pullback", help="expand the product of two immersions")
    p.add_argument("gog")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--budget", type=int, default=64)
    p.add_argument("--dot")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pullback)

    p = sub.add_parser("intersect", help="intersection generators from the pullback")
    p.add_argument("gog")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--budget", type=int, default=64)
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("fcip", help="coset interaction reports")
    p.add_argument("input")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_fcip)

    p = sub.add_parser("decide-fgip",
                       help="decide the finitely generated intersection property")
    p.add_argument("input")
    p.set_defaults(func=cmd_decide_fgip)

    p = sub.add_parser("w-construct", help="graph of commensurators")
    p.add_argument("input")
    p.add_argument("--out")
    p.set_defaults(func=cmd_w_construct)

    p = sub.add_parser("export-dot", help="DOT export of the underlying graph")
    p.add_argument("input")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_dot)
    return ap


def main(argv=None):
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
