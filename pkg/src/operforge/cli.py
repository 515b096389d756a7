"""Command-line interface.

Subcommand groups: `alg` (static tables), `oper` (canonical forms,
residues, normal forms, horizontal sections), `miura` (transform, inverse,
classification, residue diagram) and `kk` (critical-level weight
combinatorics).  All commands read and write the JSON documents of
`jsonio`; output is deterministic (sorted keys, fixed separators).

Exit codes: 0 success, 1 parse error, 2 precondition violation,
3 precision exhaustion.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction as Q

from . import jsonio, linkage, miura, oper
from .errors import DomainError, PrecisionError
from .jsonio import ParseError
from .rootdata import algebra, coinvariant_dim
from .series import DEFAULT_PRECISION

_SINGULAR_COMMANDS = {
    ("oper", "residue"), ("oper", "nilp-form"), ("oper", "order"),
    ("miura", "invert"), ("miura", "classify"), ("miura", "diagram"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None,
                        help="series precision (env OPERFORGE_PRECISION)")
    common.add_argument("--json", action="store_true",
                        help="machine-readable output")
    common.add_argument("--emit-witness", action="store_true",
                        help="include gauge witnesses in the output")
    common.add_argument("--jobs", type=int, default=1,
                        help="process input files concurrently")

    p = argparse.ArgumentParser(
        prog="operforge",
        description="exact computations with opers on the formal disc")
    groups = p.add_subparsers(dest="group", required=True)

    alg_p = groups.add_parser("alg", help="root data and Chevalley tables")
    alg_sub = alg_p.add_subparsers(dest="command", required=True)
    info = alg_sub.add_parser("info", parents=[common],
                              help="emit root datum and principal data")
    info.add_argument("--type", required=True, dest="family")
    info.add_argument("--rank", required=True, type=int)

    oper_p = groups.add_parser("oper", help="opers in canonical form")
    oper_sub = oper_p.add_subparsers(dest="command", required=True)
    for name, hlp in (("canonicalize", "gauge a raw oper to canonical form"),
                      ("residue", "residue of an RS oper in h//W"),
                      ("order", "singularity order"),
                      ("nilp-form", "nilpotent normal form and residue"),
                      ("horiz", "horizontal sections")):
        sub = oper_sub.add_parser(name, parents=[common], help=hlp)
        if name == "horiz":
            sub.add_argument("--depth", type=int, default=8)
        sub.add_argument("inputs", nargs="+")

    miura_p = groups.add_parser("miura", help="the Miura transformation")
    miura_sub = miura_p.add_subparsers(dest="command", required=True)
    for name, hlp in (("transform", "H-connection to oper"),
                      ("invert", "inverse transform for dominant residue"),
                      ("classify", "Weyl chamber of a nilpotent Miura oper"),
                      ("diagram", "both routes of the residue square")):
        sub = miura_sub.add_parser(name, parents=[common], help=hlp)
        if name == "invert":
            sub.add_argument("--lambda", required=True, dest="lam",
                             help="comma-separated coweight coordinates")
        sub.add_argument("inputs", nargs="+")

    kk_p = groups.add_parser("kk", help="critical-level weight combinatorics")
    kk_sub = kk_p.add_subparsers(dest="command", required=True)
    for name, hlp in (("check", "anti-dominance and Verma irreducibility"),
                      ("chain", "Kac-Kazhdan linkage chains"),
                      ("character", "truncated Verma character")):
        sub = kk_sub.add_parser(name, parents=[common], help=hlp)
        sub.add_argument("--type", required=True, dest="family")
        sub.add_argument("--rank", required=True, type=int)
        sub.add_argument("--lambda", required=True, dest="lam",
                         help="comma-separated weight coordinates")
        if name in ("chain", "character"):
            sub.add_argument("--depth", type=int, default=6)
    return p


def _parse_weight(text, rank):
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != rank:
        raise ParseError("expected %d coordinates" % rank, "$.lambda")
    out = []
    for i, s in enumerate(parts):
        try:
            out.append(Q(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError("invalid rational %r: %s" % (s, exc),
                             "$.lambda[%d]" % i)
    return tuple(out)


def _load(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(str(exc), path)
    except json.JSONDecodeError as exc:
        raise ParseError("invalid JSON: %s" % exc, path)


def _effective_precision(args):
    if args.precision is not None:
        return args.precision
    env = os.environ.get("OPERFORGE_PRECISION")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ParseError("OPERFORGE_PRECISION must be an integer",
                             "environment")
    return DEFAULT_PRECISION


def _check_precision_floor(args, alg):
    if (args.group, args.command) in _SINGULAR_COMMANDS:
        need = 2 * alg.root_datum.coxeter_number
        have = _effective_precision(args)
        if have < need:
            raise DomainError(
                "precision %d is below the minimum %d (= 2 * Coxeter number)"
                " required by %s %s"
                % (have, need, args.group, args.command))


def _run_alg_info(args):
    alg = algebra(args.family, args.rank)
    rd = alg.root_datum
    pr = alg.principal

    def vec_coords(space, vec):
        from .series import space_basis_indices
        basis = space_basis_indices(alg, space)
        return [jsonio.encode_rational(vec.get(k, 0)) for k in basis]

    doc = {
        "family": rd.family,
        "rank": rd.rank,
        "dim": alg.chevalley.dim,
        "cartan_matrix": [list(row) for row in rd.cartan_matrix],
        "simple_roots": [[jsonio.encode_rational(c) for c in v]
                         for v in rd.simple_roots],
        "simple_coroots": [[jsonio.encode_rational(c) for c in v]
                           for v in rd.simple_coroots],
        "positive_roots": [list(r) for r in rd.positive_roots],
        "heights": list(rd.heights),
        "exponents": list(rd.exponents),
        "weyl_order": rd.weyl_order,
        "coxeter_number": rd.coxeter_number,
        "principal": {
            "p_minus1": vec_coords("n-", pr.p_minus1),
            "two_rho_check": vec_coords("h", pr.two_rho_check),
            "p_1": vec_coords("n", pr.p_1),
            "vcan_degrees": list(pr.vcan_degrees),
            "vcan_basis": [vec_coords("n", b) for _, b in pr.vcan_basis],
        },
        "coinvariant_dim": (coinvariant_dim(alg)
                            if rd.weyl_order <= 1152 else None),
    }
    if args.json:
        return doc
    lines = ["%s%d: dim %d, exponents %s, |W| = %d, Coxeter number %d"
             % (rd.family, rd.rank, alg.chevalley.dim,
                list(rd.exponents), rd.weyl_order, rd.coxeter_number)]
    return {"text": "\n".join(lines), "_plain": True, "doc": doc}


def _run_on_document(args, path):
    group, command = args.group, args.command
    doc = _load(path)
    if group == "oper":
        if command == "canonicalize":
            raw = jsonio.parse_raw_oper(doc)
            _check_precision_floor(args, raw.algebra)
            can, gauge = oper.canonicalize(raw)
            out = jsonio.encode_canonical_oper(can)
            if args.emit_witness:
                out["witness"] = jsonio.encode_gauge(gauge)
            return out
        can = jsonio.parse_canonical_oper(doc)
        _check_precision_floor(args, can.algebra)
        if command == "residue":
            point = oper.res_rs(can)
            return {"orbit_point": jsonio.encode_orbit_point(point)}
        if command == "order":
            return {"k": oper.singularity_order(can),
                    "nilpotent": oper.is_nilpotent_oper(can)}
        if command == "nilp-form":
            form = oper.nilp_normal_form(can)
            inv = oper.res_nilp(form)
            out = {
                "q": jsonio.encode_lie_series(form.q),
                "residue_n": jsonio.encode_lie_series(
                    _constant_series(can.algebra, form.residue_n, "n")),
                "ad_ranks": list(inv.ad_ranks),
                "jordan_partition": list(inv.jordan_partition),
                "regular": inv.is_zero(),
            }
            if args.emit_witness:
                out["witness"] = jsonio.encode_gauge(form.gauge_from_canonical)
            return out
        if command == "horiz":
            sections = oper.horizontal_sections(can, args.depth)
            return {"dimension": len(sections),
                    "sections": [jsonio.encode_lie_series(s)
                                 for s in sections]}
    if group == "miura":
        if command in ("transform", "classify", "diagram"):
            chi = jsonio.parse_h_connection(doc)
            _check_precision_floor(args, chi.algebra)
            if command == "transform":
                can, gauge = miura.miura_transform(chi, with_gauge=True)
                out = jsonio.encode_canonical_oper(can)
                if args.emit_witness:
                    out["witness"] = jsonio.encode_gauge(gauge)
                return out
            if command == "classify":
                cls = miura.classify_miura_nilp(chi)
                return {
                    "word": list(cls.weyl_element.word),
                    "length": cls.weyl_element.length,
                    "residue": [jsonio.encode_rational(c)
                                for c in chi.residue()],
                    "flag_checked": cls.flag_checked,
                    "plucker": [[jsonio.encode_rational(c) for c in step]
                                for step in cls.limit_flag],
                }
            diag = miura.check_residue_diagram(chi)
            return {"lhs": jsonio.encode_orbit_point(diag.lhs),
                    "rhs": jsonio.encode_orbit_point(diag.rhs),
                    "equal": diag.equal}
        if command == "invert":
            can = jsonio.parse_canonical_oper(doc)
            _check_precision_floor(args, can.algebra)
            lam = _parse_weight(args.lam, can.algebra.rank)
            chi = miura.miura_inverse_dominant(
                can, lam, depth=_effective_precision(args))
            return jsonio.encode_h_connection(chi)
    raise AssertionError("unhandled command %s %s" % (group, command))


def _constant_series(alg, vec, space):
    from .series import LieSeries
    return LieSeries.constant(alg, vec, space=space)


def _run_kk(args):
    alg = algebra(args.family, args.rank)
    lam = _parse_weight(args.lam, alg.rank)
    if args.command == "check":
        shifted = tuple(x + 1 for x in lam)
        return {
            "lambda": [jsonio.encode_rational(x) for x in lam],
            "antidominant": linkage.is_antidominant_weight(alg, lam),
            "shifted_antidominant": linkage.is_antidominant_weight(
                alg, shifted),
            "verma_irreducible": linkage.verma_irreducible_critical(alg, lam),
            "central_character": jsonio.encode_orbit_point(
                linkage.central_character(alg, lam)),
        }
    if args.command == "chain":
        start = linkage.AffineWeight(Q(0), lam)
        reached = linkage.kk_chain_search(alg, start, args.depth)
        rows = sorted(((w.delta, w.finite) for w in reached),
                      key=lambda t: (-t[0], t[1]))
        return {
            "start": {"delta": "0",
                      "weight": [jsonio.encode_rational(x) for x in lam]},
            "depth": args.depth,
            "reachable": [{"delta": jsonio.encode_rational(d),
                           "weight": [jsonio.encode_rational(x) for x in w]}
                          for d, w in rows],
        }
    if args.command == "character":
        table = linkage.verma_character(alg, lam, args.depth)
        return {
            "lambda": [jsonio.encode_rational(x) for x in lam],
            "depth": table.depth,
            "height_bound": table.height_bound,
            "entries": [[n, [jsonio.encode_rational(x) for x in weight], dim]
                        for (n, weight), dim in table.entries],
        }
    raise AssertionError("unhandled kk command")


def _emit(payload):
    if isinstance(payload, dict) and payload.get("_plain"):
        sys.stdout.write(payload["text"] + "\n")
        return
    sys.stdout.write(json.dumps(payload, sort_keys=True,
                                separators=(",", ":")) + "\n")


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.group == "alg":
            _emit(_run_alg_info(args))
            return 0
        if args.group == "kk":
            _emit(_run_kk(args))
            return 0
        inputs = args.inputs
        if args.jobs > 1 and len(inputs) > 1:
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(
                    lambda p: _run_on_document(args, p), inputs))
        else:
            results = [_run_on_document(args, p) for p in inputs]
        if len(results) == 1:
            _emit(results[0])
        else:
            _emit(results)
        return 0
    except ParseError as exc:
        sys.stderr.write("parse error: %s\n" % exc)
        return 1
    except PrecisionError as exc:
        sys.stderr.write("precision exhausted: %s\n" % exc)
        return 3
    except DomainError as exc:
        sys.stderr.write("precondition violated: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
