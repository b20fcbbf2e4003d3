"""Command-line front end: ``qperiods <command> ...``.

Exit status is 0 on success, 1 when the input is well formed but the
operation rejects it, and 2 for usage errors (bad flags, unreadable JSON).
Every JSON document printed with ``--format json`` can be fed back through
the ``--json`` flag of the command that consumes that kind of object.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import descendants as desc
from . import quantum_periods as qp
from .errors import QPeriodsError
from .laurent import (LaurentPoly, MutationSpec, apply_unimodular, classical_period_series,
                      format_poly, mutate, parse, period, period_numeric)
from .potentials import ProjectiveProductSpec, ToricRaySet, hori_vafa, product_projective_potential
from .series import PeriodSeries
from .string_topology import LoopClass, bracket, bv, goldman_t2


class UsageError(Exception):
    pass


def _frac(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _read_json_text(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what}: invalid JSON ({exc.msg} at char {exc.pos})") from None


def _read_file(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _json_input(args, required=True):
    if getattr(args, "json", None) is not None:
        return _read_json_text(args.json, "--json")
    if getattr(args, "json_file", None) is not None:
        return _read_json_text(_read_file(args.json_file), "--json-file")
    if required:
        raise UsageError("this command needs --json or --json-file")
    return None


def _poly_from_obj(obj) -> LaurentPoly:
    if not isinstance(obj, dict) or "poly" not in obj:
        raise UsageError('polynomial JSON must look like {"dim": n, "poly": "..."}')
    dim = obj.get("dim")
    return parse(str(obj["poly"]), int(dim) if dim is not None else None)


def _poly_input(args) -> LaurentPoly:
    dim = getattr(args, "dim", None)
    if args.poly is not None:
        return parse(args.poly, dim)
    if args.poly_file is not None:
        text = _read_file(args.poly_file).strip()
        if text.startswith("{"):
            return _poly_from_obj(_read_json_text(text, "--poly-file"))
        return parse(text, dim)
    obj = _json_input(args, required=False)
    if obj is None:
        raise UsageError("no polynomial given (use --poly, --poly-file or --json)")
    return _poly_from_obj(obj)


def _poly_obj(W: LaurentPoly) -> dict:
    return {"dim": W.dim, "poly": format_poly(W)}


def _int_list(text: str, what: str) -> list[int]:
    try:
        return [int(p) for p in text.replace(" ", "").split(",") if p]
    except ValueError:
        raise UsageError(f"{what} must be comma-separated integers") from None


def _param(args, obj, name, key=None):
    """Flag value, falling back to the same field of the JSON input."""
    val = getattr(args, name, None)
    if val is None and isinstance(obj, dict):
        val = obj.get(key or name)
    if val is None:
        raise UsageError(f"missing --{name.replace('_', '-')}")
    return val


def _json_obj_or_none(args):
    return _json_input(args, required=False) if hasattr(args, "json") else None


# -- command implementations ------------------------------------------------
# Each returns (text, json-serializable payload).

def cmd_period(args):
    W = _poly_input(args)
    d = int(_param(args, _json_obj_or_none(args), "d"))
    value = period(W, d, backend=args.backend)
    return str(value), {**_poly_obj(W), "d": d, "period": value}


def cmd_period_numeric(args):
    W = _poly_input(args)
    obj = _json_obj_or_none(args)
    d = int(_param(args, obj, "d"))
    grid = args.grid if args.grid is not None else int((obj or {}).get("grid", 64))
    value = period_numeric(W, d, grid)
    text = f"{value:.12g}"
    if args.tol is not None:
        exact = period(W, d)
        if abs(value - exact) > args.tol:
            raise QPeriodsError(f"numeric value {value!r} differs from exact {exact} by more than {args.tol}")
        text += f" (exact {exact}, within {args.tol:g})"
    return text, {**_poly_obj(W), "d": d, "grid": grid, "value": value}


def cmd_series(args):
    W = _poly_input(args)
    top = int(_param(args, _json_obj_or_none(args), "max_degree", "maxDegree"))
    s = classical_period_series(W, top)
    payload = {**_poly_obj(W), **json.loads(s.to_json())}
    return str(s), payload


def cmd_mutate(args):
    W = _poly_input(args)
    factor = parse(args.factor, W.dim)
    out = mutate(W, MutationSpec(args.pivot, factor))
    return format_poly(out), _poly_obj(out)


def cmd_gl(args):
    W = _poly_input(args)
    g = _read_json_text(args.matrix, "--matrix")
    out = apply_unimodular(W, g)
    return format_poly(out), _poly_obj(out)


def cmd_mirror_check(args):
    W = _poly_input(args)
    top = args.max_degree
    if args.target is not None:
        G = qp.known_quantum_period(ProjectiveProductSpec.parse(args.target), top)
    elif args.series_json is not None:
        G = PeriodSeries.from_json(_read_json_text(args.series_json, "--series-json"))
    elif args.series_file is not None:
        G = PeriodSeries.from_json(_read_json_text(_read_file(args.series_file), "--series-file"))
    else:
        raise UsageError("mirror-check needs --target, --series-json or --series-file")
    report = qp.mirror_check(W, G, top)
    payload = {**_poly_obj(W), "ok": report.ok, "maxDegree": top,
               "mismatchDegree": report.mismatch_degree,
               "period": report.period,
               "expected": None if report.expected is None else _frac(report.expected)}
    return str(report), payload


def cmd_potential(args):
    if args.kind == "toric":
        W = hori_vafa(ToricRaySet.from_json(_read_json_text(args.rays, "--rays")))
    else:
        W = product_projective_potential(ProjectiveProductSpec.parse(args.factors))
    return format_poly(W), _poly_obj(W)


def _loop_input(text: str, what: str) -> LoopClass:
    try:
        return LoopClass.from_json(_read_json_text(text, what))
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{what}: malformed loop class ({exc})") from None


def _loop_out(x: LoopClass):
    return str(x), json.loads(x.to_json())


def cmd_bv(args):
    obj = _json_input(args)
    try:
        x = LoopClass.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed loop class ({exc})") from None
    return _loop_out(bv(x))


def cmd_bracket(args):
    return _loop_out(bracket(_loop_input(args.x, "--x"), _loop_input(args.y, "--y")))


def cmd_goldman(args):
    return _loop_out(goldman_t2(_int_list(args.u, "--u"), _int_list(args.v, "--v")))


def _symbol(obj) -> desc.DescendantSymbol:
    if not isinstance(obj, dict) or "vectors" not in obj:
        raise UsageError('symbol JSON must look like {"n": 2, "vectors": [[...], ...]}')
    return desc.DescendantSymbol.from_json(obj)


def cmd_desc_eval(args):
    s = _symbol(_json_input(args))
    value = desc.evaluate(s)
    return str(value), {**s.to_dict(), "value": value}


def cmd_desc_relation(args):
    obj = _json_input(args)
    s = _symbol(obj)
    u = args.u if args.u is not None else None
    u = _int_list(u, "--u") if u is not None else obj.get("u")
    omega = _read_json_text(args.omega, "--omega") if args.omega is not None else obj.get("omega")
    if u is None or omega is None:
        raise UsageError("relation needs --u and --omega")
    data = desc.SkewData.from_dict({"u": u, "omega": omega})
    terms = desc.relation_terms(s, data)
    residual = sum(c * desc.evaluate(t) for c, t in terms if c)
    lines = [f"{c} * {t if t is not None else '(outside domain)'}" for c, t in terms]
    lines.append(f"residual {residual}")
    payload = {**s.to_dict(), **data.to_dict(),
               "terms": [{"coeff": c, "symbol": None if t is None else t.to_dict()} for c, t in terms],
               "residual": residual}
    return "\n".join(lines), payload


def cmd_desc_reduce(args):
    s = _symbol(_json_input(args))
    cert = desc.reduce(s)
    value = desc.verify_certificate(cert)
    text = (f"{s}: {len(cert.leaves())} leaves, {cert.node_count()} nodes, value {_frac(value)}")
    return text, cert.root.to_dict()


def cmd_desc_verify(args):
    obj = _json_input(args)
    cert = desc.DerivationCertificate.from_json(obj)
    value = desc.verify_certificate(cert)
    sym = cert.symbol
    return _frac(value), {**sym.to_dict(), "value": _frac(value), "nodes": cert.node_count()}


def cmd_desc_bs(args):
    W = _poly_input(args)
    d = int(_param(args, _json_obj_or_none(args), "d"))
    value = desc.bs_power_expansion(W, d, ordered=args.ordered)
    return str(value), {**_poly_obj(W), "d": d, "value": value}


def cmd_index(args):
    what = args.what
    if what == "dims":
        if args.degs is not None:
            degs = _int_list(args.degs, "--degs")
            k = args.k if args.k is not None else len(degs)
            v = qp.dim_descendant_moduli(k, _need(args.m, "m"), degs)
            return str(v), {"k": k, "m": args.m, "degs": degs, "dim": v}
        v = qp.dim_tangency_moduli(_need(args.d, "d"), _need(args.m, "m"))
        return str(v), {"d": args.d, "m": args.m, "dim": v}
    if what == "degrees":
        check, hat = qp.degree_dictionary(_need(args.mu, "mu"), _need(args.n, "n"))
        return f"{check} {hat}", {"mu": args.mu, "n": args.n, "check": check, "hat": hat}
    if what == "stretch":
        r = qp.stretch_solver(_need(args.n, "n"), _need(args.d, "d"))
        return (f"p={r.p} mu={list(r.mus)} index={r.index}",
                {"n": args.n, "d": args.d, "p": r.p, "mus": list(r.mus), "index": r.index})
    if what == "factors":
        many, single = qp.stabilization_factors(_need(args.N, "N"), _need(args.d, "d"),
                                                _need(args.p, "p"))
        return f"{many} {single}", {"N": args.N, "d": args.d, "p": args.p,
                                    "many": many, "single": single}
    if what == "gluing":
        ok = qp.gluing_factor_identity(_need(args.N, "N"), _need(args.d, "d"))
        return str(ok).lower(), {"N": args.N, "d": args.d, "holds": ok}
    if what == "normalization":
        ok = qp.normalization_consistency(_need(args.d, "d"))
        return str(ok).lower(), {"d": args.d, "holds": ok}
    # convert
    try:
        value = Fraction(_need(args.value, "value"))
    except (ValueError, ZeroDivisionError):
        raise UsageError("--value must be an integer or p/q") from None
    out = qp.desc_enum_to_psi(value, _need(args.d, "d"), args.direction)
    return _frac(out), {"value": _frac(value), "d": args.d, "direction": args.direction,
                        "result": _frac(out)}


def _need(val, name):
    if val is None:
        raise UsageError(f"missing --{name}")
    return val


# -- parser -------------------------------------------------------------------

def _add_poly(p, with_json=True):
    p.add_argument("--poly", help="polynomial text, e.g. 'x + y + x^-1*y^-1'")
    p.add_argument("--poly-file", help="file holding polynomial text or JSON")
    p.add_argument("--dim", type=int, help="number of variables (default: inferred)")
    if with_json:
        _add_json(p)


def _add_json(p):
    p.add_argument("--json", help="inline JSON input")
    p.add_argument("--json-file", help="file holding JSON input")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qperiods", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("text", "json"), default="text")
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("period", parents=[fmt], help="constant term of W^d")
    _add_poly(p)
    p.add_argument("--d", type=int)
    p.add_argument("--backend", choices=("compiled", "python"))
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("period-numeric", parents=[fmt], help="torus integral of W^d by the trapezoid rule")
    _add_poly(p)
    p.add_argument("--d", type=int)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--tol", type=float, help="fail unless within TOL of the exact value")
    p.set_defaults(func=cmd_period_numeric)

    p = sub.add_parser("series", parents=[fmt], help="classical period series up to a degree")
    _add_poly(p)
    p.add_argument("--max-degree", type=int)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("mutate", parents=[fmt], help="substitute x_p -> x_p * f")
    _add_poly(p)
    p.add_argument("--pivot", type=int, required=True, help="1-based variable index")
    p.add_argument("--factor", required=True, help="factor f, free of the pivot variable")
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("gl", parents=[fmt], help="apply a unimodular change of exponents")
    _add_poly(p)
    p.add_argument("--matrix", required=True, help="JSON matrix, e.g. [[1,0],[1,1]]")
    p.set_defaults(func=cmd_gl)

    p = sub.add_parser("mirror-check", parents=[fmt], help="compare periods with d! times a series")
    _add_poly(p)
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--target", help="product of projective spaces, e.g. cp:2 or cp:2,1")
    p.add_argument("--series-json")
    p.add_argument("--series-file")
    p.set_defaults(func=cmd_mirror_check)

    p = sub.add_parser("potential", parents=[fmt], help="build a standard potential")
    psub = p.add_subparsers(dest="kind", required=True)
    t = psub.add_parser("toric", parents=[fmt], help="sum of x^v over rays")
    t.add_argument("--rays", required=True, help="JSON list of primitive rays")
    t.set_defaults(func=cmd_potential)
    t = psub.add_parser("product", parents=[fmt], help="product of projective spaces")
    t.add_argument("--factors", required=True, help="e.g. 2,1 or cp:2,1")
    t.set_defaults(func=cmd_potential)

    p = sub.add_parser("bv", parents=[fmt], help="BV operator on a loop class")
    _add_json(p)
    p.set_defaults(func=cmd_bv)

    p = sub.add_parser("bracket", parents=[fmt], help="BV bracket of two loop classes")
    p.add_argument("--x", required=True, help="loop class JSON")
    p.add_argument("--y", required=True, help="loop class JSON")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("goldman", parents=[fmt], help="Goldman bracket of two loops on the 2-torus")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.set_defaults(func=cmd_goldman)

    p = sub.add_parser("descendant", parents=[fmt], help="descendant symbol calculus")
    dsub = p.add_subparsers(dest="action", required=True)
    t = dsub.add_parser("eval", parents=[fmt], help="closed-form value")
    _add_json(t)
    t.set_defaults(func=cmd_desc_eval)
    t = dsub.add_parser("relation", parents=[fmt], help="terms of the skew relation")
    _add_json(t)
    t.add_argument("--u")
    t.add_argument("--omega", help="JSON list of [i, j, coeff] for coeff*e_i^e_j")
    t.set_defaults(func=cmd_desc_relation)
    t = dsub.add_parser("reduce", parents=[fmt], help="derive the value as a certificate")
    _add_json(t)
    t.set_defaults(func=cmd_desc_reduce)
    t = dsub.add_parser("verify", parents=[fmt], help="check a certificate")
    _add_json(t)
    t.set_defaults(func=cmd_desc_verify)
    t = dsub.add_parser("bs-expand", parents=[fmt], help="multilinear expansion of the d-fold symbol of W")
    _add_poly(t)
    t.add_argument("--d", type=int)
    t.add_argument("--ordered", action="store_true", help="enumerate ordered tuples")
    t.set_defaults(func=cmd_desc_bs)

    p = sub.add_parser("index", parents=[fmt], help="dimension and normalization arithmetic")
    p.add_argument("what", choices=("dims", "degrees", "stretch", "factors", "gluing",
                                    "normalization", "convert"))
    for name in ("n", "d", "m", "k", "p", "N", "mu"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--degs", help="comma-separated input degrees")
    p.add_argument("--value", help="rational value for convert")
    p.add_argument("--direction", choices=("to-bullet", "from-bullet"), default="to-bullet")
    p.set_defaults(func=cmd_index)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, payload = args.func(args)
    except UsageError as exc:
        print(f"qperiods: {exc}", file=sys.stderr)
        return 2
    except QPeriodsError as exc:
        print(f"qperiods: error: {exc}", file=sys.stderr)
        return 1
    except OverflowError as exc:
        print(f"qperiods: error: {exc}", file=sys.stderr)
        return 1
    if args.format == "json":
        print(json.dumps(payload))
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
