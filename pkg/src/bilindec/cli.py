"""Command-line front end: ``bilindec <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import config
from .bilinear import asymmetry, classify_asymmetry4, classify_dim2, det_class
from .brauer import nu, nu_tilde, ramified_places
from .correspondence import GenericContext, KClassElem, sym_element
from .decomp import antiauto_decomposition, decide
from .exact import format_rational, to_rational
from .family import FamilyParams, family_generate, pairwise_distinct
from .jsonio import certificate_from_json, dumps, load_text, parse_space, verify_certificate
from .linalg import charpoly, invariant_factors


class InputError(Exception):
    pass


def _poly_json(p) -> dict:
    return {"text": str(p), "coeffs": [format_rational(c) for c in p.coeffs]}


def _read_space(arg: str):
    try:
        return parse_space(load_text(arg))
    except (ValueError, TypeError, KeyError, json.JSONDecodeError, ZeroDivisionError) as exc:
        raise InputError(f"cannot read bilinear space: {exc}") from exc


def analyze(space, bound: int = config.CONIC_BOUND) -> dict:
    a = asymmetry(space)
    report = {
        "input": space.to_json(),
        "charpoly": _poly_json(charpoly(a)),
        "invariant_factors": [_poly_json(p) for p in invariant_factors(a)],
        "det_class": det_class(space),
    }
    if space.dim == 2:
        c = classify_dim2(space)
        report["classification"] = {
            "kind": c.kind,
            "param": None if c.param is None else format_rational(c.param),
            "g": c.g.to_json(),
            "lambda": format_rational(c.lam),
        }
        return report
    verdict = decide(space, bound)
    cls = verdict.classification
    report["classification"] = cls.to_json()
    if verdict.class_elem is not None:
        ctx = GenericContext(*cls.params)
        n = ctx.norm(verdict.class_elem)
        report["class_element"] = verdict.class_elem.to_json()
        report["norm"] = format_rational(n)
        report["nu"] = nu(ctx.alpha1, n).to_json()
        report["nu_tilde"] = nu_tilde(ctx.alpha1, ctx.alpha2, n).to_json()
    report["verdict"] = verdict.to_json()
    return report


def cmd_analyze(args) -> int:
    print(dumps(analyze(_read_space(args.gram), args.conic_bound)))
    return 0


def cmd_decompose(args) -> int:
    space = _read_space(args.gram)
    if space.dim != 4:
        raise InputError("decompose expects a 4x4 Gram matrix")
    print(dumps(decide(space, args.conic_bound)))
    return 0


def cmd_antiauto(args) -> int:
    if args.gram is not None:
        space = _read_space(args.gram)
        cls = classify_asymmetry4(space)
        if cls.kind != "generic":
            raise InputError(f"asymmetry is not generic decomposable ({cls.kind})")
        ctx = GenericContext(*cls.params)
        u = sym_element(ctx, space, cls.conj)
    else:
        if None in (args.a1, args.a2, args.r, args.s):
            raise InputError("give --gram, or all of --a1 --a2 --r --s")
        ctx = GenericContext(to_rational(args.a1), to_rational(args.a2))
        u = KClassElem.field(args.r, args.s)
    print(dumps(antiauto_decomposition(ctx, u)))
    return 0


def cmd_family(args) -> int:
    params = FamilyParams.of(to_rational(args.a1), to_rational(args.a2), window=args.window)
    result = family_generate(params, args.count)
    records = [m.to_json() for m in result]
    text = json.dumps(records, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    distinct = pairwise_distinct(params.ctx, [m.class_elem for m in result])
    print(f"{len(result)} members, complete={result.complete}, pairwise_distinct={distinct}",
          file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    try:
        data = load_text(args.cert)
        if isinstance(data, dict) and "certificate" in data:
            data = data["certificate"]
        cert = certificate_from_json(data)
    except (ValueError, TypeError, KeyError, json.JSONDecodeError, ZeroDivisionError) as exc:
        raise InputError(f"cannot read certificate: {exc}") from exc
    ok, message = verify_certificate(cert)
    print(message)
    return 0 if ok else 1


def cmd_symbol(args) -> int:
    a, b = to_rational(args.a), to_rational(args.b)
    if a == 0 or b == 0:
        raise InputError("symbol entries must be nonzero")
    print(ramified_places(a, b))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bilindec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def gram_cmd(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("gram", help="Gram matrix as inline JSON or a path to a JSON file")
        p.add_argument("--conic-bound", type=int, default=config.CONIC_BOUND)
        p.set_defaults(func=func)
        return p

    gram_cmd("analyze", cmd_analyze, "full report for a 2x2 or 4x4 Gram matrix")
    gram_cmd("decompose", cmd_decompose, "decide decomposability and emit a certificate")

    p = sub.add_parser("antiauto", help="anti-automorphism decomposition certificate")
    p.add_argument("--gram")
    p.add_argument("--a1")
    p.add_argument("--a2")
    p.add_argument("--r")
    p.add_argument("--s")
    p.set_defaults(func=cmd_antiauto)

    p = sub.add_parser("family", help="generate indecomposable forms from split primes")
    p.add_argument("--a1", default="0")
    p.add_argument("--a2", default="1")
    p.add_argument("--count", type=int, default=8)
    p.add_argument("--window", type=int, default=config.PRIME_WINDOW)
    p.add_argument("--out")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("verify", help="re-check a serialized certificate")
    p.add_argument("cert", help="certificate JSON (inline or file)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("symbol", help="ramified places of the quaternion algebra (a, b)")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_symbol)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, TypeError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
