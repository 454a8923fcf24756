"""Command-line driver: ``bvring <subcommand> [options]``.

Exit status is 0 on success, 1 when a verification fails and 2 on usage or
resource errors. In json mode stdout carries exactly one JSON document.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Sequence

from . import checks, spectral
from .combinat import check_partition, enumerate_standard_tableaux, hook_length_dim
from .expr import EvalError, ParseError, evaluate
from .serialize import dumps, element_json, matrix_json, rational, tau_vector_json
from .tautoring import RingParams, element_text, pair

CHECKS = (
    "bv-relations",
    "delta-closure",
    "block-structure",
    "eigen",
    "kernel-gen",
    "kimura-identity",
    "perfect-pairing",
)


class UsageError(Exception):
    pass


def _rationals(text: str) -> list[Fraction]:
    try:
        return [Fraction(part) for part in text.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational or comma list of rationals: {text!r}")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")


def _shape(text: str) -> tuple[int, ...]:
    try:
        return check_partition(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a partition: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--x", type=_rational, help="transcendental rank parameter (default 22 - rho)")

    ring = argparse.ArgumentParser(add_help=False)
    ring.add_argument("--n", type=int, help="number of factors")
    ring.add_argument("--deg", action="append", type=_rationals, default=[],
                      help="divisor self-intersections; repeat or comma-separate")
    ring.add_argument("--rho", type=int, help="number of divisor classes (checked against --deg)")
    ring.add_argument("--k3", type=int, metavar="RHO", help="K3 shorthand: rho = RHO and x = 22 - RHO")

    matrix = argparse.ArgumentParser(add_help=False)
    matrix.add_argument("--d", type=int, help="number of points matched")

    parser = argparse.ArgumentParser(prog="bvring", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", parents=[common, ring], help="reduce an expression to normal form")
    p.add_argument("expr", help="expression, or - for stdin")

    p = sub.add_parser("pair", parents=[common, ring], help="top-degree pairing of two expressions")
    p.add_argument("left")
    p.add_argument("right")

    p = sub.add_parser("gram", parents=[common, matrix], help="Gram matrix on perfect matchings")
    p.add_argument("--exponents", action="store_true", help="print loop counts instead of values")

    sub.add_parser("kernel", parents=[common, matrix], help="exact kernel of the Gram matrix")

    p = sub.add_parser("specht", parents=[common], help="phi of the standard polytabloids of a shape")
    p.add_argument("--shape", type=_shape, required=True, help="even partition, e.g. 4,2")

    sub.add_parser("kimura", parents=[common], help="the alternating Kimura relation")

    p = sub.add_parser("verify", parents=[common, ring, matrix], help="run a verifier")
    p.add_argument("--check", choices=CHECKS, required=True)
    p.add_argument("--m", type=int, help="codegree for perfect-pairing (default: all)")
    p.add_argument("--full", action="store_true", help="include inputs and all computed fields")
    return parser


def ring_params(args, default_n: int | None = None) -> RingParams:
    degrees = [d for group in args.deg for d in group]
    n = args.n if args.n is not None else default_n
    if n is None:
        raise UsageError("--n is required")
    if args.k3 is not None:
        if len(degrees) != args.k3:
            raise UsageError(f"--k3 {args.k3} needs {args.k3} values of --deg, got {len(degrees)}")
        x = Fraction(22 - args.k3)
        if args.x is not None and args.x != x:
            raise UsageError("--x conflicts with --k3")
    else:
        if args.rho is not None and args.rho != len(degrees):
            raise UsageError(f"--rho {args.rho} needs {args.rho} values of --deg, got {len(degrees)}")
        x = args.x if args.x is not None else Fraction(22 - len(degrees))
    try:
        return RingParams(n, tuple(degrees), x)
    except ValueError as exc:
        raise UsageError(str(exc))


def _need(args, *names: str) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required")


def _read_expr(src: str) -> str:
    return sys.stdin.read() if src == "-" else src


def _emit(args, doc, text: str) -> None:
    print(dumps(doc) if args.format == "json" else text)


def cmd_normalize(args) -> int:
    p = ring_params(args)
    elem = evaluate(_read_expr(args.expr), p)
    _emit(args, element_json(elem), element_text(elem))
    return 0


def cmd_pair(args) -> int:
    p = ring_params(args)
    value = pair(evaluate(_read_expr(args.left), p), evaluate(_read_expr(args.right), p))
    _emit(args, {"pairing": rational(value)}, rational(value))
    return 0


def cmd_gram(args) -> int:
    _need(args, "d")
    x = args.x if args.x is not None else Fraction(1)
    if not args.exponents:
        _need(args, "x")
    G = spectral.build_gram(args.d, x)
    rows = G.exponents if args.exponents else G.evaluated
    doc = matrix_json(rows)
    _emit(args, doc, "\n".join(" ".join(str(a) for a in row) for row in doc))
    return 0


def cmd_kernel(args) -> int:
    _need(args, "d", "x")
    G = spectral.build_gram(args.d, args.x)
    basis = spectral.kernel_basis(G)
    doc = {"d": args.d, "x": rational(args.x), "dim": len(basis),
           "basis": [tau_vector_json(v, args.d) for v in basis]}
    lines = [f"kernel of T_{args.d // 2}({args.x}): dimension {len(basis)}"]
    ring = RingParams(args.d, (), args.x)
    lines += [element_text(spectral.tau_element(ring, v)) for v in basis]
    _emit(args, doc, "\n".join(lines))
    return 0


def cmd_specht(args) -> int:
    shape = args.shape
    d = sum(shape)
    G = spectral.build_gram(d, args.x) if args.x is not None else None
    entries, lines = [], []
    for T in enumerate_standard_tableaux(shape):
        v = spectral.phi_polytabloid(T)
        entry = {"rows": [list(r) for r in T.rows], "phi": tau_vector_json(v, d)}
        line = f"{list(map(list, T.rows))}: {len(v)} terms"
        if G is not None:
            ev = spectral.eigencheck(G, v)
            entry["eigenvalue"] = None if ev is None else rational(ev)
            line += f", eigenvalue {ev}"
        entries.append(entry)
        lines.append(line)
    doc = {"shape": list(shape), "dim": hook_length_dim(shape), "tableaux": entries}
    _emit(args, doc, "\n".join(lines))
    return 0


def cmd_kimura(args) -> int:
    _need(args, "x")
    elem = spectral.kimura_relation(args.x)
    _emit(args, element_json(elem), element_text(elem))
    return 0


def _report_text(name: str, doc: dict, passed: bool) -> str:
    lines = [f"{name}: {'PASS' if passed else 'FAIL'}"]
    for k, v in doc.items():
        if k == "reports":
            lines += [f"  m={r['m']}: " + ", ".join(f"{a}={b}" for a, b in r.items() if a not in ("n", "m")) for r in v]
        elif k != "passed":
            lines.append(f"  {k}: {v}")
    return "\n".join(lines)


def cmd_verify(args) -> int:
    check = args.check
    if check in ("bv-relations", "delta-closure", "block-structure"):
        p = ring_params(args, default_n=4 if check == "block-structure" else 3)
        run = {
            "bv-relations": checks.check_bv_relations,
            "delta-closure": checks.check_delta_closure,
            "block-structure": checks.check_block_structure,
        }[check]
        rep = run(p)
        doc, passed = rep.to_dict(), rep.passed
    elif check == "eigen":
        _need(args, "d", "x")
        rep = spectral.verify_eigenspaces(args.d, args.x)
        doc, passed = rep.to_dict(), rep.passed
    elif check == "kernel-gen":
        _need(args, "d", "x")
        rep = spectral.verify_kernel_generated(args.d, args.x)
        passed = rep.passed
        if args.full:
            doc = rep.to_dict()
        else:
            doc = {"kernel_dim": rep.kernel_dim, "slice_rank": rep.slice_rank, "equal": rep.equal}
    elif check == "kimura-identity":
        _need(args, "x")
        passed = spectral.verify_kimura_identity(args.x)
        doc = {"x": rational(args.x), "passed": passed}
    else:
        p = ring_params(args)
        degrees = [args.m] if args.m is not None else range(2 * p.n + 1)
        reports = [spectral.verify_perfect_pairing(p, m) for m in degrees]
        passed = all(r.passed for r in reports)
        doc = {"n": p.n, "rho": p.rho, "x": rational(p.x),
               "reports": [r.to_dict() for r in reports], "passed": passed}
    _emit(args, doc, _report_text(check, doc, passed))
    return 0 if passed else 1


COMMANDS = {
    "normalize": cmd_normalize,
    "pair": cmd_pair,
    "gram": cmd_gram,
    "kernel": cmd_kernel,
    "specht": cmd_specht,
    "kimura": cmd_kimura,
    "verify": cmd_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ParseError, EvalError, spectral.ResourceError, ValueError, IndexError) as exc:
        print(f"bvring {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # reader went away (e.g. piped into head)
        sys.stderr.close()
        return 0


if __name__ == "__main__":
    sys.exit(main())
