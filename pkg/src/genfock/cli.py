"""Command-line front end.

Exit codes: 0 success, 1 failed check, 2 usage error, 3 I/O error.
Structured output is JSON on stdout (or --out); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from . import bargmann as bg
from . import moments as mo
from . import operators as op
from . import specfun as sf
from .coeffspace import CoeffSeq, KernelSpec, Space
from .kernels import kernel
from .verify import report_json, run_verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """``re,im`` or anything ``complex()`` accepts."""
    text = text.strip()
    if "," in text:
        re_, im = text.split(",", 1)
        return complex(float(re_), float(im))
    return complex(text.replace("i", "j"))


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _pair(z: complex) -> list[float]:
    return [z.real, z.imag]


def _emit(text: str, out: str | None):
    """Write atomically to ``out`` or print to stdout."""
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    fd, tmp = tempfile.mkstemp(dir=path.parent if str(path.parent) else ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(obj, args) -> str:
    return json.dumps(obj, indent=2 if args.pretty else None) + "\n"


# commands --------------------------------------------------------------------

def cmd_verify(args) -> int:
    report = run_verify(args.profile, args.seed, timings=args.timings, only=args.only)
    _emit(report_json(report, args.pretty), args.out)
    for c in report["checks"]:
        if not c["pass"]:
            print(f"FAIL {c['check_id']}: metric {c['metric']:.3g} > {c['threshold']:.3g}", file=sys.stderr)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_kernel(args) -> int:
    spec = KernelSpec(Space(args.space), args.p)
    v = kernel(spec, parse_complex(args.z), parse_complex(args.w), args.terms)
    _emit(_dump(v.to_json(), args), args.out)
    return EXIT_OK


def _load_phi(text: str) -> bg.L2Function:
    kind, _, arg = text.partition(":")
    if kind == "gaussian":
        return bg.L2Function.gaussian(float(arg) if arg else 0.0)
    if kind == "hermite_n":
        return bg.L2Function.hermite(int(arg))
    if kind == "hermite":
        return bg.L2Function(CoeffSeq.from_json(Path(arg).read_text()))
    raise UsageError(f"unknown --phi {text!r}; use gaussian[:a], hermite_n:K or hermite:FILE")


def cmd_transform(args) -> int:
    phi = _load_phi(args.phi)
    N = args.terms
    if phi.hermite_coeffs is not None:
        N = max(N, phi.hermite_coeffs.truncation + 1)
    res = bg.transform_full(args.kind, args.p, phi, parse_complex(args.z), N,
                            bg.gauss_hermite_rule(args.nodes), cross_check=True)
    _emit(_dump(res.to_json(), args), args.out)
    return EXIT_OK


def cmd_op(args) -> int:
    f = CoeffSeq.from_json(Path(args.input).read_text()) if args.input else None
    N = args.trunc if args.trunc is not None else (f.truncation if f is not None else args.terms)
    m = op.evaluate_expr(args.expr, N)
    if args.matrix or f is None:
        _emit(m.to_csv() + "\n", args.out)
        return EXIT_OK
    f = f.padded(N)
    g = m.apply(f)
    if m.reach and any(f.coeffs[m.interior + 1:]):
        print(f"note: columns above {m.interior} are affected by truncation at degree {N}", file=sys.stderr)
    _emit(_dump(g.to_json(), args), args.out)
    return EXIT_OK


def cmd_moments(args) -> int:
    s = mo.parse_sequence(args.seq)
    cert = mo.stieltjes_certificate(s, args.nmax, args.mode)
    out = cert.to_json()
    fail = mo.first_failure(cert)
    out["first_failure"] = None if fail is None else {"order": fail.order, "kind": fail.kind}
    _emit(_dump(out, args), args.out)
    return EXIT_OK


_TABLE_OPS = (("R0*", op.BaseOp.R0), ("D*", op.BaseOp.D), ("Mz*", op.BaseOp.MZ), ("I*", op.BaseOp.I))


def adjoint_table(space: Space, p: int, n_max: int) -> list[dict]:
    spec = KernelSpec(space, p)
    rows = []
    for n in range(n_max + 1):
        row = {"n": n}
        for label, b in _TABLE_OPS:
            t = op.adjoint_of(b, spec)
            row[label] = {"weight": _frac(t.coeff(n)), "degree": n + t.shift if t.coeff(n) else None}
        rows.append(row)
    return rows


def cmd_table(args) -> int:
    space = {"adjoint_hp": Space.HP, "adjoint_fp": Space.FP}[args.kind]
    rows = adjoint_table(space, args.p, args.nmax)
    if args.pretty:
        lines = [f"{'n':>3}  " + "  ".join(f"{label:>14}" for label, _ in _TABLE_OPS)]
        for r in rows:
            cells = []
            for label, _ in _TABLE_OPS:
                c = r[label]
                cells.append(f"{c['weight'] + (' z^' + str(c['degree']) if c['degree'] is not None else ''):>14}")
            lines.append(f"{r['n']:>3}  " + "  ".join(cells))
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(json.dumps({"kind": args.kind, "p": args.p, "rows": rows}) + "\n", args.out)
    return EXIT_OK


def _scalar(v):
    if isinstance(v, Fraction):
        return _frac(v)
    if isinstance(v, complex):
        return _pair(v)
    return v


def cmd_specfun(args) -> int:
    a = args.args
    try:
        if args.name == "hermite_He":
            x = parse_complex(a[1])
            v = sf.hermite_He(int(a[0]), int(x.real) if x.imag == 0 and x.real.is_integer() else x)
        elif args.name == "hermite_fn":
            v = sf.hermite_fn(int(a[0]), float(a[1]))
        elif args.name == "stirling2":
            v = sf.stirling2(int(a[0]), int(a[1]))
        elif args.name == "touchard":
            v = sf.touchard(int(a[0]), parse_complex(a[1]))
        elif args.name == "pochhammer":
            base = Fraction(a[0])
            v = sf.pochhammer(int(base) if base.denominator == 1 else float(base), int(a[1]))
        else:  # hyper
            v = sf.hyper_1s2s(int(a[0]), parse_complex(a[1]), int(a[2]) if len(a) > 2 else args.terms)
    except IndexError:
        raise UsageError(f"too few arguments for {args.name}") from None
    if isinstance(v, complex) and v.imag == 0 and args.name != "hyper":
        v = v.real
    _emit(json.dumps(_scalar(v)) + "\n", args.out)
    return EXIT_OK


# parser ----------------------------------------------------------------------

def _common(terms: int = 60) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--terms", type=int, default=terms, help="series truncation N")
    common.add_argument("--nodes", type=int, default=200, help="Gauss-Hermite node count M")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--pretty", action="store_true", help="indented JSON / text tables")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="genfock", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run the identity suite")
    p.add_argument("--profile", choices=["quick", "full"], default="quick")
    p.add_argument("--timings", action="store_true", help="record runtime_ms (breaks byte-identity)")
    p.add_argument("--only", nargs="*", help="run only checks with these id prefixes")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("kernel", parents=[common], help="evaluate a reproducing kernel")
    p.add_argument("--space", choices=[s.value for s in Space], required=True)
    p.add_argument("--p", type=int, default=0)
    p.add_argument("--z", required=True)
    p.add_argument("--w", required=True)
    p.set_defaults(fn=cmd_kernel)

    p = sub.add_parser("transform", parents=[_common(terms=40)], help="Bargmann-type transform at a point")
    p.add_argument("--kind", choices=[k.value for k in bg.Kind], required=True)
    p.add_argument("--p", type=int, default=0)
    p.add_argument("--phi", required=True, help="gaussian[:a] | hermite_n:K | hermite:FILE.json")
    p.add_argument("--z", required=True)
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser("op", parents=[common], help="apply an operator expression")
    p.add_argument("--expr", required=True)
    p.add_argument("--input", help="CoeffSeq JSON; without it the matrix is printed")
    p.add_argument("--trunc", type=int)
    p.add_argument("--matrix", action="store_true", help="print the exact section as CSV")
    p.set_defaults(fn=cmd_op)

    p = sub.add_parser("moments", parents=[common], help="Hankel PSD certificate")
    p.add_argument("--seq", required=True, help="hp:P | fp:P | factorial | hausdorff | file:FILE.json")
    p.add_argument("--nmax", type=int, default=6)
    p.add_argument("--mode", choices=["exact", "float"])
    p.set_defaults(fn=cmd_moments)

    p = sub.add_parser("table", parents=[common], help="adjoint weight table")
    p.add_argument("--kind", choices=["adjoint_hp", "adjoint_fp"], required=True)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--nmax", type=int, default=5)
    p.set_defaults(fn=cmd_table)

    p = sub.add_parser("specfun", parents=[common], help="special-function values")
    p.add_argument("name", choices=["hermite_He", "hermite_fn", "stirling2", "touchard", "pochhammer", "hyper"])
    p.add_argument("args", nargs="+")
    p.set_defaults(fn=cmd_specfun)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except (UsageError, ValueError, KeyError, SyntaxError) as exc:
        print(f"genfock {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"genfock {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
