"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 parse or type error, 3 counting
error (component cap, export, size limits), 4 ``verify`` found a deviation.
Timing goes to stderr so stdout is reproducible byte for byte.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import models
from .counting import METHODS, wmc_count
from .encodings import KINDS
from .errors import DiracSyntaxError, DiracTypeError, ModelError, WcnfParseError, WmcError
from .lang import typecheck
from .parser import parse
from .reps import compile_expr, rep_value
from .values import format_number, format_value, eval_value
from .wcnf import DIALECTS, export_rep, load_rep, parse_wcnf

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_COUNT, EXIT_MISMATCH = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class ParseFailure(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _parse_expr(path: str):
    return _parse_text(_read(path))


def _is_wcnf(text: str) -> bool:
    for line in text.splitlines():
        toks = line.split()
        if toks and toks[0] != "c":
            return toks[0] == "p"
    return False


def _digits(args) -> int:
    return 17 if args.full_precision else 6


def _out(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_typecheck(args) -> int:
    print(typecheck(_parse_expr(args.file)))
    return EXIT_OK


def cmd_value(args) -> int:
    print(format_value(eval_value(_parse_expr(args.file)), _digits(args)))
    return EXIT_OK


def cmd_compile(args) -> int:
    rep = compile_expr(_parse_expr(args.file), args.encoding)
    _out(args, export_rep(rep, args.dialect))
    return EXIT_OK


def _count_instance(text: str, args):
    try:
        inst = parse_wcnf(text)
    except WcnfParseError as exc:
        raise ParseFailure(str(exc)) from None
    if inst.rep_kind == "matrix":
        return rep_value(load_rep(inst), method=args.method, cap=args.component_cap)
    return wmc_count(inst.cnf, inst.weights, method=args.method, cap=args.component_cap)


def cmd_count(args) -> int:
    text = _read(args.file)
    if not _is_wcnf(text):
        # route Dirac input through the exported instance so both paths count the same CNF
        rep = compile_expr(_parse_text(text), args.encoding)
        text = export_rep(rep, "native")
    print(format_value(_count_instance(text, args), _digits(args)))
    return EXIT_OK


def _parse_text(text: str):
    try:
        e = parse(text)
        typecheck(e)
    except (DiracSyntaxError, DiracTypeError) as exc:
        raise ParseFailure(str(exc)) from None
    return e


def _model(args):
    sources = [args.file is not None, args.lattice is not None, args.random_graph is not None]
    if sum(sources) != 1:
        raise UsageError("give exactly one of a model file, --lattice or --random-graph")
    if args.file is not None:
        try:
            return models.parse_model(_read(args.file))
        except ModelError as exc:
            raise ParseFailure(str(exc)) from None
    if args.seed is None:
        raise UsageError("generated models need --seed")
    kw = {"seed": args.seed, "model": args.model}
    if args.lattice is not None:
        return models.generate_lattice(args.lattice, **kw)
    n, degree = args.random_graph
    return models.generate_random_graph(int(n), degree, **kw)


def cmd_partition(args) -> int:
    model = _model(args)
    if args.beta is None or not args.beta > 0:
        raise UsageError("--beta must be given and positive")
    start = time.perf_counter()
    Z = models.partition(
        model,
        args.beta,
        method=args.method,
        cap=args.component_cap,
        kind=args.encoding,
        trotter_k=args.trotter_k,
        pipeline=args.pipeline,
    )
    elapsed = time.perf_counter() - start
    digits = _digits(args)
    if abs(Z.imag) <= 1e-9 * abs(Z):
        Z = complex(Z.real)
    print(f"Z = {format_number(Z, digits)}")
    if Z.imag == 0 and Z.real > 0:
        print(f"F = {format_number(models.free_energy(Z, args.beta), digits)}")
    if args.oracle:
        print(f"oracle = {format_number(models.oracle(model, args.beta), digits)}")
    print(f"time = {elapsed:.3f} s", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    e = _parse_expr(args.file)
    dense = np.asarray(eval_value(e), dtype=np.complex128)
    worst = 0.0
    for kind in [args.encoding] if args.encoding else KINDS:
        got = np.asarray(rep_value(compile_expr(e, kind), method=args.method, cap=args.component_cap))
        scale = np.maximum(np.abs(dense), 1.0)
        dev = float(np.max(np.abs(got - dense) / scale)) if dense.size else 0.0
        worst = max(worst, dev)
        print(f"{kind}: max relative deviation {dev:.3e}")
    ok = worst <= args.tol
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="diracwmc", description="Compile Dirac-notation expressions to weighted model counting.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    common = _ArgumentParser(add_help=False)
    common.add_argument("--full-precision", action="store_true", help="print 17 significant digits instead of 6")
    common.add_argument("--method", choices=METHODS, default="auto", help="counting method (default: auto)")
    common.add_argument("--component-cap", type=int, default=None, help="largest component to count (default: $DIRACWMC_COMPONENT_CAP or 30)")

    s = sub.add_parser("typecheck", help="print the type of an expression")
    s.add_argument("file")
    s.set_defaults(func=cmd_typecheck)

    s = sub.add_parser("value", parents=[common], help="evaluate an expression densely")
    s.add_argument("file")
    s.set_defaults(func=cmd_value)

    s = sub.add_parser("compile", help="compile an expression to weighted CNF")
    s.add_argument("file")
    s.add_argument("--encoding", choices=KINDS, default="log")
    s.add_argument("--dialect", choices=DIALECTS, default="native")
    s.add_argument("-o", "--output", help="write here instead of stdout")
    s.set_defaults(func=cmd_compile)

    s = sub.add_parser("count", parents=[common], help="count a weighted CNF file or a compiled expression")
    s.add_argument("file")
    s.add_argument("--encoding", choices=KINDS, default="log")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("partition", parents=[common], help="partition function of a spin model")
    s.add_argument("file", nargs="?", help="model file (ising, tfim or potts header)")
    s.add_argument("--lattice", type=int, metavar="L", help="random L x L lattice instead of a file")
    s.add_argument("--random-graph", type=float, nargs=2, metavar=("N", "DEGREE"), help="random graph instead of a file")
    s.add_argument("--model", choices=("ising", "tfim", "potts"), default="ising", help="family of a generated model")
    s.add_argument("--seed", type=int, help="seed for generated models")
    s.add_argument("--beta", type=float, default=1.0)
    s.add_argument("--trotter-k", type=int, default=64)
    s.add_argument("--encoding", choices=KINDS, default="log")
    s.add_argument("--pipeline", choices=("rep", "expr"), default="rep", help="hand-built encodings or compiled expressions")
    s.add_argument("--oracle", action="store_true", help="also print the brute-force value")
    s.set_defaults(func=cmd_partition)

    s = sub.add_parser("verify", parents=[common], help="compare compiled counts with dense values")
    s.add_argument("file")
    s.add_argument("--encoding", choices=KINDS, default=None, help="check one encoding (default: all)")
    s.add_argument("--tol", type=float, default=1e-9)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "trotter_k", 1) < 1:
        print("diracwmc: error: --trotter-k must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"diracwmc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseFailure as exc:
        print(f"diracwmc: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (WmcError, ValueError, OverflowError) as exc:
        print(f"diracwmc: {exc}", file=sys.stderr)
        return EXIT_COUNT


if __name__ == "__main__":
    sys.exit(main())
