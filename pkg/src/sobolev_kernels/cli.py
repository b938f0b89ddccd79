"""Command-line interface: ``sobolev-kernels {eval,table,gram,fit,verify}``.

Exit codes: 0 success, 2 usage error, 3 convergence failure, 4 correctness
failure (corrected-mode check or failed positive-definiteness).
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

import numpy as np

from . import verify as _verify
from .errors import ConvergenceError, DomainError
from .kernels import KernelMode, SobolevIndex
from .oracle import QuadratureSpec, radial_kernel
from .rkhs import (
    build_gram,
    check_spd,
    eval_interpolant,
    fit_interpolant,
    format_float,
    read_points_csv,
    write_matrix_csv,
)

EXIT_OK, EXIT_USAGE, EXIT_CONVERGENCE, EXIT_CORRECTNESS = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _add_index_args(p, require=True):
    p.add_argument("--n", type=int, required=require, help="ambient dimension")
    p.add_argument("--s", type=int, required=require, help="Sobolev order")
    p.add_argument("--mode", default="corrected",
                   help="corrected | paper | paper-odd | paper-even (default: corrected)")


def _add_output_args(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sobolev-kernels",
        description="Reproducing kernels of H_s(R^n): evaluate, tabulate, interpolate, verify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate K(r)")
    _add_index_args(p)
    p.add_argument("--r", type=float, required=True)
    _add_output_args(p)

    p = sub.add_parser("table", help="tabulate r, K(r) on a uniform grid")
    _add_index_args(p)
    p.add_argument("--r-min", type=float, default=0.0)
    p.add_argument("--r-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=101, help="number of grid points")
    _add_output_args(p)

    for name, helptext in (("gram", "write the Gram matrix of a point set"),
                           ("fit", "fit a minimum-norm interpolant")):
        p = sub.add_parser(name, help=helptext)
        _add_index_args(p)
        p.add_argument("--points", required=True, help="CSV: header, then x1,...,xn[,value]")
        if name == "fit":
            p.add_argument("--values", help="CSV with a header and one value per row")
            p.add_argument("--query", help="CSV of query points x1,...,xn")
        _add_output_args(p)

    p = sub.add_parser("verify", help="run the verification matrix against the oracle")
    p.add_argument("--suite", action="append", choices=_verify.SUITES + ("all",),
                   help="suite to run (repeatable; default all)")
    p.add_argument("--tol", type=float, help="override the tolerance of every selected suite")
    p.add_argument("--format", choices=("json",), default="json")
    p.add_argument("--out")
    return parser


def _index(args) -> tuple[SobolevIndex, KernelMode]:
    try:
        idx = SobolevIndex(args.s, args.n)
        mode = KernelMode.parse(args.mode, idx.n)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    return idx, mode


def _kernel(idx, mode):
    try:
        return radial_kernel(idx, mode)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _cmd_eval(args):
    idx, mode = _index(args)
    if not args.r >= 0:
        raise UsageError("--r must be non-negative")
    k = _kernel(idx, mode)
    value = k(args.r)
    row = {"s": idx.s, "n": idx.n, "mode": mode.value, "r": args.r, "k": value}
    if args.r == 0:
        row["diagonal"] = k.diagonal
    if args.format == "json":
        return _dump_json(row), EXIT_OK
    header = list(row)
    cells = [str(v) if isinstance(v, (int, str)) else format_float(v) for v in row.values()]
    return ",".join(header) + "\n" + ",".join(cells) + "\n", EXIT_OK


def _cmd_table(args):
    idx, mode = _index(args)
    if args.steps < 2 or not 0 <= args.r_min < args.r_max:
        raise UsageError("need 0 <= --r-min < --r-max and --steps >= 2")
    k = _kernel(idx, mode)
    r = np.linspace(args.r_min, args.r_max, args.steps)
    vals = k(r)
    if args.format == "json":
        return _dump_json({"s": idx.s, "n": idx.n, "mode": mode.value,
                           "r": r.tolist(), "k": np.asarray(vals).tolist()}), EXIT_OK
    return write_matrix_csv(np.column_stack([r, vals]), ["r", "k"]), EXIT_OK


def _read(path):
    try:
        with open(path, newline="") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _points(args, idx):
    try:
        return read_points_csv(_read(args.points), idx.n)
    except DomainError as exc:
        raise UsageError(f"{args.points}: {exc}") from None


def _cmd_gram(args):
    idx, mode = _index(args)
    pts, _ = _points(args, idx)
    try:
        system = build_gram(pts, idx, mode)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    m = system.size
    if args.format == "json":
        return _dump_json({"s": idx.s, "n": idx.n, "mode": mode.value,
                           "gram": system.gram.tolist()}), EXIT_OK
    return write_matrix_csv(system.gram, [f"k{j}" for j in range(m)]), EXIT_OK


def _cmd_fit(args):
    idx, mode = _index(args)
    pts, values = _points(args, idx)
    if args.values:
        try:
            vals, _ = read_points_csv(_read(args.values), 1, with_values=False)
        except DomainError as exc:
            raise UsageError(f"{args.values}: {exc}") from None
        values = vals[:, 0]
    if values is None:
        raise UsageError("fit needs values: a value column in --points or a --values file")
    if len(values) != len(pts):
        raise UsageError(f"{len(pts)} points but {len(values)} values")
    try:
        system = build_gram(pts, idx, mode)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    spd = check_spd(system)
    if not spd.success:
        msg = (f"Gram matrix is not positive definite: pivot {spd.min_pivot:.3e} "
               f"at index {spd.failed_index}\n")
        return msg, EXIT_CORRECTNESS
    coef = fit_interpolant(system, values)
    queries = None
    if args.query:
        try:
            q, _ = read_points_csv(_read(args.query), idx.n, with_values=False)
        except DomainError as exc:
            raise UsageError(f"{args.query}: {exc}") from None
        queries = (q, np.atleast_1d(eval_interpolant(system, coef, q)))
    if args.format == "json":
        out = {"s": idx.s, "n": idx.n, "mode": mode.value, "min_pivot": spd.min_pivot,
               "coefficients": coef.tolist()}
        if queries is not None:
            out["queries"] = queries[0].tolist()
            out["values"] = queries[1].tolist()
        return _dump_json(out), EXIT_OK
    text = write_matrix_csv(coef[:, None], ["c"])
    if queries is not None:
        header = [f"x{i + 1}" for i in range(idx.n)] + ["value"]
        text += "\n" + write_matrix_csv(np.column_stack([queries[0], queries[1]]), header)
    return text, EXIT_OK


def _cmd_verify(args):
    suites = args.suite or ["all"]
    if "all" in suites:
        suites = list(_verify.SUITES)
    if args.tol is not None and not args.tol > 0:
        raise UsageError("--tol must be positive")
    report = _verify.run_verification(tuple(dict.fromkeys(suites)), tol=args.tol,
                                      spec=QuadratureSpec())
    code = EXIT_OK if report["summary"]["failed"] == 0 else EXIT_CORRECTNESS
    return _dump_json(report), code


_COMMANDS = {"eval": _cmd_eval, "table": _cmd_table, "gram": _cmd_gram,
             "fit": _cmd_fit, "verify": _cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        text, code = _COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"convergence failure: {exc} (estimate {exc.estimate!r}, error {exc.error!r})",
              file=sys.stderr)
        return EXIT_CONVERGENCE
    if code == EXIT_CORRECTNESS and args.command == "fit":
        sys.stderr.write(text)
        return code
    if getattr(args, "out", None):
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
