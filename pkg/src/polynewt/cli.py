"""Command-line front end.

Subcommands: ``newton`` runs the iteration on a benchmark or file system and
emits a JSON-lines trace plus a summary record; ``qr`` factors a random
least-squares problem; ``evaldiff`` exercises the evaluation circuits;
``gen`` writes benchmark systems in the text format; ``report`` renders a
stored trace to CSV and a convergence figure.

Exit codes: 0 success, 2 usage or input-format error, 3 numerical failure,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

import numpy as np

from . import bench, newton as nw, report
from .evaldiff import (OpCounter, eval_product_tree, evaluate_system,
                       gradient_from_tree, speelpenning_sequential)
from .mgs import (AugmentedMatrix, MgsBreakdownError, SingularMatrixError,
                  TilingConfig, least_squares_solve, residual_check)
from .polyrep import SystemParseError, parse_system, serialize_system
from .varith import VecContext
from .xprec import DomainError, precision_level

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


class UsageError(Exception):
    pass


def _add_precision_args(p: argparse.ArgumentParser):
    p.add_argument("--prec", choices=["d", "dd", "qd"], default="dd",
                   help="working precision (default dd)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--complex", dest="cplx", action="store_true", default=True,
                   help="complex arithmetic (default)")
    g.add_argument("--real", dest="cplx", action="store_false",
                   help="real arithmetic")


def _level(args):
    return precision_level(args.prec, args.cplx)


def _emit(stream, record: dict):
    stream.write(json.dumps(record) + "\n")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polynewt")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("newton", help="run the damped-free Gauss-Newton iteration")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--benchmark", choices=["chandrasekhar", "cyclic"])
    src.add_argument("--file", help="system in the text format")
    p.add_argument("--n", type=int, default=8, help="benchmark dimension")
    p.add_argument("--c", default="33/64",
                   help="H-equation parameter as a fraction (default 33/64)")
    _add_precision_args(p)
    p.add_argument("--iters", type=int, default=10, help="maximum iterations")
    p.add_argument("--tol", type=float, default=None,
                   help="correction-norm stop tolerance (default adaptive)")
    p.add_argument("--homotopy", action="store_true",
                   help="shift the system so a random unit point nearly solves it")
    p.add_argument("--t", type=float, default=0.99,
                   help="homotopy shift parameter (default 0.99)")
    p.add_argument("--start", choices=["ones", "random", "unit"], default=None,
                   help="start point (default: ones, or the homotopy point)")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--K", type=int, default=None,
                   help="tile rounds for the QR inner products")
    p.add_argument("--delayed", action="store_true",
                   help="delay pivot normalization inside QR")
    p.add_argument("--parallel", action="store_true")
    p.add_argument("--output", help="trace destination (default stdout)")
    p.add_argument("--dump-qr", help="write the final Q and R factors here")
    p.add_argument("--report-dir",
                   help="also render trace.csv and convergence.png here")

    p = sub.add_parser("qr", help="least squares on a random matrix")
    p.add_argument("--m", type=int, default=32)
    p.add_argument("--n", type=int, default=16)
    _add_precision_args(p)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--K", type=int, default=None)
    p.add_argument("--delayed", action="store_true")
    p.add_argument("--parallel", action="store_true")
    p.add_argument("--check", action="store_true",
                   help="report ||A - QR||_max at the next higher precision")
    p.add_argument("--dump-qr", help="write Q and R factors here")

    p = sub.add_parser("evaldiff", help="time the monomial evaluation circuits")
    p.add_argument("--m", type=int, default=16, help="number of products")
    p.add_argument("--n", type=int, default=64, help="variables per product")
    _add_precision_args(p)
    p.add_argument("--seed", type=int, default=1)

    p = sub.add_parser("gen", help="write a benchmark system in text format")
    p.add_argument("--benchmark", choices=["chandrasekhar", "cyclic"],
                   required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", default="33/64")
    _add_precision_args(p)
    p.add_argument("--output", help="destination (default stdout)")

    p = sub.add_parser("report", help="render a stored trace")
    p.add_argument("--trace", required=True, help="JSON-lines trace file")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--title", default="")
    return ap


def _load_system(args, level):
    if args.file:
        with open(args.file) as fh:
            return parse_system(fh.read(), level)
    if args.benchmark == "chandrasekhar":
        return bench.chandrasekhar_system(args.n, level, Fraction(args.c))
    return bench.cyclic_n_roots(args.n, level)


def _dump_factors(path: str, factors, level):
    ctx = factors.ctx
    with open(path, "w") as fh:
        q = factors.Q
        r = factors.R
        fh.write(f"Q {q.shape[-2]} {q.shape[-1]}\n")
        for i in range(q.shape[-2]):
            row = ctx.to_scalars(q[..., i, :])
            fh.write(" ".join(level.render(v) for v in row) + "\n")
        fh.write(f"R {r.shape[-2]} {r.shape[-1]}\n")
        for i in range(r.shape[-2]):
            row = ctx.to_scalars(r[..., i, :])
            fh.write(" ".join(level.render(v) for v in row) + "\n")


def _cmd_newton(args) -> int:
    level = _level(args)
    system = _load_system(args, level)
    n = system.n_vars
    z = None
    if args.homotopy or args.start == "unit":
        if not level.cplx:
            raise UsageError("unit-circle start points need --complex")
        z = bench.random_unit_point(n, args.seed, level)
    if args.homotopy:
        system = nw.homotopy_start_system(system, z, level.from_float(args.t))
    if args.start == "unit":
        x0 = z
    elif args.start == "random":
        x0 = bench.random_point(n, args.seed, level)
    elif args.start == "ones" or not args.homotopy:
        x0 = [level.one() for _ in range(n)]
    else:
        x0 = z

    cfg = nw.NewtonConfig(level=level, max_iters=args.iters, tol=args.tol,
                          tiling=TilingConfig(args.K), delayed=args.delayed,
                          parallel=args.parallel)
    trace = nw.run_newton(system, x0, cfg)

    out = open(args.output, "w") if args.output else sys.stdout
    try:
        out.write(trace.to_json_lines())
        _emit(out, {
            "summary": {
                "converged": trace.converged,
                "iterations": len(trace.entries),
                "final_f_norm": trace.entries[-1].f_norm,
                "final_dx_norm": trace.entries[-1].dx_norm,
                "eval_mults": trace.counter.eval_mults,
                "grad_mults": trace.counter.grad_mults,
                "timings": {k: round(v, 6) for k, v in trace.timings.items()},
                "precision": level.name,
            }
        })
    finally:
        if out is not sys.stdout:
            out.close()

    if args.dump_qr or args.report_dir:
        if args.dump_qr:
            ev = evaluate_system(system, trace.x)
            aug = AugmentedMatrix.from_scalars(level, ev.jacobian,
                                               [-v for v in ev.values])
            res = least_squares_solve(aug, cfg.tiling)
            _dump_factors(args.dump_qr, res.factors, level)
        if args.report_dir:
            records = [json.loads(e.to_json()) for e in trace.entries]
            report.write_report(records, args.report_dir,
                                title=f"Gauss-Newton, {level.name}")
    return EXIT_OK


def _random_augmented(args, level):
    ctx = VecContext(level)
    rng = np.random.default_rng(args.seed)
    shape = ctx.cshape + (args.m, args.n + 1)
    data = np.zeros(shape)
    lead = (0, 0) if level.cplx else (0,)
    data[lead] = rng.uniform(-1.0, 1.0, (args.m, args.n + 1))
    if level.cplx:
        data[1, 0] = rng.uniform(-1.0, 1.0, (args.m, args.n + 1))
    return AugmentedMatrix(ctx, data)


def _cmd_qr(args) -> int:
    if args.n < 1 or args.m < args.n:
        raise UsageError("need m >= n >= 1")
    level = _level(args)
    aug = _random_augmented(args, level)
    cfg = TilingConfig(args.K)
    t0 = time.perf_counter()
    res = least_squares_solve(aug, cfg, delayed=args.delayed,
                              parallel=args.parallel)
    seconds = time.perf_counter() - t0
    summary = {"m": args.m, "n": args.n, "precision": level.name,
               "z": res.z, "seconds": round(seconds, 6)}
    if args.check:
        a = aug.data[..., :, : args.n]
        summary["qr_residual"] = residual_check(a, res.factors.Q,
                                                res.factors.r_square, level)
    if args.dump_qr:
        _dump_factors(args.dump_qr, res.factors, level)
    _emit(sys.stdout, summary)
    return EXIT_OK


def _cmd_evaldiff(args) -> int:
    level = _level(args)
    mons = bench.random_stress_products(args.m, args.n, args.seed, level)
    point = bench.random_point(args.n, args.seed + 1, level)
    tree_counter = OpCounter()
    seq_counter = OpCounter()
    t0 = time.perf_counter()
    for mon in mons:
        vals = [point[v] for v, _ in mon.exponents]
        tree = eval_product_tree(vals, tree_counter)
        gradient_from_tree(tree, tree_counter)
    t1 = time.perf_counter()
    for mon in mons:
        vals = [point[v] for v, _ in mon.exponents]
        speelpenning_sequential(vals, seq_counter)
    t2 = time.perf_counter()
    _emit(sys.stdout, {
        "m": args.m, "n": args.n, "precision": level.name,
        "tree": {"eval_mults": tree_counter.eval_mults,
                 "grad_mults": tree_counter.grad_mults,
                 "seconds": round(t1 - t0, 6)},
        "sequential": {"eval_mults": seq_counter.eval_mults,
                       "grad_mults": seq_counter.grad_mults,
                       "seconds": round(t2 - t1, 6)},
    })
    return EXIT_OK


def _cmd_gen(args) -> int:
    level = _level(args)
    if args.benchmark == "chandrasekhar":
        system = bench.chandrasekhar_system(args.n, level, Fraction(args.c))
    else:
        system = bench.cyclic_n_roots(args.n, level)
    text = serialize_system(system, level)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_report(args) -> int:
    records = report.load_trace(args.trace)
    if not records:
        raise UsageError(f"no iteration records in {args.trace}")
    paths = report.write_report(records, args.out_dir, title=args.title)
    _emit(sys.stdout, paths)
    return EXIT_OK


_COMMANDS = {
    "newton": _cmd_newton,
    "qr": _cmd_qr,
    "evaldiff": _cmd_evaldiff,
    "gen": _cmd_gen,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (UsageError, SystemParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MgsBreakdownError, SingularMatrixError, DomainError,
            ZeroDivisionError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
