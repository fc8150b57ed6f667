"""Gauss-Newton iteration on polynomial systems.

Each step evaluates the system and its Jacobian, solves the least-squares
correction J dx = -f through QR of the augmented matrix [J -f], and updates
the iterate.  A homotopy helper shifts a system so that a chosen point is an
exact start solution at t = 1.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

from .evaldiff import OpCounter, PreparedSystem, evaluate_system
from .mgs import AugmentedMatrix, TilingConfig, least_squares_solve
from .polyrep import Monomial, PolySystem
from .xprec import (Complex, PrecisionLevel, is_zero, modulus, render_decimal,
                    to_float)


@dataclass
class NewtonConfig:
    level: PrecisionLevel
    max_iters: int = 10
    tol: float | None = None      # None: 10 * eps * (1 + ||x||_inf) per step
    tiling: TilingConfig = field(default_factory=TilingConfig)
    delayed: bool = False
    parallel: bool = False


def inf_norm(values) -> float:
    return max((to_float(modulus(v)) for v in values), default=0.0)


def _scalar_json(x):
    if isinstance(x, Complex):
        return [render_decimal(x.re), render_decimal(x.im)]
    return render_decimal(x)


@dataclass
class TraceEntry:
    """One iteration: residual and correction norms plus probe entries.

    b0, dx0 and x0 are the first entries of the right-hand side, the
    correction, and the updated iterate; they expose the raw extended
    precision values that the norms round away.
    """

    iteration: int
    f_norm: float
    dx_norm: float
    b0: object
    dx0: object
    x0: object

    def to_json(self) -> str:
        return json.dumps({
            "iter": self.iteration,
            "f_norm": self.f_norm,
            "dx_norm": self.dx_norm,
            "b0": _scalar_json(self.b0),
            "dx0": _scalar_json(self.dx0),
            "x0": _scalar_json(self.x0),
        })


@dataclass
class IterationTrace:
    entries: list
    x: list                        # final iterate
    converged: bool
    counter: OpCounter
    timings: dict                  # seconds per phase: evaluate, solve, update

    def to_json_lines(self) -> str:
        return "".join(e.to_json() + "\n" for e in self.entries)


def newton_step(prep: PreparedSystem, x, cfg: NewtonConfig):
    """One correction: returns (x_next, entry, phase_seconds)."""
    ev = evaluate_system(prep, x, parallel=cfg.parallel)
    t1 = time.perf_counter()
    b = [-v for v in ev.values]
    aug = AugmentedMatrix.from_scalars(cfg.level, ev.jacobian, b)
    res = least_squares_solve(aug, cfg.tiling, delayed=cfg.delayed,
                              parallel=cfg.parallel)
    dx = aug.ctx.to_scalars(res.x)
    t2 = time.perf_counter()
    x_next = [xi + di for xi, di in zip(x, dx)]
    t3 = time.perf_counter()
    entry = TraceEntry(
        iteration=0,
        f_norm=inf_norm(ev.values),
        dx_norm=inf_norm(dx),
        b0=b[0],
        dx0=dx[0],
        x0=x_next[0],
    )
    seconds = {"evaluate": ev.seconds, "solve": t2 - t1, "update": t3 - t2}
    return x_next, entry, ev.counter, seconds


def run_newton(system, x0, cfg: NewtonConfig) -> IterationTrace:
    """Iterate until the correction norm drops under tolerance.

    The default tolerance is 10 * eps * (1 + ||x||_inf), recomputed each
    step so that convergence is judged relative to the iterate's size.
    """
    prep = system if isinstance(system, PreparedSystem) else PreparedSystem(system)
    x = list(x0)
    entries = []
    counter = OpCounter()
    timings = {"evaluate": 0.0, "solve": 0.0, "update": 0.0}
    converged = False
    for it in range(1, cfg.max_iters + 1):
        x, entry, step_counter, seconds = newton_step(prep, x, cfg)
        entry.iteration = it
        entries.append(entry)
        counter.merge(step_counter)
        for k, v in seconds.items():
            timings[k] += v
        tol = cfg.tol
        if tol is None:
            tol = 10.0 * cfg.level.eps * (1.0 + inf_norm(x))
        if entry.dx_norm <= tol:
            converged = True
            break
    timings["total"] = sum(timings.values())
    return IterationTrace(entries, x, converged, counter, timings)


def homotopy_start_system(system: PolySystem, z, t) -> PolySystem:
    """Shift each equation by -t * f_i(z), making z a near-solution.

    At t = 1 the point z solves the shifted system exactly (up to the
    rounding in evaluating f(z)); t slightly below 1 leaves a small residual
    for the iteration to work against.
    """
    ev = evaluate_system(system, z)
    polys = []
    for poly, fz in zip(system.polys, ev.values):
        shift = -(t * fz)
        const = None
        terms = []
        for mon in poly:
            if mon.exponents == ():
                if const is not None:
                    raise ValueError("duplicate constant term")
                const = mon
                continue
            terms.append(mon)
        total = shift if const is None else const.coeff + shift
        if not is_zero(total):
            terms.append(Monomial(total, ()))
        polys.append(terms)
    return PolySystem(system.n_vars, polys)


def convergence_ratio(trace: IterationTrace, floor: float = 0.0) -> list:
    """Quadratic-convergence quotients dx_{k+1} / dx_k^2 above a floor.

    Entries whose correction norm is at or below the floor (for instance the
    precision-limited tail) are excluded.
    """
    norms = [e.dx_norm for e in trace.entries if e.dx_norm > floor]
    out = []
    for a, b in zip(norms, norms[1:]):
        out.append(b / (a * a) if a > 0.0 else math.inf)
    return out
