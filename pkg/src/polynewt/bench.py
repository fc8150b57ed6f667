"""Benchmark system generators and stress inputs.

Two structured families with known behaviour — a discretized H-equation
whose Jacobian is dense, and the cyclic n-roots family whose equations are
sums of products of distinct variables — plus random monomial products for
exercising the evaluation circuits in isolation.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .polyrep import Monomial, PolySystem
from .xprec import PrecisionLevel


def chandrasekhar_system(n: int, level: PrecisionLevel,
                         c: Fraction = Fraction(33, 64)) -> PolySystem:
    """Discretized H-equation: n quadratic equations in n unknowns.

    Equation i (1-based) reads 2n*x_{i-1} - c*x_{i-1} * sum_j w_ij x_j - 2n
    with weights w_ij = i / (i + j) for 0-based j.  Weights and coefficients
    are formed by working-precision division and multiplication.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    c_val = level.from_fraction(c)
    two_n = level.from_int(2 * n)
    polys = []
    for i in range(1, n + 1):
        terms = [Monomial(two_n, ((i - 1, 1),)), Monomial(-two_n, ())]
        for j in range(n):
            w = level.from_int(i) / level.from_int(i + j)
            coeff = -(c_val * w)
            if j == i - 1:
                exps = ((i - 1, 2),)
            else:
                exps = tuple(sorted(((i - 1, 1), (j, 1))))
            terms.append(Monomial(coeff, exps))
        polys.append(terms)
    return PolySystem(n, polys)


def chandrasekhar_start(n: int, level: PrecisionLevel) -> list:
    """The customary all-ones start point."""
    return [level.one() for _ in range(n)]


def cyclic_n_roots(n: int, level: PrecisionLevel) -> PolySystem:
    """Cyclic n-roots system: n*n - n + 2 monomials in total.

    Equation i < n sums the n cyclic products of i consecutive variables;
    the last equation is the full product minus one.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    one = level.one()
    polys = []
    for i in range(1, n):
        terms = []
        for j in range(n):
            vars_ = sorted((j + k) % n for k in range(i))
            terms.append(Monomial(one, tuple((v, 1) for v in vars_)))
        polys.append(terms)
    full = Monomial(one, tuple((v, 1) for v in range(n)))
    polys.append([full, Monomial(-one, ())])
    return PolySystem(n, polys)


def random_unit_point(n: int, seed: int, level: PrecisionLevel) -> list:
    """n random unit-modulus complex values, reproducible from the seed."""
    if not level.cplx:
        raise ValueError("unit-circle points need a complex level")
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        theta = rng.uniform(0.0, 2.0 * math.pi)
        out.append(level.from_float(math.cos(theta), math.sin(theta)))
    return out


def random_point(n: int, seed: int, level: PrecisionLevel) -> list:
    """n random values with magnitudes in [0.5, 2), away from over/underflow."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        re = rng.uniform(0.5, 2.0) * rng.choice((-1.0, 1.0))
        if level.cplx:
            out.append(level.from_float(re, rng.uniform(0.5, 2.0)
                                        * rng.choice((-1.0, 1.0))))
        else:
            out.append(level.from_float(re))
    return out


def random_stress_products(m: int, n: int, seed: int,
                           level: PrecisionLevel) -> list:
    """m random coefficients on the full degree-n product of all variables."""
    rng = random.Random(seed)
    exps = tuple((v, 1) for v in range(n))
    out = []
    for _ in range(m):
        if level.cplx:
            coeff = level.from_float(rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0))
        else:
            coeff = level.from_float(rng.uniform(0.5, 2.0))
        out.append(Monomial(coeff, exps))
    return out
