"""Product trees and cheap gradients for monomial evaluation.

The product of n distinct variables is evaluated with a balanced binary tree
in n - 1 multiplications; the stored internal nodes then yield all n partial
derivatives with a downward sweep of complement products in 2n - 4 further
multiplications (for n a power of two), against 3n - 5 for the classic
forward/backward sequential scheme.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from ._parallel import chunk_ranges, run_tasks, thread_count
from .polyrep import (MonomialDecomposition, PolySystem, build_power_table,
                      decompose, eval_common_factor)
from .xprec import one_like, zero_like


@dataclass
class OpCounter:
    """Multiplication tallies split by phase."""

    eval_mults: int = 0
    grad_mults: int = 0

    def merge(self, other: "OpCounter"):
        self.eval_mults += other.eval_mults
        self.grad_mults += other.grad_mults


@dataclass
class ProductTree:
    """Levels of a balanced product; levels[0] has 2^k slots, levels[-1] one.

    Inputs beyond the leading power of two are folded into the slots first:
    with n = 2^k + ell, slot t holds v[t] * v[2^k + t] for t < ell and v[t]
    otherwise.  Each level above pairs entry t with entry t + s (s = half the
    level size), so every internal node is stored for reuse by the gradient.
    """

    inputs: list
    base: int           # 2^k
    ell: int            # n - 2^k
    levels: list        # levels[0] = slots; levels[j][t] = product of a block

    @property
    def root(self):
        return self.levels[-1][0]


def eval_product_tree(values, counter: OpCounter | None = None) -> ProductTree:
    """Product of all values in len(values) - 1 multiplications."""
    n = len(values)
    if n == 0:
        raise ValueError("empty product")
    counter = counter if counter is not None else OpCounter()
    base = 1
    while base * 2 <= n:
        base *= 2
    ell = n - base
    slots = list(values[:base])
    for t in range(ell):
        slots[t] = values[t] * values[base + t]
    counter.eval_mults += ell
    levels = [slots]
    while len(levels[-1]) > 1:
        prev = levels[-1]
        s = len(prev) // 2
        levels.append([prev[t] * prev[t + s] for t in range(s)])
        counter.eval_mults += s
    return ProductTree(list(values), base, ell, levels)


def gradient_from_tree(tree: ProductTree, counter: OpCounter | None = None) -> list:
    """All partial derivatives of the tree's product, one per input.

    Sweeps complement products down the stored levels: the two children of
    the root get each other's value for free, every deeper child multiplies
    its parent's complement by its sibling's value.  Costs 2n - 4
    multiplications for n a power of two (0 for n = 2).
    """
    counter = counter if counter is not None else OpCounter()
    n = len(tree.inputs)
    if n == 1:
        return [one_like(tree.inputs[0])]
    levels = tree.levels
    comp = [levels[-2][1], levels[-2][0]] if len(levels) >= 2 else []
    for j in range(len(levels) - 2, 0, -1):
        prev = levels[j - 1]
        s = len(levels[j])
        nxt = [None] * (2 * s)
        for t in range(s):
            nxt[t] = comp[t] * prev[t + s]
            nxt[t + s] = comp[t] * prev[t]
        counter.grad_mults += 2 * s
        comp = nxt
    # comp now holds the complement of each slot; unfold the folded pairs
    grads = [None] * n
    for t in range(tree.base):
        if t < tree.ell:
            grads[t] = comp[t] * tree.inputs[tree.base + t]
            grads[tree.base + t] = comp[t] * tree.inputs[t]
            counter.grad_mults += 2
        else:
            grads[t] = comp[t]
    return grads


def speelpenning_sequential(values, counter: OpCounter | None = None):
    """Reference forward/backward scheme: product plus all derivatives.

    Builds prefix products forward, then walks a suffix product backward,
    emitting each derivative along the way; 3n - 5 multiplications total.
    """
    n = len(values)
    if n < 2:
        raise ValueError("need at least two factors")
    counter = counter if counter is not None else OpCounter()
    prefix = [values[0]]
    for i in range(1, n - 1):
        prefix.append(prefix[-1] * values[i])
    counter.eval_mults += n - 2
    product = prefix[-1] * values[n - 1]
    counter.eval_mults += 1
    grads = [None] * n
    grads[n - 1] = prefix[n - 2]
    suffix = values[n - 1]
    for i in range(n - 2, 0, -1):
        grads[i] = prefix[i - 1] * suffix
        suffix = suffix * values[i]
        counter.grad_mults += 2
    grads[0] = suffix
    return product, grads


# ---------------------------------------------------------------------------
# monomials and full systems


def eval_monomial_and_derivs(coeff, dec: MonomialDecomposition, table, point,
                             counter: OpCounter | None = None):
    """Value and nonzero partials of coeff * x^d at one point.

    Returns (value, [(var, dvalue), ...]).  The common factor x^(d-1) shared
    by every derivative is formed once from the power table; derivatives come
    from the gradient circuit, never from dividing the product back out.
    """
    counter = counter if counter is not None else OpCounter()
    k = len(dec.distinct_vars)
    if k == 0:
        return coeff, []
    common = eval_common_factor(dec, table)
    extra = dict(dec.common_factor)
    if k == 1:
        # single-variable bypass: no tree needed
        var = dec.distinct_vars[0]
        d = 1 + extra.get(var, 0)
        value = coeff * table.get(var, d)
        counter.eval_mults += 1
        dcoeff = coeff * d
        deriv = dcoeff if d == 1 else dcoeff * table.get(var, d - 1)
        counter.grad_mults += 1 if d > 1 else 0
        return value, [(var, deriv)]
    vals = [point[var] for var in dec.distinct_vars]
    tree = eval_product_tree(vals, counter)
    scale = coeff if common is None else coeff * common
    if common is not None:
        counter.eval_mults += 1 + max(0, len(dec.common_factor) - 1)
    value = scale * tree.root
    counter.eval_mults += 1
    grads = gradient_from_tree(tree, counter)
    derivs = []
    for var, g in zip(dec.distinct_vars, grads):
        d = 1 + extra.get(var, 0)
        dscale = scale if d == 1 else scale * d
        derivs.append((var, dscale * g))
        counter.grad_mults += 1 + (1 if d > 1 else 0)
    return value, derivs


@dataclass
class PreparedSystem:
    """A polynomial system with per-monomial decompositions precomputed."""

    system: PolySystem
    terms: list = field(init=False)  # per poly: [(coeff, decomposition), ...]

    def __post_init__(self):
        sys_c = self.system.canonicalized()
        self.system = sys_c
        self.terms = [[(mon.coeff, decompose(mon)) for mon in poly]
                      for poly in sys_c.polys]


@dataclass
class SystemEvaluation:
    values: list          # m scalars
    jacobian: list        # m rows of n scalars
    counter: OpCounter
    seconds: float


def _tree_reduce(items):
    """Pairwise sum in the canonical order shared with the vector kernels."""
    while len(items) > 1:
        nxt = [items[i] + items[i + 1] for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return items[0]


def evaluate_system(system, point, counter: OpCounter | None = None,
                    parallel: bool = False) -> SystemEvaluation:
    """Values and Jacobian of a system at one point.

    Accepts a PolySystem or a PreparedSystem.  Term contributions to each
    value and Jacobian entry are summed with a fixed pairwise tree over the
    canonical term order, so parallel runs are reproducible to the bit.
    """
    t0 = time.perf_counter()
    prep = system if isinstance(system, PreparedSystem) else PreparedSystem(system)
    sys_c = prep.system
    n = sys_c.n_vars
    if len(point) != n:
        raise ValueError(f"point dimension {len(point)} != n_vars {n}")
    counter = counter if counter is not None else OpCounter()
    table = build_power_table(point, sys_c)

    flat = [(i, coeff, dec) for i, terms in enumerate(prep.terms)
            for coeff, dec in terms]
    results = [None] * len(flat)

    def worker(lo, hi):
        sub = OpCounter()
        for t in range(lo, hi):
            _, coeff, dec = flat[t]
            results[t] = eval_monomial_and_derivs(coeff, dec, table, point, sub)
        return sub

    chunks = chunk_ranges(len(flat), thread_count() if parallel else 1)
    tasks = [lambda lo=lo, hi=hi: worker(lo, hi) for lo, hi in chunks]
    for sub in run_tasks(tasks, parallel):
        counter.merge(sub)

    zero = zero_like(point[0])
    values = []
    jacobian = []
    pos = 0
    for i, terms in enumerate(prep.terms):
        vparts = []
        jparts = {}
        for _ in terms:
            value, derivs = results[pos]
            pos += 1
            vparts.append(value)
            for var, dv in derivs:
                jparts.setdefault(var, []).append(dv)
        values.append(_tree_reduce(vparts) if vparts else zero)
        row = [zero] * n
        for var, parts in jparts.items():
            row[var] = _tree_reduce(parts)
        jacobian.append(row)
    return SystemEvaluation(values, jacobian, counter, time.perf_counter() - t0)
