"""Vectorized component arithmetic must agree with the scalar classes bitwise."""

import random

import numpy as np
import pytest

from polynewt.varith import VecContext, promote
from polynewt.xprec import precision_level

LEVELS = [precision_level(b, c) for b in ("d", "dd", "qd") for c in (False, True)]


def random_scalars(level, n, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        x = level.from_float(rng.uniform(-2.0, 2.0),
                             rng.uniform(-2.0, 2.0) if level.cplx else 0.0)
        out.append(x * level.from_float(1.0 + rng.random() * 1e-14))
    return out


@pytest.mark.parametrize("level", LEVELS, ids=lambda lv: lv.name)
class TestScalarVectorAgreement:
    def test_elementwise_ops_bitwise_equal(self, level):
        ctx = VecContext(level)
        a = random_scalars(level, 40, 1)
        b = random_scalars(level, 40, 2)
        va = ctx.from_scalars(a)
        vb = ctx.from_scalars(b)
        for name, vec, scl in [
            ("add", ctx.add, lambda x, y: x + y),
            ("sub", ctx.sub, lambda x, y: x - y),
            ("mul", ctx.mul, lambda x, y: x * y),
            ("div", ctx.div, lambda x, y: x / y),
        ]:
            got = ctx.to_scalars(vec(va, vb))
            want = [scl(x, y) for x, y in zip(a, b)]
            assert got == want, name

    def test_round_trip_through_components(self, level):
        ctx = VecContext(level)
        vals = random_scalars(level, 10, 3)
        assert ctx.to_scalars(ctx.from_scalars(vals)) == vals

    def test_tree_sum_matches_scalar_pairwise_sum(self, level):
        ctx = VecContext(level)
        for n in (1, 2, 3, 7, 8, 33):
            vals = random_scalars(level, n, n)
            arr = ctx.from_scalars(vals)
            got = ctx.to_scalar(ctx.tree_sum(arr, axis=0))
            items = list(vals)
            while len(items) > 1:
                nxt = [items[i] + items[i + 1]
                       for i in range(0, len(items) - 1, 2)]
                if len(items) % 2:
                    nxt.append(items[-1])
                items = nxt
            assert got == items[0]

    def test_tree_sum_is_partition_independent(self, level):
        # summing the halves separately must not change anything: the
        # reduction order is a function of the length alone
        ctx = VecContext(level)
        vals = random_scalars(level, 24, 5)
        arr = ctx.from_scalars(vals)
        whole = ctx.to_scalar(ctx.tree_sum(arr, axis=0))
        resum = ctx.from_scalars(ctx.to_scalars(arr))
        assert ctx.to_scalar(ctx.tree_sum(resum, axis=0)) == whole


def test_abs2_and_sqrt():
    level = precision_level("dd", cplx=True)
    ctx = VecContext(level)
    vals = [level.from_float(3.0, 4.0), level.from_float(-1.0, 1.0)]
    arr = ctx.from_scalars(vals)
    mags = ctx.sqrt_real(ctx.abs2(arr))
    assert float(mags[0, 0]) == 5.0
    assert abs(float(mags[0, 1]) - np.sqrt(2.0)) < 1e-15


def test_sqrt_of_zero_is_zero():
    level = precision_level("qd", cplx=False)
    ctx = VecContext(level)
    arr = ctx.from_scalars([level.zero(), level.from_float(4.0)])
    out = ctx.sqrt_real(arr)
    assert out[:, 0].tolist() == [0.0, 0.0, 0.0, 0.0]
    assert float(out[0, 1]) == 2.0


def test_promote_is_exact_embedding():
    src = precision_level("dd", cplx=True)
    dst = precision_level("qd", cplx=True)
    ctx = VecContext(src)
    vals = random_scalars(src, 5, 9)
    arr = ctx.from_scalars(vals)
    wide = promote(arr, src, dst)
    wctx = VecContext(dst)
    for v, w in zip(vals, wctx.to_scalars(wide)):
        assert w.re.comps[:2] == v.re.comps and w.re.comps[2:] == (0.0, 0.0)
        assert w.im.comps[:2] == v.im.comps and w.im.comps[2:] == (0.0, 0.0)


def test_promote_rejects_narrowing():
    with pytest.raises(ValueError):
        promote(np.zeros((4, 3)), precision_level("qd", False),
                precision_level("dd", False))
