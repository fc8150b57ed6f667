"""Error-free transformations and component-level dd/qd algorithms.

Every function here is straight-line float arithmetic and works unchanged
on Python floats and on numpy arrays (elementwise), so the scalar classes
in :mod:`polynewt.xprec` and the vectorized contexts in
:mod:`polynewt.varith` share one set of algorithms.  The only data-dependent
branching lives in the quad-double renormalization, which has a branchy
scalar form and a masked array form computing the same result.

Overflow and underflow are out of contract: infinities propagate.
"""

from __future__ import annotations

import math

import numpy as np

_SPLIT = 134217729.0  # 2^27 + 1, Dekker splitting constant


def two_sum(a, b):
    """s = fl(a+b) and e with s + e = a + b exactly."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def quick_two_sum(a, b):
    """two_sum under the assumption |a| >= |b| (or a == 0)."""
    s = a + b
    e = b - (s - a)
    return s, e


def split(a):
    t = _SPLIT * a
    hi = t - (t - a)
    lo = a - hi
    return hi, lo


def two_prod(a, b):
    """p = fl(a*b) and e with p + e = a * b exactly (Dekker splitting)."""
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def three_sum(a, b, c):
    """Return (s, u, v) with s + u + v = a + b + c, decreasing magnitude."""
    t1, t2 = two_sum(a, b)
    s, t3 = two_sum(c, t1)
    u, v = two_sum(t2, t3)
    return s, u, v


def three_sum2(a, b, c):
    """Like three_sum but the third component is dropped into the second."""
    t1, t2 = two_sum(a, b)
    s, t3 = two_sum(c, t1)
    return s, t2 + t3


# ---------------------------------------------------------------------------
# double-double: values are pairs (hi, lo), non-overlapping


def dd_add(a, b):
    s1, s2 = two_sum(a[0], b[0])
    t1, t2 = two_sum(a[1], b[1])
    s2 = s2 + t1
    s1, s2 = quick_two_sum(s1, s2)
    s2 = s2 + t2
    return quick_two_sum(s1, s2)


def dd_neg(a):
    return (-a[0], -a[1])


def dd_sub(a, b):
    return dd_add(a, dd_neg(b))


def dd_mul(a, b):
    p, e = two_prod(a[0], b[0])
    e = e + (a[0] * b[1] + a[1] * b[0])
    return quick_two_sum(p, e)


def dd_mul_d(a, b):
    """dd times plain double."""
    p, e = two_prod(a[0], b)
    e = e + a[1] * b
    return quick_two_sum(p, e)


_DD_ONE = (1.0, 0.0)


def dd_div(a, b):
    """Newton refinement of the reciprocal from a binary64 seed, 2 steps."""
    r = (1.0 / b[0], 0.0)
    for _ in range(2):
        e = dd_sub(_DD_ONE, dd_mul(b, r))
        r = dd_add(r, dd_mul(r, e))
    return dd_mul(a, r)


def dd_sqrt(a):
    """Reciprocal-square-root Newton iteration, 2 refinement steps.

    Callers guarantee a >= 0; a == 0 must be filtered before the call
    (the seed 1/sqrt(0) is infinite).
    """
    seed = 1.0 / np.sqrt(a[0]) if isinstance(a[0], np.ndarray) else 1.0 / math.sqrt(a[0])
    r = (seed, 0.0 * seed)
    half = (0.5, 0.0)
    for _ in range(2):
        e = dd_sub(_DD_ONE, dd_mul(a, dd_mul(r, r)))
        r = dd_add(r, dd_mul(half, dd_mul(r, e)))
    return dd_mul(a, r)


# ---------------------------------------------------------------------------
# quad-double: values are 4-tuples (c0, c1, c2, c3), decreasing magnitude,
# pairwise non-overlapping after renormalization


def _renorm5_scalar(c0, c1, c2, c3, c4):
    s, t4 = quick_two_sum(c3, c4)
    s, t3 = quick_two_sum(c2, s)
    s, t2 = quick_two_sum(c1, s)
    cur, t1 = quick_two_sum(c0, s)

    out = [0.0, 0.0, 0.0, 0.0]
    k = 0
    for v in (t1, t2, t3, t4):
        s, e = quick_two_sum(cur, v)
        if e != 0.0 and k < 3:
            out[k] = s
            cur = e
            k += 1
        else:
            cur = s
    out[k] = cur
    return tuple(out)


def _renorm5_array(c0, c1, c2, c3, c4):
    s, t4 = quick_two_sum(c3, c4)
    s, t3 = quick_two_sum(c2, s)
    s, t2 = quick_two_sum(c1, s)
    cur, t1 = quick_two_sum(c0, s)

    shape = np.broadcast(c0, c1, c2, c3, c4).shape
    cur = np.broadcast_to(cur, shape).copy()
    outs = [np.zeros(shape) for _ in range(4)]
    k = np.zeros(shape, dtype=np.int8)
    for v in (t1, t2, t3, t4):
        s, e = quick_two_sum(cur, np.broadcast_to(v, shape))
        adv = (e != 0.0) & (k < 3)
        for slot, o in enumerate(outs):
            np.copyto(o, s, where=adv & (k == slot))
        cur = np.where(adv, e, s)
        k = k + adv
    for slot, o in enumerate(outs):
        np.copyto(o, cur, where=(k == slot))
    return tuple(outs)


def renorm5(c0, c1, c2, c3, c4):
    if isinstance(c0, np.ndarray) or isinstance(c4, np.ndarray):
        return _renorm5_array(c0, c1, c2, c3, c4)
    return _renorm5_scalar(c0, c1, c2, c3, c4)


def qd_renorm(a):
    return renorm5(a[0], a[1], a[2], a[3], 0.0)


def qd_add(a, b):
    s1, t1 = two_sum(a[0], b[0])
    s2, t2 = two_sum(a[1], b[1])
    s3, t3 = two_sum(a[2], b[2])
    s4, t4 = two_sum(a[3], b[3])

    s2, t1 = two_sum(s2, t1)
    s3, t2, t1 = three_sum(s3, t2, t1)
    s4, t3 = three_sum2(s4, t3, t2)
    t4 = t4 + t3 + t1
    return renorm5(s1, s2, s3, s4, t4)


def qd_neg(a):
    return (-a[0], -a[1], -a[2], -a[3])


def qd_sub(a, b):
    return qd_add(a, qd_neg(b))


def qd_mul(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    p0, q0 = two_prod(a0, b0)
    p1, q1 = two_prod(a0, b1)
    p2, q2 = two_prod(a1, b0)
    p3, q3 = two_prod(a0, b2)
    p4, q4 = two_prod(a1, b1)
    p5, q5 = two_prod(a2, b0)

    p1, p2, q0 = three_sum(p1, p2, q0)

    # six-three sum of p2, q1, q2, p3, p4, p5
    p2, q1, q2 = three_sum(p2, q1, q2)
    p3, p4, p5 = three_sum(p3, p4, p5)
    s0, t0 = two_sum(p2, p3)
    s1, t1 = two_sum(q1, p4)
    s2 = q2 + p5
    s1, t0 = two_sum(s1, t0)
    s2 = s2 + (t0 + t1)

    p6, q6 = two_prod(a0, b3)
    p7, q7 = two_prod(a1, b2)
    p8, q8 = two_prod(a2, b1)
    p9, q9 = two_prod(a3, b0)

    # nine-two sum of q0, s1, q3..q5, p6..p9
    q0, q3 = two_sum(q0, q3)
    q4, q5 = two_sum(q4, q5)
    p6, p7 = two_sum(p6, p7)
    p8, p9 = two_sum(p8, p9)
    t0, t1 = two_sum(q0, q4)
    t1 = t1 + (q3 + q5)
    r0, r1 = two_sum(p6, p8)
    r1 = r1 + (p7 + p9)
    q3, q4 = two_sum(t0, r0)
    q4 = q4 + (t1 + r1)
    t0, t1 = two_sum(q3, s1)
    t1 = t1 + q4

    # O(eps^4) terms
    t1 = t1 + (a1 * b3 + a2 * b2 + a3 * b1) + (q6 + q7 + q8 + q9) + s2

    return renorm5(p0, p1, s0, t0, t1)


_QD_ONE = (1.0, 0.0, 0.0, 0.0)
_QD_HALF = (0.5, 0.0, 0.0, 0.0)


def qd_div(a, b):
    """Newton refinement of the reciprocal from a binary64 seed, 3 steps."""
    z = 0.0 * b[0]
    r = (1.0 / b[0], z, z, z)
    for _ in range(3):
        e = qd_sub(_QD_ONE, qd_mul(b, r))
        r = qd_add(r, qd_mul(r, e))
    return qd_mul(a, r)


def qd_sqrt(a):
    """Reciprocal-square-root Newton iteration, 3 refinement steps."""
    seed = 1.0 / np.sqrt(a[0]) if isinstance(a[0], np.ndarray) else 1.0 / math.sqrt(a[0])
    z = 0.0 * seed
    r = (seed, z, z, z)
    for _ in range(3):
        e = qd_sub(_QD_ONE, qd_mul(a, qd_mul(r, r)))
        r = qd_add(r, qd_mul(_QD_HALF, qd_mul(r, e)))
    return qd_mul(a, r)
