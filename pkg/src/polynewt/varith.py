"""Vectorized component arithmetic for matrices of extended-precision values.

A real value at precision nc is a numpy array with a leading component axis
of length nc (1 for double, 2 for dd, 4 for qd); a complex value has leading
shape (2, nc) for (re, im).  All operations are elementwise over the trailing
data axes and reuse the exact component algorithms from :mod:`polynewt._eft`,
so a vectorized computation is bit-identical to the same sequence of scalar
operations.
"""

from __future__ import annotations

import numpy as np

from . import _eft
from .xprec import Complex, PrecisionLevel


def _r_add(a, b, nc):
    if nc == 1:
        return a + b
    if nc == 2:
        return np.stack(_eft.dd_add((a[0], a[1]), (b[0], b[1])))
    return np.stack(_eft.qd_add(tuple(a), tuple(b)))


def _r_sub(a, b, nc):
    if nc == 1:
        return a - b
    if nc == 2:
        return np.stack(_eft.dd_sub((a[0], a[1]), (b[0], b[1])))
    return np.stack(_eft.qd_sub(tuple(a), tuple(b)))


def _r_mul(a, b, nc):
    if nc == 1:
        return a * b
    if nc == 2:
        return np.stack(_eft.dd_mul((a[0], a[1]), (b[0], b[1])))
    return np.stack(_eft.qd_mul(tuple(a), tuple(b)))


def _r_div(a, b, nc):
    if nc == 1:
        return a / b
    if nc == 2:
        return np.stack(_eft.dd_div((a[0], a[1]), (b[0], b[1])))
    return np.stack(_eft.qd_div(tuple(a), tuple(b)))


def _r_sqrt(a, nc):
    if nc == 1:
        return np.sqrt(a)
    zero = a[0] == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        if nc == 2:
            out = np.stack(_eft.dd_sqrt((a[0], a[1])))
        else:
            out = np.stack(_eft.qd_sqrt(tuple(a)))
    if np.any(zero):
        out[:, zero] = 0.0
    return out


class VecContext:
    """Elementwise operations for one precision level (real or complex)."""

    def __init__(self, level: PrecisionLevel):
        self.level = level
        self.nc = level.ncomp
        self.cplx = level.cplx
        self.eps = level.eps
        self.cshape = (2, self.nc) if self.cplx else (self.nc,)

    # -- construction ------------------------------------------------------

    def zeros(self, shape) -> np.ndarray:
        if isinstance(shape, int):
            shape = (shape,)
        return np.zeros(self.cshape + tuple(shape))

    def from_scalars(self, values) -> np.ndarray:
        """Nested list of scalars -> component array, data axes trailing."""
        def rec(v):
            if isinstance(v, list):
                return [rec(x) for x in v]
            return self.level.to_components(v)
        arr = np.asarray(rec(values), dtype=np.float64)
        # components are currently the innermost axis; move them in front
        arr = np.moveaxis(arr, -1, 0)
        return arr.reshape(self.cshape + arr.shape[1:])

    def to_scalar(self, arr):
        return self.level.from_components(np.asarray(arr).reshape(-1).tolist())

    def to_scalars(self, arr) -> list:
        """Component array with one trailing data axis -> list of scalars."""
        flat = arr.reshape((-1,) + arr.shape[len(self.cshape):])
        return [self.level.from_components(flat[:, i].tolist())
                for i in range(flat.shape[1])]

    # -- arithmetic --------------------------------------------------------

    def add(self, a, b):
        if not self.cplx:
            return _r_add(a, b, self.nc)
        return np.stack((_r_add(a[0], b[0], self.nc), _r_add(a[1], b[1], self.nc)))

    def sub(self, a, b):
        if not self.cplx:
            return _r_sub(a, b, self.nc)
        return np.stack((_r_sub(a[0], b[0], self.nc), _r_sub(a[1], b[1], self.nc)))

    def mul(self, a, b):
        if not self.cplx:
            return _r_mul(a, b, self.nc)
        nc = self.nc
        re = _r_sub(_r_mul(a[0], b[0], nc), _r_mul(a[1], b[1], nc), nc)
        im = _r_add(_r_mul(a[0], b[1], nc), _r_mul(a[1], b[0], nc), nc)
        return np.stack((re, im))

    def neg(self, a):
        return -a

    def conj(self, a):
        if not self.cplx:
            return a
        return np.stack((a[0], -a[1]))

    def div(self, a, b):
        if not self.cplx:
            return _r_div(a, b, self.nc)
        nc = self.nc
        den = _r_add(_r_mul(b[0], b[0], nc), _r_mul(b[1], b[1], nc), nc)
        num = self.mul(a, self.conj(b))
        return np.stack((_r_div(num[0], den, nc), _r_div(num[1], den, nc)))

    def div_real(self, a, r):
        """Divide by a real value (component array without the re/im axis)."""
        if not self.cplx:
            return _r_div(a, r, self.nc)
        return np.stack((_r_div(a[0], r, self.nc), _r_div(a[1], r, self.nc)))

    def mul_real(self, a, r):
        if not self.cplx:
            return _r_mul(a, r, self.nc)
        return np.stack((_r_mul(a[0], r, self.nc), _r_mul(a[1], r, self.nc)))

    def abs2(self, a):
        """Squared modulus as a real component array."""
        if not self.cplx:
            return _r_mul(a, a, self.nc)
        return _r_add(_r_mul(a[0], a[0], self.nc), _r_mul(a[1], a[1], self.nc), self.nc)

    def sqrt_real(self, r):
        return _r_sqrt(r, self.nc)

    def real_embed(self, r):
        """Real component array -> value of this context (zero imag if complex)."""
        if not self.cplx:
            return r
        return np.stack((r, np.zeros_like(r)))

    def real_part(self, a):
        return a[0] if self.cplx else a

    # -- reductions --------------------------------------------------------

    def tree_sum(self, a, axis: int):
        """Balanced pairwise sum over one data axis, fixed canonical order.

        The order depends only on the axis length, never on how the work is
        partitioned, so tiled and parallel execution reproduce it exactly.
        """
        axis = axis + len(self.cshape)
        while a.shape[axis] > 1:
            n = a.shape[axis]
            even = 2 * (n // 2)
            lo = [slice(None)] * a.ndim
            hi = [slice(None)] * a.ndim
            lo[axis] = slice(0, even, 2)
            hi[axis] = slice(1, even, 2)
            s = self.add(a[tuple(lo)], a[tuple(hi)])
            if n % 2:
                tail = [slice(None)] * a.ndim
                tail[axis] = slice(n - 1, n)
                s = np.concatenate((s, a[tuple(tail)]), axis=axis)
            a = s
        sq = [slice(None)] * a.ndim
        sq[axis] = 0
        return a[tuple(sq)]

    def float_approx(self, a) -> np.ndarray:
        """Leading binary64 approximation (drops the component axis)."""
        if self.cplx:
            return a[0][0] + 1j * a[1][0]
        return a[0]


def promote(arr: np.ndarray, src: PrecisionLevel, dst: PrecisionLevel) -> np.ndarray:
    """Exact embedding of a component array into a wider precision."""
    if dst.ncomp < src.ncomp or dst.cplx != src.cplx:
        raise ValueError("promotion must widen the precision")
    if dst.ncomp == src.ncomp:
        return arr
    nc_axis = 1 if src.cplx else 0
    pad = [(0, 0)] * arr.ndim
    pad[nc_axis] = (0, dst.ncomp - src.ncomp)
    return np.pad(arr, pad)
