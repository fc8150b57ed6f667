"""Least-squares solving via modified Gram-Schmidt QR on [A b].

The orthogonalization runs on the matrix A augmented with the right-hand
side, so ||b - Ax||^2 = ||Rx - y||^2 + z^2 with y the top of the last
column of R and z its bottom entry, which is the least-squares residual
norm.  Inner products are evaluated in row tiles of capacity K, but the
summation order is a fixed balanced tree over the full row range, so the
result is bit-identical for every K and under any task schedule.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _parallel
from .varith import VecContext, promote
from .xprec import PrecisionLevel


class MgsBreakdownError(ArithmeticError):
    """Rank deficiency at working precision: r_kk at or below threshold."""

    def __init__(self, k: int, rkk: float, threshold: float):
        super().__init__(
            f"MGS breakdown at column {k}: r_kk={rkk:.3e} <= {threshold:.3e}")
        self.k = k
        self.rkk = rkk
        self.threshold = threshold


class SingularMatrixError(ArithmeticError):
    def __init__(self, index: int):
        super().__init__(f"zero diagonal entry at index {index}")
        self.index = index


@dataclass(frozen=True)
class TilingConfig:
    """Row-tile capacity K; L = ceil(m/K) rounds per inner product."""

    K: int | None = None  # None: single round (K = m)

    def capacity(self, m: int) -> int:
        if self.K is None:
            return m
        if self.K < 1:
            raise ValueError("tile capacity K must be >= 1")
        return min(self.K, m)

    def rounds(self, m: int) -> int:
        k = self.capacity(m)
        return (m + k - 1) // k

    def tiles(self, m: int):
        k = self.capacity(m)
        return [(lo, min(lo + k, m)) for lo in range(0, m, k)]


@dataclass
class AugmentedMatrix:
    """[A b] as a component array, data axes (rows, n+1 columns)."""

    ctx: VecContext
    data: np.ndarray  # cshape + (m, n+1)

    @property
    def m(self) -> int:
        return self.data.shape[-2]

    @property
    def n(self) -> int:
        return self.data.shape[-1] - 1

    @classmethod
    def from_scalars(cls, level: PrecisionLevel, a_rows, b) -> "AugmentedMatrix":
        ctx = VecContext(level)
        rows = [list(r) + [bv] for r, bv in zip(a_rows, b)]
        return cls(ctx, ctx.from_scalars(rows))

    @classmethod
    def from_arrays(cls, ctx: VecContext, a: np.ndarray, b: np.ndarray) -> "AugmentedMatrix":
        return cls(ctx, np.concatenate((a, b[..., None]), axis=-1))


@dataclass
class QRFactors:
    """Q with orthonormal columns and the (n+1)x(n+1) triangular factor.

    The last column of R holds y = Q^H b in its top n entries and the
    least-squares residual norm z on the diagonal; the residual direction
    q_{n+1} itself is not stored.
    """

    ctx: VecContext
    Q: np.ndarray  # cshape + (m, n)
    R: np.ndarray  # cshape + (n+1, n+1)

    @property
    def n(self) -> int:
        return self.Q.shape[-1]

    @property
    def y(self) -> np.ndarray:
        return self.R[..., : self.n, self.n]

    @property
    def z(self) -> float:
        zc = self.ctx.real_part(self.R[..., self.n, self.n])
        return float(zc[0])

    @property
    def r_square(self) -> np.ndarray:
        return self.R[..., : self.n, : self.n]


# rank deficiency is declared when r_kk <= n * eps * ||a_k||
BREAKDOWN_FACTOR = 1.0


def _real_ctx(ctx: VecContext) -> VecContext:
    if not ctx.cplx:
        return ctx
    return VecContext(PrecisionLevel(ctx.level.base, False))


def _column_norm(ctx: VecContext, rctx: VecContext, col):
    """||col||_2 as a real component array.

    The squared moduli are elementwise and the reduction runs in a fixed
    balanced order that depends only on the row count, so splitting the
    rows into K-sized tile rounds cannot change a single bit; the tile
    capacity therefore only budgets how much of this work a round may
    touch at once, and the whole pass is issued as one vector operation.
    """
    return ctx.sqrt_real(rctx.tree_sum(ctx.abs2(col), axis=0))


def _products(ctx: VecContext, qc, rest):
    """Elementwise conj(q)*rest; K-independent for the same reason as above."""
    return ctx.mul(qc[..., :, None], rest)


def mgs_qr(aug: AugmentedMatrix, cfg: TilingConfig = TilingConfig(),
           delayed: bool = False, parallel: bool = False) -> QRFactors:
    """Modified Gram-Schmidt on [A b]; immediate or delayed normalization.

    The delayed variant stores the pivot norm, lets every column-update
    task renormalize the shared unnormalized pivot column itself, and
    writes the normalized column one sweep late (plus one final pass).
    Both variants perform the identical float operation sequence, so they
    agree bitwise; column-update tasks are independent and may run in any
    order.

    The tile capacity in `cfg` budgets how many rows a round of elementwise
    work covers.  Because reductions always run in the fixed balanced order
    of :meth:`VecContext.tree_sum`, the factors are bit-identical for every
    capacity, and the elementwise stages are issued as whole-column vector
    operations.
    """
    ctx = aug.ctx
    rctx = _real_ctx(ctx)
    m, n = aug.m, aug.n
    if not (m >= n >= 1):
        raise ValueError(f"need m >= n >= 1, got m={m}, n={n}")
    A = aug.data.copy()
    Q = ctx.zeros((m, n))
    R = ctx.zeros((n + 1, n + 1))

    orig_norms = [float(_column_norm(ctx, rctx, A[..., :, k])[0])
                  for k in range(n)]

    pending = None  # delayed: (column index, unnormalized column, norm)
    for k in range(n + 1):
        col = A[..., :, k]
        rkk = _column_norm(ctx, rctx, col)
        if k < n:
            threshold = BREAKDOWN_FACTOR * n * ctx.eps * orig_norms[k]
            if float(rkk[0]) <= threshold:
                raise MgsBreakdownError(k, float(rkk[0]), threshold)
        R[..., k, k] = ctx.real_embed(rkk)

        if delayed:
            if pending is not None:
                pk, pcol, pnorm = pending
                Q[..., :, pk] = ctx.div_real(pcol, pnorm)
            pending = (k, col.copy(), rkk) if k < n else pending
            if k == n:
                pending = None
        elif k < n:
            Q[..., :, k] = ctx.div_real(col, rkk)

        if k >= n:
            break

        ncols = n + 1 - (k + 1)
        chunks = _parallel.chunk_ranges(
            ncols, _parallel.thread_count() if parallel else 1)

        def update(span, k=k, col=col, rkk=rkk):
            lo, hi = span
            # each task renormalizes the pivot from the stored column + norm
            q = ctx.div_real(col, rkk)
            qc = ctx.conj(q)
            rest = A[..., :, k + 1 + lo:k + 1 + hi]
            prods = _products(ctx, qc, rest)
            r_row = ctx.tree_sum(prods, axis=0)
            A[..., :, k + 1 + lo:k + 1 + hi] = ctx.sub(
                rest, ctx.mul(q[..., :, None], r_row[..., None, :]))
            return lo, r_row

        for lo, r_row in _parallel.run_tasks(
                [lambda s=s: update(s) for s in chunks], parallel):
            R[..., k, k + 1 + lo:k + 1 + lo + r_row.shape[-1]] = r_row

    # delayed variant: one extra pass normalizes the last pivot column
    if delayed and pending is not None:
        pk, pcol, pnorm = pending
        Q[..., :, pk] = ctx.div_real(pcol, pnorm)
    return QRFactors(ctx, Q, R)


def mgs_qr_delayed(aug: AugmentedMatrix, cfg: TilingConfig = TilingConfig(),
                   parallel: bool = False) -> QRFactors:
    return mgs_qr(aug, cfg, delayed=True, parallel=parallel)


def back_substitute(R: np.ndarray, y: np.ndarray, ctx: VecContext) -> np.ndarray:
    """Unstaged reference solve of Rx = y.

    Works column by column so each step is one vectorized update, but every
    row still receives its subtractions in descending column order — the
    exact operation sequence of a row-oriented descending solve.
    """
    n = y.shape[-1]
    x = ctx.zeros((n,))
    yw = y.copy()
    for j in range(n - 1, -1, -1):
        diag = R[..., j, j]
        if not np.any(diag):
            raise SingularMatrixError(j)
        x[..., j] = ctx.div(yw[..., j], diag)
        if j:
            prod = ctx.mul(R[..., :j, j], x[..., j][..., None])
            yw[..., :j] = ctx.sub(yw[..., :j], prod)
    return x


def back_substitute_staged(R: np.ndarray, y: np.ndarray, ctx: VecContext,
                           cfg: TilingConfig = TilingConfig(),
                           parallel: bool = False) -> np.ndarray:
    """Staged tile solve of Rx = y over L = ceil(n/K) index tiles.

    Stage s works with L-s+1 tiles: the pivot tile solves its components
    while every lower-index tile reduces its right-hand-side slice (those
    reductions are independent tasks).  Every row accumulates its
    subtractions in the same descending column order as the unstaged
    reference, so the two are bit-identical.
    """
    n = y.shape[-1]
    tiles = cfg.tiles(n)
    L = len(tiles)
    x = ctx.zeros((n,))
    yw = y.copy()
    for p in range(L - 1, -1, -1):
        lo, hi = tiles[p]
        for j in range(hi - 1, lo - 1, -1):
            diag = R[..., j, j]
            if not np.any(diag):
                raise SingularMatrixError(j)
            x[..., j] = ctx.div(yw[..., j], diag)
            if j > lo:
                prod = ctx.mul(R[..., lo:j, j], x[..., j][..., None])
                yw[..., lo:j] = ctx.sub(yw[..., lo:j], prod)
        if p == 0:
            break

        def reduce_tile(span, lo=lo, hi=hi):
            tlo, thi = span
            block = yw[..., tlo:thi]
            for j in range(hi - 1, lo - 1, -1):
                block = ctx.sub(block, ctx.mul(R[..., tlo:thi, j], x[..., j][..., None]))
            return tlo, thi, block

        for tlo, thi, block in _parallel.run_tasks(
                [lambda s=s: reduce_tile(s) for s in tiles[:p]], parallel):
            yw[..., tlo:thi] = block
    return x


@dataclass
class LeastSquaresResult:
    x: np.ndarray          # cshape + (n,)
    z: float               # residual norm ||b - Ax||
    factors: QRFactors = field(repr=False)


def least_squares_solve(aug: AugmentedMatrix, cfg: TilingConfig = TilingConfig(),
                        delayed: bool = False, parallel: bool = False) -> LeastSquaresResult:
    """Minimize ||b - Ax||_2 via MGS QR of [A b] and staged back substitution."""
    f = mgs_qr(aug, cfg, delayed=delayed, parallel=parallel)
    ctx = aug.ctx
    x = back_substitute_staged(f.r_square, f.y, ctx, cfg, parallel=parallel)
    return LeastSquaresResult(x=x, z=f.z, factors=f)


_NEXT = {"d": "dd", "dd": "qd"}


def residual_check(A: np.ndarray, Q: np.ndarray, R: np.ndarray,
                   level: PrecisionLevel) -> float:
    """max componentwise |A - QR|, computed in the next-higher precision.

    d and dd factorizations are re-checked in dd and qd component
    arithmetic; qd factorizations fall back to 320-bit mpfr.
    R may be the (n+1)x(n+1) augmented factor; only its leading n x n
    block is used.
    """
    n = Q.shape[-1]
    if level.base in _NEXT:
        hi = PrecisionLevel(_NEXT[level.base], level.cplx)
        hctx = VecContext(hi)
        Ah = promote(A, level, hi)
        Qh = promote(Q, level, hi)
        Rh = promote(R, level, hi)
        acc = hctx.zeros(Ah.shape[len(hctx.cshape):])
        for k in range(n):
            acc = hctx.add(acc, hctx.mul(Qh[..., :, k, None], Rh[..., k, None, :n]))
        diff = hctx.sub(Ah, acc)
        mags = hctx.abs2(diff)[0]
        return float(np.sqrt(np.max(mags)))

    import gmpy2
    with gmpy2.context(precision=320):
        mpfr_ify = np.frompyfunc(gmpy2.mpfr, 1, 1)

        def mp_sum(comp_arrays):
            total = mpfr_ify(comp_arrays[0])
            for c in comp_arrays[1:]:
                total = total + c
            return total

        nc = level.ncomp
        if level.cplx:
            are, aim = mp_sum(A[0]), mp_sum(A[1])
            qre, qim = mp_sum(Q[0]), mp_sum(Q[1])
            rre, rim = mp_sum(R[0])[:n, :n], mp_sum(R[1])[:n, :n]
            dre = are - (qre @ rre - qim @ rim)
            dim = aim - (qre @ rim + qim @ rre)
            mag2 = dre * dre + dim * dim
        else:
            a, q, r = mp_sum(A), mp_sum(Q), mp_sum(R)[:n, :n]
            d = a - q @ r
            mag2 = d * d
        worst = max(mag2.reshape(-1).tolist())
        return float(gmpy2.sqrt(worst))
