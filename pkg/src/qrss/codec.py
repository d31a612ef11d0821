"""Polynomial codes over F_q.

Coefficient vectors are tuples of ints, constant term first, so
``(c1, c2, c3)`` is ``c1 + c2*x + c3*x^2``.  Vector-matrix products use
the row convention ``v . M`` throughout: with ``M = vandermonde(ctx, 0,
k-1, pts)`` the product ``c . M`` is the list of evaluations of ``c`` at
``pts``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .gf import FieldCtx, FieldError

__all__ = [
    "CodecError",
    "InvalidPointsError",
    "SingularMatrixError",
    "MatrixFq",
    "check_distinct",
    "eval_poly",
    "eval_many",
    "vandermonde",
    "identity",
    "invert",
    "matmul",
    "row_times_matrix",
    "solve",
    "nullspace",
    "rank",
    "span_basis",
    "interpolate",
    "auxiliary_points",
    "enumerate_coeffs",
    "enumerate_coeffs_partial",
]


class CodecError(FieldError):
    pass


class InvalidPointsError(CodecError):
    pass


class SingularMatrixError(CodecError):
    pass


@dataclass(frozen=True)
class MatrixFq:
    """Dense matrix over F_q with entries stored as reduced ints."""

    ctx: FieldCtx
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) % self.ctx.q for v in r) for r in self.rows)
        if not rows or not rows[0]:
            raise CodecError("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise CodecError("ragged matrix")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, ctx: FieldCtx, rows) -> MatrixFq:
        return cls(ctx, tuple(tuple(r) for r in rows))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    @property
    def is_square(self) -> bool:
        r, c = self.shape
        return r == c

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> MatrixFq:
        return MatrixFq(self.ctx, tuple(zip(*self.rows)))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __matmul__(self, other: MatrixFq) -> MatrixFq:
        return matmul(self, other)

    def __str__(self):
        return "\n".join(" ".join(str(v) for v in r) for r in self.rows)


def check_distinct(points: Sequence[int], ctx: FieldCtx | None = None) -> None:
    pts = [p % ctx.q for p in points] if ctx is not None else list(points)
    if len(set(pts)) != len(pts):
        raise InvalidPointsError(f"points are not pairwise distinct: {tuple(points)}")


def eval_poly(ctx: FieldCtx, coeffs: Sequence[int], u: int) -> int:
    """Horner evaluation of the coefficient vector at ``u``."""
    q = ctx.q
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * u + c) % q
    return acc


def eval_many(ctx: FieldCtx, coeffs: Sequence[int], points: Sequence[int]) -> tuple[int, ...]:
    check_distinct(points, ctx)
    return tuple(eval_poly(ctx, coeffs, u) for u in points)


def vandermonde(ctx: FieldCtx, c: int, d: int, points: Sequence[int]) -> MatrixFq:
    """Rows of exponents ``c..d``: entry ``(r, j)`` is ``points[j] ** (c + r)``.

    ``c == d`` is accepted and gives the single row of ``c``-th powers.
    """
    if c < 0 or c > d:
        raise CodecError(f"invalid exponent range {c}..{d}")
    if not points:
        raise CodecError("no points")
    return MatrixFq(ctx, tuple(tuple(ctx.pow(a, e) for a in points) for e in range(c, d + 1)))


def identity(ctx: FieldCtx, size: int) -> MatrixFq:
    return MatrixFq(ctx, tuple(tuple(int(i == j) for j in range(size)) for i in range(size)))


def matmul(a: MatrixFq, b: MatrixFq) -> MatrixFq:
    if a.ctx != b.ctx:
        raise CodecError("matrices over different fields")
    if a.shape[1] != b.shape[0]:
        raise CodecError(f"shape mismatch {a.shape} x {b.shape}")
    q = a.ctx.q
    cols = list(zip(*b.rows))
    return MatrixFq(
        a.ctx,
        tuple(tuple(sum(x * y for x, y in zip(r, col)) % q for col in cols) for r in a.rows),
    )


def row_times_matrix(v: Sequence[int], m: MatrixFq) -> tuple[int, ...]:
    if len(v) != m.shape[0]:
        raise CodecError(f"vector of length {len(v)} against {m.shape[0]}-row matrix")
    q = m.ctx.q
    out = [0] * m.shape[1]
    for vi, row in zip(v, m.rows):
        if vi:
            for j, mij in enumerate(row):
                out[j] += vi * mij
    return tuple(x % q for x in out)


def _rref(ctx: FieldCtx, rows: list[list[int]], ncols: int) -> list[int]:
    """In-place reduced row echelon form over the first ``ncols`` columns.

    Returns the pivot columns.  First-nonzero pivoting is exact here.
    """
    q = ctx.q
    pivots = []
    r = 0
    nrows = len(rows)
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if rows[i][col] % q), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        f = ctx.inv(rows[r][col])
        rows[r] = [x * f % q for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][col] % q:
                g = rows[i][col]
                rows[i] = [(x - g * y) % q for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return pivots


def invert(m: MatrixFq) -> MatrixFq:
    """Gauss-Jordan inverse; raises SingularMatrixError if none exists."""
    if not m.is_square:
        raise CodecError(f"cannot invert non-square matrix of shape {m.shape}")
    size = m.shape[0]
    aug = [list(r) + [int(i == j) for j in range(size)] for i, r in enumerate(m.rows)]
    pivots = _rref(m.ctx, aug, size)
    if len(pivots) != size:
        raise SingularMatrixError(f"matrix is singular over F_{m.ctx.q}")
    return MatrixFq(m.ctx, tuple(tuple(r[size:]) for r in aug))


def solve(a: MatrixFq, b: Sequence[int]) -> tuple[int, ...] | None:
    """One solution ``x`` of ``a @ x = b`` (column convention), or None.

    Free variables are set to zero, which makes the choice deterministic.
    """
    nrows, ncols = a.shape
    if len(b) != nrows:
        raise CodecError("right-hand side length mismatch")
    aug = [list(r) + [v % a.ctx.q] for r, v in zip(a.rows, b)]
    pivots = _rref(a.ctx, aug, ncols)
    for row in aug[len(pivots):]:
        if row[ncols]:
            return None
    x = [0] * ncols
    for r, col in enumerate(pivots):
        x[col] = aug[r][ncols]
    return tuple(x)


def nullspace(a: MatrixFq) -> list[tuple[int, ...]]:
    """Basis of ``{x : a @ x = 0}``, one vector per free column in ascending order."""
    q = a.ctx.q
    nrows, ncols = a.shape
    rows = [list(r) for r in a.rows]
    pivots = _rref(a.ctx, rows, ncols)
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [0] * ncols
        v[free] = 1
        for r, col in enumerate(pivots):
            v[col] = -rows[r][free] % q
        basis.append(tuple(v))
    return basis


def rank(a: MatrixFq) -> int:
    rows = [list(r) for r in a.rows]
    return len(_rref(a.ctx, rows, a.shape[1]))


def span_basis(ctx: FieldCtx, vectors: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Reduced echelon basis of the span of ``vectors``."""
    if not vectors:
        return []
    rows = [list(v) for v in vectors]
    piv = _rref(ctx, rows, len(rows[0]))
    return [tuple(r) for r in rows[: len(piv)]]


def interpolate(ctx: FieldCtx, points: Sequence[int], values: Sequence[int]) -> tuple[int, ...]:
    """Unique coefficients of degree < len(points) through ``(points, values)``."""
    if len(points) != len(values):
        raise CodecError("points and values differ in length")
    check_distinct(points, ctx)
    k = len(points)
    return row_times_matrix(values, invert(vandermonde(ctx, 0, k - 1, points)))


def auxiliary_points(ctx: FieldCtx, taken: Sequence[int], count: int) -> tuple[int, ...]:
    """The ``count`` smallest field elements not in ``taken``."""
    used = {t % ctx.q for t in taken}
    free = [v for v in range(ctx.q) if v not in used]
    if len(free) < count:
        raise InvalidPointsError(f"F_{ctx.q} has too few free points")
    return tuple(free[:count])


def _preimages(ctx: FieldCtx, k: int, points: Sequence[int], values: Sequence[int]):
    """All coefficient vectors of length k taking ``values`` at ``points``.

    Parametrised by the free evaluations at auxiliary points, iterated in
    lexicographic order.
    """
    check_distinct(points, ctx)
    if len(points) != len(values):
        raise CodecError("points and values differ in length")
    if len(points) > k:
        raise CodecError(f"{len(points)} constraints exceed degree bound {k}")
    z = auxiliary_points(ctx, points, k - len(points))
    basis = invert(vandermonde(ctx, 0, k - 1, tuple(points) + z))
    fixed = tuple(v % ctx.q for v in values)
    return [
        row_times_matrix(fixed + r, basis)
        for r in itertools.product(range(ctx.q), repeat=len(z))
    ]


def enumerate_coeffs(params, secret: Sequence[int]) -> list[tuple[int, ...]]:
    """The set D_k(s): coefficient vectors whose values at ``params.x`` are ``secret``."""
    if len(secret) != params.L:
        raise CodecError(f"secret has length {len(secret)}, expected {params.L}")
    return _preimages(params.ctx, params.k, params.x, secret)


def enumerate_coeffs_partial(params, I: Sequence[int], secret_I: Sequence[int]) -> list[tuple[int, ...]]:
    """The set E_k(s_I): only the secret positions in ``I`` (1-based) are constrained."""
    idx = list(I)
    if len(set(idx)) != len(idx) or any(not 1 <= i <= params.L for i in idx):
        raise CodecError(f"bad secret index set {tuple(I)} for L={params.L}")
    if len(secret_I) != len(idx):
        raise CodecError("secret_I length does not match I")
    order = sorted(range(len(idx)), key=lambda t: idx[t])
    pts = tuple(params.x[idx[t] - 1] for t in order)
    vals = tuple(secret_I[t] for t in order)
    return _preimages(params.ctx, params.k, pts, vals)
