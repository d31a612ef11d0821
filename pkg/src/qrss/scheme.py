"""The two ramp secret sharing encoders and the evaluation-scheme decoder.

``Params`` describes the strongly secure scheme: the secret symbols are
the values of a degree < k polynomial at the public points ``x`` and the
shares are its values at ``y``.  ``OgawaParams`` describes the older
coefficient scheme, where the secret symbols are the first L
coefficients themselves; it is kept as the insecure baseline for the
auditor.

Share and secret indices are 1-based at this level, following the usual
participant numbering.  States use 0-based positions internally.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

from .codec import (
    CodecError,
    MatrixFq,
    check_distinct,
    enumerate_coeffs,
    eval_poly,
    invert,
    vandermonde,
)
from .gf import FieldCtx, FieldError
from .qsim import IndexMap, PureState, QSimError, apply_index_map, superpose

__all__ = [
    "ParamsError",
    "DecodeIntegrityError",
    "Params",
    "OgawaParams",
    "DecodeResult",
    "decoding_matrices",
    "encode_basis",
    "encode",
    "decode",
    "ogawa_encode_basis",
    "codewords",
    "parse_params",
    "format_params",
    "normalize_index_set",
]


class ParamsError(ValueError):
    pass


class DecodeIntegrityError(RuntimeError):
    """The decoded state does not factor as secret (x) maximally entangled residue."""


def normalize_index_set(idx, upper: int, name: str = "index set") -> tuple[int, ...]:
    """Sorted tuple of distinct 1-based indices in ``1..upper``."""
    out = tuple(sorted(int(i) for i in idx))
    if len(set(out)) != len(out):
        raise ParamsError(f"{name} {out} has repeated entries")
    if any(not 1 <= i <= upper for i in out):
        raise ParamsError(f"{name} {out} not within 1..{upper}")
    return out


def _check_sizes(k: int, L: int, n: int) -> None:
    if not 0 < L < k < n:
        raise ParamsError(f"need 0 < L < k < n, got k={k} L={L} n={n}")


@dataclass(frozen=True)
class Params:
    """Parameters of the evaluation-based (strongly secure) scheme."""

    q: int
    k: int
    L: int
    x: tuple[int, ...]
    y: tuple[int, ...]
    n: int | None = None

    def __post_init__(self):
        try:
            ctx = FieldCtx(self.q)
        except FieldError as exc:
            raise ParamsError(str(exc)) from exc
        object.__setattr__(self, "x", tuple(int(v) for v in self.x))
        object.__setattr__(self, "y", tuple(int(v) for v in self.y))
        n = 2 * self.k - self.L if self.n is None else self.n
        object.__setattr__(self, "n", n)
        _check_sizes(self.k, self.L, n)
        if n != 2 * self.k - self.L:
            raise ParamsError(f"n must equal 2k - L = {2 * self.k - self.L}, got {n}")
        if len(self.x) != self.L:
            raise ParamsError(f"x has {len(self.x)} points, expected L={self.L}")
        if len(self.y) != n:
            raise ParamsError(f"y has {len(self.y)} points, expected n={n}")
        pts = self.x + self.y
        if any(not 0 <= v < ctx.q for v in pts):
            raise ParamsError(f"points must lie in 0..{ctx.q - 1}")
        try:
            check_distinct(pts)
        except CodecError as exc:
            raise ParamsError(f"x and y points must be pairwise distinct: {pts}") from exc

    @cached_property
    def ctx(self) -> FieldCtx:
        return FieldCtx(self.q)

    @property
    def randomness(self) -> int:
        return self.k - self.L


@dataclass(frozen=True)
class OgawaParams:
    """Parameters of the coefficient-based scheme: ``x`` holds the n share points."""

    q: int
    k: int
    L: int
    x: tuple[int, ...]
    n: int | None = None

    def __post_init__(self):
        try:
            ctx = FieldCtx(self.q)
        except FieldError as exc:
            raise ParamsError(str(exc)) from exc
        object.__setattr__(self, "x", tuple(int(v) for v in self.x))
        n = len(self.x) if self.n is None else self.n
        object.__setattr__(self, "n", n)
        _check_sizes(self.k, self.L, n)
        if len(self.x) != n:
            raise ParamsError(f"x has {len(self.x)} points, expected n={n}")
        if any(not 0 <= v < ctx.q for v in self.x):
            raise ParamsError(f"points must lie in 0..{ctx.q - 1}")
        try:
            check_distinct(self.x)
        except CodecError as exc:
            raise ParamsError(f"x points must be pairwise distinct: {self.x}") from exc

    @cached_property
    def ctx(self) -> FieldCtx:
        return FieldCtx(self.q)

    @property
    def randomness(self) -> int:
        return self.k - self.L


def _check_secret(p, s: Sequence[int]) -> tuple[int, ...]:
    s = tuple(int(v) for v in s)
    if len(s) != p.L:
        raise ParamsError(f"secret has {len(s)} symbols, expected L={p.L}")
    if any(not 0 <= v < p.q for v in s):
        raise ParamsError(f"secret symbols must lie in 0..{p.q - 1}")
    return s


@lru_cache(maxsize=4096)
def _strong_codewords(p: Params, s: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    ctx = p.ctx
    return tuple(tuple(eval_poly(ctx, c, u) for u in p.y) for c in enumerate_coeffs(p, s))


@lru_cache(maxsize=4096)
def _ogawa_codewords(p: OgawaParams, s: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    ctx = p.ctx
    return tuple(
        tuple(eval_poly(ctx, s + r, u) for u in p.x)
        for r in itertools.product(range(p.q), repeat=p.k - p.L)
    )


def codewords(p: Params | OgawaParams, s: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Share tuples in the equal-weight superposition encoding basis secret ``s``."""
    s = _check_secret(p, s)
    if isinstance(p, Params):
        return _strong_codewords(p, s)
    if isinstance(p, OgawaParams):
        return _ogawa_codewords(p, s)
    raise TypeError(f"unsupported parameter type {type(p).__name__}")


def _uniform(q: int, words) -> PureState:
    a = 1 / math.sqrt(len(words))
    return PureState(q, len(words[0]), {w: a for w in words})


def encode_basis(p: Params, s: Sequence[int]) -> PureState:
    """Equal superposition of ``|P_c(y)>`` over all c whose values at ``x`` are ``s``."""
    if not isinstance(p, Params):
        raise TypeError("encode_basis expects Params; use ogawa_encode_basis for the baseline")
    return _uniform(p.q, codewords(p, s))


def ogawa_encode_basis(p: OgawaParams, s: Sequence[int]) -> PureState:
    """Equal superposition over coefficient vectors starting with ``s``, evaluated at ``x``."""
    if not isinstance(p, OgawaParams):
        raise TypeError("ogawa_encode_basis expects OgawaParams")
    return _uniform(p.q, codewords(p, s))


def encode(p: Params | OgawaParams, secret: PureState) -> PureState:
    """Linear extension of the basis encoder to an arbitrary L-qudit secret."""
    if secret.q != p.q or secret.m != p.L:
        raise ParamsError(f"secret lives on {secret.m} qudits of dimension {secret.q}, "
                          f"expected {p.L} of dimension {p.q}")
    out = {}
    for s, a in secret.amps.items():
        words = codewords(p, s)
        w = a / math.sqrt(len(words))
        for t in words:
            out[t] = w
    return PureState(p.q, p.n, out)


@dataclass(frozen=True)
class DecodeResult:
    secret: PureState
    stage1: PureState
    state: PureState
    fidelity: float
    secret_positions: tuple[int, ...]
    residual_pairs: tuple[tuple[int, int], ...]

    @property
    def residual_ok(self) -> bool:
        return self.fidelity >= 1 - 1e-10


def decoding_matrices(p: Params, J: Sequence[int]) -> tuple[MatrixFq, MatrixFq]:
    """The two index-map matrices for share set ``J`` (1-based)."""
    J = normalize_index_set(J, p.n, "J")
    if len(J) != p.k:
        raise ParamsError(f"decoding needs exactly k={p.k} shares, got {len(J)}")
    ctx = p.ctx
    jbar = [j for j in range(1, p.n + 1) if j not in J]
    first = invert(vandermonde(ctx, 0, p.k - 1, [p.y[j - 1] for j in J]))
    mx = vandermonde(ctx, 0, p.k - 1, p.x)
    my = vandermonde(ctx, 0, p.k - 1, [p.y[j - 1] for j in jbar])
    second = MatrixFq(ctx, tuple(a + b for a, b in zip(mx.rows, my.rows)))
    return first, second


def decode(p: Params, shares: PureState, J: Sequence[int], min_fidelity: float = 1 - 1e-10) -> DecodeResult:
    """Recover the secret from the k shares in ``J``.

    Both decoding maps act on the J qudits in ascending order.  Afterwards
    the first L of them hold the secret and the remaining k - L are paired
    with the shares outside J in a maximally entangled state; the pairing
    is checked numerically and DecodeIntegrityError is raised if the state
    does not factor.
    """
    if shares.q != p.q or shares.m != p.n:
        raise ParamsError(f"share state has {shares.m} qudits of dimension {shares.q}, "
                          f"expected {p.n} of dimension {p.q}")
    J = normalize_index_set(J, p.n, "J")
    first, second = decoding_matrices(p, J)
    pos = tuple(j - 1 for j in J)
    try:
        stage1 = apply_index_map(shares, IndexMap(pos, first))
        final = apply_index_map(stage1, IndexMap(pos, second))
    except QSimError as exc:
        raise DecodeIntegrityError(str(exc)) from exc

    secret_pos = pos[: p.L]
    jbar = tuple(j - 1 for j in range(1, p.n + 1) if j not in J)
    pairs = tuple(zip(pos[p.L:], jbar))
    scale = 1 / math.sqrt(p.q ** p.randomness)
    proj: dict[tuple[int, ...], complex] = {}
    for t, a in final.amps.items():
        if all(t[u] == t[v] for u, v in pairs):
            s = tuple(t[i] for i in secret_pos)
            proj[s] = proj.get(s, 0j) + a * scale
    fid = math.fsum(abs(a) ** 2 for a in proj.values())
    if fid < min_fidelity:
        raise DecodeIntegrityError(
            f"decoded state does not factor into secret and entangled residue (overlap {fid:.3e})"
        )
    secret = superpose(p.q, proj.items())
    return DecodeResult(secret, stage1, final, fid, secret_pos, pairs)


def _ints(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(v) for v in text.split(","))


STRONG_HEADER = "QRSS-PARAMS v1"
OGAWA_HEADER = "QRSS-OGAWA-PARAMS v1"


def parse_params(text: str) -> Params | OgawaParams:
    """Read either parameter file flavour; the header selects the scheme."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParamsError("empty params file")
    header = lines[0]
    if header not in (STRONG_HEADER, OGAWA_HEADER):
        raise ParamsError(f"unknown params header {header!r}")
    fields: dict[str, str] = {}
    for ln in lines[1:]:
        for tok in ln.split():
            if "=" not in tok:
                raise ParamsError(f"malformed token {tok!r}")
            key, val = tok.split("=", 1)
            if key in fields:
                raise ParamsError(f"duplicate field {key!r}")
            fields[key] = val
    try:
        q, k, L, n = (int(fields[f]) for f in ("q", "k", "L", "n"))
        x = _ints(fields["x"])
        if header == STRONG_HEADER:
            return Params(q=q, k=k, L=L, x=x, y=_ints(fields["y"]), n=n)
        if "y" in fields:
            raise ParamsError("ogawa params take a single x= list")
        return OgawaParams(q=q, k=k, L=L, x=x, n=n)
    except KeyError as exc:
        raise ParamsError(f"missing field {exc.args[0]!r}") from exc
    except ValueError as exc:
        if isinstance(exc, ParamsError):
            raise
        raise ParamsError(f"malformed params: {exc}") from exc


def format_params(p: Params | OgawaParams) -> str:
    join = lambda v: ",".join(str(a) for a in v)  # noqa: E731
    if isinstance(p, Params):
        return (f"{STRONG_HEADER}\nq={p.q} k={p.k} L={p.L} n={p.n}\n"
                f"x={join(p.x)}\ny={join(p.y)}\n")
    return f"{OGAWA_HEADER}\nq={p.q} k={p.k} L={p.L} n={p.n}\nx={join(p.x)}\n"
