"""Sparse qudit pure states, basis-permutation unitaries and density operators.

Positions inside a state are 0-based.  Basis tuples are ordered
lexicographically with position 0 most significant, which is also the
row/column order of every dense density matrix produced here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .codec import MatrixFq, SingularMatrixError, invert, row_times_matrix

__all__ = [
    "QSimError",
    "NotUnitaryError",
    "TooLargeError",
    "PRUNE",
    "DIM_CAP",
    "PureState",
    "DensityOperator",
    "IndexMap",
    "basis_state",
    "superpose",
    "tensor",
    "apply_index_map",
    "density",
    "partial_trace",
    "reduced_density",
    "maximally_mixed",
    "trace_distance",
    "fidelity_pure",
    "is_fully_mixed",
    "dumps_state",
    "loads_state",
]

PRUNE = 1e-14
DIM_CAP = 2**16


class QSimError(ValueError):
    pass


class NotUnitaryError(QSimError):
    pass


class TooLargeError(QSimError):
    pass


def _index(t: Sequence[int], q: int) -> int:
    i = 0
    for d in t:
        i = i * q + d
    return i


def _check_dim(q: int, m: int, cap: int) -> int:
    dim = q**m
    if dim > cap:
        raise TooLargeError(f"dimension {q}^{m} = {dim} exceeds cap {cap}")
    return dim


@dataclass(frozen=True)
class PureState:
    """Normalized superposition of basis tuples of ``m`` qudits."""

    q: int
    m: int
    amps: Mapping[tuple[int, ...], complex] = field(repr=False)

    def __post_init__(self):
        clean = {}
        for t, a in self.amps.items():
            t = tuple(int(d) for d in t)
            if len(t) != self.m:
                raise QSimError(f"tuple {t} has length {len(t)}, expected {self.m}")
            if any(not 0 <= d < self.q for d in t):
                raise QSimError(f"digit out of range in {t} for q={self.q}")
            if abs(a) >= PRUNE:
                clean[t] = complex(a)
        object.__setattr__(self, "amps", clean)
        nrm = self.norm_squared()
        if abs(nrm - 1.0) > 1e-12:
            raise QSimError(f"state is not normalized (norm^2 = {nrm!r})")

    def norm_squared(self) -> float:
        return math.fsum(abs(a) ** 2 for a in self.amps.values())

    def items(self):
        """Terms in lexicographic tuple order."""
        return sorted(self.amps.items())

    def support(self) -> set[tuple[int, ...]]:
        return set(self.amps)

    def __len__(self):
        return len(self.amps)

    def amplitude(self, t: Sequence[int]) -> complex:
        return self.amps.get(tuple(t), 0j)

    def inner(self, other: PureState) -> complex:
        """<self|other>."""
        if (self.q, self.m) != (other.q, other.m):
            raise QSimError("dimension mismatch")
        common = self.amps.keys() & other.amps.keys()
        return complex(sum(self.amps[t].conjugate() * other.amps[t] for t in common))

    def to_vector(self, cap: int = DIM_CAP) -> np.ndarray:
        vec = np.zeros(_check_dim(self.q, self.m, cap), dtype=complex)
        for t, a in self.amps.items():
            vec[_index(t, self.q)] = a
        return vec

    def __str__(self):
        return dumps_state(self)


def basis_state(q: int, digits: Sequence[int]) -> PureState:
    t = tuple(digits)
    if any(not 0 <= d < q for d in t):
        raise QSimError(f"digit out of range in {t} for q={q}")
    return PureState(q, len(t), {t: 1.0})


def superpose(q: int, terms: Iterable[tuple[Sequence[int], complex]]) -> PureState:
    """Sum weighted basis tuples (duplicates add up) and normalize."""
    acc: dict[tuple[int, ...], complex] = {}
    m = None
    for t, a in terms:
        t = tuple(t)
        if m is None:
            m = len(t)
        elif len(t) != m:
            raise QSimError("tuples of different lengths in superposition")
        acc[t] = acc.get(t, 0j) + complex(a)
    if m is None:
        raise QSimError("empty superposition")
    acc = {t: a for t, a in acc.items() if abs(a) >= PRUNE}
    nrm = math.sqrt(math.fsum(abs(a) ** 2 for a in acc.values()))
    if nrm < PRUNE:
        raise QSimError("superposition sums to the zero vector")
    return PureState(q, m, {t: a / nrm for t, a in acc.items()})


def tensor(a: PureState, b: PureState) -> PureState:
    if a.q != b.q:
        raise QSimError("local dimensions differ")
    return PureState(a.q, a.m + b.m,
                     {ta + tb: x * y for ta, x in a.amps.items() for tb, y in b.amps.items()})


@dataclass(frozen=True)
class IndexMap:
    """Classical affine map ``t -> t . matrix + offset`` on the digits at ``positions``."""

    positions: tuple[int, ...]
    matrix: MatrixFq
    offset: tuple[int, ...] | None = None

    def __post_init__(self):
        pos = tuple(self.positions)
        object.__setattr__(self, "positions", pos)
        if len(set(pos)) != len(pos):
            raise QSimError(f"repeated positions {pos}")
        if self.matrix.shape != (len(pos), len(pos)):
            raise QSimError(f"matrix shape {self.matrix.shape} does not fit {len(pos)} positions")
        try:
            invert(self.matrix)
        except SingularMatrixError as exc:
            raise NotUnitaryError("matrix is not invertible, the induced map is not unitary") from exc
        if self.offset is not None and len(self.offset) != len(pos):
            raise QSimError("offset length mismatch")

    def image(self, sub: Sequence[int]) -> tuple[int, ...]:
        out = row_times_matrix(sub, self.matrix)
        if self.offset is not None:
            q = self.matrix.ctx.q
            out = tuple((a + b) % q for a, b in zip(out, self.offset))
        return out

    def inverse(self) -> IndexMap:
        minv = invert(self.matrix)
        off = None
        if self.offset is not None:
            q = self.matrix.ctx.q
            off = tuple(-v % q for v in row_times_matrix(self.offset, minv))
        return IndexMap(self.positions, minv, off)


def apply_index_map(state: PureState, imap: IndexMap) -> PureState:
    if imap.matrix.ctx.q != state.q:
        raise QSimError("map field does not match local dimension")
    if any(not 0 <= p < state.m for p in imap.positions):
        raise QSimError(f"positions {imap.positions} outside {state.m} qudits")
    out = {}
    pos = imap.positions
    for t, a in state.amps.items():
        new = list(t)
        for p, v in zip(pos, imap.image([t[p] for p in pos])):
            new[p] = v
        out[tuple(new)] = a
    return PureState(state.q, state.m, out)


@dataclass(frozen=True)
class DensityOperator:
    q: int
    m: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        dim = self.q**self.m
        if self.matrix.shape != (dim, dim):
            raise QSimError(f"matrix shape {self.matrix.shape} is not {dim}x{dim}")

    @property
    def dim(self) -> int:
        return self.q**self.m

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.matrix)).copy()

    def is_valid(self, tol: float = 1e-12, psd_tol: float = 1e-10) -> bool:
        h = self.matrix
        if np.max(np.abs(h - h.conj().T), initial=0.0) > tol:
            return False
        if abs(self.trace() - 1) > tol:
            return False
        return bool(np.min(np.linalg.eigvalsh(h)) >= -psd_tol)


def density(state: PureState, cap: int = DIM_CAP) -> DensityOperator:
    v = state.to_vector(cap)
    return DensityOperator(state.q, state.m, np.outer(v, v.conj()))


def partial_trace(rho: DensityOperator, keep: Sequence[int]) -> DensityOperator:
    """Trace out every position not in ``keep``; kept positions stay in ascending order."""
    kept = sorted(set(keep))
    if not kept:
        raise QSimError("empty keep set")
    if any(not 0 <= p < rho.m for p in kept):
        raise QSimError(f"keep positions {tuple(keep)} outside {rho.m} qudits")
    q, m = rho.q, rho.m
    gone = [p for p in range(m) if p not in kept]
    t = rho.matrix.reshape((q,) * (2 * m))
    perm = kept + gone + [m + p for p in kept] + [m + p for p in gone]
    dk, dg = q ** len(kept), q ** len(gone)
    t = t.transpose(perm).reshape(dk, dg, dk, dg)
    return DensityOperator(q, len(kept), np.einsum("ajbj->ab", t))


def reduced_density(state: PureState, keep: Sequence[int], cap: int = DIM_CAP) -> DensityOperator:
    """Partial trace of ``|state><state|`` computed from the sparse amplitudes.

    Never materializes the full operator, so it works for states whose
    total dimension is far above ``cap`` as long as the kept part is not.
    """
    kept = sorted(set(keep))
    if not kept:
        raise QSimError("empty keep set")
    if any(not 0 <= p < state.m for p in kept):
        raise QSimError(f"keep positions {tuple(keep)} outside {state.m} qudits")
    q = state.q
    dk = _check_dim(q, len(kept), cap)
    gone = [p for p in range(state.m) if p not in set(kept)]
    env_index: dict[tuple[int, ...], int] = {}
    rows, cols, vals = [], [], []
    for t, a in state.amps.items():
        env = tuple(t[p] for p in gone)
        col = env_index.setdefault(env, len(env_index))
        rows.append(_index([t[p] for p in kept], q))
        cols.append(col)
        vals.append(a)
    psi = np.zeros((dk, len(env_index)), dtype=complex)
    np.add.at(psi, (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64)), np.array(vals))
    return DensityOperator(q, len(kept), psi @ psi.conj().T)


def maximally_mixed(q: int, m: int) -> DensityOperator:
    dim = q**m
    return DensityOperator(q, m, np.eye(dim, dtype=complex) / dim)


def trace_distance(a: DensityOperator, b: DensityOperator) -> float:
    """Half the trace norm of ``a - b``."""
    if a.matrix.shape != b.matrix.shape:
        raise QSimError(f"dimension mismatch {a.matrix.shape} vs {b.matrix.shape}")
    diff = a.matrix - b.matrix
    diff = (diff + diff.conj().T) / 2
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))))


def fidelity_pure(a: PureState, b: PureState) -> float:
    return abs(a.inner(b)) ** 2


def is_fully_mixed(rho: DensityOperator, tol: float) -> bool:
    return trace_distance(rho, maximally_mixed(rho.q, rho.m)) <= tol


HEADER = "QRSS-STATE v1"


def _fmt(x: float) -> str:
    x = x + 0.0  # fold -0.0
    return f"{x:.17g}"


def dumps_state(state: PureState) -> str:
    lines = [f"{HEADER} q={state.q} m={state.m}"]
    for t, a in state.items():
        lines.append(" ".join(str(d) for d in t) + f" {_fmt(a.real)} {_fmt(a.imag)}")
    return "\n".join(lines) + "\n"


def loads_state(text: str, normalize: bool = False) -> PureState:
    """Parse the QRSS-STATE text format.

    With ``normalize`` the amplitudes are rescaled to unit norm, which is
    convenient for hand-written secret files.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise QSimError("empty state file")
    head = lines[0].split()
    if " ".join(head[:2]) != HEADER or len(head) != 4:
        raise QSimError(f"bad state header: {lines[0]!r}")
    try:
        kv = dict(h.split("=", 1) for h in head[2:])
        q, m = int(kv["q"]), int(kv["m"])
    except (KeyError, ValueError) as exc:
        raise QSimError(f"bad state header: {lines[0]!r}") from exc
    amps = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != m + 2:
            raise QSimError(f"bad state line: {ln!r}")
        try:
            t = tuple(int(p) for p in parts[:m])
            amps[t] = amps.get(t, 0j) + complex(float(parts[m]), float(parts[m + 1]))
        except ValueError as exc:
            raise QSimError(f"bad state line: {ln!r}") from exc
    if normalize:
        return superpose(q, amps.items())
    return PureState(q, m, amps)
