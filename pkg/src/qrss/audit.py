"""Strong-security auditing and the linear-leak attack on the coefficient scheme.

The auditor checks, for every critical secret set I and every adversary
share set J with ``|J| <= k - |I|``, that the shares in J are in the
fully mixed state whatever the secret on I is, while the rest of the
secret is fully mixed (realized through a reference system).  Mixed test
secrets on I are purified against auxiliary qudits that are traced out
with everything else.

Layout of every audited state: reference qudits for the secret positions
outside I (ascending), then auxiliary purification qudits, then the n
shares.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .codec import (
    MatrixFq,
    auxiliary_points,
    enumerate_coeffs_partial,
    eval_poly,
    invert,
    matmul,
    nullspace,
    rank,
    solve,
    span_basis,
    vandermonde,
)
from .qsim import (
    DensityOperator,
    IndexMap,
    PureState,
    apply_index_map,
    maximally_mixed,
    reduced_density,
    trace_distance,
)
from .scheme import OgawaParams, Params, ParamsError, codewords, normalize_index_set

__all__ = [
    "AuditError",
    "DEFAULT_TOL",
    "SecretSample",
    "AuditCase",
    "CaseRecord",
    "AuditReport",
    "LinearLeak",
    "AttackResult",
    "purify_and_encode",
    "sample_secrets",
    "audit_case",
    "audit_scheme",
    "closed_form_reduction",
    "reduction_for_case",
    "generator_matrix",
    "find_linear_leak",
    "leak_space",
    "attack_matrix",
    "run_attack",
]

DEFAULT_TOL = 1e-9


class AuditError(ValueError):
    pass


def _fmt_set(s) -> str:
    return "{" + ",".join(str(v) for v in s) + "}"


@dataclass(frozen=True)
class SecretSample:
    """A test secret on ``i`` qudits, optionally purified by ``aux`` extra qudits.

    ``state`` lives on ``i + aux`` qudits; the first ``i`` are the secret.
    """

    label: str
    state: PureState
    aux: int = 0

    def probabilities(self, i: int) -> dict[tuple[int, ...], float]:
        """Diagonal of the secret's density operator in the computational basis."""
        out: dict[tuple[int, ...], float] = {}
        for t, a in self.state.amps.items():
            out[t[:i]] = out.get(t[:i], 0.0) + abs(a) ** 2
        return out


@dataclass(frozen=True)
class AuditCase:
    I: tuple[int, ...]
    J: tuple[int, ...]
    secret: SecretSample


@dataclass(frozen=True)
class CaseRecord:
    I: tuple[int, ...]
    J: tuple[int, ...]
    secret: str
    distance: float
    passed: bool

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (f"I={_fmt_set(self.I)} J={_fmt_set(self.J)} secret={self.secret} "
                f"dist={self.distance:.3e} {verdict}")


@dataclass
class AuditReport:
    records: list[CaseRecord] = field(default_factory=list)
    tol: float = DEFAULT_TOL

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> list[CaseRecord]:
        return [r for r in self.records if not r.passed]

    def max_distance(self) -> float:
        return max((r.distance for r in self.records), default=0.0)

    def format(self) -> str:
        lines = [r.line() for r in self.records]
        lines.append(f"VERDICT {'PASS' if self.passed else 'FAIL'} tol={self.tol:g}")
        return "\n".join(lines) + "\n"


def _check_I(p, I) -> tuple[int, ...]:
    I = normalize_index_set(I, p.L, "I")
    if not I:
        raise AuditError("I must be non-empty")
    return I


def purify_and_encode(p: Params | OgawaParams, I: Sequence[int], secret_I: PureState,
                      aux: int = 0) -> PureState:
    """Encode ``secret_I`` on positions I with the other secret qudits fully mixed.

    The mixed part is purified by reference qudits, one per position outside
    I, each maximally entangled with its secret qudit.  Returns a state on
    ``(L - |I|) + aux + n`` qudits.
    """
    I = _check_I(p, I)
    i = len(I)
    if secret_I.q != p.q or secret_I.m != i + aux:
        raise AuditError(f"secret has {secret_I.m} qudits, expected |I| + aux = {i + aux}")
    others = [j for j in range(1, p.L + 1) if j not in I]
    q = p.q
    scale = 1 / math.sqrt(q ** len(others))
    out: dict[tuple[int, ...], complex] = {}
    for t, a in secret_I.amps.items():
        sec, env = t[:i], t[i:]
        for d in itertools.product(range(q), repeat=len(others)):
            g = [0] * p.L
            for pos, v in zip(I, sec):
                g[pos - 1] = v
            for pos, v in zip(others, d):
                g[pos - 1] = v
            words = codewords(p, g)
            w = a * scale / math.sqrt(len(words))
            for word in words:
                key = d + env + word
                out[key] = out.get(key, 0j) + w
    return PureState(q, len(others) + aux + p.n, out)


def _random_pure(rng: np.random.Generator, q: int, m: int) -> PureState:
    dim = q**m
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    tuples = itertools.product(range(q), repeat=m)
    return PureState(q, m, {t: complex(a) for t, a in zip(tuples, v)})


def sample_secrets(q: int, i: int, count: int = 20, seed: int | Sequence[int] = 0) -> list[SecretSample]:
    """Deterministic mix of basis, random pure and purified random mixed secrets."""
    rng = np.random.default_rng(seed)
    n_basis = min(count // 3, q**i)
    n_mixed = (count - n_basis) // 2
    n_pure = count - n_basis - n_mixed
    out = []
    all_basis = list(itertools.product(range(q), repeat=i))
    picks = [0] + sorted(rng.choice(np.arange(1, len(all_basis)), size=max(n_basis - 1, 0),
                                    replace=False).tolist())
    for idx in picks[:n_basis]:
        t = all_basis[idx]
        out.append(SecretSample("basis:" + ",".join(map(str, t)), PureState(q, i, {t: 1.0})))
    for j in range(n_pure):
        out.append(SecretSample(f"pure#{j}", _random_pure(rng, q, i)))
    for j in range(n_mixed):
        out.append(SecretSample(f"mixed#{j}", _random_pure(rng, q, 2 * i), aux=i))
    return out


def _share_reduction(p, state: PureState, I, aux: int, J) -> DensityOperator:
    offset = (p.L - len(I)) + aux
    return reduced_density(state, [offset + j - 1 for j in J])


def _distance_to_mixed(rho: DensityOperator) -> float:
    return trace_distance(rho, maximally_mixed(rho.q, rho.m))


def _check_case(p, I, J) -> tuple[tuple[int, ...], tuple[int, ...]]:
    I = _check_I(p, I)
    J = normalize_index_set(J, p.n, "J")
    if len(J) > p.k - len(I):
        raise AuditError(f"|J| = {len(J)} exceeds k - |I| = {p.k - len(I)}; outside the hypothesis")
    return I, J


def audit_case(p: Params | OgawaParams, case: AuditCase, tol: float = DEFAULT_TOL) -> CaseRecord:
    """Distance of the J-reduction from the fully mixed state for one secret."""
    I, J = _check_case(p, case.I, case.J)
    if not J:
        return CaseRecord(I, J, case.secret.label, 0.0, True)
    state = purify_and_encode(p, I, case.secret.state, case.secret.aux)
    dist = _distance_to_mixed(_share_reduction(p, state, I, case.secret.aux, J))
    return CaseRecord(I, J, case.secret.label, dist, dist <= tol)


def reduction_for_case(p, case: AuditCase) -> DensityOperator:
    I, J = _check_case(p, case.I, case.J)
    if not J:
        raise AuditError("empty J has no reduced operator")
    state = purify_and_encode(p, I, case.secret.state, case.secret.aux)
    return _share_reduction(p, state, I, case.secret.aux, J)


def _subsets(items, max_size: int, min_size: int = 0):
    for size in range(min_size, max_size + 1):
        yield from itertools.combinations(items, size)


SecretSource = Callable[[int, int, int, tuple[int, ...]], list[SecretSample]]


def _default_secrets(q: int, i: int, count: int, seed_key: tuple[int, ...]) -> list[SecretSample]:
    return sample_secrets(q, i, count, seed_key)


def audit_scheme(p: Params | OgawaParams, secrets: SecretSource | None = None,
                 tol: float = DEFAULT_TOL, count: int = 20, seed: int = 0,
                 I_sets: Sequence[Sequence[int]] | None = None) -> AuditReport:
    """Sweep every non-empty I and every J with ``|J| <= k - |I|``.

    Order is I by size then lexicographically, J likewise, then secrets in
    generation order.  Each I gets its own secret batch derived from
    ``(seed, *I)``; the same batch is reused for every J.
    """
    source = secrets or _default_secrets
    report = AuditReport(tol=tol)
    if I_sets is None:
        I_list = list(_subsets(range(1, p.L + 1), p.L, 1))
    else:
        I_list = sorted({_check_I(p, I) for I in I_sets}, key=lambda s: (len(s), s))
    for I in I_list:
        batch = source(p.q, len(I), count, (seed, *I))
        states = [purify_and_encode(p, I, s.state, s.aux) for s in batch]
        for J in _subsets(range(1, p.n + 1), p.k - len(I)):
            for sample, state in zip(batch, states):
                if not J:
                    dist = 0.0
                else:
                    dist = _distance_to_mixed(_share_reduction(p, state, I, sample.aux, J))
                report.records.append(CaseRecord(I, J, sample.label, dist, dist <= tol))
    return report


def closed_form_reduction(p: Params, I: Sequence[int], J: Sequence[int],
                          probabilities: dict[tuple[int, ...], float]) -> DensityOperator:
    """Share reduction built directly from the sets E_k(s_I).

    ``(1/q^(k-i)) * sum_s P(s) * sum_{c in E_k(s)} |P_c(y_J)><P_c(y_J)|``,
    where ``P(s)`` is the diagonal of the secret on I in the computational
    basis.  Valid for the evaluation scheme only.
    """
    if not isinstance(p, Params):
        raise TypeError("closed form applies to the evaluation scheme")
    I, J = _check_case(p, I, J)
    if not J:
        raise AuditError("empty J")
    q = p.q
    dim = q ** len(J)
    rho = np.zeros((dim, dim), dtype=complex)
    ys = [p.y[j - 1] for j in J]
    norm = 1 / q ** (p.k - len(I))
    for s, prob in probabilities.items():
        if prob == 0:
            continue
        for c in enumerate_coeffs_partial(p, I, s):
            idx = 0
            for u in ys:
                idx = idx * q + eval_poly(p.ctx, c, u)
            rho[idx, idx] += prob * norm
    return DensityOperator(q, len(J), rho)


@dataclass(frozen=True)
class LinearLeak:
    """Share weights whose combination equals a secret functional for every randomness."""

    J: tuple[int, ...]
    coeffs: tuple[int, ...]
    revealed: tuple[int, ...]

    @property
    def coordinate(self) -> int | None:
        """1-based secret index if the functional is a unit vector."""
        nz = [i for i, v in enumerate(self.revealed) if v]
        if len(nz) == 1 and self.revealed[nz[0]] == 1:
            return nz[0] + 1
        return None


def generator_matrix(p: Params | OgawaParams) -> MatrixFq:
    """k x n matrix G with ``shares = (s, r) . G``.

    For the coefficient scheme ``(s, r)`` is the coefficient vector itself.
    For the evaluation scheme ``r`` holds the polynomial's values at the
    auxiliary points used by the D_k enumeration.
    """
    ctx = p.ctx
    if isinstance(p, OgawaParams):
        return vandermonde(ctx, 0, p.k - 1, p.x)
    if isinstance(p, Params):
        z = auxiliary_points(ctx, p.x, p.k - p.L)
        to_coeffs = invert(vandermonde(ctx, 0, p.k - 1, p.x + z))
        return matmul(to_coeffs, vandermonde(ctx, 0, p.k - 1, p.y))
    raise TypeError(f"unsupported parameter type {type(p).__name__}")


def _restrict(g: MatrixFq, J) -> MatrixFq:
    return MatrixFq(g.ctx, tuple(tuple(row[j - 1] for j in J) for row in g.rows))


def _leak_J(p, J) -> tuple[int, ...]:
    J = normalize_index_set(J, p.n, "J")
    if not J or len(J) > p.k - 1:
        raise AuditError(f"leak search needs 1 <= |J| <= k - 1 = {p.k - 1}, got {len(J)}")
    return J


def find_linear_leak(p: Params | OgawaParams, J: Sequence[int]) -> LinearLeak | None:
    """Weights on the shares in J that reveal one secret coordinate exactly.

    Solves ``G_J . lam = e_i`` (zero on every randomness row) for i = 1..L
    and returns the first solvable coordinate, or None.
    """
    J = _leak_J(p, J)
    a = _restrict(generator_matrix(p), J)
    for i in range(p.L):
        target = [0] * p.k
        target[i] = 1
        lam = solve(a, target)
        if lam is not None:
            return LinearLeak(J, lam, tuple(target[: p.L]))
    return None


def leak_space(p: Params | OgawaParams, J: Sequence[int]) -> list[tuple[int, ...]]:
    """Basis of all secret functionals computable from the shares in J.

    Includes functionals that mix several coordinates; those are partial
    information but not exact recovery of any single secret symbol.
    """
    J = _leak_J(p, J)
    a = _restrict(generator_matrix(p), J)
    ctx = a.ctx
    rand_rows = MatrixFq(ctx, a.rows[p.L:])
    funcs = [tuple(sum(r[j] * lam[j] for j in range(len(J))) % ctx.q for r in a.rows[: p.L])
             for lam in nullspace(rand_rows)]
    return span_basis(ctx, funcs)


def attack_matrix(p: Params | OgawaParams, leak: LinearLeak) -> MatrixFq:
    """Invertible |J| x |J| matrix whose first column is the leak weights.

    Each further column is the weight vector that keeps the matrix
    invertible and whose induced functional on ``(s, r)`` has the fewest
    nonzero entries, ties broken by the smallest functional after scaling
    its leading entry to 1.
    """
    g = _restrict(generator_matrix(p), leak.J)
    ctx, q, width = g.ctx, p.q, len(leak.J)
    cols = [tuple(leak.coeffs)]

    def functional(mu):
        return tuple(sum(r[j] * mu[j] for j in range(width)) % q for r in g.rows)

    while len(cols) < width:
        best = None
        for mu in itertools.product(range(q), repeat=width):
            if not any(mu):
                continue
            f = functional(mu)
            lead = next(v for v in f if v)
            if lead != 1:
                continue
            if rank(MatrixFq(ctx, tuple(zip(*(cols + [mu]))))) != len(cols) + 1:
                continue
            key = (sum(1 for v in f if v), f, mu)
            if best is None or key < best[0]:
                best = (key, mu)
        cols.append(best[1])
    return MatrixFq(ctx, tuple(zip(*cols)))


@dataclass(frozen=True)
class AttackResult:
    leak: LinearLeak
    matrix: MatrixFq
    recovered: int
    probability: float
    distribution: tuple[float, ...]
    expected: int | None
    state: PureState = field(repr=False)


def run_attack(p: Params | OgawaParams, leak: LinearLeak, secret: Sequence[int],
               mixed: Sequence[int] = ()) -> AttackResult:
    """Apply the leak's basis permutation to the J shares and read the first J qudit.

    ``mixed`` lists 1-based secret positions replaced by the fully mixed
    state (purified by reference qudits); ``secret`` values at those
    positions are ignored.
    """
    mixed = normalize_index_set(mixed, p.L, "mixed")
    if len(mixed) == p.L:
        raise AuditError("at least one secret position must be a basis value")
    secret = tuple(int(v) for v in secret)
    if len(secret) != p.L:
        raise ParamsError(f"secret has {len(secret)} symbols, expected L={p.L}")
    J = _leak_J(p, leak.J)
    g = _restrict(generator_matrix(p), J)
    expect = [0] * p.k
    expect[: p.L] = leak.revealed
    got = [sum(r[j] * leak.coeffs[j] for j in range(len(J))) % p.q for r in g.rows]
    if got != expect:
        raise AuditError("leak weights are inconsistent with these parameters")

    keep = tuple(i for i in range(1, p.L + 1) if i not in mixed)
    sub = tuple(secret[i - 1] for i in keep)
    state = purify_and_encode(p, keep, PureState(p.q, len(keep), {sub: 1.0}))
    offset = len(mixed)
    m = attack_matrix(p, leak)
    pos = tuple(offset + j - 1 for j in J)
    state = apply_index_map(state, IndexMap(pos, m))
    diag = reduced_density(state, [pos[0]]).diagonal()
    recovered = int(np.argmax(diag))
    expected = None
    if not any(leak.revealed[i - 1] for i in mixed):
        expected = sum(a * b for a, b in zip(leak.revealed, secret)) % p.q
    return AttackResult(leak, m, recovered, float(diag[recovered]), tuple(float(v) for v in diag),
                        expected, state)
