"""Embedded golden checks and small property sweeps, run by ``qrss selftest``."""

from __future__ import annotations

import itertools
import math

import numpy as np

from . import golden as G
from .audit import audit_scheme, find_linear_leak, purify_and_encode, run_attack, sample_secrets
from .codec import MatrixFq, enumerate_coeffs, invert, row_times_matrix, vandermonde
from .qsim import basis_state, fidelity_pure, is_fully_mixed, reduced_density
from .scheme import Params, ParamsError, decode, decoding_matrices, encode, encode_basis


def _golden_encode():
    p = G.strong_params()
    psi = encode_basis(p, G.SECRET)
    assert psi.support() == set(G.ENCODED)
    assert all(abs(a - 1 / math.sqrt(7)) <= 1e-12 for a in psi.amps.values())


def _golden_dset():
    assert set(enumerate_coeffs(G.strong_params(), G.SECRET)) == set(G.D_SET)


def _golden_matrices():
    p = G.strong_params()
    ctx = p.ctx
    m1 = vandermonde(ctx, 0, 2, (6, 2, 4))
    assert m1.tolist() == G.M_FIRST
    assert invert(m1).tolist() == G.M_FIRST_INV
    first, second = decoding_matrices(p, (1, 2, 3))
    assert first.tolist() == G.M_FIRST_INV
    assert second.tolist() == G.M_SECOND
    assert row_times_matrix((4, 3, 0), invert(m1)) == (6, 2, 0)
    assert row_times_matrix((5, 1, 2), MatrixFq.of(ctx, G.M_SECOND)) == (1, 5, 4)


def _golden_decode():
    p = G.strong_params()
    res = decode(p, encode_basis(p, G.SECRET), (1, 2, 3))
    assert res.stage1.support() == set(G.PARTIAL_DECODE)
    assert res.state.support() == set(G.FINAL_DECODE)
    assert fidelity_pure(res.secret, basis_state(7, G.SECRET)) >= 1 - 1e-10


def _golden_purified():
    p = G.strong_params()
    st = purify_and_encode(p, (2,), basis_state(7, (5,)))
    expected = {(d,) + w for d, ws in G.PURIFIED_BLOCKS.items() for w in ws}
    assert st.support() == expected
    assert all(abs(a - 1 / 7) <= 1e-12 for a in st.amps.values())
    assert is_fully_mixed(reduced_density(st, [3, 4]), 1e-10)


def _golden_attack():
    o = G.ogawa_params()
    leak = find_linear_leak(o, G.LEAK_J)
    assert leak is not None and leak.coeffs == G.LEAK_WEIGHTS and leak.coordinate == 2
    for s in itertools.product(range(7), repeat=2):
        r = run_attack(o, leak, s)
        assert r.recovered == s[1] and r.probability >= 1 - 1e-10


def _roundtrip(p, per_j=5, seed=0):
    rng = np.random.default_rng(seed)
    for J in itertools.combinations(range(1, p.n + 1), p.k):
        for sample in sample_secrets(p.q, p.L, per_j, int(rng.integers(1 << 31))):
            if sample.aux:
                continue
            res = decode(p, encode(p, sample.state), J)
            assert fidelity_pure(res.secret, sample.state) >= 1 - 1e-10, (J, sample.label)


def _sweep(p):
    report = audit_scheme(p, count=6)
    assert report.passed, report.failures()[:3]


def _expect_fail():
    report = audit_scheme(G.ogawa_params(), count=6)
    assert not report.passed
    assert any(r.I == (2,) and r.J == (3, 4) for r in report.failures())


def _rejects_bad_params():
    for bad in (dict(x=(1, 3), y=(6, 2, 4, 1)), dict(x=(1, 3), y=(6, 2, 4, 5, 0), n=5)):
        try:
            Params(q=7, k=3, L=2, **bad)
        except ParamsError:
            continue
        raise AssertionError(f"accepted invalid parameters {bad}")


CHECKS = [
    ("golden encoding", _golden_encode),
    ("golden D-set", _golden_dset),
    ("golden decoding matrices", _golden_matrices),
    ("golden two-stage decode", _golden_decode),
    ("golden purified 49-term state", _golden_purified),
    ("golden coefficient-scheme attack", _golden_attack),
    ("round trip (7,3,2,4)", lambda: _roundtrip(G.strong_params())),
    ("round trip (5,2,1,3)", lambda: _roundtrip(G.small_params())),
    ("security sweep (7,3,2,4)", lambda: _sweep(G.strong_params())),
    ("security sweep (5,2,1,3)", lambda: _sweep(G.small_params())),
    ("coefficient scheme fails audit", _expect_fail),
    ("invalid parameters rejected", _rejects_bad_params),
]


def run(out=print) -> bool:
    ok = True
    for name, fn in CHECKS:
        try:
            fn()
        except Exception as exc:  # report every failure, keep going
            ok = False
            out(f"FAIL {name}: {type(exc).__name__}: {exc}")
        else:
            out(f"PASS {name}")
    out(f"SELFTEST {'PASS' if ok else 'FAIL'} ({len(CHECKS)} checks)")
    return ok
