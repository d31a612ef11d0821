import itertools

import numpy as np
import pytest

from qrss import golden as G
from qrss.audit import (
    AuditCase,
    AuditError,
    LinearLeak,
    SecretSample,
    attack_matrix,
    audit_case,
    audit_scheme,
    closed_form_reduction,
    find_linear_leak,
    generator_matrix,
    leak_space,
    purify_and_encode,
    reduction_for_case,
    run_attack,
    sample_secrets,
)
from qrss.codec import enumerate_coeffs, eval_poly, row_times_matrix
from qrss.qsim import basis_state, is_fully_mixed, reduced_density, superpose
from qrss.scheme import Params, codewords


def exhaustive_leaks(p, J):
    """All weight vectors on J whose share combination is a fixed secret coordinate.

    Checked against every basis secret and every randomness; does not use
    the generator matrix.
    """
    q, found = p.q, []
    table = {s: codewords(p, s) for s in itertools.product(range(q), repeat=p.L)}
    for lam in itertools.product(range(q), repeat=len(J)):
        if not any(lam):
            continue
        for i in range(p.L):
            if all(sum(l * w[j - 1] for l, j in zip(lam, J)) % q == s[i]
                   for s, words in table.items() for w in words):
                found.append((lam, i + 1))
    return found


def test_purified_golden_state(strong):
    st = purify_and_encode(strong, (2,), basis_state(7, (5,)))
    assert st.m == 5 and len(st) == 49
    expected = {(d,) + w for d, ws in G.PURIFIED_BLOCKS.items() for w in ws}
    assert st.support() == expected
    for a in st.amps.values():
        assert abs(a - 1 / 7) < 1e-12
    # the |1> reference block is the encoding of |1,5>
    block = {t[1:] for t in st.support() if t[0] == 1}
    assert block == set(G.ENCODED)


def test_purified_reduction_on_shares_3_4(strong):
    st = purify_and_encode(strong, (2,), basis_state(7, (5,)))
    assert is_fully_mixed(reduced_density(st, [3, 4]), 1e-10)


def test_purify_full_I_is_plain_encoding(strong):
    st = purify_and_encode(strong, (1, 2), basis_state(7, G.SECRET))
    assert st.support() == set(G.ENCODED)


def test_purify_rejects_bad_inputs(strong):
    with pytest.raises(AuditError):
        purify_and_encode(strong, (), basis_state(7, ()))
    with pytest.raises(AuditError):
        purify_and_encode(strong, (2,), basis_state(7, (1, 2)))


def test_sample_secrets_mix_and_determinism():
    a = sample_secrets(7, 1, 20, seed=3)
    b = sample_secrets(7, 1, 20, seed=3)
    assert [s.label for s in a] == [s.label for s in b]
    assert all(x.state.amps == y.state.amps for x, y in zip(a, b))
    kinds = [s.label.split("#")[0].split(":")[0] for s in a]
    assert kinds.count("basis") == 6 and kinds.count("pure") == 7 and kinds.count("mixed") == 7
    assert a[0].label == "basis:0"
    assert all(s.aux == 1 for s in a if s.label.startswith("mixed"))


def test_audit_case_examples(strong):
    s = SecretSample("basis:5", basis_state(7, (5,)))
    rec = audit_case(strong, AuditCase((2,), (3, 4), s))
    assert rec.passed and rec.distance < 1e-12
    assert rec.line().startswith("I={2} J={3,4} secret=basis:5 dist=")
    assert rec.line().endswith("PASS")
    # empty J is vacuous
    assert audit_case(strong, AuditCase((1,), (), s)).distance == 0.0
    with pytest.raises(AuditError):
        audit_case(strong, AuditCase((1, 2), (1, 2), s))


def test_conventional_security_any_one_share(strong):
    # k - L = 1 share learns nothing even with the whole secret fixed
    for s in [(0, 0), (1, 5), (4, 6)]:
        psi = purify_and_encode(strong, (1, 2), basis_state(7, s))
        for j in range(4):
            assert is_fully_mixed(reduced_density(psi, [j]), 1e-10)


@pytest.mark.parametrize("params", ["strong", "small"])
def test_strong_scheme_passes(params, request):
    p = request.getfixturevalue(params)
    report = audit_scheme(p, count=6)
    assert report.passed
    assert report.max_distance() < 1e-12
    assert report.format().splitlines()[-1] == "VERDICT PASS tol=1e-09"


def test_audit_sweep_order(strong):
    report = audit_scheme(strong, count=1)
    keys = [(r.I, r.J) for r in report.records]
    Is = [k[0] for k in keys]
    assert Is == sorted(Is, key=lambda s: (len(s), s))
    assert keys[0] == ((1,), ())
    assert ((1,), (3, 4)) in keys and ((1, 2), (4,)) in keys
    assert ((1, 2), (1, 2)) not in keys


def test_tolerance_monotone(ogawa):
    tight = audit_scheme(ogawa, count=3, tol=1e-9)
    loose = audit_scheme(ogawa, count=3, tol=0.99)
    assert {(r.I, r.J, r.secret) for r in loose.failures()} <= \
        {(r.I, r.J, r.secret) for r in tight.failures()}
    assert loose.passed


def test_ogawa_fails_at_worked_example_case(ogawa):
    report = audit_scheme(ogawa, count=6)
    assert not report.passed
    bad = [r for r in report.failures() if r.I == (2,) and r.J == (3, 4)]
    assert bad
    # basis secrets leave 7 of 49 outcomes, each 1/7: distance 6/7
    basis = [r for r in bad if r.secret.startswith("basis")]
    assert basis and all(abs(r.distance - 6 / 7) < 1e-12 for r in basis)
    assert report.format().splitlines()[-1].startswith("VERDICT FAIL")


def test_ogawa_phase_leak_on_shares_1_2(ogawa):
    # shares 1,2 reveal s1 + 4 s2; for I={1} that is a random shift of s1,
    # invisible to basis secrets but not to superpositions
    basis = SecretSample("basis:3", basis_state(7, (3,)))
    plus = SecretSample("plus", superpose(7, [((v,), 1) for v in range(7)]))
    assert audit_case(ogawa, AuditCase((1,), (1, 2), basis)).passed
    assert not audit_case(ogawa, AuditCase((1,), (1, 2), plus)).passed


def test_closed_form_matches_simulation(strong):
    rng = np.random.default_rng(11)
    for I in [(1,), (2,), (1, 2)]:
        for sample in sample_secrets(7, len(I), 6, seed=int(rng.integers(1000))):
            for J in itertools.combinations(range(1, 5), 3 - len(I)):
                if not J:
                    continue
                sim = reduction_for_case(strong, AuditCase(I, J, sample))
                cf = closed_form_reduction(strong, I, J, sample.probabilities(len(I)))
                assert np.max(np.abs(sim.matrix - cf.matrix)) < 1e-10


def test_closed_form_strong_only(ogawa):
    with pytest.raises(TypeError):
        closed_form_reduction(ogawa, (1,), (1,), {(0,): 1.0})


def test_dsets_disjoint(strong):
    seen = set()
    for s in itertools.product(range(7), repeat=2):
        d = set(enumerate_coeffs(strong, s))
        assert not d & seen
        seen |= d
    assert len(seen) == 343


def test_generator_matrix_reproduces_codewords(strong, ogawa):
    for p in (strong, ogawa):
        g = generator_matrix(p)
        for s in [(1, 5), (0, 3)]:
            words = {row_times_matrix(s + (r,), g) for r in range(7)}
            assert words == set(codewords(p, s))


def test_find_linear_leak_golden(ogawa):
    leak = find_linear_leak(ogawa, G.LEAK_J)
    assert leak.coeffs == G.LEAK_WEIGHTS
    assert leak.coeffs == (4, -4 % 7)
    assert leak.coordinate == 2
    assert attack_matrix(ogawa, leak).tolist() == G.ATTACK_MATRIX


def test_find_linear_leak_vs_exhaustive(ogawa, strong):
    for p in (ogawa, strong):
        for J in itertools.chain.from_iterable(itertools.combinations(range(1, 5), r) for r in (1, 2)):
            oracle = exhaustive_leaks(p, J)
            leak = find_linear_leak(p, J)
            if leak is None:
                assert oracle == []
            else:
                assert (leak.coeffs, leak.coordinate) in oracle
    # the evaluation scheme has no leak anywhere
    assert all(find_linear_leak(strong, J) is None
               for J in itertools.combinations(range(1, 5), 2))


def test_leak_space_examples(ogawa):
    assert leak_space(ogawa, (1, 2)) == [(1, 4)]
    assert leak_space(ogawa, (3, 4)) == [(0, 1)]
    with pytest.raises(AuditError):
        leak_space(ogawa, (1, 2, 3))


def test_attack_matrix_action(ogawa):
    # (p(1), p(6)) . M = (s2, s1 + r)
    m = attack_matrix(ogawa, find_linear_leak(ogawa, G.LEAK_J))
    F = ogawa.ctx
    for c in itertools.product(range(7), repeat=3):
        shares = (eval_poly(F, c, 1), eval_poly(F, c, 6))
        assert row_times_matrix(shares, m) == (c[1], (c[0] + c[2]) % 7)


def test_attack_recovers_every_secret(ogawa):
    leak = find_linear_leak(ogawa, G.LEAK_J)
    for s in itertools.product(range(7), repeat=2):
        res = run_attack(ogawa, leak, s)
        assert res.recovered == s[1] == res.expected
        assert res.probability >= 1 - 1e-10
        res = run_attack(ogawa, leak, s, mixed=(1,))
        assert res.recovered == s[1]
        assert res.probability >= 1 - 1e-10


def test_attack_rejects_inconsistent_leak(strong, ogawa):
    bogus = LinearLeak((3, 4), (4, 3), (0, 1))
    with pytest.raises(AuditError):
        run_attack(strong, bogus, (1, 5))
    with pytest.raises(AuditError):
        run_attack(ogawa, find_linear_leak(ogawa, (3, 4)), (1, 5), mixed=(1, 2))


def test_small_scheme_has_no_leak():
    p = Params(q=5, k=2, L=1, x=(0,), y=(1, 2, 3))
    for j in range(1, 4):
        assert find_linear_leak(p, (j,)) is None
        assert exhaustive_leaks(p, (j,)) == []
