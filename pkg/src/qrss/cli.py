"""Command-line front end.

Exit codes: 0 success or PASS, 1 audit FAIL or no leak found, 2 usage and
validation errors, 3 decode integrity failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import selftest
from .audit import (
    AuditError,
    DEFAULT_TOL,
    audit_scheme,
    find_linear_leak,
    leak_space,
    run_attack,
)
from .codec import CodecError
from .gf import FieldError
from .qsim import QSimError, basis_state, dumps_state, loads_state
from .scheme import (
    DecodeIntegrityError,
    OgawaParams,
    Params,
    ParamsError,
    decode,
    encode,
    parse_params,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTEGRITY = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _ints(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_params(args) -> Params | OgawaParams:
    p = parse_params(_read(args.params))
    kind = "strong" if isinstance(p, Params) else "ogawa"
    if args.scheme and args.scheme != kind:
        raise UsageError(f"--scheme {args.scheme} but {args.params} holds {kind} parameters")
    return p


def _load_secret(args, p):
    if args.secret and args.state:
        raise UsageError("give either --secret or --state, not both")
    if args.secret:
        s = _ints(args.secret)
        if len(s) != p.L or any(not 0 <= v < p.q for v in s):
            raise UsageError(f"secret must be {p.L} values in 0..{p.q - 1}")
        return basis_state(p.q, s)
    if args.state:
        return loads_state(_read(args.state), normalize=True)
    raise UsageError("a secret is required (--secret or --state)")


def cmd_params_check(args) -> int:
    p = _load_params(args)
    kind = "strong" if isinstance(p, Params) else "ogawa"
    print(f"OK {kind} q={p.q} k={p.k} L={p.L} n={p.n}")
    return EXIT_OK


def cmd_encode(args) -> int:
    p = _load_params(args)
    _emit(dumps_state(encode(p, _load_secret(args, p))), args.out)
    return EXIT_OK


def _describe_secret(state) -> str:
    if len(state) == 1:
        (t, a), = state.items()
        if abs(abs(a) - 1) <= 1e-10:
            return ",".join(map(str, t))
    return f"superposition of {len(state)} basis states"


def cmd_decode(args) -> int:
    p = _load_params(args)
    if not isinstance(p, Params):
        raise UsageError("decode is defined for the strong scheme only")
    if not args.state:
        raise UsageError("--state (encoded shares) is required")
    if not args.set_j:
        raise UsageError("--set-j is required")
    J = _ints(args.set_j)
    if len(set(J)) != p.k:
        raise UsageError(f"decoding needs exactly k={p.k} distinct shares, got {len(set(J))}")
    shares = loads_state(_read(args.state))
    res = decode(p, shares, J)
    if args.out:
        Path(args.out).write_text(dumps_state(res.state))
    if args.secret_out:
        Path(args.secret_out).write_text(dumps_state(res.secret))
    print(f"secret {_describe_secret(res.secret)}")
    if len(res.secret) > 1:
        sys.stdout.write(dumps_state(res.secret))
    print(f"overlap {res.fidelity:.12f}")
    print("residual maximally entangled, OK")
    return EXIT_OK


def cmd_audit(args) -> int:
    p = _load_params(args)
    I_sets = [_ints(args.set_i)] if args.set_i else None
    report = audit_scheme(p, tol=args.tol, count=args.count, seed=args.seed, I_sets=I_sets)
    _emit(report.format(), args.out)
    if args.figure:
        from .plotting import plot_audit

        plot_audit(report, args.figure)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_attack(args) -> int:
    p = _load_params(args)
    if not args.set_j:
        raise UsageError("--set-j is required")
    J = _ints(args.set_j)
    leak = find_linear_leak(p, J)
    if leak is None:
        jset = ",".join(map(str, sorted(J)))
        print(f"no linear leak for J={{{jset}}}: no weights reveal a single secret symbol over F_{p.q}")
        funcs = leak_space(p, J)
        if funcs:
            print("partial functionals: " + " ".join("(" + ",".join(map(str, f)) + ")" for f in funcs))
        return EXIT_FAIL
    if not args.secret:
        raise UsageError("--secret is required")
    secret = _ints(args.secret)
    if len(secret) != p.L or any(not 0 <= v < p.q for v in secret):
        raise UsageError(f"secret must be {p.L} values in 0..{p.q - 1}")
    mixed = _ints(args.mixed) if args.mixed else ()
    res = run_attack(p, leak, secret, mixed)
    print(f"leak J={{{','.join(map(str, leak.J))}}} lambda={','.join(map(str, leak.coeffs))}")
    print("attack matrix")
    print(res.matrix)
    print(f"reveals s_{leak.coordinate}; recovered {res.recovered}; p={res.probability:.3f}")
    if args.figure:
        from .plotting import plot_attack

        plot_attack(res, args.figure)
    return EXIT_OK


def cmd_selftest(args) -> int:
    return EXIT_OK if selftest.run() else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qrss", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=fn)
        return sp

    def with_params(sp):
        sp.add_argument("--params", required=True, help="QRSS-PARAMS or QRSS-OGAWA-PARAMS file")
        sp.add_argument("--scheme", choices=("strong", "ogawa"),
                        help="expected scheme; must match the params header")
        return sp

    with_params(add("params-check", cmd_params_check, "validate a parameter file"))

    sp = with_params(add("encode", cmd_encode, "encode a secret into share state"))
    sp.add_argument("--secret", help="basis secret as comma-separated field elements")
    sp.add_argument("--state", help="secret given as a QRSS-STATE file")
    sp.add_argument("--out", help="output state file (default stdout)")

    sp = with_params(add("decode", cmd_decode, "decode shares with k participants"))
    sp.add_argument("--state", help="encoded QRSS-STATE file")
    sp.add_argument("--set-j", help="participating shares, e.g. 1,2,3")
    sp.add_argument("--out", help="write the decoded global state here")
    sp.add_argument("--secret-out", help="write the extracted secret state here")

    sp = with_params(add("audit", cmd_audit, "sweep the strong security condition"))
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=20, help="test secrets per case")
    sp.add_argument("--set-i", help="restrict to one critical secret set, e.g. 2")
    sp.add_argument("--out", help="report file (default stdout)")
    sp.add_argument("--figure", help="also render the per-case distances to this image")

    sp = with_params(add("attack", cmd_attack, "search and run a linear leak attack"))
    sp.add_argument("--set-j", help="adversary shares, e.g. 3,4")
    sp.add_argument("--secret", help="basis secret as comma-separated field elements")
    sp.add_argument("--mixed", help="secret positions replaced by the fully mixed state")
    sp.add_argument("--figure", help="render the leak qudit distribution to this image")

    add("selftest", cmd_selftest, "run embedded golden checks")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DecodeIntegrityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except (UsageError, ParamsError, AuditError, QSimError, CodecError, FieldError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
