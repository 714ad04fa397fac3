"""Command-line front end.

Subcommands: moments, verify, coulomb, cd-check, bs-check, fh-check.
Exit codes: 0 success, 1 invariant failure, 2 input parse, 3 quadrature,
4 out-of-range.  Identical configurations produce byte-identical output:
every random stream is seeded and floats are printed with 17 significant
digits.  ``SZEGO_LAB_GRID_MAX`` caps quadrature grid doubling.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import cdkernel, coulomb, opuc, toeplitz, verify
from .errors import (
    InvariantViolation,
    PositivityError,
    QuadratureError,
    SymbolParseError,
    SzegoLabError,
)
from .symbol import (
    LaurentSymbol,
    MomentSequence,
    load_symbol,
    make_symbol,
    moments,
)
from .textio import CSV_SCHEMA, fmt, json_text

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_PARSE = 2
EXIT_QUADRATURE = 3
EXIT_RANGE = 4


def _parse_coeff_flags(pairs: list[str]) -> LaurentSymbol:
    coeffs: dict[int, complex] = {}
    for raw in pairs:
        try:
            key, _, value = raw.partition("=")
            k = int(key)
            parts = value.split(",")
            re = float(parts[0])
            im = float(parts[1]) if len(parts) > 1 else 0.0
            if len(parts) > 2:
                raise ValueError("too many fields")
        except (ValueError, IndexError):
            raise SymbolParseError(f"bad --coeff {raw!r}; expected k=re[,im]") from None
        if k < 0:
            raise SymbolParseError(
                f"--coeff {raw!r}: only k >= 0 may be given; negative k is implied"
            )
        if k == 0 and im != 0.0:
            raise SymbolParseError(f"--coeff {raw!r}: coefficient 0 must be real")
        if k in coeffs:
            raise SymbolParseError(f"duplicate --coeff for k={k}")
        coeffs[k] = complex(re, im)
    full = dict(coeffs)
    for k, v in coeffs.items():
        if k > 0:
            full[-k] = v.conjugate()
    return make_symbol(full)


def _symbol_from_args(args) -> LaurentSymbol:
    if getattr(args, "symbol", None):
        return load_symbol(args.symbol)
    if getattr(args, "coeff", None):
        return _parse_coeff_flags(args.coeff)
    return make_symbol({})


def _write_output(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def load_moments_csv(path) -> MomentSequence:
    """Read a moments CSV as written by the moments subcommand."""
    values: dict[int, complex] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#") or line.startswith("n,"):
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise SymbolParseError("expected `n,re,im`", lineno=lineno)
            try:
                n = int(parts[0])
                value = complex(float(parts[1]), float(parts[2]))
            except ValueError:
                raise SymbolParseError(f"could not parse {line!r}", lineno=lineno) from None
            if n < 0 or n in values:
                raise SymbolParseError(f"bad moment index {n}", lineno=lineno)
            values[n] = value
    if 0 not in values or sorted(values) != list(range(len(values))):
        raise SymbolParseError("moment indices must be contiguous from 0")
    return MomentSequence(tuple(values[i] for i in range(len(values))))


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_moments(args) -> int:
    s = _symbol_from_args(args)
    m = moments(s, args.nmax)
    if args.format == "json":
        payload = {
            "schema": 1,
            "grid_m": m.quadrature_points,
            "moments": [
                {"n": k, "re": m.moment(k).real, "im": m.moment(k).imag}
                for k in range(m.order + 1)
            ],
        }
        _write_output(args, json_text(payload))
    else:
        lines = [CSV_SCHEMA, f"# grid_m={m.quadrature_points}", "n,re,im"]
        for k in range(m.order + 1):
            value = m.moment(k)
            lines.append(f"{k},{fmt(value.real)},{fmt(value.imag)}")
        _write_output(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _verify_checks_from_moments(m: MomentSequence, n_max: int) -> list[tuple[str, bool, str]]:
    checks: list[tuple[str, bool, str]] = []
    try:
        toeplitz.log_det_direct(toeplitz.assemble(m, min(n_max, m.order)))
        checks.append(("positivity", True, "Cholesky factorization succeeded"))
    except PositivityError as exc:
        checks.append(("positivity", False, str(exc)))
        return checks
    n_top = min(n_max, m.order - 1)
    if n_top < 0:
        return checks
    try:
        states = opuc.trajectory(m, n_top + 1)
    except (PositivityError, SzegoLabError) as exc:
        checks.append(("recursion", False, str(exc)))
        return checks
    checks.append(("recursion", True, f"ran to degree {n_top + 1}"))
    worst = 0.0
    for n in range(n_top + 1):
        direct = toeplitz.log_det_direct(toeplitz.assemble(m, n))
        product = toeplitz.log_det_product(states[n])
        worst = max(worst, verify._relative_gap(direct, product))
    checks.append(
        (
            "route-agreement",
            worst <= verify.ROUTE_AGREEMENT_TOL,
            f"worst relative gap {fmt(worst)}",
        )
    )
    alphas = np.asarray(states[-1].alphas)
    checks.append(
        ("alpha-bound", bool(np.all(np.abs(alphas) < 1.0)), "|alpha_n| < 1")
    )
    norms = np.asarray([st.norm_sq for st in states])
    checks.append(
        ("norm-monotone", bool(np.all(np.diff(norms) <= 1e-15)), "norms nonincreasing")
    )
    led = toeplitz.ledger(states[-1], n_top)
    ratios = np.asarray([np.log(r.ratio) for r in led.rows])
    gs = np.asarray([np.log(r.g_n) for r in led.rows])
    checks.append(
        (
            "ratio-monotone",
            bool(np.all(np.diff(ratios) <= verify.MONOTONE_SLACK)),
            "D_{n+1}/D_n nonincreasing",
        )
    )
    checks.append(
        (
            "g-monotone",
            bool(np.all(np.diff(gs) >= -verify.MONOTONE_SLACK)),
            "G_n nondecreasing",
        )
    )
    zero_ok = True
    for st in states[1:]:
        _, inside = opuc.zeros_in_disk(st.phi)
        zero_ok = zero_ok and inside
    checks.append(("zeros-in-disk", zero_ok, "all roots strictly inside"))
    return checks


def cmd_verify(args) -> int:
    checks: list[tuple[str, bool, str]]
    body = ""
    if getattr(args, "moments", None):
        m = load_moments_csv(args.moments)
        checks = _verify_checks_from_moments(m, args.nmax)
    else:
        s = _symbol_from_args(args)
        try:
            report = verify.strong_szego_report(s, n_max=args.nmax)
            checks = [
                ("positivity", True, "Cholesky factorization succeeded"),
                ("route-agreement", True, f"within {fmt(verify.ROUTE_AGREEMENT_TOL)}"),
                ("g-monotone-bounded", True, "G_n nondecreasing and below the target"),
            ]
            final = report.rows[-1]
            checks.append(
                (
                    "limit-convergence",
                    final.abs_err < 1e-6,
                    f"abs_err {fmt(final.abs_err)} at n={final.n}",
                )
            )
            body = report.to_csv() if args.format == "csv" else report.to_json()
        except (PositivityError, InvariantViolation) as exc:
            name = "positivity" if isinstance(exc, PositivityError) else "invariant"
            checks = [(name, False, str(exc))]
    summary_lines = [
        f"# check {name} {'PASS' if ok else 'FAIL'} ({detail})" for name, ok, detail in checks
    ]
    _write_output(args, body + "\n".join(summary_lines) + "\n")
    return EXIT_OK if all(ok for _, ok, _ in checks) else EXIT_INVARIANT


def cmd_coulomb(args) -> int:
    s = _symbol_from_args(args)
    if args.exact:
        if not 0 <= args.n <= coulomb.EXACT_MAX_N:
            return EXIT_RANGE
        estimate = coulomb.exact_Dn(s, args.n)
    else:
        if not 1 <= args.n <= coulomb.MC_MAX_N:
            return EXIT_RANGE
        estimate = coulomb.mc_Dn(
            s, args.n, samples=args.samples, seed=args.seed, workers=args.workers
        )
    _write_output(args, json_text(estimate.to_dict()))
    return EXIT_OK


def cmd_cd_check(args) -> int:
    s = _symbol_from_args(args)
    n = args.nmax
    m = moments(s, n + 2)
    states = opuc.trajectory(m, n + 1)
    rng = np.random.default_rng(args.seed)
    worst_closed = 0.0
    for _ in range(100):
        z, zeta = [
            r * np.exp(1j * phi)
            for r, phi in zip(
                0.95 * np.sqrt(rng.uniform(size=2)), rng.uniform(0, 2 * np.pi, size=2)
            )
        ]
        reference = cdkernel.kernel_sum(states, n, z, zeta)
        for variant in ("next", "current"):
            closed = cdkernel.kernel_cd(states, n, z, zeta, variant)
            worst_closed = max(
                worst_closed, abs(closed - reference) / max(1.0, abs(reference))
            )
    theta = np.linspace(0.0, 2.0 * np.pi, 128, endpoint=False)
    diag = cdkernel.kernel_diag_boundary(states, n, theta)
    direct = np.asarray(
        [np.real(cdkernel.kernel_sum(states, n, np.exp(1j * t), np.exp(1j * t))) for t in theta]
    )
    worst_diag = float(np.max(np.abs(diag - direct) / np.maximum(1.0, np.abs(direct))))
    ratio = cdkernel.normalization_check(states, s, n)
    checks = [
        ("closed-forms", worst_closed <= 1e-11, f"worst deviation {fmt(worst_closed)}"),
        ("diagonal-boundary", worst_diag <= 1e-10, f"worst deviation {fmt(worst_diag)}"),
        ("normalization", abs(ratio - 1.0) <= 1e-9, f"ratio {fmt(ratio)}"),
    ]
    lines = [f"# check {name} {'PASS' if ok else 'FAIL'} ({detail})" for name, ok, detail in checks]
    _write_output(args, "\n".join(lines) + "\n")
    return EXIT_OK if all(ok for _, ok, _ in checks) else EXIT_INVARIANT


def cmd_bs_check(args) -> int:
    s = _symbol_from_args(args)
    level = args.nmax
    m = moments(s, max(level, level + 10))
    try:
        bundle = verify.bs_approximation(m, level)
    except InvariantViolation as exc:
        _write_output(args, f"# check bs-approximation FAIL ({exc})\n")
        return EXIT_INVARIANT
    payload = {
        "level": bundle.level,
        "mass": bundle.mass,
        "moment_deviation": bundle.moment_deviation,
        "alpha_head_deviation": bundle.alpha_head_deviation,
        "alpha_tail_deviation": bundle.alpha_tail_deviation,
        "grid_m": bundle.grid_m,
    }
    _write_output(args, json_text(payload) + "# check bs-approximation PASS\n")
    return EXIT_OK


def cmd_fh_check(args) -> int:
    s = _symbol_from_args(args)
    result = verify.feynman_hellman_check(s, n=args.nmax, t=args.t, h=args.h)
    payload = {
        "n": args.nmax,
        "t": args.t,
        "h": result.h,
        "analytic": result.analytic,
        "finite_diff": result.finite_diff,
        "gap": result.gap,
        "ratio": result.ratio,
    }
    noise_floor = 1e-10 * max(1.0, abs(result.analytic))
    ok = result.gap <= noise_floor or 3.0 <= result.ratio <= 5.0
    status = "PASS" if ok else "FAIL"
    _write_output(args, json_text(payload) + f"# check feynman-hellman {status}\n")
    return EXIT_OK if ok else EXIT_INVARIANT


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def _add_symbol_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--symbol", help="symbol file (`k re im` lines, k >= 0)")
    parser.add_argument(
        "--coeff",
        action="append",
        metavar="k=re[,im]",
        help="inline coefficient, repeatable; negative k implied by symmetry",
    )
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="szego-lab",
        description="Toeplitz determinant laboratory for analytic log-weights",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="Fourier moments of the weight e^L")
    _add_symbol_flags(p)
    p.add_argument("--nmax", type=int, default=10)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("verify", help="determinant limit report and invariant suite")
    _add_symbol_flags(p)
    p.add_argument("--moments", help="verify a moments CSV instead of a symbol")
    p.add_argument("--nmax", type=int, default=40)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("coulomb", help="gas-integral estimate of D_n")
    _add_symbol_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--exact", action="store_true", help="tensor quadrature (n <= 2)")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_coulomb)

    p = sub.add_parser("cd-check", help="reproducing-kernel identity suite")
    _add_symbol_flags(p)
    p.add_argument("--nmax", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_cd_check)

    p = sub.add_parser("bs-check", help="Bernstein–Szegő approximant identities")
    _add_symbol_flags(p)
    p.add_argument("--nmax", type=int, default=5, help="approximation level N")
    p.set_defaults(func=cmd_bs_check)

    p = sub.add_parser("fh-check", help="derivative identity for the family w_t")
    _add_symbol_flags(p)
    p.add_argument("--nmax", type=int, default=3, help="polynomial degree n")
    p.add_argument("--t", type=float, default=0.5)
    p.add_argument("--h", type=float, default=1e-3)
    p.set_defaults(func=cmd_fh_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SymbolParseError as exc:
        print(f"szego-lab: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"szego-lab: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except QuadratureError as exc:
        print(f"szego-lab: quadrature error: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE
    except (PositivityError, InvariantViolation) as exc:
        print(f"szego-lab: invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
