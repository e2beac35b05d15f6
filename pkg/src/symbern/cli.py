"""``symbern`` command line.

Exit codes: 0 success or feasible, 1 infeasible target or failed
verification, 2 bad usage or invalid input. Machine-readable output carries
probabilities as ``"num/den"`` strings; ``--decimal`` adds float renderings
for reading by eye.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Any, Sequence

from symbern.constructors import InfeasibleTarget, classify, construct_for_p, p_min_binary
from symbern.count_pmf import CountPMF, FullPMF, MarginalViolation, covariance_matrix, symmetrize
from symbern.intraclass import p_good_threshold, rho_from_p, rho_min_psd
from symbern.lp_oracle import verify_thresholds
from symbern.rational import format_rational, parse_rational
from symbern.sampler import estimate, sample

EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _emit(payload: Any, out: str | None = None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out and out != "-":
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _load_pmf(path: str) -> CountPMF:
    try:
        return CountPMF.from_json(_load_json(path))
    except ValueError as exc:
        raise UsageError(f"invalid count PMF in {path}: {exc}") from exc


def _decimals(values: dict[str, Fraction]) -> dict[str, float]:
    return {k: float(v) for k, v in values.items()}


def cmd_bounds(args: argparse.Namespace) -> int:
    n = args.n
    p_psd, p_min = p_good_threshold(n), p_min_binary(n)
    exact = {
        "rho_min_psd": rho_min_psd(n),
        "p_psd_threshold": p_psd,
        "p_min_binary": p_min,
        "rho_min_binary": rho_from_p(p_min),
        "gap": p_min - p_psd,
    }
    out: dict[str, Any] = {"n": n, "parity": "even" if n % 2 == 0 else "odd"}
    out.update({k: format_rational(v) for k, v in exact.items()})
    if args.decimal:
        out["decimal"] = _decimals(exact)
    _emit(out)
    return EXIT_OK


def cmd_feasible(args: argparse.Namespace) -> int:
    kind, value = ("p", args.p) if args.p is not None else ("rho", args.rho)
    report = classify(args.n, value, kind)
    out = report.to_json()
    if args.decimal:
        out["decimal"] = _decimals(
            {"p": report.p, "rho": report.rho, "p_psd_threshold": report.p_psd_threshold,
             "p_min_binary": report.p_min_binary}
        )
    _emit(out)
    return EXIT_OK if report.symmetric_binary_good else EXIT_INFEASIBLE


def cmd_construct(args: argparse.Namespace) -> int:
    try:
        pmf = construct_for_p(args.n, args.p)
    except InfeasibleTarget as exc:
        sys.stderr.write(json.dumps(exc.report.to_json(), indent=2) + "\n")
        return EXIT_INFEASIBLE
    _emit(pmf.to_json(), args.out)
    return EXIT_OK


def cmd_cov(args: argparse.Namespace) -> int:
    pmf = _load_pmf(args.input)
    try:
        cov = covariance_matrix(pmf)
    except MarginalViolation as exc:
        raise UsageError(str(exc)) from exc
    a, b = cov.intraclass_parts()
    out = {
        "n": cov.n,
        "matrix": [[format_rational(v) for v in row] for row in cov.entries],
        "a": format_rational(a),
        "b": format_rational(b),
        "rho": format_rational(b / a),
    }
    if args.decimal:
        out["decimal"] = {"a": float(a), "b": float(b), "rho": float(b / a)}
    _emit(out, args.out)
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    pmf = _load_pmf(args.input)
    if args.count < 1:
        raise UsageError("--count must be positive")
    if not 0 <= args.seed < 1 << 64:
        raise UsageError("--seed must be an unsigned 64-bit integer")
    try:
        batch = sample(pmf, args.count, args.seed, workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    data = batch.to_csv(header=args.header)
    if args.out and args.out != "-":
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    if args.stats:
        _emit(estimate(batch).to_json(), args.stats)
    return EXIT_OK


def cmd_symmetrize(args: argparse.Namespace) -> int:
    try:
        full = FullPMF.from_json(_load_json(args.input))
        pmf = symmetrize(full)
    except ValueError as exc:
        raise UsageError(f"invalid full PMF in {args.input}: {exc}") from exc
    log = logging.getLogger(__name__)
    if not pmf.fair_marginals:
        log.warning("coordinates are not individually fair; output has the averaged marginal")
    if not pmf.equal_agreements:
        log.warning("pair agreements differ across pairs; output carries their average")
    _emit(pmf.to_json(), args.out)
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    report = verify_thresholds(args.n_max, full=args.full)
    _emit(report.to_json(), args.out)
    for rec in report.failures():
        sys.stderr.write(rec.message + "\n")
    return EXIT_OK if report.passed else EXIT_INFEASIBLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symbern",
        description="Equicorrelated symmetric Bernoulli vectors: bounds, constructions, sampling.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_n(p: argparse.ArgumentParser) -> None:
        p.add_argument("--n", type=int, required=True, help="number of variables (>= 2)")

    p = sub.add_parser("bounds", help="PSD and symmetric-binary thresholds for n")
    with_n(p)
    p.add_argument("--decimal", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("feasible", help="classify a target p or rho")
    with_n(p)
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--p", type=_rational_arg, help="pair agreement probability")
    target.add_argument("--rho", type=_rational_arg, help="pairwise correlation")
    p.add_argument("--decimal", action="store_true")
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("construct", help="exchangeable law with pair agreement p")
    with_n(p)
    p.add_argument("--p", type=_rational_arg, required=True)
    p.add_argument("--out", help="output JSON path (default stdout)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("cov", help="exact covariance matrix of a count PMF")
    p.add_argument("--in", dest="input", required=True, help="count PMF JSON ('-' for stdin)")
    p.add_argument("--out")
    p.add_argument("--decimal", action="store_true")
    p.set_defaults(func=cmd_cov)

    p = sub.add_parser("sample", help="draw bit vectors as CSV")
    p.add_argument("--in", dest="input", required=True, help="count PMF JSON ('-' for stdin)")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--header", action="store_true", help="prefix a x1,...,xn header row")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--stats", help="also write empirical statistics JSON here")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("symmetrize", help="permutation-average a full joint PMF")
    p.add_argument("--in", dest="input", required=True, help="full PMF JSON ('-' for stdin)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_symmetrize)

    p = sub.add_parser("oracle", help="check the closed-form minimum against exact LPs")
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--full", action="store_true", help="also solve the 2^n-variable program (n <= 10)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"symbern {args.command}: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
