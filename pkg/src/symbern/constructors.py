"""Extremal exchangeable laws and the mixtures that hit every feasible agreement level."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from symbern.combinatorics import binom
from symbern.count_pmf import CountPMF
from symbern.intraclass import p_from_rho, p_good_threshold, rho_from_p
from symbern.rational import format_rational, parse_rational


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")


def m_n(n: int) -> int:
    """ceil(n / 2)."""
    _check_n(n)
    return (n + 1) // 2


def p_min_binary(n: int) -> Fraction:
    """Smallest pair-agreement probability reachable by exchangeable fair bits."""
    m = m_n(n)
    return Fraction(m - 1, 2 * m - 1)


def f_min(n: int) -> CountPMF:
    """Uniform law on the middle layer (even n) or the two middle layers (odd n)."""
    m = m_n(n)
    f = [Fraction(0)] * (n + 1)
    if n % 2 == 0:
        f[m] = Fraction(1, binom(n, m))
    else:
        f[m - 1] = f[m] = Fraction(1, 2 * binom(n, m))
    return CountPMF(n, tuple(f))


def f_max(n: int) -> CountPMF:
    """All zeros or all ones, each with probability 1/2."""
    _check_n(n)
    f = [Fraction(0)] * (n + 1)
    f[0] = f[n] = Fraction(1, 2)
    return CountPMF(n, tuple(f))


@dataclass(frozen=True)
class FeasibilityReport:
    n: int
    p: Fraction
    rho: Fraction
    good: bool
    symmetric_binary_good: bool
    p_psd_threshold: Fraction
    p_min_binary: Fraction

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": format_rational(self.p),
            "rho": format_rational(self.rho),
            "good": self.good,
            "symmetric_binary_good": self.symmetric_binary_good,
            "p_psd_threshold": format_rational(self.p_psd_threshold),
            "p_min_binary": format_rational(self.p_min_binary),
        }


class InfeasibleTarget(ValueError):
    """No exchangeable fair-bit law has the requested pair agreement."""

    def __init__(self, report: FeasibilityReport):
        super().__init__(
            f"p={report.p} is outside [{report.p_min_binary}, 1] for n={report.n}"
        )
        self.report = report


def classify(n: int, value, kind: str = "p") -> FeasibilityReport:
    """Classify a target given as agreement probability (``kind="p"``) or correlation (``kind="rho"``)."""
    _check_n(n)
    value = parse_rational(value)
    if kind == "p":
        p = value
        rho = rho_from_p(p)
    elif kind == "rho":
        p = p_from_rho(value)
        rho = value
    else:
        raise ValueError(f"kind must be 'p' or 'rho', got {kind!r}")
    threshold = p_good_threshold(n)
    p_min = p_min_binary(n)
    return FeasibilityReport(
        n=n,
        p=p,
        rho=rho,
        good=p >= threshold,
        symmetric_binary_good=p >= p_min,
        p_psd_threshold=threshold,
        p_min_binary=p_min,
    )


def construct_for_p(n: int, p) -> CountPMF:
    """Mix ``f_min(n)`` and ``f_max(n)`` so the pair agreement is exactly ``p``.

    Agreement is linear in ``f``, so the weight on ``f_min`` is
    ``(1 - p) / (1 - p_min_binary(n))``; ``p_min_binary(n) < 1/2`` keeps the
    denominator positive.
    """
    report = classify(n, p, "p")
    if not report.symmetric_binary_good:
        raise InfeasibleTarget(report)
    lam = (1 - report.p) / (1 - report.p_min_binary)
    lo, hi = f_min(n).f, f_max(n).f
    return CountPMF(n, tuple(lam * a + (1 - lam) * b for a, b in zip(lo, hi)))
