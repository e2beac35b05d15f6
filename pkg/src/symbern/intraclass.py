"""Intraclass covariance matrices ``(a - b) I + b 11^T`` and their feasibility bounds."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from symbern.rational import parse_rational


@dataclass(frozen=True)
class IntraclassSpec:
    """Common variance ``a`` and common covariance ``b`` of ``n`` variables."""

    n: int
    a: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "a", parse_rational(self.a))
        object.__setattr__(self, "b", parse_rational(self.b))
        if self.a == 0:
            raise ValueError("common variance a must be nonzero")

    @classmethod
    def from_rho(cls, n: int, rho, a=1) -> IntraclassSpec:
        a = parse_rational(a)
        return cls(n, a, parse_rational(rho) * a)

    @property
    def rho(self) -> Fraction:
        return self.b / self.a


@dataclass(frozen=True)
class CovarianceMatrix:
    n: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.n or any(len(row) != self.n for row in self.entries):
            raise ValueError("covariance matrix must be n x n")
        for i in range(self.n):
            for j in range(i):
                if self.entries[i][j] != self.entries[j][i]:
                    raise ValueError(f"matrix not symmetric at ({i}, {j})")

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def intraclass_parts(self) -> tuple[Fraction, Fraction] | None:
        """``(a, b)`` if the matrix has intraclass form, else ``None``."""
        a = self.entries[0][0]
        b = self.entries[0][1] if self.n > 1 else Fraction(0)
        for i in range(self.n):
            for j in range(self.n):
                if self.entries[i][j] != (a if i == j else b):
                    return None
        return a, b


def build_matrix(spec: IntraclassSpec) -> CovarianceMatrix:
    n, a, b = spec.n, spec.a, spec.b
    rows = tuple(tuple(a if i == j else b for j in range(n)) for i in range(n))
    return CovarianceMatrix(n, rows)


def eigenvalues(spec: IntraclassSpec) -> tuple[Fraction, Fraction, tuple[int, int]]:
    """Eigenvalue along the all-ones vector, the eigenvalue on its complement, and multiplicities."""
    n, a, b = spec.n, spec.a, spec.b
    return a - b + b * n, a - b, (1, n - 1)


def is_psd(spec: IntraclassSpec) -> bool:
    top, rest, _ = eigenvalues(spec)
    return top >= 0 and rest >= 0


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")


def rho_min_psd(n: int) -> Fraction:
    """Smallest common correlation a valid n x n intraclass covariance matrix admits."""
    _check_n(n)
    return Fraction(-1, n - 1)


def p_from_rho(rho) -> Fraction:
    rho = parse_rational(rho)
    if not -1 <= rho <= 1:
        raise ValueError(f"correlation must lie in [-1, 1], got {rho}")
    return (1 + rho) / 2


def rho_from_p(p) -> Fraction:
    p = parse_rational(p)
    if not 0 <= p <= 1:
        raise ValueError(f"agreement probability must lie in [0, 1], got {p}")
    return 2 * p - 1


def p_good_threshold(n: int) -> Fraction:
    """Agreement probability matching ``rho_min_psd(n)``: (n - 2) / (2 (n - 1))."""
    _check_n(n)
    return Fraction(n - 2, 2 * (n - 1))
