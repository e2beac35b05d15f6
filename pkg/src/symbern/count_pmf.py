"""Exchangeable laws on {0,1}^n stored by the mass of each vector of a given weight.

A :class:`CountPMF` holds ``f[k]``, the probability of *each* individual bit
vector with ``k`` ones, so the total mass on weight ``k`` is ``C(n, k) f[k]``.
Three linear functionals of ``f`` matter:

* normalization, ``sum_k C(n, k) f[k] = 1``;
* fair marginals, ``sum_k C(n-1, k) f[k] = 1/2`` (the mass of vectors with a
  fixed coordinate equal to 0);
* pair agreement, ``sum_k a_nk(n, k) f[k] = P(X_i = X_j)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Any, Sequence

import numpy as np

from symbern.combinatorics import a_nk, binom
from symbern.intraclass import CovarianceMatrix
from symbern.rational import format_rational, parse_rational

FULL_N_LIMIT = 16
HALF = Fraction(1, 2)


class MarginalViolation(ValueError):
    """The law does not give every coordinate P(X_i = 1) = 1/2."""


def _as_fractions(values: Sequence[Any]) -> tuple[Fraction, ...]:
    return tuple(parse_rational(v) for v in values)


@dataclass(frozen=True)
class CountPMF:
    n: int
    f: tuple[Fraction, ...]
    # Set by symmetrize(): whether the source law had equal pair agreements
    # and individually fair coordinates.
    equal_agreements: bool | None = field(default=None, compare=False, repr=False)
    fair_marginals: bool | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n!r}")
        f = _as_fractions(self.f)
        object.__setattr__(self, "f", f)
        if len(f) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} entries for n={self.n}, got {len(f)}")
        if any(v < 0 for v in f):
            raise ValueError("count masses must be nonnegative")
        total = sum(binom(self.n, k) * v for k, v in enumerate(f))
        if total != 1:
            raise ValueError(f"total mass sum_k C(n,k) f[k] is {total}, not 1")

    def layer_masses(self) -> tuple[Fraction, ...]:
        """Probability that the vector has exactly ``k`` ones, for each ``k``."""
        return tuple(binom(self.n, k) * v for k, v in enumerate(self.f))

    def support(self) -> tuple[int, ...]:
        return tuple(k for k, v in enumerate(self.f) if v > 0)

    def to_json(self) -> dict:
        return {"n": self.n, "f": [format_rational(v) for v in self.f]}

    @classmethod
    def from_json(cls, data: dict) -> CountPMF:
        n, values = _read_schema(data, "f")
        if len(values) != n + 1:
            raise ValueError(f"'f' must have n+1={n + 1} entries, got {len(values)}")
        return cls(n, _as_fractions(values))


@dataclass(frozen=True)
class FullPMF:
    """Mass ``g[x]`` for every x in {0,1}^n; bit ``i`` of the index is coordinate ``i + 1``."""

    n: int
    g: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or not 2 <= self.n <= FULL_N_LIMIT:
            raise ValueError(f"FullPMF needs 2 <= n <= {FULL_N_LIMIT}, got {self.n!r}")
        g = _as_fractions(self.g)
        object.__setattr__(self, "g", g)
        if len(g) != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} entries, got {len(g)}")
        if any(v < 0 for v in g):
            raise ValueError("probabilities must be nonnegative")
        if sum(g) != 1:
            raise ValueError(f"probabilities sum to {sum(g)}, not 1")

    def _scaled(self) -> tuple[np.ndarray, int]:
        # common-denominator integers, object dtype to keep them unbounded
        den = lcm(*(v.denominator for v in self.g))
        ints = np.array([v.numerator * (den // v.denominator) for v in self.g], dtype=object)
        return ints, den

    def _bits(self) -> np.ndarray:
        idx = np.arange(1 << self.n, dtype=np.int64)
        return ((idx[:, None] >> np.arange(self.n)) & 1).astype(bool)

    def marginals_zero(self) -> tuple[Fraction, ...]:
        """P(X_i = 0) for each coordinate."""
        ints, den = self._scaled()
        bits = self._bits()
        return tuple(Fraction(ints[~bits[:, i]].sum(), den) for i in range(self.n))

    def pair_agreements(self) -> dict[tuple[int, int], Fraction]:
        """P(X_i = X_j) for each pair ``i < j`` (0-based)."""
        ints, den = self._scaled()
        bits = self._bits()
        return {
            (i, j): Fraction(ints[bits[:, i] == bits[:, j]].sum(), den)
            for i in range(self.n)
            for j in range(i + 1, self.n)
        }

    def to_json(self) -> dict:
        return {"n": self.n, "g": [format_rational(v) for v in self.g]}

    @classmethod
    def from_json(cls, data: dict) -> FullPMF:
        n, values = _read_schema(data, "g")
        if not 2 <= n <= FULL_N_LIMIT:
            raise ValueError(f"n must lie in [2, {FULL_N_LIMIT}] for a full PMF, got {n}")
        if len(values) != 1 << n:
            raise ValueError(f"'g' must have 2^n={1 << n} entries, got {len(values)}")
        return cls(n, _as_fractions(values))


def _read_schema(data: Any, key: str) -> tuple[int, list]:
    if not isinstance(data, dict) or set(data) != {"n", key}:
        raise ValueError(f"expected an object with exactly the keys 'n' and '{key}'")
    n, values = data["n"], data[key]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError("'n' must be an integer")
    if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
        raise ValueError(f"'{key}' must be a list of fraction strings")
    return n, values


def check_marginals(pmf: CountPMF) -> bool:
    """True iff every coordinate is a fair coin under ``pmf``."""
    n = pmf.n
    return sum(binom(n - 1, k) * v for k, v in enumerate(pmf.f)) == HALF


def _require_marginals(pmf: CountPMF) -> None:
    if not check_marginals(pmf):
        raise MarginalViolation("coordinates are not symmetric Bernoulli under this law")


def agreement_probability(pmf: CountPMF) -> Fraction:
    """P(X_i = X_j) for any pair ``i != j``."""
    _require_marginals(pmf)
    return sum((a_nk(pmf.n, k) * v for k, v in enumerate(pmf.f)), Fraction(0))


def covariance_matrix(pmf: CountPMF) -> CovarianceMatrix:
    _require_marginals(pmf)
    n = pmf.n
    p_one = sum((binom(n - 1, k - 1) * v for k, v in enumerate(pmf.f)), Fraction(0))
    p_both = sum((binom(n - 2, k - 2) * v for k, v in enumerate(pmf.f)), Fraction(0))
    var = p_one - p_one * p_one
    cov = p_both - p_one * p_one
    rows = tuple(tuple(var if i == j else cov for j in range(n)) for i in range(n))
    return CovarianceMatrix(n, rows)


def symmetrize(full: FullPMF) -> CountPMF:
    """Average ``full`` over all coordinate permutations.

    The permutation average gives every vector of weight ``k`` the mean mass
    of its weight class, so it is computed by bucketing on popcount.

    The average of the coordinate marginals must be 1/2, otherwise the
    result cannot have fair coordinates. Individually unfair coordinates
    and unequal pair agreements are tolerated; the flags ``fair_marginals``
    and ``equal_agreements`` on the result record whether ``full`` had them,
    and the result carries the averaged values.
    """
    n = full.n
    zeros = full.marginals_zero()
    if sum(zeros) != HALF * n:
        raise MarginalViolation(
            f"mean of P(X_i = 0) must be 1/2, got {sum(zeros) / n} from {list(map(str, zeros))}"
        )
    ints, den = full._scaled()
    weights = np.array([bin(x).count("1") for x in range(1 << n)])
    layer = [Fraction(ints[weights == k].sum(), den) for k in range(n + 1)]
    f = tuple(layer[k] / binom(n, k) for k in range(n + 1))
    agreements = set(full.pair_agreements().values())
    return CountPMF(
        n,
        f,
        equal_agreements=len(agreements) == 1,
        fair_marginals=all(z == HALF for z in zeros),
    )


def expand_to_full(pmf: CountPMF) -> FullPMF:
    if pmf.n > FULL_N_LIMIT:
        raise ValueError(f"full expansion limited to n <= {FULL_N_LIMIT}, got n={pmf.n}")
    return FullPMF(pmf.n, tuple(pmf.f[bin(x).count("1")] for x in range(1 << pmf.n)))
