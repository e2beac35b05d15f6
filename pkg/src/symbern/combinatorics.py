"""Exact binomial coefficients and the pair-agreement coefficients built on them."""

from __future__ import annotations

import threading
from fractions import Fraction

_ROWS: list[tuple[int, ...]] = [(1,)]
_ROWS_LOCK = threading.Lock()


def pascal_row(m: int) -> tuple[int, ...]:
    """Row ``m`` of Pascal's triangle; rows grow by the additive recurrence and are cached."""
    if m < 0:
        raise ValueError(f"binomial row must be nonnegative, got {m}")
    if m >= len(_ROWS):
        with _ROWS_LOCK:
            while len(_ROWS) <= m:
                prev = _ROWS[-1]
                inner = tuple(prev[i] + prev[i + 1] for i in range(len(prev) - 1))
                _ROWS.append((1,) + inner + (1,))
    return _ROWS[m]


def binom(m: int, k: int) -> int:
    """C(m, k), zero when ``k`` falls outside ``[0, m]``."""
    if m < 0:
        raise ValueError(f"binom requires m >= 0, got m={m}")
    if k < 0 or k > m:
        return 0
    return pascal_row(m)[k]


def _check_nk(n: int, k: int) -> None:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}], got {k}")


def a_nk(n: int, k: int) -> int:
    """C(n-2, k) + C(n-2, k-2).

    Counts the weight-``k`` vectors in {0,1}^n whose first two coordinates
    agree, so ``sum_k a_nk(n, k) * f[k]`` is the pair-agreement probability
    of an exchangeable law with per-vector masses ``f``.
    """
    _check_nk(n, k)
    return binom(n - 2, k) + binom(n - 2, k - 2)


def r_nk(n: int, k: int) -> Fraction:
    """Closed form of ``a_nk(n, k) / C(n, k)``; smallest at the middle layer(s)."""
    _check_nk(n, k)
    return Fraction((n - k) * (n - k - 1) + k * (k - 1), n * (n - 1))
