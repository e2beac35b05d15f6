"""Exact-rational simplex and the two linear programs that pin down the minimal agreement.

The solver handles ``min c.x  s.t.  A x = b, x >= 0`` by a two-phase revised
simplex with artificial variables, falling back to Bland's smallest-index
rule on degenerate stalls so it cannot cycle. No floating point is involved
anywhere; a returned vertex is re-checked by exact substitution.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

try:
    from gmpy2 import mpq as _num
except ImportError:  # pragma: no cover - gmpy2 is optional
    _num = Fraction

from symbern.combinatorics import a_nk, binom
from symbern.constructors import p_min_binary
from symbern.rational import format_rational

log = logging.getLogger(__name__)

FULL_PROGRAM_MAX_N = 10
DEGENERATE_STREAK = 50


@dataclass(frozen=True)
class RationalLP:
    """Minimize ``objective . x`` subject to ``A x = b`` and ``x >= 0``."""

    objective: tuple[Fraction, ...]
    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        nvar = len(self.objective)
        if len(self.A) != len(self.b):
            raise ValueError("A and b disagree on the number of constraints")
        if any(len(row) != nvar for row in self.A):
            raise ValueError("every constraint row needs one coefficient per variable")
        if self.names and len(self.names) != nvar:
            raise ValueError("names must match the number of variables")

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x) if c and v), Fraction(0))

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.num_vars or any(v < 0 for v in x):
            return False
        nz = [(j, v) for j, v in enumerate(x) if v]
        return all(sum((row[j] * v for j, v in nz), Fraction(0)) == rhs for row, rhs in zip(self.A, self.b))

    def with_constraint(self, row: Sequence[Fraction], rhs: Fraction) -> RationalLP:
        return RationalLP(self.objective, self.A + (tuple(row),), self.b + (rhs,), self.names)


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    optimum: Fraction | None = None
    vertex: tuple[Fraction, ...] | None = None
    pivots: int = 0


class _RevisedSimplex:
    """Revised simplex over exact rationals with an explicit basis inverse.

    Columns ``0 .. nvar-1`` are the program's variables and ``nvar ..
    nvar+m-1`` are one artificial per constraint row, which form the
    starting basis. Columns are priced from their nonzero entries only, so a
    pivot costs O(m^2 + nnz(A)) instead of a full tableau sweep.
    """

    def __init__(self, lp: RationalLP):
        self.nvar = nvar = lp.num_vars
        self.m = m = len(lp.b)
        zero, one = _num(0), _num(1)
        signs = [-1 if rhs < 0 else 1 for rhs in lp.b]
        cols: list[list[tuple[int, object]]] = [[] for _ in range(nvar + m)]
        for i, row in enumerate(lp.A):
            for j, v in enumerate(row):
                if v:
                    cols[j].append((i, _num(signs[i] * v)))
            cols[nvar + i].append((i, one))
        self.cols = cols
        self.x = [_num(s * rhs) for s, rhs in zip(signs, lp.b)]
        self.binv = [[one if i == k else zero for k in range(m)] for i in range(m)]
        self.basis = [nvar + i for i in range(m)]
        self.pivots = 0

    def _column(self, j: int) -> list:
        """B^-1 A_j."""
        col = self.cols[j]
        return [sum((row[r] * v for r, v in col if row[r]), _num(0)) for row in self.binv]

    def _duals(self, cost: list) -> list:
        y = [_num(0)] * self.m
        for i, bvar in enumerate(self.basis):
            cb = cost[bvar]
            if cb:
                row = self.binv[i]
                for k in range(self.m):
                    if row[k]:
                        y[k] += cb * row[k]
        return y

    def reduced_costs(self, cost: list, allowed: int) -> list:
        y = self._duals(cost)
        basic = set(self.basis)
        out = []
        for j in range(allowed):
            if j in basic:
                out.append(_num(0))
                continue
            d = cost[j]
            for r, v in self.cols[j]:
                if y[r]:
                    d -= y[r] * v
            out.append(d)
        return out

    def objective(self, cost: list):
        return sum((cost[b] * v for b, v in zip(self.basis, self.x) if cost[b]), _num(0))

    def pivot(self, r: int, enter: int, alpha: list) -> None:
        binv, x = self.binv, self.x
        piv = alpha[r]
        prow = [v / piv for v in binv[r]]
        xr = x[r] / piv
        binv[r], x[r] = prow, xr
        nz = [k for k, v in enumerate(prow) if v]
        for i in range(self.m):
            a = alpha[i]
            if i == r or not a:
                continue
            row = binv[i]
            for k in nz:
                row[k] -= a * prow[k]
            x[i] -= a * xr
        self.basis[r] = enter
        self.pivots += 1

    def run(self, cost: list, allowed: int) -> bool:
        """Pivot on columns ``< allowed`` until optimal; False when unbounded.

        Entering columns follow Dantzig's most-negative reduced cost. After
        ``DEGENERATE_STREAK`` consecutive zero-step pivots the entering
        choice switches to Bland's smallest index and stays there until a
        pivot makes strict progress, which rules out cycling. The leaving
        row is always the minimum ratio, ties broken by smallest basic index.
        """
        streak = 0
        while True:
            d = self.reduced_costs(cost, allowed)
            if streak >= DEGENERATE_STREAK:
                enter = next((j for j in range(allowed) if d[j] < 0), None)
            else:
                enter, best_d = None, 0
                for j, dj in enumerate(d):
                    if dj < best_d:
                        enter, best_d = j, dj
            if enter is None:
                return True
            alpha = self._column(enter)
            best = None
            for i, a in enumerate(alpha):
                if a > 0:
                    key = (self.x[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            streak = streak + 1 if best[0][0] == 0 else 0
            self.pivot(best[1], enter, alpha)

    def evict_artificials(self) -> None:
        """Swap zero-level artificials for original columns where the row allows it.

        An artificial whose row of B^-1 A is zero on every original column
        belongs to a redundant constraint; it stays basic at zero and can
        never leave, so it is harmless in phase 2.
        """
        basic = set(self.basis)
        for i in range(self.m):
            if self.basis[i] < self.nvar:
                continue
            row = self.binv[i]
            for j in range(self.nvar):
                if j in basic:
                    continue
                if sum((row[r] * v for r, v in self.cols[j] if row[r]), _num(0)):
                    self.pivot(i, j, self._column(j))
                    basic = set(self.basis)
                    break


def solve(lp: RationalLP) -> LPResult:
    """Two-phase simplex in exact arithmetic.

    Infeasible and unbounded programs are reported through ``status``. An
    optimal vertex is re-substituted into every constraint before returning.
    """
    nvar, m = lp.num_vars, len(lp.b)
    zero, one = _num(0), _num(1)
    sx = _RevisedSimplex(lp)
    phase1 = [zero] * nvar + [one] * m
    sx.run(phase1, nvar)
    if sx.objective(phase1) != 0:
        log.debug("phase 1 ended with infeasibility %s", sx.objective(phase1))
        return LPResult("infeasible", pivots=sx.pivots)
    sx.evict_artificials()

    phase2 = [_num(v) for v in lp.objective] + [zero] * m
    if not sx.run(phase2, nvar):
        return LPResult("unbounded", pivots=sx.pivots)

    x = [Fraction(0)] * nvar
    for bvar, v in zip(sx.basis, sx.x):
        if bvar < nvar:
            x[bvar] = Fraction(int(v.numerator), int(v.denominator))
    vertex = tuple(x)
    optimum = lp.value(vertex)
    reported = sx.objective(phase2)
    if not lp.is_feasible(vertex) or optimum != Fraction(int(reported.numerator), int(reported.denominator)):
        raise ArithmeticError("simplex certificate failed exact re-substitution")
    return LPResult("optimal", optimum, vertex, sx.pivots)


Coefficient = Callable[[int, int], int]


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")


def build_symmetrized_program(
    n: int, pinned_agreement: Fraction | None = None, coefficient: Coefficient = a_nk
) -> RationalLP:
    """Minimize pair agreement over per-weight masses ``f[0..n]`` with unit total mass and fair marginals.

    ``pinned_agreement`` adds the equality ``sum_k a_nk f[k] = value``.
    """
    _check_n(n)
    obj = tuple(Fraction(coefficient(n, k)) for k in range(n + 1))
    A = (
        tuple(Fraction(binom(n, k)) for k in range(n + 1)),
        tuple(Fraction(binom(n - 1, k)) for k in range(n + 1)),
    )
    b = (Fraction(1), Fraction(1, 2))
    lp = RationalLP(obj, A, b, tuple(f"f[{k}]" for k in range(n + 1)))
    if pinned_agreement is not None:
        lp = lp.with_constraint(obj, Fraction(pinned_agreement))
    return lp


def build_full_program(n: int) -> RationalLP:
    """Minimize a common pair agreement ``t`` over every joint law ``g`` on {0,1}^n with fair marginals.

    Variables are ``g[x]`` for ``x`` in index order (bit ``i`` is coordinate
    ``i + 1``) followed by ``t``.
    """
    if not isinstance(n, int) or not 2 <= n <= FULL_PROGRAM_MAX_N:
        raise ValueError(f"full program supports 2 <= n <= {FULL_PROGRAM_MAX_N}, got {n!r}")
    size = 1 << n
    zero, one = Fraction(0), Fraction(1)
    bit = [[(x >> i) & 1 for i in range(n)] for x in range(size)]
    A = [tuple([one] * size + [zero])]
    b = [one]
    for i in range(n):
        A.append(tuple([one if not bit[x][i] else zero for x in range(size)] + [zero]))
        b.append(Fraction(1, 2))
    for i, j in itertools.combinations(range(n), 2):
        A.append(tuple([one if bit[x][i] == bit[x][j] else zero for x in range(size)] + [-one]))
        b.append(zero)
    obj = tuple([zero] * size + [one])
    names = tuple(f"g[{x:0{n}b}]" for x in range(size)) + ("t",)
    return RationalLP(obj, tuple(A), tuple(b), names)


class VerificationFailure(AssertionError):
    pass


@dataclass
class ThresholdRecord:
    n: int
    closed_form: Fraction
    lp_optimum: Fraction | None
    full_lp_optimum: Fraction | None = None
    passed: bool = False
    message: str = ""

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "closed_form": format_rational(self.closed_form),
            "lp_optimum": None if self.lp_optimum is None else format_rational(self.lp_optimum),
            "pass": self.passed,
        }
        if self.full_lp_optimum is not None:
            out["full_lp_optimum"] = format_rational(self.full_lp_optimum)
        return out


@dataclass
class VerificationReport:
    records: list[ThresholdRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> list[ThresholdRecord]:
        return [r for r in self.records if not r.passed]

    def raise_for_failures(self) -> None:
        bad = self.failures()
        if bad:
            raise VerificationFailure("; ".join(r.message for r in bad))

    def to_json(self) -> dict:
        return {"pass": self.passed, "records": [r.to_json() for r in self.records]}


def _optimum(lp: RationalLP) -> Fraction | None:
    res = solve(lp)
    return res.optimum if res.status == "optimal" else None


def verify_thresholds(
    n_max: int, full: bool = True, coefficient: Coefficient = a_nk
) -> VerificationReport:
    """Solve the symmetrized program for each ``n`` in ``2..n_max`` and compare with the closed form.

    With ``full=True`` the 2^n-variable program is also solved for
    ``n <= 10`` and must give the same value. ``coefficient`` exists so a
    perturbed objective can serve as a negative control.
    """
    if not isinstance(n_max, int) or n_max < 2:
        raise ValueError(f"n_max must be an integer >= 2, got {n_max!r}")
    report = VerificationReport()
    for n in range(2, n_max + 1):
        closed = p_min_binary(n)
        sym = _optimum(build_symmetrized_program(n, coefficient=coefficient))
        rec = ThresholdRecord(n, closed, sym)
        problems = []
        if sym != closed:
            problems.append(f"n={n}: symmetrized LP optimum {sym} != closed form {closed}")
        if full and n <= FULL_PROGRAM_MAX_N:
            rec.full_lp_optimum = _optimum(build_full_program(n))
            if rec.full_lp_optimum != sym:
                problems.append(
                    f"n={n}: full LP optimum {rec.full_lp_optimum} != symmetrized LP optimum {sym}"
                )
        rec.passed = not problems
        rec.message = "; ".join(problems)
        log.info("n=%d closed=%s lp=%s full=%s", n, closed, sym, rec.full_lp_optimum)
        report.records.append(rec)
    return report
