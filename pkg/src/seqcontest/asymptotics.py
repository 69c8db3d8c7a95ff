"""Large-contest approximations and closed-form extremal contests.

When every period is large, equilibrium total effort approaches the
saturation point xbar and period-s effort behaves like
``xbar / prod_{k<=s} (1 + n_k)``. For linear h these product formulas are
exact. The extremal-contest rules below are derived from them, so they are
guaranteed under linear h and are only approximations otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import accumulate
from typing import Iterable

from seqcontest.contests import Contest, enumerate_contests
from seqcontest.equilibrium import solve_equilibrium
from seqcontest.errors import InvalidContest
from seqcontest.payoff import MarginalBenefit

IBAR_TIE_TOL = 1e-12


@dataclass(frozen=True)
class ApproxOutcome:
    contest: Contest
    approx_efforts: tuple[float, ...]
    approx_h: float
    approx_X: float

    def player_effort(self, i: int) -> float:
        """Approximate effort of the i-th highest effort player (1-based)."""
        return self.approx_efforts[period_of_player(self.contest, i)]

    def player_payoff(self, i: int) -> float:
        return self.player_effort(i) * self.approx_h


def approx_equilibrium(m: MarginalBenefit, c: Contest) -> ApproxOutcome:
    products = list(accumulate((1 + p for p in c.periods), lambda a, b: a * b))
    efforts = tuple(m.xbar / P for P in products)
    total = products[-1]
    return ApproxOutcome(c, efforts, m.alpha * m.xbar / total, m.xbar * (1.0 - 1.0 / total))


def period_of_player(c: Contest, i: int) -> int:
    """0-based period holding the i-th mover; earlier periods exert more effort."""
    if not 1 <= i <= c.n:
        raise InvalidContest(f"player index {i} outside 1..{c.n}")
    for s, cum in enumerate(accumulate(c.periods)):
        if cum >= i:
            return s
    raise AssertionError("unreachable")


def ibar(n: int) -> float:
    """Largest i for which (i, n - i) beats the simultaneous contest on the i-th payoff."""
    return -0.5 + math.sqrt(1.25 + n)


@dataclass(frozen=True)
class Extremal:
    """Closed-form optimum; ``family`` marks a representative of a larger optimal set."""

    contests: tuple[Contest, ...]
    family: str | None = None

    @property
    def contest(self) -> Contest:
        return self.contests[0]


def _check_index(n: int, i: int) -> None:
    if n < 1:
        raise InvalidContest(f"need n >= 1, got {n}")
    if not 1 <= i <= n:
        raise InvalidContest(f"i = {i} outside 1..{n}")


def ith_effort_extremal(n: int, i: int, direction: str) -> Extremal:
    """Contest minimizing or maximizing the i-th highest effort.

    The minimizer puts i - 1 singletons ahead of one block of the remaining
    n + 1 - i players. Any contest whose first period holds i players is a
    maximizer; (i, n - i) is returned as its representative.
    """
    _check_index(n, i)
    if direction == "min":
        return Extremal((Contest((1,) * (i - 1) + (n + 1 - i,)),))
    if direction == "max":
        c = Contest((n,)) if i == n else Contest((i, n - i))
        return Extremal((c,), family=f"first period of size {i}" if i < n - 1 else None)
    raise ValueError(f"direction must be 'min' or 'max', got {direction!r}")


def ith_payoff_extremal(n: int, i: int, direction: str) -> Extremal:
    """Contest minimizing or maximizing the i-th highest payoff.

    The minimizer is i - 1 singletons, then a pair, then singletons; for the
    last mover (i = n) there is no one left to pair with and the sequential
    contest is returned. The maximizer is (i, n - i) while i <= ibar(n) and
    the simultaneous contest beyond; both are returned at an exact tie.
    """
    _check_index(n, i)
    if direction == "min":
        if i == n:
            return Extremal((Contest.sequential(n),))
        return Extremal((Contest((1,) * (i - 1) + (2,) + (1,) * (n - i - 1)),))
    if direction == "max":
        if i == n:
            return Extremal((Contest.simultaneous(n),))
        split, simul = Contest((i, n - i)), Contest.simultaneous(n)
        gap = i - ibar(n)
        if abs(gap) < IBAR_TIE_TOL:
            return Extremal((split, simul))
        return Extremal((split,) if gap < 0 else (simul,))
    raise ValueError(f"direction must be 'min' or 'max', got {direction!r}")


@dataclass(frozen=True)
class ExtremalCheck:
    n: int
    i: int
    kind: str  # "effort" | "payoff"
    direction: str
    closed_form: tuple[Contest, ...]
    optimum: float
    argopt: tuple[Contest, ...]
    ok: bool


def check_extremals(m: MarginalBenefit, n: int, rel_tol: float = 1e-12) -> list[ExtremalCheck]:
    """Compare the closed forms with exhaustive search over approximate objectives."""
    approx = [approx_equilibrium(m, c) for c in enumerate_contests(n)]
    out = []
    for i in range(1, n + 1):
        for kind, rule, value in (
            ("effort", ith_effort_extremal, ApproxOutcome.player_effort),
            ("payoff", ith_payoff_extremal, ApproxOutcome.player_payoff),
        ):
            vals = {a.contest: value(a, i) for a in approx}
            for direction in ("min", "max"):
                best = (min if direction == "min" else max)(vals.values())
                tol = rel_tol * max(abs(best), 1e-300)
                argopt = tuple(c for c, v in vals.items() if abs(v - best) <= tol)
                closed = rule(n, i, direction).contests
                ok = all(abs(vals[c] - best) <= tol for c in closed)
                out.append(ExtremalCheck(n, i, kind, direction, closed, best, argopt, ok))
    return out


@dataclass(frozen=True)
class GapRow:
    contest: Contest
    exact_X: float
    approx_X: float
    exact_efforts: tuple[float, ...]
    approx_efforts: tuple[float, ...]

    @property
    def gap(self) -> float:
        return abs(self.approx_X - self.exact_X)


def compare_exact(m: MarginalBenefit, contests: Iterable[Contest], grid_points: int | None = None) -> list[GapRow]:
    rows = []
    for c in contests:
        e = solve_equilibrium(m, c, grid_points, check=False) if grid_points else solve_equilibrium(m, c, check=False)
        a = approx_equilibrium(m, c)
        rows.append(GapRow(c, e.X_star, a.approx_X, e.period_efforts, a.approx_efforts))
    return rows
