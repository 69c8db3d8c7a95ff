"""Designer objectives, exhaustive search over disclosure structures, and
machine-checkable versions of the optimal-contest results."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence

from seqcontest.contests import (
    Contest,
    enumerate_contests,
    exhaustive_cap,
    strictly_refines,
)
from seqcontest.equilibrium import DEFAULT_GRID, EquilibriumOutcome, solve_equilibrium, solve_many
from seqcontest.errors import InvalidContest, SolverError
from seqcontest.payoff import MarginalBenefit

TIE_TOL = 1e-9


class Objective(str, Enum):
    TOTAL_EFFORT = "total_effort"
    TOTAL_WELFARE = "total_welfare"
    LOWEST_EFFORT = "lowest_effort"
    LOWEST_PAYOFF = "lowest_payoff"
    HIGHEST_EFFORT = "highest_effort"
    HIGHEST_PAYOFF = "highest_payoff"
    EFFORT_INEQUALITY = "effort_inequality"
    PAYOFF_INEQUALITY = "payoff_inequality"


class Direction(str, Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class ObjectiveReport:
    total_effort: float
    total_welfare: float
    lowest_effort: float
    lowest_payoff: float
    highest_effort: float
    highest_payoff: float
    effort_inequality: float
    payoff_inequality: float

    @classmethod
    def from_outcome(cls, out: EquilibriumOutcome) -> "ObjectiveReport":
        # earlier movers work harder and earn more, so extremes sit in periods 1 and T
        x, u = out.period_efforts, out.period_payoffs
        return cls(
            total_effort=out.X_star,
            total_welfare=out.welfare,
            lowest_effort=x[-1],
            lowest_payoff=u[-1],
            highest_effort=x[0],
            highest_payoff=u[0],
            effort_inequality=x[0] - x[-1],
            payoff_inequality=u[0] - u[-1],
        )

    def value(self, objective: Objective | str) -> float:
        return getattr(self, Objective(objective).value)


def evaluate_objectives(m: MarginalBenefit, c: Contest, grid_points: int = DEFAULT_GRID) -> ObjectiveReport:
    return ObjectiveReport.from_outcome(solve_equilibrium(m, c, grid_points, check=False))


@dataclass(frozen=True)
class ContestTable:
    """Every composition of n with its outcome (or the solver error)."""

    n: int
    contests: tuple[Contest, ...]
    outcomes: tuple[EquilibriumOutcome | SolverError, ...]

    def solved(self) -> Iterable[tuple[Contest, EquilibriumOutcome, ObjectiveReport]]:
        for c, o in zip(self.contests, self.outcomes):
            if not isinstance(o, Exception):
                yield c, o, ObjectiveReport.from_outcome(o)

    @property
    def failures(self) -> int:
        return sum(isinstance(o, Exception) for o in self.outcomes)


@lru_cache(maxsize=32)
def contest_table(m: MarginalBenefit, n: int, grid_points: int = DEFAULT_GRID,
                  check: bool = True) -> ContestTable:
    contests = tuple(enumerate_contests(n))
    return ContestTable(n, contests, tuple(solve_many(m, contests, grid_points, check=check)))


@dataclass(frozen=True)
class SearchResult:
    objective: Objective
    direction: Direction
    n: int
    optimal_value: float
    argopt: tuple[Contest, ...]
    values: tuple[tuple[Contest, float], ...] = field(repr=False)
    failures: int = 0

    def to_dict(self) -> dict:
        return {
            "objective": self.objective.value,
            "direction": self.direction.value,
            "n": self.n,
            "optimal_value": self.optimal_value,
            "argopt": [str(c) for c in self.argopt],
            "failures": self.failures,
        }


def _best(values: Sequence[tuple[Contest, float]], direction: Direction, tie_tol: float):
    if not values:
        raise SolverError("no contest could be solved")
    pick = min if direction is Direction.MIN else max
    best = pick(v for _, v in values)
    return best, tuple(c for c, v in values if abs(v - best) <= tie_tol)


def search(m: MarginalBenefit, n: int, objective: Objective | str, direction: Direction | str,
           grid_points: int = DEFAULT_GRID, tie_tol: float = TIE_TOL,
           table: ContestTable | None = None) -> SearchResult:
    """Exhaustive optimum of one objective over all 2^(n-1) contests.

    Every contest within ``tie_tol`` of the optimum is reported in ``argopt``.
    """
    objective, direction = Objective(objective), Direction(direction)
    if not 2 <= n <= exhaustive_cap():
        raise InvalidContest(f"n = {n} outside 2..{exhaustive_cap()}")
    table = table or contest_table(m, n, grid_points)
    values = tuple((c, rep.value(objective)) for c, _, rep in table.solved())
    best, argopt = _best(values, direction, tie_tol)
    return SearchResult(objective, direction, n, best, argopt, values, table.failures)


# verification ---------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    proposition: str
    n: int
    claim: str
    status: str  # "pass" | "fail" | "n/a"
    witnesses: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"proposition": self.proposition, "n": self.n, "claim": self.claim,
                "status": self.status, "witnesses": list(self.witnesses)}


def _fmt(cs: Iterable[Contest]) -> tuple[str, ...]:
    return tuple(f"({c})" for c in cs)


def _strictness_witness(table: ContestTable, tol: float) -> str | None:
    """A covering pair (one extra disclosure) whose total effort does not rise."""
    X = {c.contest_id: o.X_star for c, o, _ in table.solved()}
    for cid, x in X.items():
        for j in range(table.n - 1):
            if cid >> j & 1:
                coarse = cid & ~(1 << j)
                if coarse in X and not x > X[coarse] + tol:
                    return (f"X*({Contest.from_id(table.n, cid)}) = {x:.12g} is not above "
                            f"X*({Contest.from_id(table.n, coarse)}) = {X[coarse]:.12g}")
    return None


def verify_propositions(m: MarginalBenefit, n_range: Iterable[int], grid_points: int = DEFAULT_GRID,
                        tie_tol: float = TIE_TOL) -> list[Check]:
    """Check the qualitative optimal-contest results on exhaustive search data.

    A value of n is reported "n/a" when its contests fall outside the
    theory's domain: a solver failure, a failed assumption flag, or total
    effort that does not strictly increase with an added disclosure.
    """
    linear = m.family == "linear"
    out: list[Check] = []
    for n in n_range:
        table = contest_table(m, n, grid_points)
        reason = None
        if table.failures:
            reason = f"{table.failures} contests could not be solved"
        else:
            bad = [c for c, o, _ in table.solved() if not (o.flags.assumption1_ok and o.flags.assumption2_ok)]
            if bad:
                reason = f"assumption flags fail for ({bad[0]})"
            else:
                reason = _strictness_witness(table, tie_tol)
        if reason:
            out.extend(Check(p, n, "preconditions", "n/a", (reason,)) for p in ("P1", "P2", "P3", "P4", "P5"))
            continue
        out.extend(_checks_for_n(m, n, table, tie_tol, linear))
    return out


def _checks_for_n(m, n, table, tol, linear) -> list[Check]:
    def arg(obj, d):
        return set(search(m, n, obj, d, tie_tol=tol, table=table).argopt)

    seq, sim = Contest.sequential(n), Contest.simultaneous(n)
    checks: list[Check] = []

    def add(prop, claim, ok, witnesses=()):
        checks.append(Check(prop, n, claim, "pass" if ok else "fail", tuple(witnesses)))

    O = Objective
    for prop, obj, lo, hi in (
        ("P1", O.TOTAL_EFFORT, sim, seq),
        ("P1", O.TOTAL_WELFARE, seq, sim),
        ("P2", O.LOWEST_EFFORT, seq, sim),
        ("P2", O.LOWEST_PAYOFF, seq, sim),
    ):
        amin, amax = arg(obj, "min"), arg(obj, "max")
        add(prop, f"{obj.value} minimized by ({lo})", amin == {lo}, _fmt(sorted(amin)))
        add(prop, f"{obj.value} maximized by ({hi})", amax == {hi}, _fmt(sorted(amax)))

    hx_min, hx_max = arg(O.HIGHEST_EFFORT, "min"), arg(O.HIGHEST_EFFORT, "max")
    add("P3", "highest_effort minimized by simultaneous", hx_min == {sim}, _fmt(sorted(hx_min)))
    bad = [c for c in hx_max if c.periods[0] != 1]
    add("P3", "every highest_effort maximizer has n_1 = 1", not bad, _fmt(sorted(bad or hx_max)))
    if linear:
        leaders = {c for c in table.contests if c.is_single_leader()}
        add("P3", "linear h: every single-leader contest maximizes highest_effort",
            hx_max == leaders, _fmt(sorted(leaders ^ hx_max)))

    hu_min, hu_max = arg(O.HIGHEST_PAYOFF, "min"), arg(O.HIGHEST_PAYOFF, "max")
    bad = [c for c in hu_min if any(c.periods[0] < p for p in c.periods)]
    add("P4", "every highest_payoff minimizer has n_1 >= n_t", not bad, _fmt(sorted(bad or hu_min)))
    bad = [c for c in hu_max if c.periods[0] != 1]
    add("P4", "every highest_payoff maximizer has n_1 = 1", not bad, _fmt(sorted(bad or hu_max)))
    pairs = [(p, e) for p in hu_max for e in hx_max if strictly_refines(p, e)]
    add("P4", "no highest_payoff maximizer is more informative than a highest_effort maximizer",
        not pairs, [f"({p}) finer than ({e})" for p, e in pairs])
    if linear:
        two = Contest.two_then_singletons(n)
        first = Contest.first_mover(n)
        add("P4", f"linear h: highest_payoff minimized by ({two})", hu_min == {two}, _fmt(sorted(hu_min)))
        add("P4", f"linear h: highest_payoff maximized by ({first})", hu_max == {first}, _fmt(sorted(hu_max)))

    dx_min, dx_max = arg(O.EFFORT_INEQUALITY, "min"), arg(O.EFFORT_INEQUALITY, "max")
    du_min, du_max = arg(O.PAYOFF_INEQUALITY, "min"), arg(O.PAYOFF_INEQUALITY, "max")
    add("P5", "effort_inequality minimized by simultaneous", dx_min == {sim}, _fmt(sorted(dx_min)))
    add("P5", "payoff_inequality minimized by simultaneous", du_min == {sim}, _fmt(sorted(du_min)))
    bad = [c for c in dx_max if c.periods[0] != 1]
    add("P5", "every effort_inequality maximizer has n_1 = 1", not bad, _fmt(sorted(bad or dx_max)))
    pairs = [(e, d) for d in dx_max for e in hx_max if strictly_refines(e, d)]
    add("P5", "no effort_inequality maximizer is less informative than a highest_effort maximizer",
        not pairs, [f"({e}) finer than ({d})" for e, d in pairs])
    bad = [c for c in du_max if c.periods[0] != 1]
    add("P5", "every payoff_inequality maximizer has n_1 = 1", not bad, _fmt(sorted(bad or du_max)))
    pairs = [(p, q) for q in du_max for p in hu_max if strictly_refines(p, q)]
    add("P5", "no payoff_inequality maximizer is less informative than a highest_payoff maximizer",
        not pairs, [f"({p}) finer than ({q})" for p, q in pairs])
    pairs = [(q, d) for q in du_max for d in dx_max if strictly_refines(q, d)]
    add("P5", "no payoff_inequality maximizer is more informative than an effort_inequality maximizer",
        not pairs, [f"({q}) finer than ({d})" for q, d in pairs])
    if linear:
        first = Contest.first_mover(n)
        add("P5", "linear h: effort_inequality maximized by sequential", dx_max == {seq}, _fmt(sorted(dx_max)))
        add("P5", f"linear h: payoff_inequality maximized by ({first})", du_max == {first}, _fmt(sorted(du_max)))
    return checks


# summary table ----------------------------------------------------------------


def leader_pairwise_family(n: int) -> set[Contest]:
    """Single-leader contests whose followers form pairs (plus one single when n is even)."""
    target = sorted(Contest.leader_pairwise(n).periods[1:])
    return {c for c in enumerate_contests(n, cap=max(n, exhaustive_cap()))
            if c.periods[0] == 1 and sorted(c.periods[1:]) == target}


def summary_table_expectations(n: int) -> list[tuple[Objective, Direction, str, set[Contest]]]:
    """The summary table of optimal contests, instantiated at n players."""
    O, D = Objective, Direction
    seq, sim = Contest.sequential(n), Contest.simultaneous(n)
    first = Contest.first_mover(n)
    rows = [
        (O.TOTAL_EFFORT, D.MIN, "simultaneous", {sim}),
        (O.TOTAL_EFFORT, D.MAX, "sequential", {seq}),
        (O.TOTAL_WELFARE, D.MIN, "sequential", {seq}),
        (O.TOTAL_WELFARE, D.MAX, "simultaneous", {sim}),
        (O.LOWEST_EFFORT, D.MIN, "sequential", {seq}),
        (O.LOWEST_EFFORT, D.MAX, "simultaneous", {sim}),
        (O.LOWEST_PAYOFF, D.MIN, "sequential", {seq}),
        (O.LOWEST_PAYOFF, D.MAX, "simultaneous", {sim}),
        (O.HIGHEST_EFFORT, D.MIN, "simultaneous", {sim}),
        (O.HIGHEST_EFFORT, D.MAX, "single leader, pairwise followers", leader_pairwise_family(n)),
        (O.HIGHEST_PAYOFF, D.MIN, "(2,1,...,1)", {Contest.two_then_singletons(n)}),
        (O.HIGHEST_PAYOFF, D.MAX, "first-mover", {first}),
        (O.EFFORT_INEQUALITY, D.MIN, "simultaneous", {sim}),
        (O.EFFORT_INEQUALITY, D.MAX, "sequential", {seq}),
        (O.PAYOFF_INEQUALITY, D.MIN, "simultaneous", {sim}),
        (O.PAYOFF_INEQUALITY, D.MAX, "first-mover", {first}),
    ]
    return rows


@dataclass(frozen=True)
class TableCell:
    objective: Objective
    direction: Direction
    n: int
    expected: str
    argopt: tuple[Contest, ...]
    status: str

    def to_dict(self) -> dict:
        return {"objective": self.objective.value, "direction": self.direction.value, "n": self.n,
                "expected": self.expected, "argopt": [str(c) for c in self.argopt], "status": self.status}


def reproduce_summary_table(m: MarginalBenefit, n_range: Iterable[int], grid_points: int = DEFAULT_GRID,
                     tie_tol: float = TIE_TOL) -> list[TableCell]:
    """Each cell passes when the optimizer set equals the expected set.

    With two players every Tullock contest ties on every objective, so there a
    cell passes as long as the expected contest is among the optimizers.
    """
    cells = []
    for n in n_range:
        table = contest_table(m, n, grid_points)
        for obj, d, label, expected in summary_table_expectations(n):
            res = search(m, n, obj, d, tie_tol=tie_tol, table=table)
            found = set(res.argopt)
            ok = found == expected or (_all_tied(table, obj, tie_tol) and expected <= found)
            cells.append(TableCell(obj, d, n, label, tuple(sorted(found)), "pass" if ok else "fail"))
    return cells


def _all_tied(table: ContestTable, obj: Objective, tol: float) -> bool:
    vals = [rep.value(obj) for _, _, rep in table.solved()]
    return max(vals) - min(vals) <= tol
