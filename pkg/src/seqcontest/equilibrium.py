"""Subgame-perfect equilibrium of a disclosure structure via inverted best responses.

For a contest ``n`` the functions

    f_t(X) = X - sum_{k=1}^{T-t} S_k(n^t) g_k(X),      t = 0..T

have the total equilibrium effort as the highest root of ``f_0``. A player in
period t exerts ``g_1(X*) + sum_{k=1}^{T-t} S_k(n^t) g_{k+1}(X*)``.

Roots are located by scanning a uniform grid on (0, xbar] downward for the
first sign change and bisecting the bracket to floating-point resolution.
Many contests can be solved at once (`solve_many`); the grid scan then reuses
one cached g-tower per model.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Any, Sequence

import numpy as np

from seqcontest.contests import Contest, info_measures, subcontest
from seqcontest.errors import (
    ContestError,
    NegativeEffort,
    NonMonotoneAtRoot,
    NoRootFound,
    SolverError,
)
from seqcontest.payoff import MarginalBenefit, g_tower

DEFAULT_GRID = 4096
NEGATIVE_EFFORT_TOL = 1e-9
# f_0 this close to zero at the lower guard counts as a boundary root X* = 0
BOUNDARY_TOL = 1e-9
# g_k(X*) within this (relative to xbar) of zero counts as zero, not negative
ASSUMPTION2_TOL = 1e-12


@dataclass(frozen=True)
class FtCheck:
    """Assumption-1 clauses for one inverted best response f_t."""

    t: int
    root: float | None
    has_root: bool
    negative_below: bool
    increasing_above: bool
    violation_x: float | None = None


@dataclass(frozen=True)
class AssumptionReport:
    """``assumption2_ok`` allows g_k(X*) = 0 up to round-off;
    ``assumption2_strict`` demands g_k(X*) > 0 (fails for every sequential
    Tullock contest, where g_n(X*) vanishes exactly)."""

    assumption1_ok: bool
    assumption2_ok: bool
    interior: bool
    per_period: tuple[FtCheck, ...] = ()
    g_at_root: tuple[float, ...] = ()
    message: str = ""
    assumption2_strict: bool = False


@dataclass(frozen=True)
class SolverFlags:
    assumption1_ok: bool
    assumption2_ok: bool
    root_bracket: tuple[float, float]
    residual: float
    slope: float
    degenerate: bool = False
    assumptions: AssumptionReport | None = field(default=None, repr=False)


@dataclass(frozen=True)
class EquilibriumOutcome:
    contest: Contest
    X_star: float
    period_efforts: tuple[float, ...]
    period_payoffs: tuple[float, ...]
    welfare: float
    h_star: float
    flags: SolverFlags | Any  # OracleFlags for grid solutions

    def to_dict(self) -> dict:
        flags = asdict(self.flags)
        flags.pop("assumptions", None)
        return {
            "contest": str(self.contest),
            "X_star": self.X_star,
            "efforts": list(self.period_efforts),
            "payoffs": list(self.period_payoffs),
            "welfare": self.welfare,
            "h_star": self.h_star,
            "flags": flags,
        }


# f_t ---------------------------------------------------------------------


def eval_f(m: MarginalBenefit, c: Contest, t: int, X) -> np.ndarray | float:
    """Inverted best response f_t(X); f_T(X) = X."""
    S = np.array(info_measures(subcontest(c, t)), dtype=float)
    X = np.asarray(X, dtype=float)
    if S.size == 0:
        return X if X.ndim else float(X)
    g = g_tower(m, X, S.size)
    out = X - np.tensordot(S, g, axes=1)
    return out if out.ndim else float(out)


def _eval_f_slope(m, S: np.ndarray, X):
    g, dg = g_tower(m, X, S.size, derivative=True)
    return X - np.tensordot(S, g, axes=1), 1.0 - np.tensordot(S, dg, axes=1)


@lru_cache(maxsize=64)
def _grid_tower(m: MarginalBenefit, K: int, G: int):
    X = m.xbar * np.arange(1, G + 1) / G
    g, dg = g_tower(m, X, K, derivative=True)
    X.setflags(write=False)
    g.setflags(write=False)
    dg.setflags(write=False)
    return X, g, dg


def _guard_point(m: MarginalBenefit) -> float:
    return max(m.x_floor, 1e-12 * m.xbar)


def _measure_matrix(contests: Sequence[Contest], K: int) -> np.ndarray:
    S = np.zeros((len(contests), K))
    for i, c in enumerate(contests):
        s = info_measures(c)
        S[i, : len(s)] = s
    return S


def _bisect_many(m, S, lo, hi, flo, fhi, max_iter=200):
    """Vectorized bisection of f(X) = X - S g(X) on brackets with f(lo) <= 0 < f(hi)."""
    K = S.shape[1]
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        active = (mid > lo) & (mid < hi)
        if not active.any():
            break
        fm = mid - np.einsum("bk,kb->b", S, g_tower(m, mid, K))
        up = active & (fm > 0)
        down = active & ~(fm > 0)
        hi = np.where(up, mid, hi)
        fhi = np.where(up, fm, fhi)
        lo = np.where(down, mid, lo)
        flo = np.where(down, fm, flo)
    return lo, hi, flo, fhi


def _locate_roots(m: MarginalBenefit, S: np.ndarray, G: int):
    """Highest roots of f_0 for each row of S.

    Returns (root, lo, hi, status) where status is 0 for an interior root,
    1 for a boundary root at X = 0 and 2 when no root exists.
    """
    B, K = S.shape
    X, g, _ = _grid_tower(m, K, G)
    F = X[None, :] - S @ g
    nonpos = F <= 0
    has = nonpos.any(axis=1)
    # last grid index with f <= 0; above it f > 0 up to xbar
    idx = G - 1 - np.argmax(nonpos[:, ::-1], axis=1)
    status = np.where(has, 0, 2)
    lo = np.where(has, X[np.minimum(idx, G - 1)], 0.0)
    hi = np.where(has, X[np.minimum(idx + 1, G - 1)], X[0])
    flo = np.where(has, F[np.arange(B), idx], 0.0)
    fhi = np.where(has, F[np.arange(B), np.minimum(idx + 1, G - 1)], F[:, 0])

    if (~has).any():
        guard = _guard_point(m)
        fg = guard - S[~has] @ g_tower(m, np.array([guard]), K)[:, 0]
        rows = np.flatnonzero(~has)
        boundary = np.abs(fg) <= BOUNDARY_TOL * m.xbar
        status[rows[boundary]] = 1
        # bracket [guard, X_1] as a report only
        lo[rows] = guard

    inner = status == 0
    if (idx[inner] >= G - 1).any():
        raise SolverError("f_0 is not positive at xbar; the g-tower does not vanish at saturation")
    root = np.zeros(B)
    if inner.any():
        l, h, fl, fh = _bisect_many(m, S[inner], lo[inner], hi[inner], flo[inner], fhi[inner])
        root[inner] = np.where(np.abs(fl) <= np.abs(fh), l, h)
        lo[inner], hi[inner] = l, h
    return root, lo, hi, status


def solve_total_effort(m: MarginalBenefit, c: Contest, grid_points: int = DEFAULT_GRID) -> float:
    """Highest root X* of f_0 on (0, xbar).

    A Tullock monopoly has its only root at the boundary X = 0, which is
    returned as 0.0.
    """
    S = _measure_matrix([c], c.T)
    root, lo, hi, status = _locate_roots(m, S, grid_points)
    if status[0] == 2:
        raise NoRootFound(f"f_0 has no sign change on the grid for contest ({c})")
    if status[0] == 1:
        return 0.0
    X = float(root[0])
    _, slope = _eval_f_slope(m, S[0], X)
    if not float(slope) > 0:
        raise NonMonotoneAtRoot(f"f_0'(X*) = {float(slope):.3e} <= 0 at X* = {X:.12g} for ({c})")
    return X


# assumptions ----------------------------------------------------------------


@lru_cache(maxsize=64)
def _guard_tower(m: MarginalBenefit, K: int) -> np.ndarray:
    return g_tower(m, np.array([_guard_point(m)]), K)[:, 0]


def check_assumptions(m: MarginalBenefit, c: Contest, grid_points: int = DEFAULT_GRID,
                      X_star: float | None = None) -> AssumptionReport:
    """Grid diagnostics for the two regularity assumptions. Never raises.

    Roots of f_t for t >= 1 are located to grid resolution (linear
    interpolation inside the bracket); pass ``X_star`` to use an exact f_0
    root instead of the interpolated one.
    """
    try:
        return _check_assumptions(m, c, grid_points, X_star)
    except (ContestError, FloatingPointError, ZeroDivisionError, IndexError) as exc:
        return AssumptionReport(False, False, False, message=f"{type(exc).__name__}: {exc}")


def _check_assumptions(m, c, G, X_star):
    T = c.T
    X, g, dg = _grid_tower(m, T, G)
    guard = _guard_point(m)
    tol = 1e-9 * m.xbar
    checks = []
    lower = 0.0
    ok1 = True
    for t in range(T - 1, -1, -1):
        S = np.array(info_measures(subcontest(c, t)), dtype=float)
        F = X - S @ g[: S.size]
        D = 1.0 - S @ dg[: S.size]
        nonpos = np.flatnonzero(F <= 0)
        if nonpos.size and nonpos[-1] < G - 1:
            i = nonpos[-1]
            if t == 0 and X_star is not None:
                root = float(X_star)
            elif t == 0:
                # g_k(X*) may vanish exactly, so the f_0 root must be polished
                lo, hi, _, _ = _bisect_many(m, S[None, :], X[i : i + 1], X[i + 1 : i + 2],
                                            F[i : i + 1], F[i + 1 : i + 2])
                root = float(hi[0])
            else:
                root = float(X[i] - F[i] * (X[i + 1] - X[i]) / (F[i + 1] - F[i]))
        elif nonpos.size:
            root = None
        else:
            fg = guard - float(S @ _guard_tower(m, T)[: S.size])
            root = 0.0 if abs(fg) <= BOUNDARY_TOL * m.xbar else None
        if root is None or root < lower - tol:
            checks.append(FtCheck(t, root, False, False, False, None))
            ok1 = False
            break
        violation = None
        below = (X >= lower - tol) & (X < root - tol)
        neg_ok = bool(np.all(F[below] < 0))
        if not neg_ok:
            violation = float(X[below][np.argmax(F[below] >= 0)])
        above = X > root + tol
        inc_ok = bool(np.all(D[above] > 0))
        if not inc_ok and violation is None:
            violation = float(X[above][np.argmax(D[above] <= 0)])
        checks.append(FtCheck(t, root, True, neg_ok, inc_ok, violation))
        ok1 &= neg_ok and inc_ok
        lower = root
    checks.reverse()
    root0 = checks[0].root if checks and checks[0].t == 0 else None
    interior = root0 is not None and 0 < root0 < m.xbar
    g_root: tuple[float, ...] = ()
    ok2 = strict2 = False
    if interior:
        g_root = tuple(float(v) for v in g_tower(m, root0, T))
        ok2 = all(v >= -ASSUMPTION2_TOL * m.xbar for v in g_root[1:])
        strict2 = all(v > ASSUMPTION2_TOL * m.xbar for v in g_root[1:])
    return AssumptionReport(bool(ok1 and interior), ok2, interior, tuple(checks), g_root,
                            assumption2_strict=strict2)


# equilibrium ---------------------------------------------------------------


def _outcome(m, c, X, lo, hi, status, g, dg, check, G) -> EquilibriumOutcome:
    T = c.T
    if status == 1:
        guard = _guard_point(m)
        h_guard = float(m.h(guard))
        pay = float(g[0]) * h_guard
        report = check_assumptions(m, c, G) if check else None
        flags = SolverFlags(False, False, (float(lo), float(hi)), 0.0, 0.0, True, report)
        payoffs = (pay,) * T
        welfare = float(sum(n * p for n, p in zip(c.periods, payoffs)))
        return EquilibriumOutcome(c, 0.0, (0.0,) * T, payoffs, welfare, h_guard, flags)

    S = np.array(info_measures(c), dtype=float)
    residual = float(X - S @ g[:T])
    slope = float(1.0 - S @ dg[:T])
    if not slope > 0:
        raise NonMonotoneAtRoot(f"f_0'(X*) = {slope:.3e} <= 0 at X* = {X:.12g} for ({c})")
    efforts = []
    for t in range(1, T + 1):
        St = info_measures(subcontest(c, t))
        efforts.append(float(g[0] + sum(s * g[k + 1] for k, s in enumerate(St))))
    for t, x in enumerate(efforts):
        if x < -NEGATIVE_EFFORT_TOL:
            raise NegativeEffort(t, x)
    h_star = float(m.h(X))
    payoffs = tuple(x * h_star for x in efforts)
    if check:
        report = check_assumptions(m, c, G, X_star=X)
        a1, a2 = report.assumption1_ok, report.assumption2_ok
    else:
        report = None
        a1 = 0 < X < m.xbar
        a2 = bool(np.all(g[1:T] >= -ASSUMPTION2_TOL * m.xbar))
    flags = SolverFlags(a1, a2, (float(lo), float(hi)), residual, slope, False, report)
    return EquilibriumOutcome(c, float(X), tuple(efforts), payoffs, float(X * h_star), h_star, flags)


def solve_equilibrium(m: MarginalBenefit, c: Contest, grid_points: int = DEFAULT_GRID,
                      check: bool = True) -> EquilibriumOutcome:
    """Unique subgame-perfect equilibrium of contest ``c``.

    Raises NoRootFound, NonMonotoneAtRoot or NegativeEffort when the model
    falls outside the theory's domain for this contest.
    """
    out = solve_many(m, [c], grid_points=grid_points, check=check)[0]
    if isinstance(out, Exception):
        raise out
    return out


def solve_many(m: MarginalBenefit, contests: Sequence[Contest], grid_points: int = DEFAULT_GRID,
               check: bool = True) -> list[EquilibriumOutcome | SolverError]:
    """Solve a batch of contests; failures are returned in place, not raised."""
    contests = list(contests)
    if not contests:
        return []
    K = max(c.T for c in contests)
    S = _measure_matrix(contests, K)
    root, lo, hi, status = _locate_roots(m, S, grid_points)
    at = np.where(status == 0, root, _guard_point(m))
    g, dg = g_tower(m, at, K, derivative=True)
    out: list[EquilibriumOutcome | SolverError] = []
    for i, c in enumerate(contests):
        if status[i] == 2:
            out.append(NoRootFound(f"f_0 has no sign change on the grid for contest ({c})"))
            continue
        try:
            out.append(_outcome(m, c, float(root[i]), lo[i], hi[i], int(status[i]),
                                g[:, i], dg[:, i], check, grid_points))
        except SolverError as exc:
            out.append(exc)
    return out
