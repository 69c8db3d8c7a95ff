"""Independent backward-induction solver on a grid of cumulative effort.

The oracle never touches the g-tower. For each period (last to first) it
tabulates, on a uniform grid of cumulative effort Y entering the period,

* the best response of one player to the aggregate effort W of everyone
  else already in place (earlier periods plus rivals in the same period), and
* the resulting continuation map Y -> final total effort.

Inside a period the symmetric equilibrium is found by damped iterated best
response. A final forward pass replays the equilibrium from Y = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from seqcontest.contests import Contest
from seqcontest.equilibrium import EquilibriumOutcome
from seqcontest.errors import InvalidContest, NoConvergence, ResolutionTooCoarse
from seqcontest.payoff import MarginalBenefit

MAX_ORACLE_PLAYERS = 4
DAMPING = 0.5
_CYCLE_WINDOW = 16
_BISECTION_STEPS = 64


@dataclass(frozen=True)
class OracleConfig:
    """Grid and iteration settings.

    ``effort_max`` and ``br_tolerance`` default to xbar and to one grid step.
    Iterated best response stops once successive iterates move less than
    ``1e-12 * xbar``; if that never happens within ``br_iterations`` steps the
    final move must still be below ``br_tolerance``.
    """

    grid_points: int = 2001
    effort_max: float | None = None
    br_iterations: int = 500
    br_tolerance: float | None = None

    def __post_init__(self):
        if self.grid_points < 3:
            raise ValueError(f"grid_points must be at least 3, got {self.grid_points}")
        if self.br_iterations < 1:
            raise ValueError("br_iterations must be positive")


@dataclass(frozen=True)
class OracleFlags:
    grid_points: int
    grid_step: float
    iterations: int
    max_fixed_point_gap: float


@dataclass
class _Stage:
    n: int
    br: "_BestResponse"
    phi: "_Continuation"  # Y -> final X


def _h_extended(m: MarginalBenefit, X: np.ndarray) -> np.ndarray:
    """h on [0, xbar], continued linearly below zero past xbar."""
    inside = np.clip(X, max(m.x_floor, 1e-300), m.xbar)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = np.asarray(m.h(inside), dtype=float)
    return np.where(X > m.xbar, -(X - m.xbar), h)


def _dh_extended(m: MarginalBenefit, X: np.ndarray) -> np.ndarray:
    inside = np.clip(X, max(m.x_floor, 1e-300), m.xbar)
    with np.errstate(divide="ignore", invalid="ignore"):
        dh = np.asarray(m.dh(inside), dtype=float)
    return np.where(X > m.xbar, -1.0, dh)


class _Continuation:
    """Cubic spline of Y -> final X on [0, xbar]; identity beyond xbar."""

    def __init__(self, grid: np.ndarray, values: np.ndarray):
        self.top = grid[-1]
        self.spline = CubicSpline(grid, values) if values is not grid else None

    def __call__(self, Y: np.ndarray, nu: int = 0) -> np.ndarray:
        Y = np.asarray(Y, dtype=float)
        identity = Y if nu == 0 else np.ones_like(Y)
        if self.spline is None:
            return identity
        return np.where(Y >= self.top, identity, self.spline(np.minimum(Y, self.top), nu))


class _BestResponse:
    """Spline through the tabulated best responses; zero past xbar."""

    def __init__(self, grid: np.ndarray, values: np.ndarray):
        self.top = grid[-1]
        self.spline = CubicSpline(grid, values)

    def __call__(self, W: np.ndarray) -> np.ndarray:
        W = np.asarray(W, dtype=float)
        return np.where(W >= self.top, 0.0, np.maximum(self.spline(np.minimum(W, self.top)), 0.0))


def _best_response_table(m: MarginalBenefit, phi_next: _Continuation, grid: np.ndarray,
                         n_effort: int) -> np.ndarray:
    """Best response z*(W) for W on ``grid``.

    A scan over z = j * step (W + z then always lands on a node) brackets the
    global maximum. Bisection on the first-order condition then refines it;
    comparing objective values instead would lose half the digits, because
    the objective is flat to second order at its peak.
    """
    G = grid.size
    step = grid[1] - grid[0]
    H = _h_extended(m, phi_next(np.arange(G + n_effort - 1) * step))
    idx = np.arange(G)[:, None] + np.arange(n_effort)[None, :]
    z = np.arange(n_effort) * step
    with np.errstate(invalid="ignore"):
        obj = z[None, :] * H[idx]
    obj[:, 0] = 0.0
    j = np.argmax(obj, axis=1)
    if np.any((j == n_effort - 1) & (grid < m.xbar)):
        raise ResolutionTooCoarse("best response reached effort_max; raise effort_max")

    def marginal(zz):
        # d/dz of z * h(phi(W + z))
        X = phi_next(grid + zz)
        return _h_extended(m, X) + zz * _dh_extended(m, X) * phi_next(grid + zz, 1)

    lo = np.maximum(j - 1, 0) * step
    hi = np.minimum(j + 1, n_effort - 1) * step
    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        with np.errstate(invalid="ignore"):
            up = marginal(mid) > 0
        lo, hi = np.where(up, mid, lo), np.where(up, hi, mid)
    best = 0.5 * (lo + hi)
    return np.where(j > 0, best, 0.0)


def _symmetric_fixed_point(br: "_BestResponse", Y: np.ndarray, n: int,
                           cfg_iters: int, tol: float, stop: float) -> tuple[np.ndarray, int, float]:
    """Solve x = BR(Y + (n - 1) x) for every entry of Y by damped iteration."""
    x = br(Y)
    if n == 1:
        return x, 0, 0.0
    history: list[np.ndarray] = []
    gap = np.inf
    for it in range(1, cfg_iters + 1):
        target = br(Y + (n - 1) * x)
        new = (1 - DAMPING) * x + DAMPING * target
        gap = float(np.max(np.abs(new - x)))
        x = new
        if gap < stop:
            return x, it, gap
        history.append(x)
        if len(history) > _CYCLE_WINDOW:
            history.pop(0)
    if gap <= tol:
        return x, cfg_iters, gap
    for lag in range(2, len(history)):
        if np.max(np.abs(history[-1] - history[-1 - lag])) < stop:
            raise NoConvergence(f"best responses cycle with period {lag}", cycle_length=lag)
    raise ResolutionTooCoarse(
        f"best responses still moving by {gap:.3e} after {cfg_iters} iterations, above br_tolerance {tol:.3e}")


def oracle_solve(m: MarginalBenefit, c: Contest, cfg: OracleConfig | None = None) -> EquilibriumOutcome:
    """Subgame-perfect equilibrium by backward induction on a grid.

    Limited to contests with at most four players; the cost per period is
    quadratic in ``grid_points``.
    """
    cfg = cfg or OracleConfig()
    if c.n > MAX_ORACLE_PLAYERS:
        raise InvalidContest(f"oracle handles at most {MAX_ORACLE_PLAYERS} players, got {c.n}")
    grid = np.linspace(0.0, m.xbar, cfg.grid_points)
    step = grid[1]
    effort_max = m.xbar if cfg.effort_max is None else float(cfg.effort_max)
    if not 0 < effort_max <= m.xbar * (1 + 1e-12):
        raise ValueError(f"effort_max must lie in (0, xbar = {m.xbar}], got {effort_max}")
    n_effort = int(np.floor(effort_max / step + 1e-9)) + 1
    if n_effort < 3:
        raise ResolutionTooCoarse("effort_max spans fewer than three grid steps")
    tol = step if cfg.br_tolerance is None else float(cfg.br_tolerance)
    stop = 1e-12 * m.xbar

    stages: list[_Stage] = []
    phi = _Continuation(grid, grid)
    iterations, worst = 0, 0.0
    for n_t in reversed(c.periods):
        br = _BestResponse(grid, _best_response_table(m, phi, grid, n_effort))
        x, it, gap = _symmetric_fixed_point(br, grid, n_t, cfg.br_iterations, tol, stop)
        iterations, worst = max(iterations, it), max(worst, gap)
        stages.append(_Stage(n_t, br, phi))
        phi = _Continuation(grid, phi(grid + n_t * x))
    stages.reverse()

    Y = np.zeros(1)
    efforts = []
    for st in stages:
        x, it, gap = _symmetric_fixed_point(st.br, Y, st.n, cfg.br_iterations, tol, stop)
        iterations, worst = max(iterations, it), max(worst, gap)
        efforts.append(float(x[0]))
        Y = Y + st.n * x
    X = float(Y[0])
    h_star = float(_h_extended(m, np.array([X]))[0]) if X > 0 else float("nan")
    payoffs = tuple(e * h_star if e > 0 else 0.0 for e in efforts)
    flags = OracleFlags(cfg.grid_points, float(step), iterations, worst)
    return EquilibriumOutcome(c, X, tuple(efforts), payoffs, X * h_star if X > 0 else 0.0, h_star, flags)
