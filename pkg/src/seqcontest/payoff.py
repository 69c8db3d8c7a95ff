"""Marginal-benefit primitives h(X) and the g-tower derived from them.

Every model carries its saturation point ``xbar`` (h(xbar) = 0) and
``alpha = -h'(xbar)``. Derivatives are never taken symbolically: each family
supplies a Taylor-jet of h at arbitrary points and the tower

    g_1 = -h / h',    g_{k+1} = -g_k' * g_1

is evaluated with jet arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from seqcontest.errors import DomainError, ModelError
from seqcontest.jets import SeriesJet

# Tullock's h diverges at 0; queries below this are rejected.
X_FLOOR = 1e-12
VALIDATION_POINTS = 1000

JetFn = Callable[[np.ndarray, int], SeriesJet]


@dataclass(frozen=True)
class MarginalBenefit:
    """Immutable marginal-benefit model.

    ``params`` identifies the model for hashing and serialization; the jet
    builder itself is excluded from equality so two models built from the
    same parameters compare equal.
    """

    family: str
    params: tuple
    xbar: float
    alpha: float = field(init=False)
    x_floor: float = 0.0
    jet_fn: JetFn = field(default=None, compare=False, repr=False)
    # closed-form jet of g = -h/h'; needed when h'(xbar) = 0
    g_fn: JetFn | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not (self.xbar > 0 and math.isfinite(self.xbar)):
            raise ModelError(f"saturation point must be positive and finite, got {self.xbar}")
        d = self.h_jet(self.xbar, 1).coeffs[1]
        object.__setattr__(self, "alpha", float(-d) + 0.0)  # no -0.0
        _validate_shape(self)

    def h_jet(self, X, order: int) -> SeriesJet:
        return self.jet_fn(np.asarray(X, dtype=float), order)

    def h(self, X):
        return self.h_jet(X, 0).value

    def dh(self, X):
        return self.h_jet(X, 1).coeffs[1]

    def to_dict(self) -> dict[str, Any]:
        if self.family == "custom":
            raise ModelError("custom models are not serializable")
        return {"family": self.family, **dict(zip(_PARAM_NAMES[self.family], self.params))}


def _validate_shape(m: MarginalBenefit) -> None:
    lo = max(m.x_floor, m.xbar / VALIDATION_POINTS)
    grid = np.linspace(lo, m.xbar, VALIDATION_POINTS)
    jet = m.h_jet(grid, 1)
    if not np.all(np.isfinite(jet.coeffs)):
        raise ModelError(f"{m.family}: h is not finite on (0, xbar]")
    # h' < 0 on the interior; at xbar itself only a closed-form g may relax it
    bad = np.flatnonzero(jet.coeffs[1][:-1] >= 0)
    if bad.size:
        raise ModelError(f"{m.family}: h is not strictly decreasing near X = {grid[bad[0]]:.6g}")
    h_end = float(m.h(m.xbar))
    if abs(h_end) > 1e-10:
        raise ModelError(f"{m.family}: h(xbar) = {h_end:.3e}, expected 0")
    if m.alpha < 0 or (m.alpha == 0 and m.g_fn is None):
        raise ModelError(f"{m.family}: -h'(xbar) must be positive")


# families -------------------------------------------------------------

_PARAM_NAMES = {
    "tullock": ("v", "c"),
    "linear": ("a", "xbar"),
    "exponential": ("a", "b", "c"),
    "expdecay": ("base", "xbar", "scale"),
    "sqexp": ("base", "xbar"),
}


def make_tullock(v: float = 1.0, c: float = 1.0) -> MarginalBenefit:
    """Tullock contest: h(X) = v/X - c, saturating at X = v/c."""
    if not (v > 0 and c > 0):
        raise ModelError(f"tullock needs v > 0 and c > 0, got v={v}, c={c}")

    def jet(X, order):
        return v / SeriesJet.variable(X, order) - c

    return MarginalBenefit("tullock", (float(v), float(c)), v / c, x_floor=X_FLOOR, jet_fn=jet)


def make_linear(a: float = 1.0, xbar: float = 1.0) -> MarginalBenefit:
    """h(X) = a (xbar - X)."""
    if not (a > 0 and xbar > 0):
        raise ModelError(f"linear needs a > 0 and xbar > 0, got a={a}, xbar={xbar}")

    def jet(X, order):
        return (xbar - SeriesJet.variable(X, order)) * a

    return MarginalBenefit("linear", (float(a), float(xbar)), float(xbar), jet_fn=jet)


def make_exponential(a: float, b: float, c: float = 0.0) -> MarginalBenefit:
    """Oligopoly with inverse demand a - b^X and marginal cost c.

    h(X) = a - c - b^X, so xbar = log_b(a - c), which is positive only when
    a - c > 1.
    """
    if not (a > 1 and b > 1 and c >= 0):
        raise ModelError(f"exponential needs a > 1, b > 1, c >= 0, got a={a}, b={b}, c={c}")
    if not a - c > 1:
        raise ModelError(f"exponential: a - c = {a - c} <= 1 leaves no positive saturation point")
    lb = math.log(b)

    def jet(X, order):
        return (a - c) - (SeriesJet.variable(X, order) * lb).exp()

    xbar = math.log(a - c) / lb
    return MarginalBenefit("exponential", (float(a), float(b), float(c)), xbar, jet_fn=jet)


def make_exponential_decay(base: float = 2.0, xbar: float = 1.0, scale: float = 1.0) -> MarginalBenefit:
    """h(X) = scale * (base^-X - base^-xbar), a convex decreasing benefit.

    ``make_exponential_decay(2, 1, 1/log 2)`` is the three-player example
    h(X) = (2^-X - 1/2) / log 2.
    """
    if not (base > 1 and xbar > 0 and scale > 0):
        raise ModelError(f"expdecay needs base > 1, xbar > 0, scale > 0; got {base}, {xbar}, {scale}")
    lb = math.log(base)
    floor_val = base ** (-xbar)

    def jet(X, order):
        return ((SeriesJet.variable(X, order) * -lb).exp() - floor_val) * scale

    return MarginalBenefit("expdecay", (float(base), float(xbar), float(scale)), float(xbar), jet_fn=jet)


def make_squared_exponential(base: float = 2.0, xbar: float = 1.0) -> MarginalBenefit:
    """h(X) = (1 - base^(X - xbar))^2, whose g is (base^(xbar - X) - 1) / (2 log base).

    With base 2 and xbar 1, g(X) = (2^-X - 1/2) / log 2. The saturation point
    is a double root, so alpha = 0 and g is supplied in closed form.
    """
    if not (base > 1 and xbar > 0):
        raise ModelError(f"sqexp needs base > 1 and xbar > 0; got {base}, {xbar}")
    lb = math.log(base)

    def jet(X, order):
        return (1.0 - ((SeriesJet.variable(X, order) - xbar) * lb).exp()) ** 2

    def g(X, order):
        return (((xbar - SeriesJet.variable(X, order)) * lb).exp() - 1.0) / (2.0 * lb)

    return MarginalBenefit("sqexp", (float(base), float(xbar)), float(xbar), jet_fn=jet, g_fn=g)


def make_custom(h_jet: Callable[[np.ndarray, int], Any], xbar: float,
                x_floor: float = 0.0) -> MarginalBenefit:
    """User-supplied h given as a jet builder.

    ``h_jet(X, order)`` returns Taylor coefficients of h at ``X`` (a
    ``SeriesJet`` or an array of shape ``(order + 1,) + X.shape``). Shape
    conditions are checked numerically on construction.
    """

    def jet(X, order):
        out = h_jet(X, order)
        return out if isinstance(out, SeriesJet) else SeriesJet(np.asarray(out, dtype=float))

    return MarginalBenefit("custom", (h_jet,), float(xbar), x_floor=x_floor, jet_fn=jet)


_FACTORIES = {
    "tullock": make_tullock,
    "linear": make_linear,
    "exponential": make_exponential,
    "expdecay": make_exponential_decay,
    "sqexp": make_squared_exponential,
}


def model_from_dict(fields: dict) -> MarginalBenefit:
    fields = dict(fields)
    family = str(fields.pop("family", "")).lower()
    if family not in _FACTORIES:
        raise ModelError(f"unknown family {family!r}; expected one of {sorted(_FACTORIES)}")
    unknown = set(fields) - set(_PARAM_NAMES[family])
    if unknown:
        raise ModelError(f"{family}: unexpected fields {sorted(unknown)}")
    return _FACTORIES[family](**{k: float(v) for k, v in fields.items()})


def parse_model(literal: str) -> MarginalBenefit:
    """Parse ``family:p1,p2,...`` (e.g. ``tullock:1,1``)."""
    family, _, rest = literal.partition(":")
    family = family.strip().lower()
    if family not in _FACTORIES:
        raise ModelError(f"unknown family {family!r} in model literal {literal!r}")
    try:
        values = [float(p) for p in rest.split(",")] if rest.strip() else []
    except ValueError as exc:
        raise ModelError(f"bad parameters in model literal {literal!r}") from exc
    names = _PARAM_NAMES[family]
    if len(values) > len(names):
        raise ModelError(f"{family} takes at most {len(names)} parameters")
    return _FACTORIES[family](**dict(zip(names, values)))


# g-tower ----------------------------------------------------------------


def _check_domain(m: MarginalBenefit, X: np.ndarray) -> None:
    lo = max(m.x_floor, 0.0)
    bad = (X <= 0) | (X < lo) | (X > m.xbar * (1 + 1e-12)) | ~np.isfinite(X)
    if np.any(bad):
        x = np.asarray(X)[bad].ravel()[0]
        raise DomainError(f"X = {x!r} outside (0, xbar = {m.xbar}] for {m.family}")


def g_jets(m: MarginalBenefit, X, K: int, extra: int = 0) -> list[SeriesJet]:
    """Jets of g_1..g_K at X; g_k keeps ``extra + K - k`` orders."""
    if K < 1:
        raise ValueError("K must be positive")
    X = np.asarray(X, dtype=float)
    _check_domain(m, X)
    if m.g_fn is not None:
        g = m.g_fn(X, K - 1 + extra)
    else:
        h = m.h_jet(X, K + extra)
        g = -h / h.derivative()
    tower = [g]
    for _ in range(1, K):
        tower.append(-(tower[-1].derivative() * g))
    return tower


def g_tower(m: MarginalBenefit, X, K: int, derivative: bool = False):
    """Values (g_1(X), ..., g_K(X)), stacked on the leading axis.

    With ``derivative=True`` also returns (g_1'(X), ..., g_K'(X)).
    """
    tower = g_jets(m, X, K, extra=1 if derivative else 0)
    vals = np.stack([j.value for j in tower])
    if not derivative:
        return vals
    return vals, np.stack([j.coeffs[1] for j in tower])
