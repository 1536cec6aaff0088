"""Reduction of the level-n increment inequality to a box-constrained
maximization.

Substituting y_i = A_i / A_{i+1} (ratios of consecutive running arithmetic
means) turns the product form of the inequality into: F(y) <= 1 on the box
[0, W_2/W_1] x ... x [0, W_n/W_{n-1}].  The last coordinate can be
maximized in closed form, leaving the reduced objective g on the first
n-2 coordinates.  Interior critical points of g form a one-parameter
family a_i(d) = W_{i+1} / (d w_{i+1} + W_i); d = 1 gives the constant
point where g = 1 exactly.  ``certify`` packages the case analysis:
Holland margin, then the Gao conditions, then a numeric search.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import mpmath
import numpy as np
from scipy.optimize import brentq

from .conditions import (
    ConditionReport,
    NotApplicableError,
    d_zero,
    gao_conditions,
    holland_condition,
)
from .means import InputError, WeightSequence, as_samples, partial_mean_sequence

__all__ = [
    "YPoint",
    "StationaryPoint",
    "Certificate",
    "box_upper",
    "x_to_y",
    "y_to_x",
    "objective_F",
    "objective_g",
    "Elimination",
    "eliminate_last",
    "stationary_analysis",
    "boundary_bound",
    "interior_bound",
    "find_stationary_d",
    "certify",
]

# Precision used for the coordinate change.  The inverse map divides by
# w_{i+1} x_{i+1} after a near-cancellation against W_i A_i, so a plain
# double y loses up to log10(sum w_j x_j / (w_i x_i)) digits; the
# compensation term below keeps round trips at double accuracy anyway.
_TRANSFORM_DPS = 40


@dataclass(frozen=True)
class YPoint:
    """Reduced coordinates y_i = A_i / A_{i+1}, one per consecutive pair.

    ``y_lo`` is a compensation term (exact value minus the stored double),
    produced by ``x_to_y`` and consumed by ``y_to_x`` so the ill-conditioned
    inverse transform does not amplify the representation rounding.  Points
    built directly from doubles just carry zeros there.
    """

    y: np.ndarray
    y_lo: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        object.__setattr__(self, "y", y)
        lo = self.y_lo
        lo = np.zeros_like(y) if lo is None else np.asarray(lo, dtype=float)
        if lo.shape != y.shape:
            raise InputError("compensation term must match y in shape")
        object.__setattr__(self, "y_lo", lo)

    def __len__(self) -> int:
        return self.y.size


def box_upper(w: WeightSequence) -> np.ndarray:
    """Per-coordinate upper bounds W_{i+1}/W_i of the y-box (length n-1)."""
    return w.W[1:] / w.W[:-1]


def _coerce_y(y) -> np.ndarray:
    if isinstance(y, YPoint):
        return y.y
    return np.asarray(y, dtype=float)


def x_to_y(w: WeightSequence, x) -> YPoint:
    """Map data to reduced coordinates y_i = A_i/A_{i+1}.

    Positivity of the data forces every y_i strictly inside its interval.
    Computed in extended precision so the compensation term is meaningful.
    """
    if w.n < 2:
        raise InputError("need at least two entries")
    x = as_samples(x, w.n)
    with mpmath.workdps(_TRANSFORM_DPS):
        t = mpmath.mpf(0)
        totals = []
        for wi, xi in zip(w.w, x):
            t += mpmath.mpf(float(wi)) * mpmath.mpf(float(xi))
            totals.append(t)
        W = [mpmath.mpf(float(v)) for v in w.w]
        Wsum = []
        acc = mpmath.mpf(0)
        for v in W:
            acc += v
            Wsum.append(acc)
        hi = np.empty(w.n - 1)
        lo = np.empty(w.n - 1)
        for i in range(w.n - 1):
            yi = (totals[i] * Wsum[i + 1]) / (totals[i + 1] * Wsum[i])
            h = float(yi)
            hi[i] = h
            lo[i] = float(yi - mpmath.mpf(h))
    return YPoint(hi, lo)


def y_to_x(w: WeightSequence, y, scale: float) -> np.ndarray:
    """Reconstruct data from strictly interior reduced coordinates, with
    A_n = scale.  Boundary coordinates correspond to a zero data entry and
    are rejected.
    """
    if w.n < 2:
        raise InputError("need at least two entries")
    if scale <= 0.0 or not math.isfinite(scale):
        raise InputError("scale must be positive and finite")
    yp = y if isinstance(y, YPoint) else YPoint(np.asarray(y, dtype=float))
    if len(yp) != w.n - 1:
        raise InputError(f"expected {w.n - 1} coordinates, got {len(yp)}")
    upper = box_upper(w)
    if np.any(yp.y <= 0.0) or np.any(yp.y >= upper):
        raise InputError("coordinates must be strictly interior to the box")
    with mpmath.workdps(_TRANSFORM_DPS):
        yv = [mpmath.mpf(float(h)) + mpmath.mpf(float(l))
              for h, l in zip(yp.y, yp.y_lo)]
        W = []
        acc = mpmath.mpf(0)
        for v in w.w:
            acc += mpmath.mpf(float(v))
            W.append(acc)
        A = [mpmath.mpf(0)] * w.n
        A[-1] = mpmath.mpf(float(scale))
        for i in range(w.n - 2, -1, -1):
            A[i] = A[i + 1] * yv[i]
        x = np.empty(w.n)
        prev = mpmath.mpf(0)
        prev_W = mpmath.mpf(0)
        for i in range(w.n):
            xi = (W[i] * A[i] - prev_W * prev) / mpmath.mpf(float(w.w[i]))
            if xi <= 0:
                raise InputError("coordinates do not define positive data")
            x[i] = float(xi)
            prev, prev_W = A[i], W[i]
    return x


def _check_box(w: WeightSequence, y: np.ndarray, length: int) -> np.ndarray:
    if y.size != length:
        raise InputError(f"expected {length} coordinates, got {y.size}")
    upper = box_upper(w)[:length]
    if np.any(y < 0.0) or np.any(y > upper * (1.0 + 1e-15)):
        raise InputError("coordinates outside the box")
    return np.minimum(y, upper)


def _sum_pow_logs(bases: np.ndarray, exps: np.ndarray) -> float:
    """log of prod bases^exps, with 0^positive = 0 (returns -inf)."""
    if np.any(bases < 0.0):
        raise InputError("negative base in product of powers")
    if np.any(bases == 0.0):
        return -math.inf
    return float(np.sum(exps * np.log(bases)))


def objective_F(w: WeightSequence, y) -> float:
    """The full reduced objective on the (n-1)-dimensional box; F <= 1 is
    the level-n increment inequality and F(1,...,1) = 1 exactly."""
    if w.n < 2:
        raise InputError("need at least two entries")
    y = _check_box(w, _coerce_y(y), w.n - 1)
    W_n = float(w.W[-1])
    W_n1 = float(w.W[-2])
    w_n = float(w.w[-1])
    alpha = w.W[:-1] * w_n / (W_n1 * W_n)
    beta = w.w[1:] / W_n
    second = np.maximum((w.W[1:] - w.W[:-1] * y) / w.w[1:], 0.0)
    t1 = math.exp(_sum_pow_logs(y, alpha))
    t2 = math.exp(_sum_pow_logs(second, beta))
    return (W_n1 / W_n) * t1 + (w_n / W_n) * t2


def objective_g(w: WeightSequence, y_head) -> float:
    """The reduced objective after closed-form elimination of the last
    coordinate, on the first n-2 coordinates; g(1,...,1) = 1 exactly."""
    if w.n < 3:
        raise InputError("need at least three entries")
    y = _check_box(w, np.asarray(_coerce_y(y_head), dtype=float), w.n - 2)
    W_n = float(w.W[-1])
    W_n1 = float(w.W[-2])
    w_n = float(w.w[-1])
    alpha = w.W[:-2] * w_n / W_n1**2
    beta = w.w[1:-1] / W_n1
    second = np.maximum((w.W[1:-1] - w.W[:-2] * y) / w.w[1:-1], 0.0)
    t1 = math.exp(_sum_pow_logs(y, alpha))
    t2 = math.exp(_sum_pow_logs(second, beta))
    return (W_n1 / W_n) * t1 + (w_n / W_n) * t2


@dataclass(frozen=True)
class Elimination:
    """Closed-form maximization of F over the last coordinate with the head
    fixed.  ``degenerate`` marks a boundary head, where one of the two
    products vanishes and the supremum sits at an endpoint instead."""

    y_star: float
    max_value: float
    degenerate: bool = False


def eliminate_last(w: WeightSequence, y_head) -> Elimination:
    """Maximize F over y_{n-1} for a fixed head.  For interior heads the
    maximizer and maximum are closed forms in the two head products c, c';
    the maximum equals g(head)^(W_{n-1}/W_n)."""
    if w.n < 2:
        raise InputError("need at least two entries")
    y = _check_box(w, np.asarray(_coerce_y(y_head), dtype=float), w.n - 2)
    W_n = float(w.W[-1])
    W_n1 = float(w.W[-2])
    w_n = float(w.w[-1])
    last_hi = W_n / W_n1
    r = W_n / W_n1

    alpha = w.W[:-2] * w_n / (W_n1 * W_n)
    beta = w.w[1:-1] / W_n
    second = np.maximum((w.W[1:-1] - w.W[:-2] * y) / w.w[1:-1], 0.0)
    log_c = _sum_pow_logs(y, alpha)
    log_cp = _sum_pow_logs(second, beta)

    if math.isinf(log_c) and math.isinf(log_cp):
        return Elimination(0.0, 0.0, degenerate=True)
    if math.isinf(log_c):
        # first product vanishes: F decreases in the last coordinate
        value = (w_n / W_n) * math.exp(log_cp) * (W_n / w_n) ** (w_n / W_n)
        return Elimination(0.0, value, degenerate=True)
    if math.isinf(log_cp):
        # second product vanishes: F increases in the last coordinate
        value = (W_n1 / W_n) * math.exp(log_c) * last_hi ** (w_n / W_n)
        return Elimination(last_hi, value, degenerate=True)

    ratio = math.exp((log_cp - log_c) * r)
    y_star = 1.0 / (W_n1 / W_n + (w_n / W_n) * ratio)
    # log-sum-exp of the two r-th powers keeps skewed heads in range
    a = math.log(W_n1 / W_n) + r * log_c
    b = math.log(w_n / W_n) + r * log_cp
    m = max(a, b)
    log_sum = m + math.log(math.exp(a - m) + math.exp(b - m))
    max_value = math.exp(log_sum * (W_n1 / W_n))
    return Elimination(y_star, max_value)


@dataclass(frozen=True)
class StationaryPoint:
    """Interior critical-point family of g at parameter d, with the profile
    h(d), its derivative, and the log-domain stationarity residual (zero
    exactly when the family is a genuine critical point; always at d=1)."""

    d: float
    a: np.ndarray
    g_value: float
    h: float
    h_prime: float
    residual: float


def stationary_analysis(w: WeightSequence, d: float) -> StationaryPoint:
    if w.n < 3:
        raise InputError("need at least three entries")
    if not (d > 0.0 and math.isfinite(d)):
        raise InputError("d must be positive and finite")
    W_n1 = float(w.W[-2])
    w_n = float(w.w[-1])
    w_tail = w.w[1:-1]
    W_prev = w.W[:-2]

    shifted = d * w_tail + W_prev
    a = w.W[1:-1] / shifted
    coef = W_prev * w_n / W_n1**2 - w_tail / W_n1
    h = float(np.sum(coef * np.log(shifted))) - (float(w.w[0]) / W_n1) * math.log(d)
    target = float(np.sum(coef * np.log(w.W[1:-1])))
    residual = h - target
    h_prime = float(np.sum(coef / (d + W_prev / w_tail))) - (
        float(w.w[0]) / W_n1
    ) / d
    return StationaryPoint(
        d=d,
        a=a,
        g_value=objective_g(w, a),
        h=h,
        h_prime=h_prime,
        residual=residual,
    )


def boundary_bound(w: WeightSequence) -> float:
    """Upper bound for g on the faces of its box: the larger of the two
    corner products (log-domain evaluation)."""
    if w.n < 3:
        raise InputError("need at least three entries")
    W_n = float(w.W[-1])
    W_n1 = float(w.W[-2])
    w_n = float(w.w[-1])
    log_a = float(
        np.sum((w.W[:-2] * w_n / W_n1**2) * np.log(w.W[1:-1] / w.W[:-2]))
    )
    log_b = float(
        np.sum((w.w[1:-1] / W_n1) * np.log(w.W[1:-1] / w.w[1:-1]))
    )
    return max(
        (W_n1 / W_n) * math.exp(log_a),
        (w_n / W_n) * math.exp(log_b),
    )


def interior_bound(w: WeightSequence) -> float:
    """Upper bound for g at interior critical points with d beyond the
    monotonicity threshold; equals 1 minus the tail-product margin of the
    Gao conditions."""
    d0 = d_zero(w)
    W_n = float(w.W[-1])
    W_n1 = float(w.W[-2])
    w_n = float(w.w[-1])
    log_tail = float(
        np.sum((w.w[1:-1] / W_n1) * np.log(w.W[1:-1] / w.w[1:-1]))
    )
    return (W_n1 / (d0 * W_n) + w_n / W_n) * math.exp(log_tail)


def find_stationary_d(
    w: WeightSequence, d_max: float = 100.0, samples: int = 2000
) -> list[float]:
    """Diagnostic scan for roots of the stationarity residual on (0, d_max];
    reports every root bracketed on a log grid (no completeness claim).
    d = 1 is always a root."""
    if w.n < 3:
        raise InputError("need at least three entries")
    grid = np.exp(np.linspace(math.log(1e-6), math.log(d_max), samples))
    res = np.array([stationary_analysis(w, float(d)).residual for d in grid])
    roots: list[float] = []

    def f(d: float) -> float:
        return stationary_analysis(w, d).residual

    for i in range(len(grid) - 1):
        lo, hi = res[i], res[i + 1]
        if lo == 0.0:
            roots.append(float(grid[i]))
        elif lo * hi < 0.0:
            roots.append(float(brentq(f, float(grid[i]), float(grid[i + 1]))))
    if res[-1] == 0.0:
        roots.append(float(grid[-1]))
    # dedupe near-identical roots
    out: list[float] = []
    for r in sorted(roots):
        if not out or abs(r - out[-1]) > 1e-9 * max(1.0, abs(r)):
            out.append(r)
    return out


@dataclass(frozen=True)
class Certificate:
    """Outcome of the certification pipeline for a weight sequence."""

    route: str  # holland | gao | numeric-only | refuted-numeric
    reports: tuple[ConditionReport, ...]
    slack: float
    numeric_max: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "route": self.route,
            "reports": [r.to_dict() for r in self.reports],
            "numeric_max": self.numeric_max,
            "slack": self.slack,
        }


def certify(
    w: WeightSequence,
    grid_resolution: int = 201,
    config=None,
) -> Certificate:
    """Select a certification route for the level-n inequality: the Holland
    margin if it is nonnegative, else the Gao conditions, else a numeric
    maximization of F (dense grid up to four box dimensions, multistart
    beyond).  A numeric maximum above 1 + 1e-9 is reported as refuted;
    no such case is expected, so it would point at an implementation bug
    or at genuinely new territory.
    """
    from . import search  # deferred: search builds on this module

    if w.n < 2:
        raise InputError("need at least two weights")
    hol = holland_condition(w)
    reports = [hol]
    if hol.holds:
        return Certificate("holland", tuple(reports), slack=hol.margins[0])

    gao = gao_conditions(w)  # Holland fails => n >= 3
    reports.append(gao)
    if gao.holds:
        slack = 1.0 - max(boundary_bound(w), interior_bound(w))
        return Certificate("gao", tuple(reports), slack=slack)

    if w.n - 1 <= search.GRID_DIM_LIMIT:
        result = search.grid_max_F(w, grid_resolution)
    else:
        cfg = config if config is not None else search.SearchConfig(seed=0)
        result = search.multistart_max_F(w, cfg)
    route = "refuted-numeric" if result.best_value > 1.0 + 1e-9 else "numeric-only"
    return Certificate(
        route,
        tuple(reports),
        slack=1.0 - result.best_value,
        numeric_max={
            "value": result.best_value,
            "argmax": list(result.best_point),
        },
    )
