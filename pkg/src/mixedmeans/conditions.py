"""Weight-sequence admissibility checks.

Three sufficient conditions for the level-n mixed arithmetic-geometric mean
increment inequality, ordered by generality:

* Nanjundiah: W_n w_k - W_k w_n > 0 for 2 <= k <= n-1 (works for all
  exponent pairs);
* Holland: W_{n-1}^2 >= w_n * (W_1 + ... + W_{n-2});
* Gao: a strict-excess regime where Holland fails but the excess
  e = w_n S_{n-2} / W_{n-1}^2 - 1 stays below w_1/w_n and two product
  bounds hold.

``existence_check`` verifies that for any positive head w_1..w_{n-1} the
critical tail weight (which puts Holland exactly on its boundary) has a
right-neighborhood where the Gao conditions hold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .means import InputError, WeightSequence, _positive_array

__all__ = [
    "NotApplicableError",
    "ConditionReport",
    "nanjundiah_condition",
    "holland_condition",
    "gao_conditions",
    "d_zero",
    "critical_weight",
    "existence_check",
    "tail_sum_maximizer",
    "induction_gap",
]

# Strict inequalities count as satisfied only above this margin; ties are
# reported as failing with the boundary flag set.
STRICT_TOL = 1e-12


class NotApplicableError(ValueError):
    """The condition does not apply to this input (e.g. n too small, or a
    threshold whose defining denominator is not positive)."""


@dataclass(frozen=True)
class ConditionReport:
    """Named verdict with one signed margin per sub-inequality
    (positive = satisfied with that slack)."""

    name: str
    holds: bool
    margins: tuple[float, ...]
    details: tuple[str, ...]
    boundary: bool = False

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "holds": self.holds,
            "margins": [
                {"label": label, "value": value}
                for label, value in zip(self.details, self.margins)
            ],
        }


def nanjundiah_condition(w: WeightSequence) -> ConditionReport:
    """Margins W_n w_k - W_k w_n for k = 2..n-1; vacuous at n = 2."""
    if w.n < 2:
        raise InputError("need at least two weights")
    W_n = w.W[-1]
    w_n = w.w[-1]
    ks = range(2, w.n)
    margins = tuple(float(W_n * w.w[k - 1] - w.W[k - 1] * w_n) for k in ks)
    details = tuple(f"k={k}" for k in ks)
    return ConditionReport(
        name="nanjundiah",
        holds=all(m >= 0.0 for m in margins),
        margins=margins,
        details=details,
    )


def holland_condition(w: WeightSequence) -> ConditionReport:
    """Single margin W_{n-1}^2 - w_n * S_{n-2} (empty sum at n = 2)."""
    if w.n < 2:
        raise InputError("need at least two weights")
    S_n2 = float(w.S[-3]) if w.n >= 3 else 0.0
    margin = float(w.W[-2]) ** 2 - float(w.w[-1]) * S_n2
    return ConditionReport(
        name="holland",
        holds=margin >= 0.0,
        margins=(margin,),
        details=("W_{n-1}^2 - w_n*S_{n-2}",),
    )


def _excess(w: WeightSequence) -> float:
    """e = w_n S_{n-2} / W_{n-1}^2 - 1, the amount by which Holland fails."""
    return float(w.w[-1]) * float(w.S[-3]) / float(w.W[-2]) ** 2 - 1.0


def gao_conditions(w: WeightSequence) -> ConditionReport:
    """Four margins: (a) strict positivity of the excess e, (b) e bounded by
    w_1/w_n, (c) the head product bound, (d) the tail product bound.  The
    products are accumulated in the log domain; their margins are reported
    as 1 minus the exponentiated value.
    """
    if w.n < 3:
        raise NotApplicableError("needs at least three weights")
    W = w.W
    W_n = float(W[-1])
    W_n1 = float(W[-2])
    w_n = float(w.w[-1])
    w_1 = float(w.w[0])

    e = _excess(w)
    margin_b = w_1 / w_n - e

    # head product: (W_{n-1}/W_n) * prod (W_{i+1}/W_i)^{W_i w_n / W_{n-1}^2}
    log_head = float(
        np.sum((W[:-2] * w_n / W_n1**2) * np.log(W[1:-1] / W[:-2]))
    )
    margin_c = -math.expm1(math.log(W_n1 / W_n) + log_head)

    # tail product: prod (W_{i+1}/w_{i+1})^{w_{i+1}/W_{n-1}}
    log_tail = float(
        np.sum((w.w[1:-1] / W_n1) * np.log(W[1:-1] / w.w[1:-1]))
    )
    factor = (W_n1 * w_n / (W_n * w_1)) * e + w_n / W_n
    margin_d = 1.0 - factor * math.exp(log_tail)

    on_boundary = abs(e) <= STRICT_TOL
    holds = (
        e > STRICT_TOL
        and margin_b >= 0.0
        and margin_c >= 0.0
        and margin_d >= 0.0
    )
    return ConditionReport(
        name="gao",
        holds=holds,
        margins=(e, margin_b, margin_c, margin_d),
        details=("excess", "w1/wn - excess", "head product", "tail product"),
        boundary=on_boundary,
    )


def d_zero(w: WeightSequence) -> float:
    """Threshold (w_1/w_n) / e below which the stationarity profile is
    provably decreasing; only defined when the excess e is positive."""
    if w.n < 3:
        raise NotApplicableError("needs at least three weights")
    e = _excess(w)
    if e <= 0.0:
        raise NotApplicableError("excess is not positive; threshold undefined")
    return (float(w.w[0]) / float(w.w[-1])) / e


def critical_weight(head) -> float:
    """The tail weight W_{n-1}^2 / S_{n-2} that, appended to the head,
    makes the excess vanish (Holland exactly on its boundary)."""
    head = _positive_array(head, "head weights")
    if head.size < 2:
        raise InputError("head must have at least two weights")
    W = np.cumsum(head)
    S = np.cumsum(W)
    return float(W[-1]) ** 2 / float(S[-2])


def existence_check(head) -> ConditionReport:
    """Strict margins guaranteeing that the Gao conditions hold in a
    right-neighborhood of the critical tail weight:

    * power margin (log domain): prod W_i^{w_i} over i <= n-2 strictly
      exceeds (S_{n-2}/S_{n-1})^{S_{n-2}} * W_{n-1}^{W_{n-2}};
    * product margin: (W_{n-1}/S_{n-1}) * prod (W_{i+1}/w_{i+1})^{w_{i+1}/W_{n-1}}
      is strictly below 1.

    Both hold for every positive head; a failing margin signals an
    implementation bug, not a mathematical possibility.
    """
    head = _positive_array(head, "head weights")
    if head.size < 2:
        raise InputError("head must have at least two weights")
    W = np.cumsum(head)
    S = np.cumsum(W)
    W_n1 = float(W[-1])
    S_n2 = float(S[-2])
    S_n1 = float(S[-1])

    margin_power = float(np.sum(head[:-1] * np.log(W[:-1]))) - (
        S_n2 * math.log(S_n2 / S_n1) + float(W[-2]) * math.log(W_n1)
    )
    log_prod = float(np.sum((head[1:] / W_n1) * np.log(W[1:] / head[1:])))
    margin_product = -math.expm1(math.log(W_n1 / S_n1) + log_prod)

    margins = (margin_power, margin_product)
    return ConditionReport(
        name="existence",
        holds=all(m > STRICT_TOL for m in margins),
        margins=margins,
        details=("power margin (log)", "product margin"),
        boundary=any(abs(m) <= STRICT_TOL for m in margins),
    )


def tail_sum_maximizer(head) -> float:
    """The total weight W_n = W_{n-1} S_{n-1} / S_{n-2} at which the
    right side of the induction bound (see ``induction_gap``) peaks."""
    head = _positive_array(head, "head weights")
    if head.size < 2:
        raise InputError("head must have at least two weights")
    W = np.cumsum(head)
    S = np.cumsum(W)
    return float(W[-1]) * float(S[-1]) / float(S[-2])


def induction_gap(head, W_n: float) -> float:
    """Log-domain gap (left minus right) of the induction step behind the
    power margin of ``existence_check``:

        (S_{n-2}/S_{n-1})^{S_{n-2}} W_{n-1}^{W_{n-1}}
            >= (S_{n-1}/S_n)^{S_{n-1}} W_n^{W_{n-1}},

    where S_n = S_{n-1} + W_n.  The gap vanishes at the maximizing W_n.
    """
    head = _positive_array(head, "head weights")
    if head.size < 2:
        raise InputError("head must have at least two weights")
    if W_n <= 0.0:
        raise InputError("W_n must be positive")
    W = np.cumsum(head)
    S = np.cumsum(W)
    W_n1 = float(W[-1])
    S_n2 = float(S[-2])
    S_n1 = float(S[-1])
    S_n = S_n1 + W_n
    left = S_n2 * math.log(S_n2 / S_n1) + W_n1 * math.log(W_n1)
    right = S_n1 * math.log(S_n1 / S_n) + W_n1 * math.log(W_n)
    return left - right
