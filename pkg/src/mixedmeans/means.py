"""Weighted power means, partial-mean sequences, and the product identities
relating the running geometric mean of running arithmetic means to its
telescoped factorizations.

Everything here is a pure function of validated, read-only arrays.  Products
of powers are evaluated in the log domain throughout: exponents built from
prefix-weight ratios become extreme for skewed weight sequences and direct
products overflow or underflow long before the result does.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import logsumexp

__all__ = [
    "InputError",
    "WeightSequence",
    "as_samples",
    "power_mean",
    "partial_mean_sequence",
    "mixed_mean",
    "identity_residuals",
]

# Absolute tolerance on |sum(q) - 1| for probability weights.
NORMALIZATION_TOL = 1e-12


class InputError(ValueError):
    """Input violates a positivity, length, or normalization contract."""


def _positive_array(values, label: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InputError(f"{label} must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise InputError(f"{label} entries must be finite and strictly positive")
    arr.setflags(write=False)
    return arr


class WeightSequence:
    """Positive weights w_1..w_n with cached prefix sums.

    ``W[i]`` is w_1 + ... + w_{i+1} (0-based storage) and ``S[k]`` is
    W_1 + ... + W_{k+1}.  Zero weights are rejected; callers that want the
    zero-weight limit should perturb the input themselves.
    """

    __slots__ = ("w", "W", "S")

    def __init__(self, w):
        self.w = _positive_array(w, "weights")
        self.W = np.cumsum(self.w)
        self.S = np.cumsum(self.W)
        self.W.setflags(write=False)
        self.S.setflags(write=False)

    @property
    def n(self) -> int:
        return self.w.size

    @property
    def total(self) -> float:
        return float(self.W[-1])

    def head(self, k: int) -> "WeightSequence":
        """The sub-sequence w_1..w_k."""
        if not 1 <= k <= self.n:
            raise InputError(f"head length {k} out of range 1..{self.n}")
        return WeightSequence(self.w[:k])

    def normalized(self) -> np.ndarray:
        """w / W_n, a probability vector."""
        return self.w / self.W[-1]

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"WeightSequence({self.w.tolist()})"


def as_samples(x, n: int | None = None) -> np.ndarray:
    """Validate a data vector: positive entries, optionally a fixed length."""
    arr = _positive_array(x, "samples")
    if n is not None and arr.size != n:
        raise InputError(f"expected {n} samples, got {arr.size}")
    return arr


def power_mean(q, x, r: float) -> float:
    """Generalized weighted power mean (sum_i q_i x_i^r)^(1/r).

    ``q`` must be a probability vector (positive, summing to 1 within
    1e-12).  ``r = 0`` is the exact geometric-mean branch, not a small-r
    approximation.
    """
    q = np.asarray(q, dtype=float)
    x = as_samples(x)
    if q.shape != x.shape:
        raise InputError("weights and samples must have equal length")
    if np.any(q <= 0.0) or not np.all(np.isfinite(q)):
        raise InputError("probability weights must be strictly positive")
    if abs(float(q.sum()) - 1.0) > NORMALIZATION_TOL:
        raise InputError("probability weights must sum to 1 within 1e-12")
    log_x = np.log(x)
    if r == 0.0:
        return float(math.exp(float(q @ log_x)))
    return float(math.exp(float(logsumexp(r * log_x, b=q)) / r))


def partial_mean_sequence(w: WeightSequence, x, r: float) -> np.ndarray:
    """The running r-means: entry i is the r-mean of x_1..x_{i+1} under the
    prefix weights w_1..w_{i+1} normalized by W_{i+1}.
    """
    x = as_samples(x, w.n)
    log_x = np.log(x)
    if r == 0.0:
        values = np.exp(np.cumsum(w.w * log_x) / w.W)
    else:
        acc = np.logaddexp.accumulate(np.log(w.w) + r * log_x)
        values = np.exp((acc - np.log(w.W)) / r)
    values[0] = x[0]  # single-point mean is exact
    return values


def mixed_mean(w: WeightSequence, x, outer: float, inner: float) -> float:
    """Outer power mean of the running inner-mean sequence."""
    inner_means = partial_mean_sequence(w, x, inner)
    return power_mean(w.normalized(), inner_means, outer)


def identity_residuals(w: WeightSequence, x) -> tuple[float, float]:
    """Relative residuals |lhs/rhs - 1| of the two factorizations of the
    running geometric mean of running arithmetic means:

    * the last-step split into the length-(n-1) value and A_n, and
    * the telescoped product of successive A_i / A_{i+1} ratios.

    Both are algebraic identities; the residuals measure only rounding.
    """
    if w.n < 2:
        raise InputError("need at least two entries")
    x = as_samples(x, w.n)
    A = partial_mean_sequence(w, x, 1.0)
    log_A = np.log(A)
    # log of the running geometric mean of A_1..A_k, for each k
    log_G_of_A = np.cumsum(w.w * log_A) / w.W

    lhs1 = log_G_of_A[-1]
    rhs1 = (w.W[-2] / w.W[-1]) * log_G_of_A[-2] + (w.w[-1] / w.W[-1]) * log_A[-1]

    lhs2 = log_G_of_A[-2]
    rhs2 = log_A[-1] + float(np.sum(w.W[:-1] * (log_A[:-1] - log_A[1:]))) / w.W[-2]

    return abs(math.expm1(lhs1 - rhs1)), abs(math.expm1(lhs2 - rhs2))
