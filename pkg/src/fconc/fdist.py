"""F-distribution semantics: mean, CDF, concentration threshold and the
probe probability P(X <= kappa * E[X]).

The integer-facing type is :class:`FParams` (degrees of freedom d1, d2);
all the beta-function math runs on :class:`ShapePair` (a, b) = (d1/2, d2/2).
The shape-pair functions accept arbitrary reals with a >= 1/2, b > 1, which
the lemma tests use for dense b-grids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .special import DEFAULT_CONFIG, reg_inc_beta

__all__ = ["FParams", "ShapePair", "mean", "cdf", "threshold", "prob_leq_kappa_mean"]


@dataclass(frozen=True)
class FParams:
    """Degrees of freedom of an F random variable.

    The mean d2/(d2-2) exists only for d2 > 2, so d2 >= 3 is required here.
    """

    d1: int
    d2: int

    def __post_init__(self):
        if not (isinstance(self.d1, (int, np.integer)) and isinstance(self.d2, (int, np.integer))):
            raise ValueError("degrees of freedom must be integers")
        if self.d1 < 1:
            raise ValueError(f"d1 must be >= 1, got {self.d1}")
        if self.d2 < 3:
            raise ValueError(f"d2 must be >= 3 (the mean requires d2 > 2), got {self.d2}")

    def shape(self) -> "ShapePair":
        return ShapePair(self.d1 / 2.0, self.d2 / 2.0)


@dataclass(frozen=True)
class ShapePair:
    """Continuous shape parameters (a, b) = (d1/2, d2/2), a >= 1/2, b > 1."""

    a: float
    b: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ValueError("shape parameters must be finite")
        if self.a < 0.5:
            raise ValueError(f"a must be >= 0.5, got {self.a}")
        if self.b <= 1.0:
            raise ValueError(f"b must be > 1, got {self.b}")


def _check_kappa(kappa) -> float:
    k = float(kappa)
    if not np.isfinite(k) or k <= 0.0:
        raise ValueError(f"kappa must be a finite positive real, got {kappa}")
    return k


def mean(p: FParams) -> float:
    """E[X] = d2 / (d2 - 2); always > 1."""
    return p.d2 / (p.d2 - 2.0)


def cdf(x, p: FParams, config=DEFAULT_CONFIG):
    """P(X <= x) = I_{d1 x / (d1 x + d2)}(d1/2, d2/2) for x >= 0."""
    xa = np.asarray(x, dtype=np.float64)
    if (xa < 0.0).any():
        raise ValueError("cdf requires x >= 0")
    t = p.d1 * xa / (p.d1 * xa + p.d2)
    return reg_inc_beta(t, p.d1 / 2.0, p.d2 / 2.0, config)


def threshold(s: ShapePair, kappa) -> float:
    """q(a, b, kappa) = kappa*a / (kappa*a + b - 1), strictly increasing in kappa.

    This is the incomplete-beta argument matching the point kappa * E[X]
    under the F CDF.
    """
    k = _check_kappa(kappa)
    ka = k * s.a
    return ka / (ka + s.b - 1.0)


def prob_leq_kappa_mean(p: FParams, kappa, config=DEFAULT_CONFIG) -> float:
    """P(X <= kappa * E[X]) = I_{q(a,b,kappa)}(a, b).

    Formed through the threshold identity q = kappa*a/(kappa*a + b - 1)
    rather than through the CDF argument, which avoids cancellation for
    large d2; agreement with the cdf path is covered by tests.
    """
    s = p.shape()
    return reg_inc_beta(threshold(s, kappa), s.a, s.b, config)
