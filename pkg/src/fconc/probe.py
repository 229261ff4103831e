"""Infimum search for P(X <= kappa * E[X]) over integer degrees of freedom.

Three ingredients:

* a brute-force scan of the (d1, d2) grid up to configurable caps, with a
  deterministic (value, d1, d2) tie-break;
* the b -> infinity limit curve g_kappa(a) = P(a, kappa*a), whose minimum
  over an a-grid is the second infimum candidate;
* the closed-form answers for kappa <= 1 (0 below 1, 1/2 at 1, neither
  attained), which are reported alongside the numerical evidence rather
  than assumed.

The grid scan decomposes into d1 stripes whose per-cell arithmetic does not
depend on stripe boundaries, so results are bit-identical for any worker
count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .special import DEFAULT_CONFIG, ConvergenceError, EvalConfig, reg_inc_beta, reg_lower_gamma

__all__ = [
    "GridSpec",
    "DEFAULT_GRID",
    "ProbeResult",
    "ConjectureReport",
    "grid_infimum",
    "limit_b",
    "limit_curve_min",
    "infimum",
    "conjecture_probe",
    "default_a_grid",
    "FLAG_EXACT_INF_NOT_ATTAINED",
    "FLAG_CONJECTURE_REGIME",
]

# Flags attached to results; the CLI serializes these verbatim.
FLAG_EXACT_INF_NOT_ATTAINED = "exact-infimum-not-attained"
FLAG_CONJECTURE_REGIME = "conjecture-kappa-gt-1"

# d1 rows per scan chunk; ~256k cells keeps the working set small.
_STRIPE_ROWS = 128


@dataclass(frozen=True)
class GridSpec:
    """Search caps for the integer (d1, d2) grid; d2 starts at 3."""

    d1_max: int
    d2_max: int
    d2_min: int = 3

    def __post_init__(self):
        if self.d1_max < 1:
            raise ValueError(f"d1_max must be >= 1, got {self.d1_max}")
        if self.d2_max < 3:
            raise ValueError(f"d2_max must be >= 3, got {self.d2_max}")
        if self.d2_min != 3:
            raise ValueError("d2_min is fixed at 3")


DEFAULT_GRID = GridSpec(1999, 1999)


@dataclass(frozen=True)
class ProbeResult:
    """Outcome of an infimum probe at one kappa.

    grid_min / argmin_* come from the exhaustive scan; limit_min is the
    minimum of g_kappa over the sampled a-grid. combined_inf_estimate is
    min(grid_min, limit_min). exact_inf carries the closed-form value for
    kappa <= 1 (not attained on the grid) and is None for kappa > 1.
    """

    kappa: float
    grid_min: float
    argmin_d1: int
    argmin_d2: int
    grid: GridSpec
    limit_min: Optional[float] = None
    limit_argmin_a: Optional[float] = None
    exact_inf: Optional[float] = None
    flags: tuple = field(default_factory=tuple)

    @property
    def combined_inf_estimate(self) -> float:
        if self.limit_min is None:
            return self.grid_min
        return min(self.grid_min, self.limit_min)


@dataclass(frozen=True)
class ConjectureReport:
    """Numerical evidence for the kappa > 1 conjecture (never a proof).

    falsified is True if any evaluated point came out <= 1/2, in which case
    counterexample holds ("grid", d1, d2, value) or ("limit", a, value).
    """

    kappa: float
    margin: float
    result: ProbeResult
    falsified: bool
    counterexample: Optional[tuple] = None


def _check_kappa(kappa) -> float:
    k = float(kappa)
    if not math.isfinite(k) or k <= 0.0:
        raise ValueError(f"kappa must be a finite positive real, got {kappa}")
    return k


def _scan_stripe(args):
    """Minimum of the probe over d1 in [d1_lo, d1_hi] x d2 in [3, d2_max].

    Returns (min_value, d1, d2). Row-major argmin gives the smallest d1,
    then smallest d2, among exact ties.
    """
    d1_lo, d1_hi, d2_max, kappa, config = args
    d1s = np.arange(d1_lo, d1_hi + 1, dtype=np.int64)
    d2s = np.arange(3, d2_max + 1, dtype=np.int64)
    a = d1s[:, None] / 2.0
    b = d2s[None, :] / 2.0
    ka = kappa * a
    q = ka / (ka + (b - 1.0))
    a_full, b_full = np.broadcast_arrays(a, b)
    try:
        vals = reg_inc_beta(q.ravel(), a_full.ravel(), b_full.ravel(), config)
    except ConvergenceError as exc:
        if exc.args_at_failure is not None:
            # the failing shape pair may be branch-swapped; the candidate
            # whose d1 lies in this stripe is the offending cell
            _, fa, fb = exc.args_at_failure
            cell = (int(round(2 * fa)), int(round(2 * fb)))
            if not (d1_lo <= cell[0] <= d1_hi and cell[1] >= 3):
                cell = (cell[1], cell[0])
            raise ConvergenceError(
                f"grid scan at kappa={kappa!r}: convergence failure at "
                f"(d1, d2) = {cell}",
                exc.iterations,
                exc.args_at_failure,
            ) from exc
        raise
    i = int(np.argmin(vals))
    n2 = d2s.size
    return float(vals[i]), int(d1s[i // n2]), int(d2s[i % n2])


def _stripe_args(kappa, grid, config):
    for lo in range(1, grid.d1_max + 1, _STRIPE_ROWS):
        hi = min(lo + _STRIPE_ROWS - 1, grid.d1_max)
        yield (lo, hi, grid.d2_max, kappa, config)


def grid_infimum(kappa, grid: GridSpec = DEFAULT_GRID, config: EvalConfig = DEFAULT_CONFIG,
                 workers: Optional[int] = None) -> ProbeResult:
    """Exhaustive minimum of P(X <= kappa E[X]) over the capped integer grid.

    Ties are broken toward the smallest d1, then the smallest d2. With
    workers > 1 the stripes are evaluated in a process pool; the reduction
    runs in fixed stripe order either way, so the result (and every
    intermediate value) is independent of the worker count.
    """
    k = _check_kappa(kappa)
    jobs = list(_stripe_args(k, grid, config))
    if workers is not None and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(_scan_stripe, jobs))
    else:
        partials = [_scan_stripe(j) for j in jobs]

    best_val, best_d1, best_d2 = partials[0]
    for val, d1, d2 in partials[1:]:
        if val < best_val:  # stripes ascend in d1, so ties keep the earlier argmin
            best_val, best_d1, best_d2 = val, d1, d2
    return ProbeResult(kappa=k, grid_min=best_val, argmin_d1=best_d1, argmin_d2=best_d2, grid=grid)


def limit_b(a, kappa, config: EvalConfig = DEFAULT_CONFIG):
    """The b -> infinity limit of I_{q(a,b,kappa)}(a, b): P(a, kappa*a)."""
    k = _check_kappa(kappa)
    arr = np.asarray(a, dtype=np.float64)
    if (arr <= 0.0).any():
        raise ValueError("limit_b requires a > 0")
    return reg_lower_gamma(arr, k * arr, config)


def limit_curve_min(kappa, a_grid, config: EvalConfig = DEFAULT_CONFIG):
    """Minimum of the limit curve over an ascending a-grid.

    Returns (min value, argmin a); ties resolve to the smallest a.
    """
    k = _check_kappa(kappa)
    grid = np.asarray(a_grid, dtype=np.float64)
    if grid.size == 0:
        raise ValueError("a_grid must be nonempty")
    if (grid <= 0.0).any():
        raise ValueError("a_grid values must be positive")
    if (np.diff(grid) <= 0.0).any():
        raise ValueError("a_grid must be strictly ascending")
    vals = reg_lower_gamma(grid, k * grid, config)
    i = int(np.argmin(vals))  # first occurrence: smallest a on ties
    return float(vals[i]), float(grid[i])


def default_a_grid() -> np.ndarray:
    """Half-integer a up to 1000 plus a log-spaced tail to 1e4.

    The tail documents the a -> infinity trend of the limit curve without
    claiming the infimum is attained there.
    """
    head = np.arange(1, 2001, dtype=np.float64) / 2.0
    tail = np.geomspace(1000.0, 10000.0, 61)[1:]
    return np.concatenate([head, tail])


def infimum(kappa, grid: GridSpec = DEFAULT_GRID, a_grid=None,
            config: EvalConfig = DEFAULT_CONFIG, workers: Optional[int] = None) -> ProbeResult:
    """Full probe at one kappa: grid scan + limit curve + closed-form verdict.

    For kappa < 1 the exact infimum is 0 and for kappa == 1 it is 1/2
    (neither attained at finite parameters); both are reported alongside
    the numerical minima so the closed forms are checked, not assumed.
    The regime test is an exact comparison of the double kappa against 1.0;
    values near 1 are never snapped.
    """
    k = _check_kappa(kappa)
    if a_grid is None:
        a_grid = default_a_grid()
    gres = grid_infimum(k, grid, config, workers)
    lmin, larg = limit_curve_min(k, a_grid, config)

    if k < 1.0:
        exact, flags = 0.0, (FLAG_EXACT_INF_NOT_ATTAINED,)
    elif k == 1.0:
        exact, flags = 0.5, (FLAG_EXACT_INF_NOT_ATTAINED,)
    else:
        exact, flags = None, (FLAG_CONJECTURE_REGIME,)

    return ProbeResult(
        kappa=k,
        grid_min=gres.grid_min,
        argmin_d1=gres.argmin_d1,
        argmin_d2=gres.argmin_d2,
        grid=grid,
        limit_min=lmin,
        limit_argmin_a=larg,
        exact_inf=exact,
        flags=flags,
    )


def conjecture_probe(kappa, grid: GridSpec = DEFAULT_GRID, a_grid=None,
                     config: EvalConfig = DEFAULT_CONFIG, workers: Optional[int] = None) -> ConjectureReport:
    """Check every grid cell and limit-curve point against the 1/2 bound.

    Requires kappa > 1. Reports the positive margin min(combined) - 1/2.
    A value <= 1/2 anywhere would contradict the proven lower bound, so it
    is returned as an explicit counterexample record for loud handling
    upstream; this routine never claims anything is proved.
    """
    k = _check_kappa(kappa)
    if k <= 1.0:
        raise ValueError(f"conjecture probe requires kappa > 1, got {kappa}")
    res = infimum(k, grid, a_grid, config, workers)
    counterexample = None
    if res.grid_min <= 0.5:
        counterexample = ("grid", res.argmin_d1, res.argmin_d2, res.grid_min)
    elif res.limit_min is not None and res.limit_min <= 0.5:
        counterexample = ("limit", res.limit_argmin_a, res.limit_min)
    return ConjectureReport(
        kappa=k,
        margin=res.combined_inf_estimate - 0.5,
        result=res,
        falsified=counterexample is not None,
        counterexample=counterexample,
    )
