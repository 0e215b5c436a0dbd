"""Least-squares estimation of the stretch slope alpha from measured data.

Three one-parameter models, all constrained through the exact boundary
point (no intercept is fitted):

  linear-theorem1   s_p = 1 + alpha * (h - 1), through (h=1, s_p=1)
  ipea-log          s_p = 1 - alpha * ln(s_t), through (s_t=1, s_p=1)
  eq3               s_t = m * N**(1/m - 1) with m = 1 + (s_p - 1)/alpha

The first two are closed-form ratios; the third is a 1-D search (grid
over (0, 5] with step 1e-4, widened with a warning when the optimum
hits the boundary, then golden-section refinement to 1e-7).  Empirical
alpha values from real topologies are their own quantity and are not
expected to match the 0.987 default used by the curve tools.

r_squared is computed against the constrained model: 1 - SSE/SST with
SST taken about the observed mean.  For constant observations it is 1.0
when the fit is exact and 0.0 otherwise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .analytic import CurveSeries, golden_section_min

_GRID_STEP = 1e-4
_ALPHA_CAP = 40.0


@dataclass(frozen=True)
class FitResult:
    alpha_hat: float
    residual_sse: float
    r_squared: float
    n_points: int
    model: str

    def __post_init__(self) -> None:
        if not self.alpha_hat > 0:
            raise ValueError(f"alpha_hat must be > 0 (got {self.alpha_hat})")
        if self.residual_sse < 0:
            raise ValueError(f"residual_sse must be >= 0 (got {self.residual_sse})")
        if self.r_squared > 1:
            raise ValueError(f"r_squared cannot exceed 1 (got {self.r_squared})")

    def to_text(self) -> str:
        return (
            f"model: {self.model}\n"
            f"alpha_hat: {self.alpha_hat:.10g}\n"
            f"residual_sse: {self.residual_sse:.10g}\n"
            f"r_squared: {self.r_squared:.10g}\n"
            f"n_points: {self.n_points}\n"
        )


def _r_squared(observed: Sequence[float], sse: float) -> float:
    mean = sum(observed) / len(observed)
    sst = sum((y - mean) ** 2 for y in observed)
    if sst == 0:
        return 1.0 if sse < 1e-30 else 0.0
    return 1.0 - sse / sst


def _constrained_slope(xs: list[float], ys: list[float], what: str) -> float:
    sxx = sum(x * x for x in xs)
    if sxx == 0:
        raise ValueError(f"degenerate data: {what}")
    return sum(x * y for x, y in zip(xs, ys)) / sxx


def fit_alpha_linear(points: Sequence[tuple[float, float]]) -> FitResult:
    """Fit s_p = 1 + alpha*(h - 1) to (height, path stretch) points."""
    pts = [(float(h), float(sp)) for h, sp in points]
    if len(pts) < 2:
        raise ValueError(f"need at least two points (got {len(pts)})")
    xs = [h - 1.0 for h, _ in pts]
    ys = [sp - 1.0 for _, sp in pts]
    alpha = _constrained_slope(xs, ys, "every point has height 1")
    if not alpha > 0:
        raise ValueError(f"fitted slope is not positive ({alpha}); check the data")
    sse = sum((y - alpha * x) ** 2 for x, y in zip(xs, ys))
    return FitResult(
        alpha_hat=alpha,
        residual_sse=sse,
        r_squared=_r_squared([sp for _, sp in pts], sse),
        n_points=len(pts),
        model="linear-theorem1",
    )


def fit_alpha_ipea(points: Sequence[tuple[float, float]]) -> FitResult:
    """Fit s_p = 1 - alpha*ln(s_t) to (table stretch, path stretch) points."""
    pts = [(float(st), float(sp)) for st, sp in points]
    if len(pts) < 2:
        raise ValueError(f"need at least two points (got {len(pts)})")
    for st, _ in pts:
        if not 0 < st <= 1:
            raise ValueError(f"s_t must lie in (0, 1] (got {st})")
    xs = [-math.log(st) for st, _ in pts]
    ys = [sp - 1.0 for _, sp in pts]
    alpha = _constrained_slope(xs, ys, "every point has s_t = 1")
    if not alpha > 0:
        raise ValueError(f"fitted slope is not positive ({alpha}); check the data")
    sse = sum((y - alpha * x) ** 2 for x, y in zip(xs, ys))
    return FitResult(
        alpha_hat=alpha,
        residual_sse=sse,
        r_squared=_r_squared([sp for _, sp in pts], sse),
        n_points=len(pts),
        model="ipea-log",
    )


def _eq3_sse_vector(alphas: np.ndarray, d: np.ndarray, st: np.ndarray, ln_n: float) -> np.ndarray:
    # rows: candidate alphas; cols: data points
    m = 1.0 + d[None, :] / alphas[:, None]
    pred = m * np.exp((1.0 / m - 1.0) * ln_n)
    resid = st[None, :] - pred
    return (resid * resid).sum(axis=1)


def fit_alpha_eq3(
    points: Sequence[tuple[float, float]],
    n_nodes: int,
    *,
    alpha_max: float = 5.0,
) -> FitResult:
    """Fit the composed tradeoff curve to (path stretch, table stretch) points.

    n_nodes is the network size the observations came from.  The search
    range (0, alpha_max] doubles with a warning whenever the optimum
    lands on its upper edge, up to a hard cap.
    """
    pts = [(float(sp), float(st)) for sp, st in points]
    if not pts:
        raise ValueError("need at least one point")
    if n_nodes < 2:
        raise ValueError(f"n_nodes must be >= 2 (got {n_nodes})")
    if not any(sp > 1 for sp, _ in pts):
        raise ValueError("alpha is unidentifiable: every point has s_p = 1")
    for sp, _ in pts:
        if sp < 1:
            raise ValueError(f"s_p must be >= 1 (got {sp})")
    d = np.array([sp - 1.0 for sp, _ in pts])
    st = np.array([s for _, s in pts])
    ln_n = math.log(n_nodes)

    lo = _GRID_STEP
    hi = alpha_max
    while True:
        count = int(round((hi - lo) / _GRID_STEP)) + 1
        best_sse = math.inf
        best_alpha = lo
        # chunked so a long input series cannot blow up the grid matrix
        for start in range(0, count, 4096):
            stop = min(start + 4096, count)
            alphas = lo + _GRID_STEP * np.arange(start, stop)
            sse = _eq3_sse_vector(alphas, d, st, ln_n)
            j = int(np.argmin(sse))
            if sse[j] < best_sse:
                best_sse = float(sse[j])
                best_alpha = float(alphas[j])
        at_edge = hi - best_alpha < _GRID_STEP / 2
        if at_edge and hi < _ALPHA_CAP:
            new_hi = min(hi * 2, _ALPHA_CAP)
            warnings.warn(
                f"alpha optimum hit the search boundary {hi}; widening to {new_hi}",
                stacklevel=2,
            )
            lo, hi = hi, new_hi
            continue
        break

    def sse_at(alpha: float) -> float:
        total = 0.0
        for dd, ss in zip(d, st):
            m = 1.0 + dd / alpha
            total += (ss - m * math.exp((1.0 / m - 1.0) * ln_n)) ** 2
        return total

    ref_lo = max(_GRID_STEP / 2, best_alpha - _GRID_STEP)
    ref_hi = min(_ALPHA_CAP, best_alpha + _GRID_STEP)
    alpha, sse = golden_section_min(sse_at, ref_lo, ref_hi, tol=1e-7)
    return FitResult(
        alpha_hat=alpha,
        residual_sse=sse,
        r_squared=_r_squared([s for _, s in pts], sse),
        n_points=len(pts),
        model="eq3",
    )


@dataclass(frozen=True)
class DeviationReport:
    residuals: tuple[float, ...]
    max_abs: float


def curve_deviation(
    series: CurveSeries, points: Sequence[tuple[float, float]]
) -> DeviationReport:
    """Residuals of observed (s_p, s_t) points against an analytic sweep.

    Each residual is observed s_t minus the series linearly interpolated
    at the observed s_p; points outside the sweep range raise.
    """
    if not points:
        raise ValueError("need at least one point")
    residuals = []
    for sp, st in points:
        residuals.append(st - series.table_stretch_at(sp))
    return DeviationReport(tuple(residuals), max(abs(r) for r in residuals))
