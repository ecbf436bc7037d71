"""Conditional-moment estimators and the lag-to-coefficient extraction.

Three interoperable estimator families:

* ``conditional_moment_nw`` - Nadaraya-Watson kernel average of increment
  powers around each grid point.
* ``binning_estimate`` - half-open binning; the rectangular special case.
* ``global_moment_fit`` / ``local_moment_fit`` - statistical-moment fits of
  increment powers onto a fit-function basis, either over all samples with
  uniform weights (global) or kernel-weighted per grid point (local).

An increment x_{i+m} - x_i is conditioned on the condition vector at its
start index i, and increments touching a missing sample are excluded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .basis import FitBasis, eval_basis
from .errors import EstimationError, SolveRejectedError
from .kernels import KernelFamily, KernelSpec, kernel_eval
from .series import ConditionSeries, SampledSeries

__all__ = [
    "Grid",
    "Increments",
    "MomentEstimate",
    "LocalCoefficients",
    "increments",
    "conditional_moment_nw",
    "binning_estimate",
    "global_moment_fit",
    "local_moment_fit",
    "km_from_moments",
]

DEFAULT_COUNT_FLOOR = 10.0
DEFAULT_CONDITION_LIMIT = 1e8


@dataclass
class Grid:
    """Set of condition-space points at which local estimates are produced.

    ``axes`` holds per-dimension coordinates when the grid is a regular
    cartesian product (required by the binning estimator).
    """

    points: np.ndarray
    axes: tuple | None = None

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        if self.points.ndim == 1:
            self.points = self.points[:, None]
        if self.points.ndim != 2 or self.points.shape[0] == 0:
            raise ValueError("grid must be a nonempty (G, D) array")
        if self.axes is not None:
            self.axes = tuple(np.asarray(a, dtype=float) for a in self.axes)

    def __len__(self):
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def spacing(self) -> tuple | None:
        """Per-dimension spacing for regular grids, None otherwise."""
        if self.axes is None:
            return None
        out = []
        for ax in self.axes:
            if ax.size < 2:
                return None
            d = np.diff(ax)
            if not np.allclose(d, d[0], rtol=1e-9, atol=0.0):
                return None
            out.append(float(d[0]))
        return tuple(out)

    @classmethod
    def regular(cls, mins, maxs, counts) -> "Grid":
        """Cartesian product of evenly spaced axes (strictly increasing)."""
        mins = np.atleast_1d(np.asarray(mins, dtype=float))
        maxs = np.atleast_1d(np.asarray(maxs, dtype=float))
        counts = np.atleast_1d(np.asarray(counts, dtype=int))
        axes = tuple(np.linspace(lo, hi, c) for lo, hi, c in zip(mins, maxs, counts))
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.column_stack([m.ravel() for m in mesh])
        return cls(points=pts, axes=axes)

    @classmethod
    def from_percentiles(
        cls, conditions: ConditionSeries, count: int = 50, lower: float = 1.0, upper: float = 99.0
    ) -> "Grid":
        """Auto-built grid spanning the (lower, upper) percentile range of the
        observed conditions, ``count`` points per dimension."""
        ok = ~conditions.missing
        if not ok.any():
            raise EstimationError("cannot auto-build a grid from all-missing conditions")
        cols = conditions.columns[ok]
        mins = np.percentile(cols, lower, axis=0)
        maxs = np.percentile(cols, upper, axis=0)
        return cls.regular(mins, maxs, [count] * conditions.dim)


@dataclass
class Increments:
    """Lagged differences x_{i+m} - x_i with their missing mask."""

    values: np.ndarray
    missing: np.ndarray
    lag_steps: int
    tau: float


@dataclass
class MomentEstimate:
    """One conditional-moment value at one grid point."""

    grid_point: np.ndarray
    order: int
    lag_steps: int
    value: float
    effective_count: float
    valid: bool


@dataclass
class LocalCoefficients:
    """Per-grid-point coefficient vectors with solve diagnostics.

    ``phi`` is the raw coefficient vector at lag tau_m; ``Phi`` the
    per-unit-time coefficients phi / (tau_m * n!). When ``valid`` is False
    (empty support, ill-conditioned Gram matrix, or too few effective
    samples) the coefficient values carry no meaning.
    """

    grid_point: np.ndarray
    order: int
    lag_steps: int
    phi: np.ndarray
    Phi: np.ndarray
    gram_condition: float
    effective_count: float
    valid: bool
    reason: str | None = None


def increments(series: SampledSeries, m: int) -> Increments:
    """Differences across ``m`` steps; missing wherever either endpoint is."""
    n = len(series)
    if not 1 <= m < n:
        raise ValueError(f"lag m={m} must satisfy 1 <= m < N={n}")
    vals = series.values[m:] - series.values[:-m]
    miss = series.missing[m:] | series.missing[:-m]
    return Increments(values=vals, missing=miss, lag_steps=m, tau=m * series.dt)


def _aligned(series: SampledSeries, conditions: ConditionSeries, m: int):
    """Increment values/powers, start-index conditions and the combined mask."""
    if len(conditions) != len(series):
        raise EstimationError("series and conditions must be aligned (equal length)")
    inc = increments(series, m)
    n_inc = inc.values.size
    cond_cols = conditions.columns[:n_inc]
    mask = inc.missing | conditions.missing[:n_inc]
    vals = np.where(mask, 0.0, inc.values)
    return inc, vals, cond_cols, mask


def _raw_weights(kernel: KernelSpec, cond_cols, mask, g):
    cols = np.where(mask[:, None], 0.0, cond_cols)
    raw = np.ones(cond_cols.shape[0])
    for d in range(kernel.dim):
        raw *= kernel_eval(kernel.families[d], cols[:, d] - g[d], kernel.bandwidths[d])
    raw[mask] = 0.0
    return raw


def conditional_moment_nw(
    series: SampledSeries,
    conditions: ConditionSeries,
    grid: Grid,
    kernel: KernelSpec,
    n: int = 1,
    m: int = 1,
    count_floor: float = DEFAULT_COUNT_FLOOR,
) -> list[MomentEstimate]:
    """Nadaraya-Watson estimate of the n'th conditional moment per grid point."""
    if grid.dim != kernel.dim or grid.dim != conditions.dim:
        raise EstimationError("grid, kernel and condition dimensions must match")
    if n < 1:
        raise ValueError("moment order n must be >= 1")
    _, vals, cond_cols, mask = _aligned(series, conditions, m)
    powered = vals**n
    out = []
    for g in grid.points:
        raw = _raw_weights(kernel, cond_cols, mask, g)
        total = float(raw.sum())
        if total <= 0.0:
            out.append(
                MomentEstimate(
                    grid_point=g.copy(), order=n, lag_steps=m,
                    value=float("nan"), effective_count=0.0, valid=False,
                )
            )
            continue
        value = float(raw @ powered) / total
        out.append(
            MomentEstimate(
                grid_point=g.copy(), order=n, lag_steps=m,
                value=value, effective_count=total, valid=total >= count_floor,
            )
        )
    return out


def binning_estimate(
    series: SampledSeries,
    conditions: ConditionSeries,
    grid: Grid,
    n: int = 1,
    m: int = 1,
    count_floor: float = DEFAULT_COUNT_FLOOR,
) -> list[MomentEstimate]:
    """Binning estimate: plain average of increment powers per half-open bin.

    The grid must be regular; bins are centered on the grid points with
    width equal to the grid spacing, membership [g - s/2, g + s/2) per
    dimension so each sample lands in exactly one bin.
    """
    spacing = grid.spacing
    if spacing is None:
        raise EstimationError("binning requires a regular, uniformly spaced grid")
    if grid.dim != conditions.dim:
        raise EstimationError("grid and condition dimensions must match")
    if n < 1:
        raise ValueError("moment order n must be >= 1")
    _, vals, cond_cols, mask = _aligned(series, conditions, m)
    powered = vals**n

    shape = tuple(ax.size for ax in grid.axes)
    flat_idx = np.zeros(cond_cols.shape[0], dtype=np.int64)
    in_range = ~mask
    for d, (ax, s) in enumerate(zip(grid.axes, spacing)):
        left = ax[0] - 0.5 * s
        idx = np.floor((cond_cols[:, d] - left) / s).astype(np.int64)
        in_range &= (idx >= 0) & (idx < ax.size)
        flat_idx = flat_idx * shape[d] + np.clip(idx, 0, ax.size - 1)

    g_total = int(np.prod(shape))
    counts = np.bincount(flat_idx[in_range], minlength=g_total).astype(float)
    sums = np.bincount(flat_idx[in_range], weights=powered[in_range], minlength=g_total)

    out = []
    for k, g in enumerate(grid.points):
        c = counts[k]
        if c <= 0:
            out.append(
                MomentEstimate(
                    grid_point=g.copy(), order=n, lag_steps=m,
                    value=float("nan"), effective_count=0.0, valid=False,
                )
            )
        else:
            out.append(
                MomentEstimate(
                    grid_point=g.copy(), order=n, lag_steps=m,
                    value=float(sums[k] / c), effective_count=float(c),
                    valid=c >= count_floor,
                )
            )
    return out


def global_moment_fit(
    series: SampledSeries,
    basis: FitBasis,
    n: int = 1,
    m: int = 1,
    condition_limit: float = DEFAULT_CONDITION_LIMIT,
) -> np.ndarray:
    """Global statistical-moment coefficients phi^{(n)}(tau_m).

    Solves  mean(F(x_i)) * phi = mean((dx_i)^n * f(x_i))  over all valid
    increment start indices, where F is the function matrix f f^T.
    """
    if n < 1:
        raise ValueError("moment order n must be >= 1")
    inc = increments(series, m)
    n_inc = inc.values.size
    ok = ~(inc.missing | series.missing[:n_inc])
    if int(ok.sum()) < basis.size:
        raise EstimationError(
            f"need at least {basis.size} valid increments, have {int(ok.sum())}"
        )
    x = series.values[:n_inc][ok]
    dxn = inc.values[ok] ** n
    b = eval_basis(basis, x)
    gram = (b.T @ b) / x.size
    rhs = (b.T @ dxn) / x.size
    if not rhs.any():
        # All increment powers are zero: the zero vector solves exactly even
        # when the Gram matrix is singular (e.g. a constant series).
        return np.zeros(basis.size)
    cond = float(np.linalg.cond(gram))
    if not np.isfinite(cond) or cond > condition_limit:
        raise SolveRejectedError(
            f"global Gram matrix too ill-conditioned (cond={cond:.3g})", condition=cond
        )
    return np.linalg.solve(gram, rhs)


def local_moment_fit(
    series: SampledSeries,
    conditions: ConditionSeries,
    grid: Grid,
    kernel: KernelSpec,
    basis: FitBasis,
    n: int = 1,
    m: int = 1,
    count_floor: float = DEFAULT_COUNT_FLOOR,
    condition_limit: float = DEFAULT_CONDITION_LIMIT,
) -> list[LocalCoefficients]:
    """Local statistical-moment coefficients per grid point.

    Per grid point g:  phi = (sum_i w_i F(x_i))^{-1} (sum_i w_i (dx_i)^n f(x_i))
    with w the normalized kernel weights at g. ``Phi = phi / (tau_m * n!)``.
    Grid points with empty support, an ill-conditioned Gram matrix or an
    effective count below max(N_f, count_floor) are flagged invalid.
    """
    if grid.dim != kernel.dim or grid.dim != conditions.dim:
        raise EstimationError("grid, kernel and condition dimensions must match")
    if n < 1:
        raise ValueError("moment order n must be >= 1")
    inc, vals, cond_cols, mask = _aligned(series, conditions, m)
    powered = vals**n
    x = np.where(mask, 0.0, series.values[: vals.size])
    b = eval_basis(basis, x)
    nf = basis.size
    scale = inc.tau * math.factorial(n)
    floor = max(float(nf), float(count_floor))
    nan_vec = np.full(nf, np.nan)

    out = []
    for g in grid.points:
        raw = _raw_weights(kernel, cond_cols, mask, g)
        total = float(raw.sum())
        if total <= 0.0:
            out.append(
                LocalCoefficients(
                    grid_point=g.copy(), order=n, lag_steps=m,
                    phi=nan_vec.copy(), Phi=nan_vec.copy(),
                    gram_condition=float("inf"), effective_count=0.0,
                    valid=False, reason="empty-support",
                )
            )
            continue
        w = raw / total
        bw = b * w[:, None]
        gram = bw.T @ b
        rhs = b.T @ (w * powered)
        cond = float(np.linalg.cond(gram))
        if not np.isfinite(cond) or cond > condition_limit:
            out.append(
                LocalCoefficients(
                    grid_point=g.copy(), order=n, lag_steps=m,
                    phi=nan_vec.copy(), Phi=nan_vec.copy(),
                    gram_condition=cond, effective_count=total,
                    valid=False, reason="ill-conditioned",
                )
            )
            continue
        phi = np.linalg.solve(gram, rhs)
        ok = total >= floor
        out.append(
            LocalCoefficients(
                grid_point=g.copy(), order=n, lag_steps=m,
                phi=phi, Phi=phi / scale,
                gram_condition=cond, effective_count=total,
                valid=ok, reason=None if ok else "low-count",
            )
        )
    return out


def km_from_moments(values, n: int, dt: float, lags=(1,)) -> float:
    """Kramers-Moyal coefficient from per-lag conditional moments.

    Single lag (default {1}): D = M / (n! * tau). Multiple lags: slope of
    the least-squares line through the origin of M vs tau, divided by n!.
    """
    values = np.atleast_1d(np.asarray(values, dtype=float))
    lags = np.atleast_1d(np.asarray(lags, dtype=float))
    if lags.size == 0:
        raise ValueError("lag set must be nonempty")
    if values.size != lags.size:
        raise ValueError("one moment value per lag required")
    if not np.all(np.isfinite(values)):
        raise ValueError("all moment values must be valid (finite)")
    taus = lags * dt
    fact = math.factorial(n)
    if lags.size == 1:
        return float(values[0] / (fact * taus[0]))
    slope = float((taus @ values) / (taus @ taus))
    return slope / fact
