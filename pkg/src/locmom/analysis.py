"""Interpretable quantities derived from linear-drift coefficients:
fixed points, stability, drift surfaces and error summaries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from .basis import FitBasis, eval_basis
from .errors import EstimationError
from .estimators import LocalCoefficients

__all__ = ["DriftLine", "fixed_point", "drift_surface", "error_metrics"]


@dataclass
class DriftLine:
    """Linear drift Phi0 + Phi1*x at one grid point.

    ``fixed_point`` is -Phi0/Phi1 when the slope is nonzero (None otherwise);
    the line is stable exactly when Phi1 < 0.
    """

    grid_point: np.ndarray
    Phi0: float
    Phi1: float
    fixed_point: float | None
    stable: bool
    valid: bool


def fixed_point(coeffs: LocalCoefficients) -> DriftLine:
    """Fixed point and stability of a (constant, identity) drift fit."""
    if coeffs.Phi.size != 2:
        raise EstimationError("fixed_point requires exactly the basis (1, x)")
    if not coeffs.valid:
        return DriftLine(
            grid_point=np.asarray(coeffs.grid_point), Phi0=float("nan"), Phi1=float("nan"),
            fixed_point=None, stable=False, valid=False,
        )
    phi0, phi1 = float(coeffs.Phi[0]), float(coeffs.Phi[1])
    fp = -phi0 / phi1 if phi1 != 0.0 else None
    return DriftLine(
        grid_point=np.asarray(coeffs.grid_point), Phi0=phi0, Phi1=phi1,
        fixed_point=fp, stable=phi1 < 0.0, valid=True,
    )


def drift_surface(coeff_list, basis: FitBasis, x_samples) -> pd.DataFrame:
    """Evaluate sum_j Phi_j f_j(x) on ``x_samples`` for every valid grid point.

    Returns a table with one row per (grid point, x) pair: columns g0..g{D-1},
    x and drift. Invalid grid points emit no rows.
    """
    x_samples = np.atleast_1d(np.asarray(x_samples, dtype=float))
    bx = eval_basis(basis, x_samples)
    rows = []
    for c in coeff_list:
        if not c.valid:
            continue
        if c.Phi.size != basis.size:
            raise EstimationError("coefficient length does not match the basis")
        drift = bx @ c.Phi
        g = np.asarray(c.grid_point, dtype=float).reshape(-1)
        for xv, dv in zip(x_samples, drift):
            rows.append(list(g) + [float(xv), float(dv)])
    dim = coeff_list[0].grid_point.size if coeff_list else 0
    cols = [f"g{d}" for d in range(dim)] + ["x", "drift"]
    return pd.DataFrame(rows, columns=cols)


def error_metrics(estimated: pd.DataFrame, truth) -> dict:
    """Residual summary of a drift table against a truth function.

    ``truth`` is called as truth(x, grid_point) per row. Only rows with
    finite estimates enter the metrics; the excluded count is reported.
    """
    if len(estimated) == 0:
        raise EstimationError("no evaluation points to compare")
    gcols = [c for c in estimated.columns if c.startswith("g")]
    xs = estimated["x"].to_numpy(dtype=float)
    est = estimated["drift"].to_numpy(dtype=float)
    gpts = estimated[gcols].to_numpy(dtype=float)
    finite = np.isfinite(est)
    n_excluded = int((~finite).sum())
    if not finite.any():
        raise EstimationError("no valid evaluation points to compare")
    res = np.array(
        [est[i] - float(truth(xs[i], gpts[i])) for i in np.flatnonzero(finite)]
    )
    return {
        "mean_abs_error": float(np.mean(np.abs(res))),
        "max_abs_error": float(np.max(np.abs(res))),
        "residuals": res,
        "n_excluded": n_excluded,
    }
