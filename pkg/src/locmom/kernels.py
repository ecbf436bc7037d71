"""Kernel families, product kernels and normalized per-sample weights.

Conventions:
    gaussian:      k(x) = exp(-0.5 * (x/h)^2)
    epanechnikov:  k(x) = 1 - (x/h)^2  on |x| <= h, else 0
    rectangular:   k(x) = 1            on |x| <= h, else 0

Kernels are deliberately unnormalized; the weight normalization in
``normalized_weights`` cancels any constant factor anyway. Support
boundaries are inclusive.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .series import ConditionSeries

__all__ = [
    "KernelFamily",
    "KernelSpec",
    "WeightVector",
    "kernel_eval",
    "product_kernel",
    "normalized_weights",
]


class KernelFamily(str, Enum):
    GAUSSIAN = "gaussian"
    EPANECHNIKOV = "epanechnikov"
    RECTANGULAR = "rectangular"


def kernel_eval(family: KernelFamily | str, x, h: float):
    """Evaluate an unnormalized kernel at offset ``x`` with bandwidth ``h``.

    Accepts scalars or arrays for ``x``; returns the same shape.
    """
    h = float(h)
    if not h > 0:
        raise ValueError("bandwidth h must be positive")
    family = KernelFamily(family)
    x = np.asarray(x, dtype=float)
    u = x / h
    if family is KernelFamily.GAUSSIAN:
        out = np.exp(-0.5 * u * u)
    elif family is KernelFamily.EPANECHNIKOV:
        out = np.where(np.abs(x) <= h, 1.0 - u * u, 0.0)
        # clamp fp dust when |x| is a hair inside the boundary
        out = np.maximum(out, 0.0)
    else:  # rectangular
        out = np.where(np.abs(x) <= h, 1.0, 0.0)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class KernelSpec:
    """One kernel family and bandwidth per condition dimension."""

    families: tuple
    bandwidths: tuple

    def __post_init__(self):
        fams = tuple(KernelFamily(f) for f in self.families)
        bws = tuple(float(h) for h in self.bandwidths)
        object.__setattr__(self, "families", fams)
        object.__setattr__(self, "bandwidths", bws)
        if len(fams) != len(bws):
            raise ValueError("families and bandwidths must have equal length")
        if len(fams) < 1:
            raise ValueError("kernel spec needs at least one dimension")
        if any(not h > 0 for h in bws):
            raise ValueError("all bandwidths must be strictly positive")

    @property
    def dim(self) -> int:
        return len(self.families)


def product_kernel(spec: KernelSpec, dx):
    """Product over dimensions of the per-dimension kernel values.

    ``dx`` is a condition offset of shape (D,) or a batch of shape (N, D).
    """
    dx = np.asarray(dx, dtype=float)
    squeeze = dx.ndim == 1
    if squeeze:
        dx = dx[None, :]
    if dx.shape[1] != spec.dim:
        raise ValueError(
            f"offset dimension {dx.shape[1]} does not match kernel dimension {spec.dim}"
        )
    out = np.ones(dx.shape[0])
    for d in range(spec.dim):
        out *= kernel_eval(spec.families[d], dx[:, d], spec.bandwidths[d])
    return float(out[0]) if squeeze else out


@dataclass
class WeightVector:
    """Normalized per-sample weights at one grid point.

    ``total_raw`` is the sum of unnormalized kernel values (the effective
    count); when it is zero the support is empty and ``weights`` is all-zero.
    """

    weights: np.ndarray
    total_raw: float

    @property
    def empty(self) -> bool:
        return self.total_raw <= 0.0


def normalized_weights(spec: KernelSpec, conditions: ConditionSeries, g) -> WeightVector:
    """Per-sample weights for grid point ``g``, summing to 1 when non-degenerate.

    Missing samples receive raw kernel value 0 (they stay in the index space
    so the weight vector remains aligned with the series). An empty support
    is reported explicitly via ``WeightVector.empty``.
    """
    if len(conditions) == 0:
        raise ValueError("conditions must be nonempty")
    g = np.asarray(g, dtype=float).reshape(-1)
    if g.size != spec.dim:
        raise ValueError(
            f"grid point dimension {g.size} does not match kernel dimension {spec.dim}"
        )
    cols = np.where(conditions.missing[:, None], 0.0, conditions.columns)
    raw = product_kernel(spec, cols - g[None, :])
    raw = np.where(conditions.missing, 0.0, raw)
    total = float(raw.sum())
    if total <= 0.0:
        return WeightVector(weights=np.zeros(len(conditions)), total_raw=0.0)
    return WeightVector(weights=raw / total, total_raw=total)
