"""Euler-Maruyama simulation of Langevin-type processes.

Scheme: x_{i+1} = x_i + dt*drift(x_i, t_i) + sqrt(dt*diffusion(x_i, t_i)) * G_i
with G_i i.i.d. Gaussian of mean 0 and variance 2 (delta-correlated noise of
intensity 2), so a unit diffusion yields one-step increment variance 2*dt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import SimulationError
from .series import SampledSeries

__all__ = ["ProcessSpec", "euler_maruyama", "builtin_process", "BUILTIN_PROCESSES"]

NOISE_VARIANCE = 2.0


@dataclass
class ProcessSpec:
    """Everything needed to generate one realization of an SDE.

    ``drift`` and ``diffusion`` map (state vector, time) to a vector of
    per-dimension values; diffusion must be non-negative wherever evaluated.
    """

    dimension: int
    drift: Callable
    diffusion: Callable
    x0: np.ndarray = None
    dt: float = 0.1
    n_samples: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValueError("dimension must be 1 or 2")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.n_samples < 2:
            raise ValueError("need at least 2 samples")
        if self.x0 is None:
            self.x0 = np.zeros(self.dimension)
        self.x0 = np.atleast_1d(np.asarray(self.x0, dtype=float))
        if self.x0.size != self.dimension:
            raise ValueError("x0 must match the process dimension")


def euler_maruyama(spec: ProcessSpec) -> list[SampledSeries]:
    """Integrate the process, returning one SampledSeries per dimension.

    Deterministic given the spec (including the seed). Time passed to the
    coefficient functions is t_i = i*dt.
    """
    rng = np.random.default_rng(spec.seed)
    n, dim, dt = spec.n_samples, spec.dimension, spec.dt
    noise = rng.standard_normal((n - 1, dim)) * math.sqrt(NOISE_VARIANCE)
    out = np.empty((n, dim))
    x = spec.x0.copy()
    out[0] = x
    for i in range(n - 1):
        t = i * dt
        d1 = np.asarray(spec.drift(x, t), dtype=float)
        d2 = np.asarray(spec.diffusion(x, t), dtype=float)
        if np.any(d2 < 0):
            raise SimulationError(
                f"negative diffusion {d2} at step {i}, state {x}", index=i, state=x.copy()
            )
        x = x + dt * d1 + np.sqrt(dt * d2) * noise[i]
        out[i + 1] = x
    return [SampledSeries(values=out[:, d].copy(), dt=dt) for d in range(dim)]


def _ou_drift(x, t):
    return -x


def _piecewise_drift(x, t):
    return np.where(x <= 0, -0.5 * x, -2.0 * x)


def _coupled2d_drift(s, t):
    x, y = s
    return np.array([-abs(y) * x, -0.25 * y])


def _nonstationary2d_drift(s, t):
    x, y = s
    if t <= 5000.0:
        return np.array([-abs(y) * x, -0.25 * y])
    return np.array([-abs(y) * (x - 2.0), -0.25 * y])


def _unit_diffusion(dim):
    one = np.ones(dim)
    return lambda s, t: one


BUILTIN_PROCESSES = {
    "ou": dict(dimension=1, drift=_ou_drift, diffusion=_unit_diffusion(1)),
    "piecewise": dict(dimension=1, drift=_piecewise_drift, diffusion=_unit_diffusion(1)),
    "coupled2d": dict(dimension=2, drift=_coupled2d_drift, diffusion=_unit_diffusion(2)),
    "nonstationary2d": dict(
        dimension=2, drift=_nonstationary2d_drift, diffusion=_unit_diffusion(2)
    ),
}


def builtin_process(
    name: str,
    n_samples: int = 100_000,
    dt: float = 0.1,
    seed: int = 0,
    x0=None,
) -> ProcessSpec:
    """Look up one of the built-in processes by name.

    Names: ou (relaxation -x), piecewise (-0.5x for x<=0, -2x for x>0),
    coupled2d (-|y|x, -0.25y), nonstationary2d (fixed point jumps 0 -> 2
    at t = 5000). Defaults: x0 = 0, N = 1e5, dt = 0.1.
    """
    try:
        proto = BUILTIN_PROCESSES[name]
    except KeyError:
        valid = ", ".join(sorted(BUILTIN_PROCESSES))
        raise KeyError(f"unknown process '{name}'; valid names: {valid}") from None
    return ProcessSpec(n_samples=n_samples, dt=dt, seed=seed, x0=x0, **proto)
