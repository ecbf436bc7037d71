"""Synthetic SCADA-like fixture: a Langevin power-conversion model with a
known power curve, optional mid-run regulation step and data gaps."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

__all__ = ["ScadaModel", "power_curve", "synthetic_scada"]

DAY = 86_400.0


@dataclass
class ScadaModel:
    """Parameters of the synthetic turbine.

    Power relaxes toward the curve value at rate ``relax_rate`` (1/s) with
    diffusion ``power_diffusion``; wind speed is mean-reverting around
    ``wind_mean`` with stationary standard deviation ``wind_sd``. From
    ``step_time`` (seconds, optional) on, the curve is capped at
    ``regulated_level`` percent of rated power.
    """

    rated: float = 100.0
    wind_mean: float = 8.0
    wind_sd: float = 2.0
    wind_relax_time: float = 3600.0
    curve_midpoint: float = 8.0
    curve_scale: float = 1.2
    relax_rate: float = 0.01
    power_sd: float = 3.0
    step_time: float | None = None
    regulated_level: float = 75.0

    def curve(self, u, t) -> float:
        """Target power (percent of rated) for wind speed u at time t."""
        p = power_curve(u, rated=self.rated, midpoint=self.curve_midpoint, scale=self.curve_scale)
        if self.step_time is not None and t > self.step_time:
            p = min(p, self.regulated_level)
        return p


def power_curve(u, rated: float = 100.0, midpoint: float = 8.0, scale: float = 1.2):
    """Sigmoid steady-state power curve in percent of rated power."""
    return rated / (1.0 + np.exp(-(np.asarray(u, dtype=float) - midpoint) / scale))


def synthetic_scada(
    duration_s: float,
    sample_interval: float = 30.0,
    seed: int = 0,
    model: ScadaModel | None = None,
    gap_fraction: float = 0.0,
    outage: tuple | None = None,
) -> pd.DataFrame:
    """Generate raw SCADA-like records: columns time, wind, power.

    ``gap_fraction`` drops that fraction of rows at random; ``outage`` is an
    optional (start_s, end_s) interval dropped entirely.
    """
    if model is None:
        model = ScadaModel()
    n = int(duration_s // sample_interval)
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((n, 2))  # unit variance; intensity folded in below

    dt = sample_interval
    # diffusion such that the stationary sd matches the configured values
    # (stationary var = D2 / relax rate under the intensity-2 convention)
    d2_wind = model.wind_sd**2 / model.wind_relax_time
    d2_power = model.power_sd**2 * model.relax_rate
    sig_wind = math.sqrt(2.0 * d2_wind * dt)
    sig_power = math.sqrt(2.0 * d2_power * dt)
    k_wind = 1.0 / model.wind_relax_time

    times = np.arange(n) * dt
    wind = np.empty(n)
    power = np.empty(n)
    u = model.wind_mean
    p = model.curve(u, 0.0)
    for i in range(n):
        wind[i], power[i] = u, p
        t = times[i]
        u = u + dt * k_wind * (model.wind_mean - u) + sig_wind * noise[i, 0]
        p = p + dt * model.relax_rate * (model.curve(u, t) - p) + sig_power * noise[i, 1]

    keep = np.ones(n, dtype=bool)
    if gap_fraction > 0.0:
        keep &= rng.random(n) >= gap_fraction
    if outage is not None:
        keep &= ~((times >= outage[0]) & (times < outage[1]))
    return pd.DataFrame({"time": times[keep], "wind": wind[keep], "power": power[keep]})
