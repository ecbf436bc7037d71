"""Built-in experiment presets: one command per desk-scale experiment.

Each preset is a full run configuration; bandwidths and seeds are chosen so
the documented tolerances hold at N = 1e5 / desk-scale fixture sizes. The
nonparametric route uses a narrower kernel than the moment fits because its
estimate inherits the full kernel-smoothing bias of the conditional mean,
while linear-basis fits do not.
"""

from __future__ import annotations

import copy

DAY = 86_400.0

ESTIMATE_PRESETS = {
    "ou": {
        "source": {
            "simulate": {
                "process": {"name": "ou"},
                "n_samples": 100_000,
                "dt": 0.1,
                "seed": 11,
            }
        },
        "method": "local",
        "dependency": "x",
        "conditions": ["x"],
        "kernel": [{"family": "gaussian", "bandwidth": 0.5}],
        "np_kernel": [{"family": "gaussian", "bandwidth": 0.15}],
        "basis": "polynomial(1)",
        "grid": {"auto": {"count": 50}},
        "orders": [1],
        "lags": [1],
        "count_floor": 10.0,
        "truth": "ou",
    },
    "piecewise": {
        "source": {
            "simulate": {
                "process": {"name": "piecewise"},
                "n_samples": 100_000,
                "dt": 0.1,
                "seed": 2,
            }
        },
        "method": "local",
        "dependency": "x",
        "conditions": ["x"],
        "kernel": [{"family": "gaussian", "bandwidth": 0.25}],
        "np_kernel": [{"family": "gaussian", "bandwidth": 0.15}],
        "basis": "polynomial(1)",
        "grid": {"auto": {"count": 50}},
        "orders": [1],
        "lags": [1],
        "count_floor": 10.0,
        "truth": "piecewise",
    },
    "coupled2d": {
        "source": {
            "simulate": {
                "process": {"name": "coupled2d"},
                "n_samples": 100_000,
                "dt": 0.1,
                "seed": 3,
            }
        },
        "method": "local",
        "dependency": "x",
        "conditions": ["y"],
        "kernel": [{"family": "gaussian", "bandwidth": 0.4}],
        "basis": "polynomial(1)",
        "grid": {"regular": {"mins": [-2.0], "maxs": [2.0], "counts": [17]}},
        "orders": [1],
        "lags": [1],
        "count_floor": 10.0,
        "truth": "coupled2d",
    },
    "nonstationary2d": {
        "source": {
            "simulate": {
                "process": {"name": "nonstationary2d"},
                "n_samples": 100_000,
                "dt": 0.1,
                "seed": 3,
            }
        },
        "method": "local",
        "dependency": "x",
        "conditions": ["y", "t"],
        "kernel": [
            {"family": "gaussian", "bandwidth": 0.5},
            {"family": "gaussian", "bandwidth": 200.0},
        ],
        "basis": "polynomial(1)",
        "grid": {
            "explicit": [
                [y, t]
                for y in (-1.25, -1.0, 1.0, 1.25)
                for t in [250.0 * k for k in range(2, 39)]
            ]
        },
        "orders": [1],
        "lags": [1],
        "count_floor": 10.0,
    },
}

POWERCURVE_PRESETS = {
    "powercurve-demo": {
        "source": {
            "fixture": {
                "duration_days": 120.0,
                "sample_interval": 30.0,
                "seed": 5,
                "step_day": 60.0,
                "regulated_level": 75.0,
                "gap_fraction": 0.01,
            }
        },
        "aggregate_window": 60.0,
        "time_column": "time",
        "power_column": "power",
        "wind_column": "wind",
        "kernel": {
            "wind": {"family": "epanechnikov", "bandwidth": 0.5},
            "time": {"family": "rectangular", "bandwidth": 7.0 * DAY},
        },
        "grid": {
            "wind": {"min": 6.0, "max": 11.0, "count": 6},
            "time": {"min": 8.0 * DAY, "max": 112.0 * DAY, "count": 53},
        },
        "count_floor": 50.0,
    },
}


def get_preset(name: str) -> dict:
    """Deep copy of a named preset config (estimate or powercurve)."""
    if name in ESTIMATE_PRESETS:
        return copy.deepcopy(ESTIMATE_PRESETS[name])
    if name in POWERCURVE_PRESETS:
        return copy.deepcopy(POWERCURVE_PRESETS[name])
    valid = ", ".join(sorted([*ESTIMATE_PRESETS, *POWERCURVE_PRESETS]))
    raise KeyError(f"unknown preset '{name}'; valid presets: {valid}")
