"""Aligned time-series containers shared by the simulator and the estimators."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class SampledSeries:
    """Uniformly sampled scalar signal with an explicit missing-value mask.

    ``values`` may contain NaN; such samples are always flagged missing.
    """

    values: np.ndarray
    dt: float
    missing: np.ndarray | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        nan_mask = ~np.isfinite(self.values)
        if self.missing is None:
            self.missing = nan_mask
        else:
            self.missing = np.asarray(self.missing, dtype=bool)
            if self.missing.shape != self.values.shape:
                raise ValueError("missing mask length must match values length")
            self.missing = self.missing | nan_mask

    def __len__(self):
        return self.values.size

    @property
    def n_valid(self) -> int:
        return int((~self.missing).sum())


@dataclass
class ConditionSeries:
    """Per-sample condition vectors aligned index-for-index with a series.

    ``columns`` has shape (N, D); ``missing`` is the per-sample union over
    channels (a sample missing in any channel is unusable for estimation).
    """

    columns: np.ndarray
    names: tuple[str, ...] = ()
    missing: np.ndarray | None = None

    def __post_init__(self):
        self.columns = np.asarray(self.columns, dtype=float)
        if self.columns.ndim == 1:
            self.columns = self.columns[:, None]
        if self.columns.ndim != 2:
            raise ValueError("columns must have shape (N, D)")
        if not self.names:
            self.names = tuple(f"c{d}" for d in range(self.columns.shape[1]))
        self.names = tuple(self.names)
        if len(self.names) != self.columns.shape[1]:
            raise ValueError("one name per condition channel required")
        nan_mask = ~np.isfinite(self.columns).all(axis=1)
        if self.missing is None:
            self.missing = nan_mask
        else:
            self.missing = np.asarray(self.missing, dtype=bool)
            if self.missing.shape != (self.columns.shape[0],):
                raise ValueError("missing mask length must match sample count")
            self.missing = self.missing | nan_mask

    def __len__(self):
        return self.columns.shape[0]

    @property
    def dim(self) -> int:
        return self.columns.shape[1]

    @classmethod
    def from_series(cls, channels: dict[str, SampledSeries]) -> "ConditionSeries":
        """Stack named SampledSeries into condition channels (missing = union)."""
        names = tuple(channels)
        cols = np.column_stack([channels[n].values for n in names])
        miss = np.zeros(cols.shape[0], dtype=bool)
        for n in names:
            miss |= channels[n].missing
        return cls(columns=cols, names=names, missing=miss)
