"""CSV ingestion and gap-aware resampling onto a uniform clock."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .errors import IngestError
from .series import SampledSeries

__all__ = ["RawRecords", "load_csv", "aggregate"]


@dataclass
class RawRecords:
    """Irregularly sampled measurements: epoch-second timestamps plus named
    real-valued channels, sorted by time with duplicates merged."""

    timestamps: np.ndarray
    channels: dict

    def __post_init__(self):
        self.timestamps = np.asarray(self.timestamps, dtype=float)
        self.channels = {k: np.asarray(v, dtype=float) for k, v in self.channels.items()}
        for name, col in self.channels.items():
            if col.shape != self.timestamps.shape:
                raise IngestError(f"channel '{name}' length does not match timestamps")
        if np.any(np.diff(self.timestamps) <= 0):
            raise IngestError("timestamps must be strictly increasing")

    def __len__(self):
        return self.timestamps.size


def _parse_times(raw: pd.Series, column: str) -> np.ndarray:
    numeric = pd.to_numeric(raw, errors="coerce")
    if numeric.notna().all():
        return numeric.to_numpy(dtype=float)
    parsed = pd.to_datetime(raw, errors="coerce", utc=True, format="mixed")
    bad = parsed.isna() & raw.notna()
    if bad.any():
        line = int(bad.idxmax()) + 2  # header occupies line 1
        raise IngestError(f"unparseable timestamp in column '{column}' at line {line}")
    if parsed.isna().any():
        line = int(parsed.isna().idxmax()) + 2
        raise IngestError(f"missing timestamp in column '{column}' at line {line}")
    return parsed.astype("int64").to_numpy() / 1e9


def load_csv(path, time_column: str, channel_columns) -> RawRecords:
    """Load raw records from a headered CSV.

    Timestamps may be numeric epoch seconds or parseable date strings.
    Rows are sorted by time; duplicate timestamps are merged by averaging.
    Empty channel cells become NaN; non-numeric cells are an error reported
    with their line number.
    """
    channel_columns = list(channel_columns)
    try:
        df = pd.read_csv(path)
    except FileNotFoundError:
        raise IngestError(f"input file not found: {path}") from None
    for col in [time_column, *channel_columns]:
        if col not in df.columns:
            raise IngestError(f"missing column '{col}' in {path}")
    if len(df) == 0:
        raise IngestError(f"no data rows in {path}")

    times = _parse_times(df[time_column], time_column)
    chans = {}
    for col in channel_columns:
        vals = pd.to_numeric(df[col], errors="coerce")
        bad = vals.isna() & df[col].notna()
        if bad.any():
            line = int(bad.idxmax()) + 2
            raise IngestError(f"unparseable value in column '{col}' at line {line}")
        chans[col] = vals.to_numpy(dtype=float)

    order = np.argsort(times, kind="stable")
    times = times[order]
    chans = {k: v[order] for k, v in chans.items()}

    if np.any(np.diff(times) == 0):
        # merge duplicate timestamps by (NaN-aware) averaging
        uniq, inv = np.unique(times, return_inverse=True)
        merged = {}
        for k, v in chans.items():
            ok = np.isfinite(v)
            sums = np.bincount(inv[ok], weights=v[ok], minlength=uniq.size)
            counts = np.bincount(inv[ok], minlength=uniq.size)
            with np.errstate(invalid="ignore"):
                merged[k] = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
        times, chans = uniq, merged

    return RawRecords(timestamps=times, channels=chans)


def aggregate(records: RawRecords, window: float) -> dict:
    """Average records into uniform windows of the given width (seconds).

    The clock is anchored at the first timestamp floored to a whole window;
    a record at time t lands in window k = floor((t - start)/window), i.e.
    [start + k*window, start + (k+1)*window). Windows containing no record
    are marked missing. Returns one SampledSeries per channel, all sharing
    the clock (dt = window).
    """
    if not window > 0:
        raise IngestError("aggregation window must be positive")
    if len(records) == 0:
        raise IngestError("cannot aggregate empty records")
    start = math.floor(records.timestamps[0] / window) * window
    idx = np.floor((records.timestamps - start) / window).astype(np.int64)
    n_out = int(idx.max()) + 1
    out = {}
    for name, vals in records.channels.items():
        ok = np.isfinite(vals)
        sums = np.bincount(idx[ok], weights=vals[ok], minlength=n_out)
        counts = np.bincount(idx[ok], minlength=n_out)
        with np.errstate(invalid="ignore"):
            means = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
        out[name] = SampledSeries(values=means, dt=float(window), missing=counts == 0)
    return out
