"""
Series Core
Time-series container, validation, normalization, splitting and autocorrelation

The conversion series is a sequence of daily percentages (0-100), optionally
accompanied by exogenous columns (clicks and sales per day). Everything here is
immutable once built, so series and windows can be shared freely.
"""

import logging
import math
from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd

from exceptions import (
    DegenerateSplitError,
    EmptyWindowError,
    LagTooLargeError,
    SeriesValidationError,
    ZeroVarianceError,
)

logger = logging.getLogger(__name__)

# Configuration
DEFAULT_MAX_LAG = 20
CONVERSION_TOLERANCE = 0.5  # percentage points
EXOG_COLUMNS = ("clicks", "sales")


def _frozen_array(values, name):
    arr = np.array(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise SeriesValidationError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """Daily conversion percent with optional exogenous columns"""

    values: np.ndarray
    start_date: date = date(2000, 1, 1)
    exog: Mapping[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        values = _frozen_array(self.values, "values")
        if values.size == 0:
            raise SeriesValidationError("series must hold at least one value")
        if values.min() < 0.0 or values.max() > 100.0:
            raise SeriesValidationError("conversion values must lie in [0, 100]")

        exog = {}
        for name, column in self.exog.items():
            col = _frozen_array(column, f"exog column {name!r}")
            if col.size != values.size:
                raise SeriesValidationError(
                    f"exog column {name!r} has length {col.size}, expected {values.size}"
                )
            if np.any(col < 0):
                raise SeriesValidationError(f"exog column {name!r} has negative counts")
            exog[name] = col

        object.__setattr__(self, "values", values)
        object.__setattr__(self, "exog", exog)

    def __len__(self):
        return int(self.values.size)

    def slice(self, start, stop=None):
        """Sub-series [start:stop) with the start date shifted accordingly"""
        stop = len(self) if stop is None else stop
        return TimeSeries(
            values=self.values[start:stop],
            start_date=self.start_date + timedelta(days=start),
            exog={name: col[start:stop] for name, col in self.exog.items()},
        )

    def tail(self, size):
        """Last `size` observations as a forecasting window"""
        start = max(len(self) - size, 0)
        return Window(
            values=self.values[start:],
            exog={name: col[start:] for name, col in self.exog.items()},
        )

    def dates(self):
        return pd.date_range(self.start_date, periods=len(self), freq="D")

    def to_frame(self):
        frame = pd.DataFrame({"conversion": self.values}, index=self.dates())
        for name, col in self.exog.items():
            frame[name] = col
        frame.index.name = "date"
        return frame


@dataclass(frozen=True)
class Window:
    """
    Recent observations handed to a forecaster.

    Unlike TimeSeries a window is not range-checked: in recursive backtests it
    carries the model's own forecasts, which may leave [0, 100].
    """

    values: np.ndarray
    exog: Mapping[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        values = _frozen_array(self.values, "window")
        exog = {name: _frozen_array(col, name) for name, col in self.exog.items()}
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "exog", exog)

    def __len__(self):
        return int(self.values.size)

    def slide(self, value, exog_row=None):
        """Drop the oldest value, append `value`; exog rows default to carry-forward"""
        exog = {}
        for name, col in self.exog.items():
            nxt = col[-1] if exog_row is None else exog_row[name]
            exog[name] = np.append(col[1:], nxt)
        return Window(values=np.append(self.values[1:], value), exog=exog)


@dataclass(frozen=True)
class SiteRecord:
    """One day of store data"""

    date: date
    clicks: int
    sales: int
    conversion: float
    language: str
    country: str

    def __post_init__(self):
        if self.clicks < 0 or self.sales < 0:
            raise SeriesValidationError("clicks and sales must be non-negative")
        if self.sales > self.clicks:
            raise SeriesValidationError(
                f"sales ({self.sales}) exceed clicks ({self.clicks})"
            )
        if self.clicks == 0:
            if self.conversion != 0:
                raise SeriesValidationError("conversion must be 0 when clicks = 0")
        elif abs(self.conversion - 100.0 * self.sales / self.clicks) > CONVERSION_TOLERANCE:
            raise SeriesValidationError(
                f"conversion {self.conversion} disagrees with 100*sales/clicks "
                f"= {100.0 * self.sales / self.clicks:.4f}"
            )


def records_to_series(records):
    """Build the conversion series (exog: clicks, sales) from site records"""
    if not records:
        raise SeriesValidationError("no records to build a series from")
    return TimeSeries(
        values=[r.conversion for r in records],
        start_date=records[0].date,
        exog={
            "clicks": [r.clicks for r in records],
            "sales": [r.sales for r in records],
        },
    )


SeriesInput = Union[TimeSeries, Window, Sequence[float], np.ndarray]


def as_values(series):
    """Plain float array from a TimeSeries, Window or any real sequence"""
    if isinstance(series, (TimeSeries, Window)):
        return series.values
    return np.asarray(series, dtype=float).reshape(-1)


# ---------------------------------------------------------------------------
# Autocorrelation
# ---------------------------------------------------------------------------

def acf(series, max_lag=DEFAULT_MAX_LAG):
    """
    Sample autocorrelation r_0..r_max_lag (biased estimator).

    r_k = sum_{t<n-k} (x_t - mean)(x_{t+k} - mean) / sum_t (x_t - mean)^2
    """
    x = as_values(series)
    n = x.size
    if max_lag < 0 or max_lag >= n:
        raise LagTooLargeError(f"max_lag {max_lag} must be in [0, {n - 1}] for n = {n}")
    if np.ptp(x) == 0:
        raise ZeroVarianceError("autocorrelation undefined for a constant series")

    d = x - x.mean()
    denom = float(np.dot(d, d))
    out = np.empty(max_lag + 1)
    out[0] = 1.0
    for k in range(1, max_lag + 1):
        out[k] = float(np.dot(d[: n - k], d[k:])) / denom
    return out


def confidence_band(n):
    """Approximate 95% band for the ACF of white noise"""
    return 2.0 / math.sqrt(n)


def whiteness_fraction(series, max_lag=DEFAULT_MAX_LAG):
    """Share of lags 1..max_lag whose autocorrelation falls inside +-2/sqrt(n)"""
    x = as_values(series)
    r = acf(x, max_lag)[1:]
    return float(np.mean(np.abs(r) <= confidence_band(x.size)))


# ---------------------------------------------------------------------------
# Distribution diagnostics
# ---------------------------------------------------------------------------

def histogram(series, bins=20, value_range=(0.0, 100.0)):
    """Density histogram of the values -> (bin edges, density)"""
    density, edges = np.histogram(as_values(series), bins=bins, range=value_range, density=True)
    return edges, density


def describe(series):
    """Summary statistics used by the ingest report"""
    x = pd.Series(as_values(series))
    return {
        "n": int(x.size),
        "mean": float(x.mean()),
        "std": float(x.std(ddof=0)),
        "min": float(x.min()),
        "max": float(x.max()),
        "zero_fraction": float((x == 0).mean()),
        "low_band_fraction": float(((x > 0) & (x <= 2)).mean()),
        "burst_fraction": float((x >= 20).mean()),
    }


# ---------------------------------------------------------------------------
# Splitting
# ---------------------------------------------------------------------------

def split(series, train_fraction):
    """Split at floor(n * train_fraction) into (train, test)"""
    n = len(series)
    if not 0.0 < train_fraction < 1.0:
        raise DegenerateSplitError(f"train_fraction {train_fraction} must be in (0, 1)")
    cut = math.floor(n * train_fraction)
    if cut == 0 or cut == n:
        raise DegenerateSplitError(
            f"splitting {n} values at fraction {train_fraction} leaves an empty part"
        )
    return series.slice(0, cut), series.slice(cut)


# ---------------------------------------------------------------------------
# Min-max normalization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalizerParams:
    minimum: float
    maximum: float

    def __post_init__(self):
        if self.maximum < self.minimum:
            raise SeriesValidationError("normalizer maximum below minimum")

    @property
    def degenerate(self):
        return self.maximum == self.minimum

    def to_dict(self):
        return {"min": self.minimum, "max": self.maximum}

    @classmethod
    def from_dict(cls, data):
        return cls(minimum=float(data["min"]), maximum=float(data["max"]))


def fit_normalizer(window):
    x = as_values(window)
    if x.size == 0:
        raise EmptyWindowError("cannot fit a normalizer on an empty window")
    return NormalizerParams(minimum=float(x.min()), maximum=float(x.max()))


def normalize(x, p):
    """(x - min) / (max - min); a degenerate normalizer maps everything to 0.5"""
    if p.degenerate:
        return np.full_like(np.asarray(x, dtype=float), 0.5)[()]
    return (np.asarray(x, dtype=float) - p.minimum) / (p.maximum - p.minimum)


def denormalize(y, p):
    """Inverse of normalize; a degenerate normalizer returns the window constant"""
    if p.degenerate:
        return np.full_like(np.asarray(y, dtype=float), p.minimum)[()]
    return np.asarray(y, dtype=float) * (p.maximum - p.minimum) + p.minimum
