"""
Forecast error measures: MAD, MD, MSE, MAPE.

All functions take paired actual / forecast sequences. MD is signed so that a
positive value means the forecasts undershoot the actuals. MAPE is a fraction
(not percent) and skips days whose actual value is zero.
"""

from dataclasses import asdict, dataclass

import numpy as np

from exceptions import AllActualsZeroError, EmptyInputError, LengthMismatchError

METRIC_NAMES = ("MAD", "MD", "MSE", "MAPE")


def _paired(actual, forecast):
    a = np.asarray(actual, dtype=float).reshape(-1)
    f = np.asarray(forecast, dtype=float).reshape(-1)
    if a.size != f.size:
        raise LengthMismatchError(f"{a.size} actuals vs {f.size} forecasts")
    if a.size == 0:
        raise EmptyInputError("no values to score")
    return a, f


def mad(actual, forecast):
    """Mean absolute deviation"""
    a, f = _paired(actual, forecast)
    return float(np.mean(np.abs(a - f)))


def md(actual, forecast):
    """Mean deviation (actual - forecast)"""
    a, f = _paired(actual, forecast)
    return float(np.mean(a - f))


def mse(actual, forecast):
    """Mean squared error"""
    a, f = _paired(actual, forecast)
    return float(np.mean((a - f) ** 2))


def mape(actual, forecast):
    """Mean absolute percentage error over non-zero actuals -> (value, n_used)"""
    a, f = _paired(actual, forecast)
    used = a != 0
    n_used = int(used.sum())
    if n_used == 0:
        raise AllActualsZeroError("every actual value is zero; MAPE undefined")
    return float(np.mean(np.abs((a[used] - f[used]) / a[used]))), n_used


@dataclass(frozen=True)
class ErrorTable:
    mad: float
    md: float
    mse: float
    mape: float
    n_used_mape: int
    max_abs_error: float = float("nan")

    def row(self, name):
        return {"MAD": self.mad, "MD": self.md, "MSE": self.mse, "MAPE": self.mape}[name]

    def to_dict(self):
        return asdict(self)


def error_table(actual, forecast):
    """
    All four measures at once.

    A window whose actuals are all zero gets MAPE = NaN with n_used_mape = 0
    rather than failing the whole report.
    """
    a, f = _paired(actual, forecast)
    try:
        mape_value, n_used = mape(a, f)
    except AllActualsZeroError:
        mape_value, n_used = float("nan"), 0
    return ErrorTable(
        mad=mad(a, f),
        md=md(a, f),
        mse=mse(a, f),
        mape=mape_value,
        n_used_mape=n_used,
        max_abs_error=float(np.max(np.abs(a - f))),
    )
