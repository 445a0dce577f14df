"""
Simple exponential smoothing.

    S(1) = Z(0)
    S(t) = alpha * Z(t-1) + (1 - alpha) * S(t-1)

S(t) doubles as the one-step forecast of Z(t). The smoothing factor is picked
from a fixed grid by in-sample one-step MSE.
"""

import logging
from dataclasses import dataclass

import numpy as np

from exceptions import (
    AlphaOutOfRangeError,
    EmptySeriesError,
    SeriesTooShortError,
    UninitializedError,
)
from series_core import as_values

logger = logging.getLogger(__name__)

DEFAULT_ALPHA_GRID = tuple(round(0.05 * k, 2) for k in range(1, 20))  # 0.05 .. 0.95


def _check_alpha(alpha, allow_one=True):
    upper_ok = alpha <= 1.0 if allow_one else alpha < 1.0
    if not (alpha > 0.0 and upper_ok):
        bound = "(0, 1]" if allow_one else "(0, 1)"
        raise AlphaOutOfRangeError(f"alpha {alpha} outside {bound}")


def es_smooth(series, alpha):
    """Smoothed series S, aligned so that S[0] = Z[0] and S[t] forecasts Z[t]"""
    z = as_values(series)
    if z.size == 0:
        raise EmptySeriesError("cannot smooth an empty series")
    _check_alpha(alpha)

    s = np.empty_like(z)
    s[0] = z[0]
    beta = 1.0 - alpha
    for t in range(1, z.size):
        s[t] = alpha * z[t - 1] + beta * s[t - 1]
    return s


def es_residuals(series, alpha):
    """epsilon_t = Z(t) - S(t); diagnostics only"""
    return as_values(series) - es_smooth(series, alpha)


@dataclass
class EsModel:
    """
    Running smoother. `last_smoothed` is S for the newest observation not yet
    folded in; alpha = 1 is admitted as the naive-forecast limit.
    """

    alpha: float
    last_smoothed: float = 0.0
    initialized: bool = False

    def __post_init__(self):
        _check_alpha(self.alpha)

    @classmethod
    def from_series(cls, series, alpha):
        """State positioned so that forecast_next(series[-1]) forecasts the next day"""
        s = es_smooth(series, alpha)
        return cls(alpha=alpha, last_smoothed=float(s[-1]), initialized=True)

    def forecast_next(self, last_observation):
        return es_forecast_next(self, last_observation)

    def to_dict(self):
        return {"alpha": self.alpha, "last_smoothed": self.last_smoothed,
                "initialized": self.initialized}

    @classmethod
    def from_dict(cls, data):
        return cls(alpha=float(data["alpha"]), last_smoothed=float(data["last_smoothed"]),
                   initialized=bool(data["initialized"]))


def es_forecast_next(model, last_observation):
    """Fold in the latest observation and return the new smoothed value"""
    if not model.initialized:
        raise UninitializedError("EsModel has no smoothed state yet")
    nxt = model.alpha * last_observation + (1.0 - model.alpha) * model.last_smoothed
    model.last_smoothed = float(nxt)
    return model.last_smoothed


def es_select_alpha(train, grid=DEFAULT_ALPHA_GRID):
    """
    Grid alpha minimizing in-sample one-step MSE over t = 2..n.

    Ties go to the smallest alpha.
    """
    z = as_values(train)
    if z.size < 3:
        raise SeriesTooShortError(f"need at least 3 values to select alpha, got {z.size}")
    if len(grid) == 0:
        raise AlphaOutOfRangeError("alpha grid is empty")
    for alpha in grid:
        _check_alpha(alpha, allow_one=False)

    best_alpha, best_mse = None, np.inf
    for alpha in sorted(grid):
        s = es_smooth(z, alpha)
        err = float(np.mean((z[1:] - s[1:]) ** 2))
        if err < best_mse:
            best_alpha, best_mse = float(alpha), err

    logger.debug("selected alpha=%.2f (train mse %.4f)", best_alpha, best_mse)
    return best_alpha, best_mse
