"""
Rolling-window evaluation of forecasters.

The series is cut into a training part and a test part. Starting from the last
W training values, each step (re)fits the model every `refit_stride` steps,
forecasts one value ahead and slides the window forward:

    recursive        the forecast itself is appended (test values are only scored)
    rolling_actuals  the observed test value is appended

After `horizon` steps the forecasts are scored against the first `horizon`
test values with MAD / MD / MSE / MAPE.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Optional, Tuple

import numpy as np
import pandas as pd

from exceptions import InsufficientDataError, InvalidConfigError, UninitializedError
from lstm import LstmConfig, lstm_predict_next, lstm_train
from metrics import ErrorTable, error_table
from series_core import split
from smoothing import DEFAULT_ALPHA_GRID, EsModel, es_forecast_next, es_select_alpha
from tree import TreeConfig, lag_embed, next_features, resolve_use_exog, tree_fit, tree_predict

logger = logging.getLogger(__name__)


class ForecasterKind(Enum):
    NAIVE = "naive"
    ES = "es"
    TREE = "tree"
    LSTM = "lstm"

    @property
    def label(self):
        return {"naive": "Naive", "es": "ES", "tree": "DT", "lstm": "LSTM"}[self.value]


class WindowMode(Enum):
    RECURSIVE = "recursive"
    ROLLING_ACTUALS = "rolling_actuals"


@dataclass(frozen=True)
class EsConfig:
    alpha: Optional[float] = None  # None: select from the grid at every refit
    grid: Tuple[float, ...] = DEFAULT_ALPHA_GRID

    def __post_init__(self):
        if self.alpha is not None and not 0.0 < self.alpha <= 1.0:
            raise InvalidConfigError(f"alpha {self.alpha} outside (0, 1]")
        if not self.grid or not all(0.0 < a < 1.0 for a in self.grid):
            raise InvalidConfigError("alpha grid must be nonempty with values in (0, 1)")
        object.__setattr__(self, "grid", tuple(float(a) for a in self.grid))


_CONFIG_TYPES = {
    ForecasterKind.NAIVE: type(None),
    ForecasterKind.ES: EsConfig,
    ForecasterKind.TREE: TreeConfig,
    ForecasterKind.LSTM: LstmConfig,
}


@dataclass(frozen=True)
class ForecasterSpec:
    kind: ForecasterKind
    config: Any = None
    seed: Optional[int] = None
    name: Optional[str] = None

    def __post_init__(self):
        config = self.config
        if config is None and self.kind is not ForecasterKind.NAIVE:
            config = _CONFIG_TYPES[self.kind]()
        if not isinstance(config, _CONFIG_TYPES[self.kind]):
            raise InvalidConfigError(
                f"{self.kind.value} forecaster cannot use {type(config).__name__}"
            )
        if self.kind is ForecasterKind.LSTM and self.seed is not None:
            config = replace(config, seed=self.seed)
        object.__setattr__(self, "config", config)

    @property
    def label(self):
        return self.name or self.kind.label


@dataclass(frozen=True)
class BacktestConfig:
    window: int = 20
    refit_stride: int = 1
    horizon: int = 7
    mode: WindowMode = WindowMode.RECURSIVE
    train_fraction: Optional[float] = None  # None: hold out exactly `horizon` values

    def __post_init__(self):
        if self.window < 3:
            raise InvalidConfigError("window must be >= 3")
        if self.horizon < 1:
            raise InvalidConfigError("horizon must be >= 1")
        if self.refit_stride < 1:
            raise InvalidConfigError("refit_stride must be >= 1")
        if not isinstance(self.mode, WindowMode):
            object.__setattr__(self, "mode", WindowMode(self.mode))

    def to_dict(self):
        return {
            "window": self.window,
            "refit_stride": self.refit_stride,
            "horizon": self.horizon,
            "mode": self.mode.value,
            "train_fraction": self.train_fraction,
        }


@dataclass
class BacktestReport:
    label: str
    kind: ForecasterKind
    forecasts: np.ndarray
    actuals: np.ndarray
    origin: float  # last training value, where the forecast trajectory starts
    errors: ErrorTable
    config: BacktestConfig
    elapsed_seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "model": self.label,
            "kind": self.kind.value,
            "forecasts": self.forecasts.tolist(),
            "actuals": self.actuals.tolist(),
            "origin": self.origin,
            "errors": self.errors.to_dict(),
            "config": self.config.to_dict(),
            "elapsed_seconds": self.elapsed_seconds,
            **self.extra,
        }


# ---------------------------------------------------------------------------
# Forecaster adapters: fit(window) then predict_next(window)
# ---------------------------------------------------------------------------

class NaiveForecaster:
    """Tomorrow equals today"""

    def fit(self, window):
        pass

    def predict_next(self, window):
        return float(window.values[-1])


class EsForecaster:
    def __init__(self, cfg):
        self.cfg = cfg
        self.alpha = None
        self.model = None

    def fit(self, window):
        if self.cfg.alpha is not None:
            self.alpha = self.cfg.alpha
        else:
            self.alpha, _ = es_select_alpha(window.values, self.cfg.grid)

    def predict_next(self, window):
        if self.alpha is None:
            raise UninitializedError("ES forecaster used before fit")
        self.model = EsModel.from_series(window.values, self.alpha)
        return es_forecast_next(self.model, float(window.values[-1]))


class TreeForecaster:
    def __init__(self, cfg):
        self.cfg = cfg
        self.tree = None
        self.use_exog = False

    def fit(self, window):
        self.use_exog = resolve_use_exog(self.cfg.use_exog, window)
        data = lag_embed(window, self.cfg.lag_order, self.use_exog)
        self.tree = tree_fit(data, self.cfg)

    def predict_next(self, window):
        if self.tree is None:
            raise UninitializedError("tree forecaster used before fit")
        return float(tree_predict(self.tree, next_features(window, self.cfg.lag_order, self.use_exog)))


class LstmForecaster:
    def __init__(self, cfg):
        self.cfg = cfg
        self.fit_result = None

    def fit(self, window):
        self.fit_result = lstm_train(window.values, self.cfg)

    def predict_next(self, window):
        if self.fit_result is None:
            raise UninitializedError("LSTM forecaster used before fit")
        recent = window.values[-self.cfg.lag_order:]
        return lstm_predict_next(self.fit_result.params, self.fit_result.normalizer, recent)


def make_forecaster(spec):
    if spec.kind is ForecasterKind.NAIVE:
        return NaiveForecaster()
    if spec.kind is ForecasterKind.ES:
        return EsForecaster(spec.config)
    if spec.kind is ForecasterKind.TREE:
        return TreeForecaster(spec.config)
    return LstmForecaster(spec.config)


# ---------------------------------------------------------------------------
# Protocol
# ---------------------------------------------------------------------------

def _roll(forecaster, window, steps, refit_stride, feed):
    forecasts = np.empty(steps)
    for step in range(steps):
        if step % refit_stride == 0:
            forecaster.fit(window)
        forecasts[step] = forecaster.predict_next(window)
        window = feed(step, forecasts[step], window)
    return forecasts


def _partition(series, cfg):
    n = len(series)
    if cfg.train_fraction is None:
        if n <= cfg.horizon:
            raise InsufficientDataError(f"{n} values cannot hold out a horizon of {cfg.horizon}")
        train, test = series.slice(0, n - cfg.horizon), series.slice(n - cfg.horizon)
    else:
        train, test = split(series, cfg.train_fraction)
    if len(train) < cfg.window:
        raise InsufficientDataError(f"training part has {len(train)} values, window needs {cfg.window}")
    if len(test) < cfg.horizon:
        raise InsufficientDataError(f"test part has {len(test)} values, horizon needs {cfg.horizon}")
    return train, test


def run_backtest(series, model, cfg=BacktestConfig()):
    """One model, one series -> BacktestReport"""
    train, test = _partition(series, cfg)
    started = time.perf_counter()

    def feed(step, value, window):
        if cfg.mode is WindowMode.RECURSIVE:
            return window.slide(value)
        return window.slide(test.values[step],
                            {name: col[step] for name, col in test.exog.items()})

    forecaster = make_forecaster(model)
    forecasts = _roll(forecaster, train.tail(cfg.window), cfg.horizon, cfg.refit_stride, feed)
    actuals = test.values[: cfg.horizon].copy()
    report = BacktestReport(
        label=model.label,
        kind=model.kind,
        forecasts=forecasts,
        actuals=actuals,
        origin=float(train.values[-1]),
        errors=error_table(actuals, forecasts),
        config=cfg,
        elapsed_seconds=time.perf_counter() - started,
    )
    logger.info("%s backtest (%s, W=%d, m=%d): MAD %.4f", report.label, cfg.mode.value,
                cfg.window, cfg.refit_stride, report.errors.mad)
    return report


def compare_models(series, specs, cfg=BacktestConfig(), max_workers=1):
    """One report per model, all over identical splits and windows"""
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(lambda spec: run_backtest(series, spec, cfg), specs))
    return [run_backtest(series, spec, cfg) for spec in specs]


def forecast_ahead(series, spec, ahead, refit_stride=1):
    """Train on the whole series and emit `ahead` recursive forecasts -> (forecasts, forecaster)"""
    if ahead < 1:
        raise InvalidConfigError("ahead must be >= 1")
    forecaster = make_forecaster(spec)
    forecasts = _roll(forecaster, series.tail(len(series)), ahead, refit_stride,
                      lambda step, value, window: window.slide(value))
    return forecasts, forecaster


def sweep_windows(series, specs, windows, strides, cfg=BacktestConfig()):
    """Error measures for every (window, refit stride) pair -> long-form DataFrame"""
    rows = []
    for window in windows:
        for stride in strides:
            run_cfg = replace(cfg, window=window, refit_stride=stride)
            for report in compare_models(series, specs, run_cfg):
                rows.append({
                    "model": report.label,
                    "window": window,
                    "refit_stride": stride,
                    "MAD": report.errors.mad,
                    "MD": report.errors.md,
                    "MSE": report.errors.mse,
                    "MAPE": report.errors.mape,
                    "max_abs_error": report.errors.max_abs_error,
                })
    return pd.DataFrame(rows)
