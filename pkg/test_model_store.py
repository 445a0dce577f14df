"""
Tests for fitted-model persistence
"""

import json

import numpy as np
import pytest

from backtest import EsConfig, EsForecaster, ForecasterKind, ForecasterSpec, forecast_ahead, make_forecaster
from exceptions import InvalidConfigError, UninitializedError
from lstm import LstmConfig
from model_store import load_model, save_model
from series_core import TimeSeries
from tree import TreeConfig


def _series():
    return TimeSeries(np.random.default_rng(12).uniform(0, 20, size=40))


@pytest.mark.parametrize("spec", [
    ForecasterSpec(ForecasterKind.NAIVE),
    ForecasterSpec(ForecasterKind.ES),
    ForecasterSpec(ForecasterKind.TREE, TreeConfig(max_depth=3, lag_order=4)),
    ForecasterSpec(ForecasterKind.LSTM, LstmConfig(hidden_size=3, lag_order=4, epochs=10)),
])
def test_saved_model_forecasts_the_same(tmp_path, spec):
    series = _series()
    window = series.tail(20)
    forecaster = make_forecaster(spec)
    forecaster.fit(window)
    expected = forecaster.predict_next(window)

    path = save_model(tmp_path / "models" / f"{spec.kind.value}.json", forecaster)
    document = json.loads(path.read_text(encoding="utf-8"))
    assert document["kind"] == spec.kind.value
    assert document["format_version"] == 1

    restored = load_model(path)
    assert restored.predict_next(window) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_es_state_is_kept(tmp_path):
    _, forecaster = forecast_ahead(_series(), ForecasterSpec(ForecasterKind.ES, EsConfig(alpha=0.4)), 2)
    restored = load_model(save_model(tmp_path / "es.json", forecaster))
    assert restored.alpha == 0.4
    assert restored.model.last_smoothed == forecaster.model.last_smoothed


def test_unfitted_models_cannot_be_saved(tmp_path):
    with pytest.raises(UninitializedError):
        save_model(tmp_path / "es.json", EsForecaster(EsConfig()))


def test_bad_files_are_rejected(tmp_path):
    path = tmp_path / "model.json"
    path.write_text(json.dumps({"kind": "es", "format_version": 99}), encoding="utf-8")
    with pytest.raises(InvalidConfigError):
        load_model(path)
    path.write_text(json.dumps({"kind": "arima", "format_version": 1}), encoding="utf-8")
    with pytest.raises(InvalidConfigError):
        load_model(path)
    path.write_text(json.dumps({"kind": "tree", "format_version": 1}), encoding="utf-8")
    with pytest.raises(InvalidConfigError):
        load_model(path)
