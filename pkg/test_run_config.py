"""
Tests for run configuration loading
"""

import json

import pytest

from backtest import ForecasterKind, WindowMode
from exceptions import InvalidConfigError
from run_config import default_run_config, load_run_config, parse_run_config


def _config(**overrides):
    data = {
        "seed": 3,
        "series": {"generator": {"n_days": 60}},
        "models": {"es": {}, "tree": {"max_depth": 2}},
        "backtest": {"window": 20, "horizon": 5},
    }
    data.update(overrides)
    return data


def test_parse_builds_specs_in_order(tmp_path):
    config = parse_run_config(_config(), base_dir=tmp_path)
    specs = config.model_specs()
    assert [s.kind for s in specs] == [ForecasterKind.ES, ForecasterKind.TREE]
    assert specs[1].config.max_depth == 2
    assert config.backtest.horizon == 5
    assert config.output_dir == tmp_path / "reports"
    assert config.gen_config().seed == 3


def test_unknown_keys_are_rejected(tmp_path):
    for bad in (
        _config(extra=1),
        _config(models={"arima": {}}),
        _config(models={"tree": {"depth": 3}}),
        _config(backtest={"window": 20, "stride": 2}),
        _config(series={"generator": {"n_days": 60, "seed": 1}}),
        _config(output={"folder": "x"}),
    ):
        with pytest.raises(InvalidConfigError):
            parse_run_config(bad, base_dir=tmp_path)


def test_series_source_is_exclusive(tmp_path):
    with pytest.raises(InvalidConfigError):
        parse_run_config(_config(series={"csv": "a.csv", "generator": {}}), base_dir=tmp_path)
    with pytest.raises(InvalidConfigError):
        parse_run_config(_config(series={}), base_dir=tmp_path)


def test_bad_values_become_config_errors(tmp_path):
    with pytest.raises(InvalidConfigError):
        parse_run_config(_config(backtest={"mode": "sideways"}), base_dir=tmp_path)
    with pytest.raises(InvalidConfigError):
        parse_run_config(_config(models={"lstm": {"hidden_size": 0}}), base_dir=tmp_path)
    with pytest.raises(InvalidConfigError):
        parse_run_config(_config(seed="seven"), base_dir=tmp_path)
    with pytest.raises(InvalidConfigError):
        parse_run_config(_config(models={}), base_dir=tmp_path)


def test_seed_override_reaches_every_model(tmp_path):
    path = tmp_path / "run.json"
    data = _config(models={"lstm": {"epochs": 5}})
    path.write_text(json.dumps(data), encoding="utf-8")

    config = load_run_config(path, seed=11)
    assert config.seed == 11
    assert config.model_specs()[0].config.seed == 11
    assert config.gen_config().seed == 11
    assert load_run_config(path).seed == 3


def test_relative_paths_follow_the_config_file(tmp_path):
    path = tmp_path / "configs" / "run.json"
    path.parent.mkdir()
    path.write_text(json.dumps(_config(series={"csv": "../data/store.csv"},
                                       output={"dir": "out", "prefix": "p"})), encoding="utf-8")
    config = load_run_config(path)
    assert config.series_csv == tmp_path / "configs" / ".." / "data" / "store.csv"
    assert config.report_path(".csv") == tmp_path / "configs" / "out" / "p.csv"


def test_default_config_is_valid(tmp_path):
    config = parse_run_config(default_run_config(), base_dir=tmp_path)
    assert config.backtest.window == 20
    assert config.backtest.refit_stride == 1
    assert config.backtest.horizon == 7
    assert config.backtest.mode is WindowMode.RECURSIVE
    assert [s.label for s in config.model_specs()] == ["ES", "DT", "LSTM"]
