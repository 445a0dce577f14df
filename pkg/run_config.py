"""
Run configuration (JSON).

    {
      "seed": 7,
      "series": {"csv": "data/store.csv"}            or {"generator": {...GenConfig fields}},
      "models": {"es": {...}, "tree": {...}, "lstm": {...}, "naive": {}},
      "backtest": {"window": 20, "refit_stride": 1, "horizon": 7,
                   "mode": "recursive", "train_fraction": null, "max_workers": 1},
      "output": {"dir": "reports", "prefix": "backtest"}
    }

Unknown keys anywhere are rejected. Relative paths resolve against the config
file's directory. The single top-level seed drives the generator and every
model that draws random numbers.
"""

import json
import logging
from dataclasses import dataclass, field, fields, replace
from datetime import date
from pathlib import Path
from typing import Optional

from backtest import BacktestConfig, EsConfig, ForecasterKind, ForecasterSpec
from data_loader import DataLoader
from datagen import GenConfig, gen_site_records
from exceptions import InvalidConfigError
from lstm import LstmConfig
from series_core import records_to_series
from tree import TreeConfig

logger = logging.getLogger(__name__)

DEFAULT_OUTPUT_DIR = "reports"
DEFAULT_PREFIX = "backtest"

_TOP_KEYS = {"seed", "series", "models", "backtest", "output"}
_OUTPUT_KEYS = {"dir", "prefix"}
_MODEL_CONFIGS = {
    "naive": None,
    "es": EsConfig,
    "tree": TreeConfig,
    "lstm": LstmConfig,
}


def _field_names(cls, exclude=()):
    return {f.name for f in fields(cls)} - set(exclude)


def _check_keys(section, allowed, where):
    if not isinstance(section, dict):
        raise InvalidConfigError(f"{where} must be a JSON object")
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise InvalidConfigError(f"{where}: unknown keys {unknown}")


def _build(cls, values, where, **extra):
    try:
        return cls(**values, **extra)
    except (TypeError, ValueError) as e:
        raise InvalidConfigError(f"{where}: {e}") from e


def _generator_values(section):
    _check_keys(section, _field_names(GenConfig, exclude=("seed",)), "series.generator")
    values = dict(section)
    for name in ("burst_range", "body_range"):
        if name in values:
            values[name] = tuple(values[name])
    if "start_date" in values:
        try:
            values["start_date"] = date.fromisoformat(values["start_date"])
        except (TypeError, ValueError) as e:
            raise InvalidConfigError(f"series.generator.start_date: {e}") from e
    return values


def _model_values(name, section):
    cls = _MODEL_CONFIGS[name]
    if cls is None:
        _check_keys(section, (), f"models.{name}")
        return {}
    # LSTM seed comes from the top-level seed
    exclude = ("seed",) if cls is LstmConfig else ()
    _check_keys(section, _field_names(cls, exclude=exclude), f"models.{name}")
    values = dict(section)
    if "grid" in values:
        values["grid"] = tuple(values["grid"])
    return values


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    series_csv: Optional[Path] = None
    generator: Optional[dict] = None
    models: dict = field(default_factory=dict)
    backtest: BacktestConfig = field(default_factory=BacktestConfig)
    max_workers: int = 1
    output_dir: Path = Path(DEFAULT_OUTPUT_DIR)
    output_prefix: str = DEFAULT_PREFIX

    def __post_init__(self):
        if (self.series_csv is None) == (self.generator is None):
            raise InvalidConfigError("series needs exactly one of 'csv' or 'generator'")
        if not self.models:
            raise InvalidConfigError("models must name at least one forecaster")
        if self.max_workers < 1:
            raise InvalidConfigError("backtest.max_workers must be >= 1")
        if not self.output_prefix or "/" in self.output_prefix:
            raise InvalidConfigError("output.prefix must be a plain file name stem")

    def with_seed(self, seed):
        return self if seed is None else replace(self, seed=int(seed))

    def gen_config(self):
        if self.generator is None:
            raise InvalidConfigError("config reads its series from a CSV file")
        return _build(GenConfig, self.generator, "series.generator", seed=self.seed)

    def model_specs(self):
        """ForecasterSpecs in config order, all sharing the run seed"""
        specs = []
        for name, values in self.models.items():
            kind = ForecasterKind(name)
            cls = _MODEL_CONFIGS[name]
            config = _build(cls, values, f"models.{name}") if cls else None
            specs.append(ForecasterSpec(kind=kind, config=config, seed=self.seed))
        return specs

    def load_series(self):
        if self.series_csv is not None:
            return DataLoader(self.series_csv).load().series
        return records_to_series(gen_site_records(self.gen_config()))

    def report_path(self, suffix):
        return self.output_dir / f"{self.output_prefix}{suffix}"


def parse_run_config(data, base_dir=Path(".")):
    """Validate a decoded JSON document into a RunConfig"""
    _check_keys(data, _TOP_KEYS, "config")
    base_dir = Path(base_dir)

    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise InvalidConfigError("seed must be a non-negative integer")

    series = data.get("series")
    if series is None:
        raise InvalidConfigError("config needs a 'series' section")
    _check_keys(series, {"csv", "generator"}, "series")
    series_csv = generator = None
    if "csv" in series:
        series_csv = base_dir / series["csv"]
    if "generator" in series:
        generator = _generator_values(series["generator"])

    models_section = data.get("models", {})
    _check_keys(models_section, _MODEL_CONFIGS, "models")
    models = {name: _model_values(name, section) for name, section in models_section.items()}

    backtest_section = dict(data.get("backtest", {}))
    _check_keys(backtest_section, _field_names(BacktestConfig) | {"max_workers"}, "backtest")
    max_workers = backtest_section.pop("max_workers", 1)
    backtest = _build(BacktestConfig, backtest_section, "backtest")

    output = data.get("output", {})
    _check_keys(output, _OUTPUT_KEYS, "output")

    config = RunConfig(
        seed=seed,
        series_csv=series_csv,
        generator=generator,
        models=models,
        backtest=backtest,
        max_workers=max_workers,
        output_dir=base_dir / output.get("dir", DEFAULT_OUTPUT_DIR),
        output_prefix=output.get("prefix", DEFAULT_PREFIX),
    )
    # surface bad model / generator settings at load time
    config.model_specs()
    if generator is not None:
        config.gen_config()
    return config


def load_run_config(path, seed=None):
    """Read and validate a RunConfig file; `seed` overrides the file's seed"""
    path = Path(path)
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    config = parse_run_config(data, base_dir=path.parent).with_seed(seed)
    logger.info("loaded run config %s (seed %d, models %s)", path, config.seed, list(config.models))
    return config


def default_run_config():
    """The configuration written by setup_project.py"""
    return {
        "seed": 42,
        "series": {"generator": {"n_days": 100}},
        "models": {
            "es": {},
            "tree": {"max_depth": 4, "min_samples_leaf": 2, "lag_order": 5},
            "lstm": {"hidden_size": 8, "lag_order": 5, "learning_rate": 0.01, "epochs": 200},
        },
        "backtest": {"window": 20, "refit_stride": 1, "horizon": 7, "mode": "recursive"},
        "output": {"dir": "../reports", "prefix": "backtest"},
    }
