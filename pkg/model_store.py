"""
Fitted-model persistence as JSON.

Every file carries {"kind": ..., "format_version": 1} plus the state needed to
resume forecasting: the ES smoothing factor and smoothed value, the tree's node
structure, or the LSTM weights with their normalizer and config.
"""

import json
import logging
from dataclasses import asdict
from pathlib import Path

from backtest import (
    EsConfig,
    EsForecaster,
    ForecasterKind,
    LstmForecaster,
    NaiveForecaster,
    TreeForecaster,
)
from exceptions import InvalidConfigError, UninitializedError
from lstm import LstmConfig, LstmFit, LstmParams
from series_core import NormalizerParams
from smoothing import EsModel
from tree import FittedTree, TreeConfig

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


def _payload(forecaster):
    if isinstance(forecaster, NaiveForecaster):
        return ForecasterKind.NAIVE, {}
    if isinstance(forecaster, EsForecaster):
        if forecaster.alpha is None:
            raise UninitializedError("ES forecaster has not been fitted")
        state = forecaster.model.to_dict() if forecaster.model is not None else None
        return ForecasterKind.ES, {"alpha": forecaster.alpha, "state": state}
    if isinstance(forecaster, TreeForecaster):
        if forecaster.tree is None:
            raise UninitializedError("tree forecaster has not been fitted")
        return ForecasterKind.TREE, {
            "config": asdict(forecaster.cfg),
            "use_exog": forecaster.use_exog,
            "tree": forecaster.tree.to_dict(),
        }
    if isinstance(forecaster, LstmForecaster):
        if forecaster.fit_result is None:
            raise UninitializedError("LSTM forecaster has not been fitted")
        fit = forecaster.fit_result
        return ForecasterKind.LSTM, {
            "config": forecaster.cfg.to_dict(),
            "params": fit.params.to_dict(),
            "normalizer": fit.normalizer.to_dict(),
            "final_loss": fit.loss_history[-1] if fit.loss_history else None,
        }
    raise InvalidConfigError(f"cannot persist {type(forecaster).__name__}")


def save_model(path, forecaster):
    kind, body = _payload(forecaster)
    document = {"kind": kind.value, "format_version": FORMAT_VERSION, **body}
    path = Path(path)
    path.parent.mkdir(exist_ok=True, parents=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(document, f, indent=2)
    logger.info("saved %s model to %s", kind.value, path)
    return path


def load_model(path):
    """Forecaster restored from a model file, ready for predict_next"""
    with open(path, "r", encoding="utf-8") as f:
        document = json.load(f)
    if document.get("format_version") != FORMAT_VERSION:
        raise InvalidConfigError(
            f"{path}: unsupported format_version {document.get('format_version')!r}"
        )
    try:
        kind = ForecasterKind(document.get("kind"))
    except ValueError:
        raise InvalidConfigError(f"{path}: unknown model kind {document.get('kind')!r}")

    try:
        if kind is ForecasterKind.NAIVE:
            return NaiveForecaster()
        if kind is ForecasterKind.ES:
            forecaster = EsForecaster(EsConfig(alpha=document["alpha"]))
            forecaster.alpha = float(document["alpha"])
            if document.get("state") is not None:
                forecaster.model = EsModel.from_dict(document["state"])
            return forecaster
        if kind is ForecasterKind.TREE:
            forecaster = TreeForecaster(TreeConfig(**document["config"]))
            forecaster.use_exog = bool(document["use_exog"])
            forecaster.tree = FittedTree.from_dict(document["tree"])
            return forecaster
        forecaster = LstmForecaster(LstmConfig(**document["config"]))
        forecaster.fit_result = LstmFit(
            params=LstmParams.from_dict(document["params"]),
            normalizer=NormalizerParams.from_dict(document["normalizer"]),
        )
        return forecaster
    except (KeyError, TypeError) as e:
        raise InvalidConfigError(f"{path}: incomplete {kind.value} model file ({e})") from e
