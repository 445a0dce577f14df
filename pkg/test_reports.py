"""
Tests for report rendering against the published table layouts
"""

import io
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from arma_screen import AicScreenResult, ArmaFit, ArmaKind
from backtest import BacktestConfig, BacktestReport, ForecasterKind
from exceptions import EmptyReportsError, InvalidConfigError, MismatchedActualsError
from metrics import ErrorTable
from reports import render_report, render_screen

GOLDEN_DIR = Path(__file__).parent / "data" / "golden"
SVG_NS = "{http://www.w3.org/2000/svg}"
ACTUALS = np.array([3.0, 0.0, 1.5, 7.0, 0.5, 2.0, 12.0])


def _report(label, kind, mad, md, mse, mape, actuals=ACTUALS, forecasts=None):
    forecasts = np.linspace(1.0, 4.0, actuals.size) if forecasts is None else forecasts
    return BacktestReport(
        label=label,
        kind=kind,
        forecasts=np.asarray(forecasts, dtype=float),
        actuals=np.asarray(actuals, dtype=float),
        origin=2.5,
        errors=ErrorTable(mad=mad, md=md, mse=mse, mape=mape, n_used_mape=6),
        config=BacktestConfig(),
    )


def _published_reports():
    return [
        _report("ES", ForecasterKind.ES, 7.65, -1.99, 64.0, 0.49),
        _report("DT", ForecasterKind.TREE, 6.08, 1.32, 53.0, 0.38),
        _report("LSTM", ForecasterKind.LSTM, 1.2, 0.91, 22.0, 0.07),
    ]


def _fit(kind, aic):
    return ArmaFit(kind=kind, mu=0.0, phi=0.0, theta=0.0, sigma2=1.0,
                   k_params=kind.k_params, n=100, aic=aic)


def test_error_table_matches_golden_file():
    expected = (GOLDEN_DIR / "table_errors.txt").read_bytes()
    assert render_report(_published_reports(), "text") == expected


def test_csv_round_trip():
    reports = [
        _report("ES", ForecasterKind.ES, 7.654321987, -1.99, 64.1234567891, 0.4912345),
        _report("DT", ForecasterKind.TREE, 6.08, 1.3211111, 53.0, 0.38),
    ]
    frame = pd.read_csv(io.BytesIO(render_report(reports, "csv")), index_col="metric")
    assert list(frame.index) == ["MAD", "MD", "MSE", "MAPE"]
    assert list(frame.columns) == ["ES", "DT"]
    for report in reports:
        for metric in frame.index:
            assert abs(frame.loc[metric, report.label] - report.errors.row(metric)) < 1e-9


def test_svg_has_one_polyline_per_series():
    root = ET.fromstring(render_report(_published_reports(), "svg"))
    assert root.tag == f"{SVG_NS}svg"
    polylines = root.findall(f".//{SVG_NS}polyline")
    assert len(polylines) == 4
    assert "stroke-dasharray" not in polylines[0].attrib
    assert all("stroke-dasharray" in p.attrib for p in polylines[1:])
    assert len({p.attrib["stroke-dasharray"] for p in polylines[1:]}) == 3
    labels = [t.text for t in root.iter(f"{SVG_NS}text")]
    assert "DT" in labels and "Actual" in labels


def test_svg_single_model_single_step():
    report = _report("Naive", ForecasterKind.NAIVE, 1.0, 1.0, 1.0, 0.5,
                     actuals=np.array([3.0]), forecasts=np.array([2.5]))
    root = ET.fromstring(render_report([report], "svg"))
    polylines = root.findall(f".//{SVG_NS}polyline")
    assert len(polylines) == 2
    for line in polylines:
        assert len(line.attrib["points"].split()) == 2


def test_svg_escapes_labels():
    report = _report("A<B & C", ForecasterKind.ES, 1.0, 0.0, 1.0, 0.1)
    root = ET.fromstring(render_report([report], "svg"))
    assert "A<B & C" in [t.text for t in root.iter(f"{SVG_NS}text")]


def test_render_errors():
    with pytest.raises(EmptyReportsError):
        render_report([], "text")
    other = _report("DT", ForecasterKind.TREE, 1.0, 0.0, 1.0, 0.1, actuals=ACTUALS + 1.0)
    with pytest.raises(MismatchedActualsError):
        render_report([_published_reports()[0], other], "csv")
    with pytest.raises(InvalidConfigError):
        render_report(_published_reports(), "pdf")


def test_screen_matches_golden_file():
    result = AicScreenResult(
        fits=(
            _fit(ArmaKind.WHITE_NOISE, 1411.31),
            _fit(ArmaKind.MA1, 1412.81),
            _fit(ArmaKind.AR1, 1412.85),
            _fit(ArmaKind.ARMA11, 1414.70),
        ),
        arma_appropriate=False,
        delta_aic_vs_white_noise=1411.31 - 1412.81,
    )
    expected = (GOLDEN_DIR / "aic_screen.txt").read_text(encoding="utf-8")
    assert render_screen(result) == expected


def test_screen_verdict_when_arma_wins():
    result = AicScreenResult(
        fits=(_fit(ArmaKind.AR1, 300.0), _fit(ArmaKind.WHITE_NOISE, 312.3456)),
        arma_appropriate=True,
        delta_aic_vs_white_noise=12.3456,
    )
    text = render_screen(result)
    assert text.splitlines()[-1] == "ARMA candidate preferred (ΔAIC = 12.35)"
    assert text.splitlines()[1].startswith("1  ARProcess[1]")
