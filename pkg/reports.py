"""
Report rendering: forecast-error table (text / CSV), forecast chart (SVG) and
the AIC screening table.
"""

import io
import logging
from xml.sax.saxutils import escape, quoteattr

import numpy as np
import pandas as pd

from exceptions import EmptyReportsError, InvalidConfigError, MismatchedActualsError
from metrics import METRIC_NAMES

logger = logging.getLogger(__name__)

REPORT_FORMATS = ("text", "csv", "svg")
TABLE_TITLE = "FORECAST ERRORS"
LABEL_WIDTH = 6
COLUMN_WIDTH = 8

# Chart layout (px)
CHART_WIDTH = 800
CHART_HEIGHT = 420
MARGIN_LEFT = 70
MARGIN_RIGHT = 150
MARGIN_TOP = 40
MARGIN_BOTTOM = 60
N_Y_TICKS = 6
MAX_X_TICKS = 15

ACTUAL_COLOR = "#222222"
MODEL_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")
MODEL_DASHES = ("8,4", "3,3", "10,3,2,3", "1,4", "12,6", "5,2,1,2")


def _format_value(value):
    """Two decimals with trailing zeros dropped: 64.00 -> 64, 1.20 -> 1.2"""
    text = f"{value:.2f}"
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def _check_reports(reports):
    if not reports:
        raise EmptyReportsError("no backtest reports to render")
    reference = np.asarray(reports[0].actuals, dtype=float)
    for report in reports[1:]:
        actuals = np.asarray(report.actuals, dtype=float)
        if actuals.shape != reference.shape or not np.array_equal(actuals, reference):
            raise MismatchedActualsError(
                f"{report.label} was scored on different actuals than {reports[0].label}"
            )
        if report.origin != reports[0].origin:
            raise MismatchedActualsError(f"{report.label} starts from a different origin")


# ---------------------------------------------------------------------------
# Error table
# ---------------------------------------------------------------------------

def _error_frame(reports):
    values = np.array([[r.errors.row(name) for r in reports] for name in METRIC_NAMES])
    frame = pd.DataFrame(values, index=list(METRIC_NAMES), columns=[r.label for r in reports])
    frame.index.name = "metric"
    return frame


def _render_text(reports):
    width = max([COLUMN_WIDTH] + [len(r.label) + 1 for r in reports])
    lines = [TABLE_TITLE, f"{'':<{LABEL_WIDTH}}" + "".join(f"{r.label:>{width}}" for r in reports)]
    for name in METRIC_NAMES:
        cells = "".join(f"{_format_value(r.errors.row(name)):>{width}}" for r in reports)
        lines.append(f"{name:<{LABEL_WIDTH}}" + cells)
    return "\n".join(lines) + "\n"


def _render_csv(reports):
    buffer = io.StringIO()
    _error_frame(reports).to_csv(buffer, lineterminator="\n")
    return buffer.getvalue()


# ---------------------------------------------------------------------------
# SVG chart
# ---------------------------------------------------------------------------

class SVG:
    """Minimal SVG document assembled as text"""

    def __init__(self, width, height):
        self.width = width
        self.height = height
        self.svg = ""

    def line(self, x1, y1, x2, y2, stroke, extra=""):
        self.svg += (f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                     f'stroke="{stroke}" {extra}/>\n')

    def polyline(self, points, stroke, extra=""):
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in points)
        self.svg += f'<polyline points="{coords}" fill="none" stroke="{stroke}" {extra}/>\n'

    def text(self, x, y, string, extra=""):
        self.svg += f'<text x="{x:.2f}" y="{y:.2f}" {extra}>{escape(string)}</text>\n'

    def group_start(self, name):
        self.svg += f"<g id={quoteattr(name)}>\n"

    def group_end(self):
        self.svg += "</g>\n"

    def get_svg(self):
        header = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}" '
            'font-family="sans-serif" font-size="12">\n'
        )
        return f"{header}{self.svg}</svg>\n"


def _y_limits(reports):
    values = [reports[0].origin, *reports[0].actuals]
    for report in reports:
        values.extend(report.forecasts)
    values = np.asarray(values, dtype=float)
    values = values[np.isfinite(values)]
    low, high = float(values.min()), float(values.max())
    if high == low:
        low, high = low - 1.0, high + 1.0
    pad = 0.05 * (high - low)
    return low - pad, high + pad


def _render_svg(reports):
    horizon = len(reports[0].actuals)
    plot_w = CHART_WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = CHART_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    y_low, y_high = _y_limits(reports)

    def px(step):
        return MARGIN_LEFT + plot_w * step / horizon

    def py(value):
        return MARGIN_TOP + plot_h * (y_high - value) / (y_high - y_low)

    svg = SVG(CHART_WIDTH, CHART_HEIGHT)
    svg.text(CHART_WIDTH / 2, MARGIN_TOP / 2, "Forecasts of each model", 'text-anchor="middle"')

    # axes and ticks
    x0, y0 = MARGIN_LEFT, MARGIN_TOP + plot_h
    svg.group_start("axes")
    svg.line(x0, MARGIN_TOP, x0, y0, "#000000")
    svg.line(x0, y0, x0 + plot_w, y0, "#000000")
    stride = max(1, int(np.ceil(horizon / MAX_X_TICKS)))
    for step in range(0, horizon + 1, stride):
        svg.line(px(step), y0, px(step), y0 + 5, "#000000")
        svg.text(px(step), y0 + 18, str(step), 'text-anchor="middle"')
    for value in np.linspace(y_low, y_high, N_Y_TICKS):
        svg.line(x0 - 5, py(value), x0, py(value), "#000000")
        svg.text(x0 - 8, py(value) + 4, f"{value:.2f}", 'text-anchor="end"')
    svg.text(x0 + plot_w / 2, CHART_HEIGHT - 15, "days after training window", 'text-anchor="middle"')
    svg.text(18, MARGIN_TOP + plot_h / 2, "conversion, %",
             f'text-anchor="middle" transform="rotate(-90 18 {MARGIN_TOP + plot_h / 2:.2f})"')
    svg.group_end()

    # series: step 0 is the last training value
    origin = reports[0].origin
    actual_points = [(px(0), py(origin))] + [(px(k + 1), py(v)) for k, v in enumerate(reports[0].actuals)]
    svg.group_start("actual")
    svg.polyline(actual_points, ACTUAL_COLOR, 'stroke-width="2"')
    svg.group_end()
    for i, report in enumerate(reports):
        color = MODEL_COLORS[i % len(MODEL_COLORS)]
        dash = MODEL_DASHES[i % len(MODEL_DASHES)]
        points = [(px(0), py(origin))] + [(px(k + 1), py(v)) for k, v in enumerate(report.forecasts)]
        svg.group_start(f"model-{i}")
        svg.polyline(points, color, f'stroke-width="1.5" stroke-dasharray="{dash}"')
        svg.group_end()

    # legend
    lx, ly = CHART_WIDTH - MARGIN_RIGHT + 20, MARGIN_TOP + 10
    entries = [("Actual", ACTUAL_COLOR, "")]
    entries += [(r.label, MODEL_COLORS[i % len(MODEL_COLORS)],
                 f'stroke-dasharray="{MODEL_DASHES[i % len(MODEL_DASHES)]}"')
                for i, r in enumerate(reports)]
    svg.group_start("legend")
    for row, (label, color, dash) in enumerate(entries):
        y = ly + 20 * row
        svg.line(lx, y, lx + 30, y, color, f'stroke-width="2" {dash}'.strip())
        svg.text(lx + 38, y + 4, label)
    svg.group_end()
    return svg.get_svg()


def render_report(reports, fmt="text"):
    """Backtest reports sharing one test window -> encoded report bytes"""
    if fmt not in REPORT_FORMATS:
        raise InvalidConfigError(f"unknown report format {fmt!r}; expected one of {REPORT_FORMATS}")
    reports = list(reports)
    _check_reports(reports)
    if fmt == "text":
        body = _render_text(reports)
    elif fmt == "csv":
        body = _render_csv(reports)
    else:
        body = _render_svg(reports)
    logger.debug("rendered %s report for %d models", fmt, len(reports))
    return body.encode("utf-8")


def render_screen(result):
    """Numbered Candidate / AIC table, ascending, followed by the verdict"""
    lines = [f"{'':<3}{'Candidate':<18}{'AIC':>10}"]
    for i, fit in enumerate(sorted(result.fits, key=lambda f: f.aic), 1):
        lines.append(f"{i:<3}{fit.kind.value:<18}{fit.aic:>10.2f}")
    if result.arma_appropriate:
        lines.append(f"ARMA candidate preferred (ΔAIC = {result.delta_aic_vs_white_noise:.2f})")
    else:
        lines.append("ARMA models not appropriate (ΔAIC < 2)")
    return "\n".join(lines) + "\n"
