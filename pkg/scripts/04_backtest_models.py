"""
Step 4: Model Backtest
Conversion-Rate Forecasting Pipeline

Runs the rolling-window backtest for every model in configs/run.json on the
store series and writes the error table (text, CSV), the forecast chart (SVG)
and a JSON report.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from backtest import compare_models  # noqa: E402
from data_loader import DataLoader  # noqa: E402
from reports import render_report  # noqa: E402
from run_config import load_run_config  # noqa: E402

# Configuration
CONFIG_PATH = Path("configs/run.json")
STORE_CSV = Path("data/raw/store.csv")
REPORT_DIR = Path("reports")
REPORT_DIR.mkdir(exist_ok=True, parents=True)
PREFIX = "04_forecast_errors"


def main():
    print("=" * 70)
    print("🧪 MODEL BACKTEST")
    print("=" * 70)

    config = load_run_config(CONFIG_PATH)
    series = DataLoader(STORE_CSV).load().series
    specs = config.model_specs()
    cfg = config.backtest
    print(f"\n📝 Window {cfg.window}, refit every {cfg.refit_stride}, horizon {cfg.horizon}, "
          f"mode {cfg.mode.value}")
    print(f"   Models: {', '.join(spec.label for spec in specs)}")

    reports = compare_models(series, specs, cfg, config.max_workers)
    for report in reports:
        print(f"   ✓ {report.label:6} MAD {report.errors.mad:8.3f}  ({report.elapsed_seconds:.1f}s)")

    for suffix, fmt in ((".txt", "text"), (".csv", "csv"), (".svg", "svg")):
        (REPORT_DIR / f"{PREFIX}{suffix}").write_bytes(render_report(reports, fmt))
    with open(REPORT_DIR / f"{PREFIX}.json", "w") as f:
        json.dump({"backtest": cfg.to_dict(), "models": [r.to_dict() for r in reports]}, f, indent=2)

    print()
    print(render_report(reports, "text").decode("utf-8"), end="")
    print(f"\n✅ Reports saved to: {REPORT_DIR}/{PREFIX}.*")
    return reports


if __name__ == "__main__":
    main()
