"""
Step 5: Window / Stride Sweep
Conversion-Rate Forecasting Pipeline

Repeats the backtest for several training-window sizes and refit strides and
tabulates the error measures per model.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from backtest import ForecasterKind, sweep_windows  # noqa: E402
from data_loader import DataLoader  # noqa: E402
from run_config import load_run_config  # noqa: E402

# Configuration
CONFIG_PATH = Path("configs/run.json")
STORE_CSV = Path("data/raw/store.csv")
REPORT_DIR = Path("reports")
REPORT_DIR.mkdir(exist_ok=True, parents=True)
WINDOWS = (10, 20, 30)
STRIDES = (1, 3, 7)
SKIP_KINDS = (ForecasterKind.LSTM,)  # one training per refit makes the grid slow


def main():
    print("=" * 70)
    print("🗺  WINDOW / STRIDE SWEEP")
    print("=" * 70)

    config = load_run_config(CONFIG_PATH)
    series = DataLoader(STORE_CSV).load().series
    specs = [spec for spec in config.model_specs() if spec.kind not in SKIP_KINDS]
    print(f"\n📝 Windows {WINDOWS}, strides {STRIDES}, models {[s.label for s in specs]}")

    table = sweep_windows(series, specs, WINDOWS, STRIDES, config.backtest)
    report_path = REPORT_DIR / "05_window_sweep.csv"
    table.to_csv(report_path, index=False, lineterminator="\n")

    best = table.loc[table.groupby("model")["MAD"].idxmin()]
    print("\n📈 Lowest MAD per model:")
    for _, row in best.iterrows():
        print(f"   ✓ {row['model']:6} W={row['window']:<3} m={row['refit_stride']:<2} MAD {row['MAD']:.3f}")

    print(f"\n✅ Sweep saved to: {report_path}")
    return table


if __name__ == "__main__":
    main()
