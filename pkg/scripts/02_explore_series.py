"""
Step 2: Series Exploration
Conversion-Rate Forecasting Pipeline

Profiles the store series:
- Summary statistics and zero fraction
- Density histogram of daily conversion
- Autocorrelation up to lag 20 against the +-2/sqrt(n) band
- Autocorrelation of exponential-smoothing residuals
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from data_loader import DataLoader  # noqa: E402
from series_core import DEFAULT_MAX_LAG, acf, confidence_band, histogram, whiteness_fraction  # noqa: E402
from smoothing import es_residuals, es_select_alpha  # noqa: E402

# Configuration
STORE_CSV = Path("data/raw/store.csv")
REPORT_DIR = Path("reports")
REPORT_DIR.mkdir(exist_ok=True, parents=True)


def profile_series(loader):
    """Distribution and correlation profile of one series"""
    series = loader.series
    max_lag = min(DEFAULT_MAX_LAG, len(series) - 1)
    edges, density = histogram(series)
    alpha, _ = es_select_alpha(series)
    residuals = es_residuals(series, alpha)
    return {
        "summary": loader.summary(),
        "histogram": {"edges": edges.tolist(), "density": density.tolist()},
        "acf": acf(series, max_lag).tolist(),
        "band": confidence_band(len(series)),
        "whiteness_fraction": whiteness_fraction(series, max_lag),
        "es_alpha": alpha,
        "es_residual_acf": acf(residuals, max_lag).tolist(),
        "es_residual_whiteness_fraction": whiteness_fraction(residuals, max_lag),
    }


def main():
    print("=" * 70)
    print("🔍 SERIES EXPLORATION")
    print("=" * 70)

    print(f"\n📂 Loading {STORE_CSV}...")
    loader = DataLoader(STORE_CSV).load()
    profile = profile_series(loader)
    summary = profile["summary"]

    print(f"   ✓ Records: {summary['n']}")
    print(f"   ✓ Mean conversion: {summary['mean']:.3f}%")
    print(f"   ✓ Zero fraction: {summary['zero_fraction']:.3f}")
    share = profile["whiteness_fraction"]
    marker = "✓" if share >= 0.9 else "⚠"
    print(f"   {marker} Lags inside ±{profile['band']:.3f}: {share:.0%}")

    report_path = REPORT_DIR / "02_series_profile.json"
    with open(report_path, "w") as f:
        json.dump(profile, f, indent=2)

    print(f"\n✅ Exploration complete! Report saved to: {report_path}")
    return profile


if __name__ == "__main__":
    main()
