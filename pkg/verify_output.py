"""
Verification Script - Check All Outputs
Conversion-Rate Forecasting Pipeline

Verifies that all expected files were generated and contain valid data.
"""

import json
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

import pandas as pd

from data_loader import parse_csv
from exceptions import ForecastingError

SVG_NS = "{http://www.w3.org/2000/svg}"
REPORT_DIR = Path("reports")


def verify_csv(filepath, min_rows=1):
    """Verify CSV file is valid and has data"""
    try:
        df = pd.read_csv(filepath)
        if len(df) >= min_rows:
            return True, f"✅ {filepath.name} - {len(df)} rows, {len(df.columns)} columns"
        return False, f"⚠️  {filepath.name} - Only {len(df)} rows (expected >={min_rows})"
    except (OSError, ValueError) as e:
        return False, f"❌ {filepath.name} - Error: {e}"


def verify_store_csv(filepath):
    """Verify the store CSV passes full schema validation"""
    try:
        records = parse_csv(filepath)
        return True, f"✅ {filepath.name} - {len(records)} valid days"
    except (OSError, ForecastingError) as e:
        return False, f"❌ {filepath.name} - Error: {e}"


def verify_json(filepath):
    """Verify JSON file is valid"""
    try:
        with open(filepath, "r") as f:
            data = json.load(f)
        return True, f"✅ {filepath.name} - Valid JSON ({len(str(data))} chars)"
    except (OSError, ValueError) as e:
        return False, f"❌ {filepath.name} - Error: {e}"


def verify_svg(filepath, expected_polylines):
    """Verify SVG is well-formed XML with one polyline per series"""
    try:
        root = ET.parse(filepath).getroot()
    except (OSError, ET.ParseError) as e:
        return False, f"❌ {filepath.name} - Error: {e}"
    count = len(root.findall(f".//{SVG_NS}polyline"))
    if count != expected_polylines:
        return False, f"❌ {filepath.name} - {count} polylines (expected {expected_polylines})"
    return True, f"✅ {filepath.name} - {count} polylines"


def main(report_dir=REPORT_DIR, store_csv=Path("data/raw/store.csv")):
    """Run verification"""
    report_dir = Path(report_dir)
    print("=" * 70)
    print("🔍 OUTPUT VERIFICATION")
    print("=" * 70)

    checks = []

    print("\n🎲 DATA:")
    checks.append(verify_store_csv(Path(store_csv)))
    print(f"   {checks[-1][1]}")

    print("\n📊 REPORTS:")
    for name in ("02_series_profile.json", "03_aic_screen.json", "04_forecast_errors.json"):
        checks.append(verify_json(report_dir / name))
        print(f"   {checks[-1][1]}")
    for name, min_rows in (("04_forecast_errors.csv", 4), ("05_window_sweep.csv", 1)):
        checks.append(verify_csv(report_dir / name, min_rows))
        print(f"   {checks[-1][1]}")

    n_models = 0
    errors_csv = report_dir / "04_forecast_errors.csv"
    if errors_csv.exists():
        n_models = len(pd.read_csv(errors_csv, index_col="metric").columns)
    checks.append(verify_svg(report_dir / "04_forecast_errors.svg", 1 + n_models))
    print(f"   {checks[-1][1]}")

    all_passed = all(passed for passed, _ in checks)
    print("\n" + "=" * 70)
    if all_passed:
        print("🎉 ALL OUTPUTS VERIFIED!")
    else:
        print("⚠️  Some outputs are missing or invalid. Re-run: python run_all_scripts.py")
    print("=" * 70)
    return all_passed


if __name__ == "__main__":
    sys.exit(0 if main() else 1)
