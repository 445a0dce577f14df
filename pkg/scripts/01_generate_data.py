"""
Step 1: Synthetic Store Data
Conversion-Rate Forecasting Pipeline

Generates a zero-inflated daily store series from the generator section of
configs/run.json and writes it in the store CSV schema.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from data_loader import write_csv  # noqa: E402
from datagen import gen_site_records  # noqa: E402
from run_config import load_run_config  # noqa: E402

# Configuration
CONFIG_PATH = Path("configs/run.json")
RAW_DIR = Path("data/raw")
STORE_CSV = RAW_DIR / "store.csv"


def main():
    print("=" * 70)
    print("🎲 SYNTHETIC STORE DATA")
    print("=" * 70)

    config = load_run_config(CONFIG_PATH)
    gen = config.gen_config()
    print(f"\n📝 Generator: {gen.n_days} days, seed {gen.seed}, "
          f"p_zero {gen.p_zero}, low band {gen.low_mode_weight}, bursts {gen.burst_prob}")

    records = gen_site_records(gen)
    write_csv(STORE_CSV, records)

    zero_days = sum(r.conversion == 0 for r in records)
    print(f"   ✓ Days: {len(records)}")
    print(f"   ✓ Zero-conversion days: {zero_days}")
    print(f"   ✓ Expected mean rate: {gen.mixture_mean():.2f}%")
    print(f"\n✅ Data written to: {STORE_CSV}")
    return records


if __name__ == "__main__":
    main()
