"""
Step 3: Linear Model Screen
Conversion-Rate Forecasting Pipeline

Fits white noise, MA(1), AR(1) and ARMA(1,1) to the store series and ranks
them by AIC.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from arma_screen import screen  # noqa: E402
from data_loader import DataLoader  # noqa: E402
from reports import render_screen  # noqa: E402

# Configuration
STORE_CSV = Path("data/raw/store.csv")
REPORT_DIR = Path("reports")
REPORT_DIR.mkdir(exist_ok=True, parents=True)


def main():
    print("=" * 70)
    print("📐 AIC SCREEN")
    print("=" * 70)

    series = DataLoader(STORE_CSV).load().series
    result = screen(series)
    table = render_screen(result)
    print()
    print(table, end="")

    (REPORT_DIR / "03_aic_screen.txt").write_text(table, encoding="utf-8")
    with open(REPORT_DIR / "03_aic_screen.json", "w") as f:
        json.dump(result.to_dict(), f, indent=2)

    if result.arma_appropriate:
        print("\n⚠️  Series shows linear structure; ARMA-type models may help")
    print(f"\n✅ Screen saved to: {REPORT_DIR / '03_aic_screen.txt'}")
    return result


if __name__ == "__main__":
    main()
