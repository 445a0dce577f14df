"""
Project Setup Script
Conversion-Rate Forecasting Pipeline

Creates the folder structure and a default run configuration.
"""

import json
from pathlib import Path

from run_config import default_run_config

FOLDERS = ["configs", "data/raw", "reports", "models"]
CONFIG_PATH = Path("configs/run.json")


def create_folder_structure(root=Path(".")):
    """Create all required directories and configs/run.json (kept if present)"""
    root = Path(root)
    print("=" * 70)
    print("📁 CREATING PROJECT STRUCTURE")
    print("=" * 70)

    for folder in FOLDERS:
        (root / folder).mkdir(parents=True, exist_ok=True)
        print(f"   ✓ Created: {folder}/")
    for folder in ("data/raw", "reports", "models"):
        (root / folder / ".gitkeep").touch()

    config_path = root / CONFIG_PATH
    if config_path.exists():
        print(f"\n   ⚠ {CONFIG_PATH} already exists, leaving it unchanged")
    else:
        with open(config_path, "w") as f:
            json.dump(default_run_config(), f, indent=2)
        print(f"\n   ✓ Wrote default {CONFIG_PATH}")

    print("\n✅ Folder structure created successfully!")
    print("\n📝 Next Steps:")
    print("   1. Edit configs/run.json (seed, models, window, horizon)")
    print("   2. Run: python run_all_scripts.py")
    print("   3. Or use the command line directly:")
    print("      - python cli.py synth --config configs/run.json --out data/raw/store.csv")
    print("      - python cli.py backtest --config configs/run.json")
    return config_path


if __name__ == "__main__":
    create_folder_structure()
