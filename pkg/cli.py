"""
Command line entry point.

    python cli.py ingest data/store.csv
    python cli.py acf data/store.csv --max-lag 20
    python cli.py screen data/store.csv
    python cli.py synth --config configs/run.json --out data/store.csv
    python cli.py backtest --config configs/run.json
    python cli.py forecast --config configs/run.json --ahead 7

Exit codes: 0 success, 1 usage error, 2 data / validation error.
"""

import argparse
import json
import logging
import sys
from datetime import timedelta
from pathlib import Path

from arma_screen import screen
from backtest import compare_models, forecast_ahead
from data_loader import DataLoader, write_csv
from datagen import gen_site_records
from exceptions import ForecastingError, UsageError
from model_store import save_model
from reports import render_report, render_screen
from run_config import load_run_config
from series_core import DEFAULT_MAX_LAG, acf, confidence_band

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting"""

    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _build_parser():
    parser = _Parser(prog="cli.py", description="Conversion-rate forecasting toolkit")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress at INFO level")
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    ingest = commands.add_parser("ingest", help="validate a store CSV and print summary statistics")
    ingest.add_argument("csv", type=Path)

    acf_cmd = commands.add_parser("acf", help="sample autocorrelation with the white-noise band")
    acf_cmd.add_argument("csv", type=Path)
    acf_cmd.add_argument("--max-lag", type=int, default=DEFAULT_MAX_LAG)

    screen_cmd = commands.add_parser("screen", help="AIC screen of white noise / MA(1) / AR(1) / ARMA(1,1)")
    screen_cmd.add_argument("csv", type=Path)

    synth = commands.add_parser("synth", help="write a synthetic store CSV")
    synth.add_argument("--config", type=Path, required=True)
    synth.add_argument("--out", type=Path, required=True)
    synth.add_argument("--seed", type=int, help="override the config seed")

    backtest = commands.add_parser("backtest", help="compare models and write report files")
    backtest.add_argument("--config", type=Path, required=True)
    backtest.add_argument("--seed", type=int, help="override the config seed")

    forecast = commands.add_parser("forecast", help="train on the full series and forecast ahead")
    forecast.add_argument("--config", type=Path, required=True)
    forecast.add_argument("--ahead", type=int, required=True)
    forecast.add_argument("--seed", type=int, help="override the config seed")
    forecast.add_argument("--save-models", type=Path, help="directory for fitted model files")
    return parser


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _ingest(args):
    loader = DataLoader(args.csv).load()
    stats = loader.summary()
    print(f"📂 {args.csv}")
    print(f"   ✓ Rows: {stats['n']} ({stats['first_date']} .. {stats['last_date']})")
    print(f"   ✓ Clicks: {stats['total_clicks']:,}   Sales: {stats['total_sales']:,}")
    print(f"   ✓ Conversion mean {stats['mean']:.3f}  std {stats['std']:.3f}  "
          f"min {stats['min']:.3f}  max {stats['max']:.3f}")
    print(f"   ✓ Zero fraction: {stats['zero_fraction']:.3f}")
    print(f"   ✓ (0, 2] band: {stats['low_band_fraction']:.3f}   >= 20: {stats['burst_fraction']:.3f}")
    print(f"   ✓ Languages: {stats['languages']}")
    print(f"   ✓ Countries: {stats['countries']}")
    return EXIT_OK


def _acf(args):
    series = DataLoader(args.csv).load().series
    r = acf(series, args.max_lag)
    band = confidence_band(len(series))
    print(f"ACF of {args.csv} (n = {len(series)}, band ±{band:.3f})")
    print(f"{'lag':>4}{'r':>10}")
    outside = 0
    for lag in range(1, args.max_lag + 1):
        mark = "  *" if abs(r[lag]) > band else ""
        outside += bool(mark)
        print(f"{lag:>4}{r[lag]:>10.4f}{mark}")
    inside = args.max_lag - outside
    status = "✓" if outside == 0 else "⚠"
    print(f"{status} {inside}/{args.max_lag} lags inside the band")
    return EXIT_OK


def _screen(args):
    series = DataLoader(args.csv).load().series
    print(render_screen(screen(series)), end="")
    return EXIT_OK


def _synth(args):
    config = load_run_config(args.config, seed=args.seed)
    records = gen_site_records(config.gen_config())
    write_csv(args.out, records)
    print(f"✅ Wrote {len(records)} days to {args.out} (seed {config.seed})")
    return EXIT_OK


def _backtest(args):
    config = load_run_config(args.config, seed=args.seed)
    series = config.load_series()
    reports = compare_models(series, config.model_specs(), config.backtest, config.max_workers)

    config.output_dir.mkdir(exist_ok=True, parents=True)
    written = []
    for suffix, fmt in ((".txt", "text"), (".csv", "csv"), (".svg", "svg")):
        path = config.report_path(suffix)
        path.write_bytes(render_report(reports, fmt))
        written.append(path)

    path = config.report_path(".json")
    with open(path, "w", encoding="utf-8") as f:
        json.dump({
            "seed": config.seed,
            "n_values": len(series),
            "backtest": config.backtest.to_dict(),
            "models": [r.to_dict() for r in reports],
        }, f, indent=2)
    written.append(path)

    print(render_report(reports, "text").decode("utf-8"), end="")
    for path in written:
        print(f"   ✓ {path}")
    return EXIT_OK


def _forecast(args):
    if args.ahead < 1:
        raise UsageError("forecast: --ahead must be >= 1")
    config = load_run_config(args.config, seed=args.seed)
    series = config.load_series()
    first_day = series.start_date + timedelta(days=len(series))

    results = []
    for spec in config.model_specs():
        values, forecaster = forecast_ahead(series, spec, args.ahead, config.backtest.refit_stride)
        results.append((spec.label, values))
        if args.save_models is not None:
            path = save_model(args.save_models / f"{spec.kind.value}.json", forecaster)
            print(f"   ✓ saved {spec.label} model to {path}")

    print(f"{'date':<12}" + "".join(f"{label:>10}" for label, _ in results))
    for k in range(args.ahead):
        day = first_day + timedelta(days=k)
        print(f"{day.isoformat():<12}" + "".join(f"{values[k]:>10.4f}" for _, values in results))
    return EXIT_OK


_COMMANDS = {
    "ingest": _ingest,
    "acf": _acf,
    "screen": _screen,
    "synth": _synth,
    "backtest": _backtest,
    "forecast": _forecast,
}


def cli_dispatch(argv):
    """Run one command line -> exit code"""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return EXIT_OK if not e.code else EXIT_USAGE

    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    where = getattr(args, "csv", None) or getattr(args, "config", None)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as e:
        print(f"{parser.format_usage()}{e}", file=sys.stderr)
        return EXIT_USAGE
    except (ForecastingError, OSError, json.JSONDecodeError) as e:
        # OSError messages already name the file
        prefix = f"{where}: " if where is not None and not isinstance(e, OSError) else ""
        print(f"❌ {prefix}{e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(cli_dispatch(sys.argv[1:]))
