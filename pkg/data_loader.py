"""
Data Loader
Reads, validates and writes the daily store CSV

Schema (header must match exactly):

    date,clicks,sales,conversion,language,country

One row per day, ISO dates strictly increasing, plain decimal numbers. Every
row must satisfy the SiteRecord rules; errors report the 1-based file line.
"""

import csv
import logging
import re
from datetime import date
from pathlib import Path

import numpy as np
import pandas as pd
from unidecode import unidecode

from exceptions import (
    BadRowError,
    ConsistencyViolationError,
    MalformedHeaderError,
    NonMonotonicDatesError,
    SeriesValidationError,
)
from series_core import SiteRecord, describe, records_to_series

logger = logging.getLogger(__name__)

# Configuration
CSV_COLUMNS = ("date", "clicks", "sales", "conversion", "language", "country")
CSV_HEADER = ",".join(CSV_COLUMNS)

_DATE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_COUNT = re.compile(r"^\d+$")
_DECIMAL = re.compile(r"^\d+(\.\d+)?$")


def clean_text(text):
    """Standardize text: strip whitespace, handle encoding"""
    if pd.isna(text):
        return None
    text = " ".join(str(text).split())
    text = unidecode(text)
    return text if text else None


def _decoded_lines(path):
    """File lines as text; bytes that are not UTF-8 are reported by line"""
    lines = []
    for number, raw in enumerate(Path(path).read_bytes().splitlines(), start=1):
        try:
            lines.append(raw.decode("utf-8"))
        except UnicodeDecodeError as e:
            if number == 1:
                raise MalformedHeaderError(f"{path}: header is not valid UTF-8") from e
            raise BadRowError(number, f"byte {e.start + 1} is not valid UTF-8") from e
    return lines


def _check_layout(path):
    """Header must match exactly; every later line must hold six unquoted fields"""
    lines = _decoded_lines(path)
    header = lines[0] if lines else ""
    if header != CSV_HEADER:
        raise MalformedHeaderError(
            f"{path}: header must be '{CSV_HEADER}', got '{header}'"
        )
    for number, text in enumerate(lines[1:], start=2):
        if not text.strip():
            raise BadRowError(number, "empty row")
        if '"' in text:
            raise BadRowError(number, "quoted fields are not allowed")
        n_fields = text.count(",") + 1
        if n_fields != len(CSV_COLUMNS):
            raise BadRowError(number, f"expected {len(CSV_COLUMNS)} fields, found {n_fields}")


def _read_rows(path):
    return pd.read_csv(
        path,
        dtype=str,
        keep_default_na=False,
        skip_blank_lines=False,
        quoting=csv.QUOTE_NONE,
        encoding="utf-8",
    )


def _parse_row(line, row):
    fields = {}
    for name in CSV_COLUMNS:
        value = row[name]
        if pd.isna(value) or value == "":
            raise BadRowError(line, f"missing {name}")
        fields[name] = value.strip()

    if not _DATE.match(fields["date"]):
        raise BadRowError(line, f"date '{fields['date']}' is not YYYY-MM-DD")
    try:
        day = date.fromisoformat(fields["date"])
    except ValueError:
        raise BadRowError(line, f"date '{fields['date']}' does not exist")

    for name in ("clicks", "sales"):
        if not _COUNT.match(fields[name]):
            raise BadRowError(line, f"{name} '{fields[name]}' is not a non-negative integer")
    if not _DECIMAL.match(fields["conversion"]):
        raise BadRowError(line, f"conversion '{fields['conversion']}' is not a plain decimal")
    conversion = float(fields["conversion"])
    if conversion > 100.0:
        raise BadRowError(line, f"conversion {conversion} exceeds 100")

    language = clean_text(fields["language"])
    country = clean_text(fields["country"])
    if language is None or country is None:
        raise BadRowError(line, "language and country must be non-empty")

    try:
        return SiteRecord(
            date=day,
            clicks=int(fields["clicks"]),
            sales=int(fields["sales"]),
            conversion=conversion,
            language=language,
            country=country,
        )
    except SeriesValidationError as e:
        raise ConsistencyViolationError(line, str(e)) from e


def parse_csv(path):
    """Validated SiteRecords from a store CSV"""
    path = Path(path)
    _check_layout(path)
    frame = _read_rows(path)

    records = []
    for index, row in frame.iterrows():
        line = index + 2  # header is line 1
        record = _parse_row(line, row)
        if records and record.date <= records[-1].date:
            raise NonMonotonicDatesError(line)
        records.append(record)

    if not records:
        raise BadRowError(2, "file has a header but no rows")
    gaps = sum((b.date - a.date).days > 1 for a, b in zip(records, records[1:]))
    if gaps:
        logger.warning("%s: %d gaps between consecutive dates", path, gaps)
    logger.info("parsed %d rows from %s", len(records), path)
    return records


def _plain_decimal(value):
    # shortest round-tripping digits, never scientific notation
    return np.format_float_positional(float(value) + 0.0, trim="0")


def write_csv(path, records):
    """Write SiteRecords in the store CSV schema (full float precision)"""
    frame = pd.DataFrame(
        [
            {
                "date": r.date.isoformat(),
                "clicks": int(r.clicks),
                "sales": int(r.sales),
                "conversion": _plain_decimal(r.conversion),
                "language": r.language,
                "country": r.country,
            }
            for r in records
        ],
        columns=list(CSV_COLUMNS),
    )
    path = Path(path)
    path.parent.mkdir(exist_ok=True, parents=True)
    frame.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    logger.info("wrote %d rows to %s", len(frame), path)
    return path


class DataLoader:
    """Load a store CSV and expose it as records, a series and a summary"""

    def __init__(self, path):
        self.path = Path(path)
        self.records = None
        self.series = None

    def load(self):
        self.records = parse_csv(self.path)
        self.series = records_to_series(self.records)
        return self

    def summary(self):
        """describe() statistics plus date range and label counts"""
        if self.records is None:
            self.load()
        labels = pd.DataFrame(
            [{"language": r.language, "country": r.country} for r in self.records]
        )
        stats = describe(self.series)
        stats.update({
            "first_date": self.records[0].date.isoformat(),
            "last_date": self.records[-1].date.isoformat(),
            "total_clicks": int(self.series.exog["clicks"].sum()),
            "total_sales": int(self.series.exog["sales"].sum()),
            "languages": labels["language"].value_counts().sort_index().to_dict(),
            "countries": labels["country"].value_counts().sort_index().to_dict(),
        })
        return stats
