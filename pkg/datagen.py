"""
Synthetic store data generator.

Daily conversion rates are drawn i.i.d. from a four-part mixture shaped like a
typical conversion histogram: a mass at exactly zero, a dominant low band in
(0, 2], a flatter body and rare bursts. Site records add Poisson clicks and
Binomial sales consistent with each day's rate. All default numbers are
tunable choices, not measurements.
"""

import logging
from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import Tuple

import numpy as np

from exceptions import InvalidConfigError
from series_core import SiteRecord, TimeSeries

logger = logging.getLogger(__name__)

LANGUAGES = ("en", "de", "fr", "es", "uk")
COUNTRIES = ("US", "DE", "FR", "ES", "UA")


@dataclass(frozen=True)
class GenConfig:
    n_days: int = 100
    p_zero: float = 0.35
    low_mode_weight: float = 0.30
    burst_prob: float = 0.05
    burst_range: Tuple[float, float] = (20.0, 60.0)
    body_range: Tuple[float, float] = (2.0, 15.0)
    clicks_rate: float = 50.0
    seed: int = 0
    start_date: date = field(default=date(2023, 1, 1))

    def __post_init__(self):
        if self.n_days < 1:
            raise InvalidConfigError("n_days must be >= 1")
        for name in ("p_zero", "low_mode_weight", "burst_prob"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidConfigError(f"{name} must be a probability, got {value}")
        if self.p_zero + self.low_mode_weight + self.burst_prob > 1.0 + 1e-12:
            raise InvalidConfigError("p_zero + low_mode_weight + burst_prob must not exceed 1")
        for name in ("burst_range", "body_range"):
            lo, hi = getattr(self, name)
            if not 0.0 <= lo <= hi <= 100.0:
                raise InvalidConfigError(f"{name} must be an ordered range inside [0, 100]")
            object.__setattr__(self, name, (float(lo), float(hi)))
        if not self.clicks_rate > 0:
            raise InvalidConfigError("clicks_rate must be > 0")

    @property
    def body_weight(self):
        return max(0.0, 1.0 - self.p_zero - self.low_mode_weight - self.burst_prob)

    def mixture_mean(self):
        """Expected daily rate under the mixture"""
        return (self.low_mode_weight * 1.0
                + self.burst_prob * sum(self.burst_range) / 2.0
                + self.body_weight * sum(self.body_range) / 2.0)


def _streams(seed):
    """Independent generators for rates, counts and labels"""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(3)]


def _draw_rates(cfg, rng):
    n = cfg.n_days
    weights = np.array([cfg.p_zero, cfg.low_mode_weight, cfg.burst_prob, cfg.body_weight])
    component = rng.choice(4, size=n, p=weights / weights.sum())
    low = 2.0 - rng.uniform(0.0, 2.0, size=n)  # (0, 2]
    burst = rng.uniform(*cfg.burst_range, size=n)
    body = rng.uniform(*cfg.body_range, size=n)
    return np.choose(component, [np.zeros(n), low, burst, body])


def gen_conversion_series(cfg):
    """Zero-inflated i.i.d. conversion series"""
    rates_rng, _, _ = _streams(cfg.seed)
    values = _draw_rates(cfg, rates_rng)
    logger.info("generated %d days (zero fraction %.3f)", cfg.n_days, float(np.mean(values == 0)))
    return TimeSeries(values=values, start_date=cfg.start_date)


def gen_site_records(cfg):
    """Clicks ~ Poisson, sales ~ Binomial(clicks, rate/100); conversion recomputed from counts"""
    rates_rng, counts_rng, labels_rng = _streams(cfg.seed)
    rates = _draw_rates(cfg, rates_rng)
    clicks = counts_rng.poisson(cfg.clicks_rate, size=cfg.n_days)
    sales = counts_rng.binomial(clicks, rates / 100.0)
    languages = labels_rng.choice(LANGUAGES, size=cfg.n_days)
    countries = labels_rng.choice(COUNTRIES, size=cfg.n_days)

    records = []
    for day in range(cfg.n_days):
        c, s = int(clicks[day]), int(sales[day])
        records.append(SiteRecord(
            date=cfg.start_date + timedelta(days=day),
            clicks=c,
            sales=s,
            conversion=100.0 * s / c if c > 0 else 0.0,
            language=str(languages[day]),
            country=str(countries[day]),
        ))
    return records
