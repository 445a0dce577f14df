"""
AIC screening of low-order linear models.

Four candidates are fitted to the (mean-removed) series:

    MAProcess[0]      white noise                  k = 2 (mu, sigma2)
    MAProcess[1]      MA(1), CSS grid over theta   k = 3
    ARProcess[1]      AR(1), Yule-Walker phi       k = 3
    ARMAProcess[1,1]  ARMA(1,1), CSS grid          k = 4

White noise uses sigma2 = SSR / n. The other candidates condition on zero
pre-sample values and divide by the effective size n - m, where m counts the
fitted phi and theta coefficients. Every candidate is scored with the Gaussian AIC

    AIC = n ln(sigma2) + n (1 + ln 2 pi) + 2 k

An ARMA-type candidate is only considered appropriate when it beats white noise
by more than 2 AIC points.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from exceptions import InvalidConfigError, SeriesTooShortError, ZeroVarianceError
from series_core import as_values

logger = logging.getLogger(__name__)

MIN_LENGTH = 10
GRID_STEP = 0.01
GRID_LIMIT = 0.99
DELTA_AIC_THRESHOLD = 2.0
LOG_2PI = math.log(2.0 * math.pi)


class ArmaKind(Enum):
    WHITE_NOISE = "MAProcess[0]"
    MA1 = "MAProcess[1]"
    AR1 = "ARProcess[1]"
    ARMA11 = "ARMAProcess[1,1]"

    @property
    def k_params(self):
        return {"WHITE_NOISE": 2, "MA1": 3, "AR1": 3, "ARMA11": 4}[self.name]

    @property
    def n_coefficients(self):
        """phi and theta terms; mu and sigma2 are not counted"""
        return self.k_params - 2


@dataclass(frozen=True)
class ArmaFit:
    kind: ArmaKind
    mu: float
    phi: float
    theta: float
    sigma2: float
    k_params: int
    n: int
    aic: float

    def __post_init__(self):
        if self.k_params != self.kind.k_params:
            raise InvalidConfigError(f"{self.kind.value} has {self.kind.k_params} parameters")

    def to_dict(self):
        return {
            "candidate": self.kind.value, "mu": self.mu, "phi": self.phi,
            "theta": self.theta, "sigma2": self.sigma2, "k_params": self.k_params,
            "n": self.n, "aic": self.aic,
        }


@dataclass(frozen=True)
class AicScreenResult:
    fits: Tuple[ArmaFit, ...]
    arma_appropriate: bool
    delta_aic_vs_white_noise: float

    @property
    def best(self):
        return self.fits[0]

    @property
    def selected(self):
        """Candidate chosen under the 2-point rule: white noise unless beaten clearly"""
        if self.arma_appropriate:
            return min((f for f in self.fits if f.kind is not ArmaKind.WHITE_NOISE),
                       key=lambda f: f.aic).kind
        return ArmaKind.WHITE_NOISE

    def to_dict(self):
        return {
            "fits": [f.to_dict() for f in self.fits],
            "arma_appropriate": self.arma_appropriate,
            "delta_aic_vs_white_noise": self.delta_aic_vs_white_noise,
        }


def coefficient_grid(step=GRID_STEP, limit=GRID_LIMIT):
    """Symmetric grid {-limit, ..., limit} with the given step"""
    count = int(round(limit / step))
    return np.arange(-count, count + 1) * step


def aic(sigma2, n, k_params):
    return n * math.log(sigma2) + n * (1.0 + LOG_2PI) + 2.0 * k_params


def _css(d, phi, theta):
    """
    Conditional sum of squares of e_t = d_t - phi d_{t-1} - theta e_{t-1}
    with zero pre-sample values, vectorized over coefficient arrays.
    """
    e_prev = np.zeros_like(phi)
    d_prev = 0.0
    sse = np.zeros_like(phi)
    for value in d:
        e = value - phi * d_prev - theta * e_prev
        sse += e * e
        e_prev, d_prev = e, value
    return sse


def _prepare(series):
    x = as_values(series)
    if x.size < MIN_LENGTH:
        raise SeriesTooShortError(f"screening needs at least {MIN_LENGTH} values, got {x.size}")
    if np.ptp(x) == 0:
        raise ZeroVarianceError("cannot fit linear models to a constant series")
    return x


def fit_candidate(series, kind, grid_step=GRID_STEP):
    x = _prepare(series)
    n = x.size
    mu = float(x.mean())
    d = x - mu
    phi = theta = 0.0

    if kind is ArmaKind.WHITE_NOISE:
        ssr = float(np.dot(d, d))
    elif kind is ArmaKind.AR1:
        phi = float(np.dot(d[:-1], d[1:]) / np.dot(d, d))
        residuals = np.concatenate([[d[0]], d[1:] - phi * d[:-1]])
        ssr = float(np.dot(residuals, residuals))
    elif kind is ArmaKind.MA1:
        thetas = coefficient_grid(grid_step)
        sse = _css(d, np.zeros_like(thetas), thetas)
        best = int(np.argmin(sse))
        theta, ssr = float(thetas[best]), float(sse[best])
    elif kind is ArmaKind.ARMA11:
        grid = coefficient_grid(grid_step)
        phis, thetas = (a.ravel() for a in np.meshgrid(grid, grid, indexing="ij"))
        sse = _css(d, phis, thetas)
        best = int(np.argmin(sse))
        phi, theta, ssr = float(phis[best]), float(thetas[best]), float(sse[best])
    else:
        raise InvalidConfigError(f"unknown candidate {kind!r}")

    sigma2 = ssr / (n - kind.n_coefficients)
    return ArmaFit(
        kind=kind, mu=mu, phi=phi, theta=theta, sigma2=sigma2,
        k_params=kind.k_params, n=n, aic=aic(sigma2, n, kind.k_params),
    )


def screen(series):
    """Fit all four candidates, rank by AIC and decide whether ARMA structure is present"""
    x = _prepare(series)
    fits = sorted((fit_candidate(x, kind) for kind in ArmaKind), key=lambda f: f.aic)
    white = next(f for f in fits if f.kind is ArmaKind.WHITE_NOISE)
    best_other = min(f.aic for f in fits if f.kind is not ArmaKind.WHITE_NOISE)
    delta = white.aic - best_other
    appropriate = best_other <= white.aic - DELTA_AIC_THRESHOLD
    logger.info("AIC screen: best %s, delta vs white noise %.2f, arma_appropriate=%s",
                fits[0].kind.value, delta, appropriate)
    return AicScreenResult(fits=tuple(fits), arma_appropriate=appropriate,
                           delta_aic_vs_white_noise=delta)
