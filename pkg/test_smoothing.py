"""
Tests for exponential smoothing
"""

import numpy as np
import pytest

from exceptions import AlphaOutOfRangeError, EmptySeriesError, SeriesTooShortError, UninitializedError
from smoothing import DEFAULT_ALPHA_GRID, EsModel, es_forecast_next, es_residuals, es_select_alpha, es_smooth


def test_recursion_by_hand():
    np.testing.assert_allclose(es_smooth([10.0, 0.0, 10.0], 0.5), [10.0, 10.0, 5.0])


def test_alpha_one_is_the_naive_forecast():
    for seed in range(100):
        z = np.random.default_rng(seed).uniform(0, 30, size=50)
        s = es_smooth(z, 1.0)
        np.testing.assert_array_equal(s[1:], z[:-1])


def test_constant_series_has_no_error():
    z = np.full(30, 4.2)
    for alpha in (0.05, 0.3, 0.7, 1.0):
        np.testing.assert_allclose(es_residuals(z, alpha), 0.0, atol=1e-12)


def test_smoothed_values_stay_in_range():
    for seed in range(20):
        z = np.random.default_rng(seed).exponential(5.0, size=80)
        for alpha in (0.05, 0.5, 0.95):
            s = es_smooth(z, alpha)
            assert s.min() >= z.min() - 1e-12
            assert s.max() <= z.max() + 1e-12


def test_alpha_bounds():
    with pytest.raises(AlphaOutOfRangeError):
        es_smooth([1.0, 2.0], 0.0)
    with pytest.raises(AlphaOutOfRangeError):
        es_smooth([1.0, 2.0], 1.5)
    with pytest.raises(EmptySeriesError):
        es_smooth([], 0.5)


def test_model_continues_the_recursion():
    z = np.array([3.0, 1.0, 4.0, 1.0, 5.0])
    model = EsModel.from_series(z, 0.3)
    nxt = es_forecast_next(model, z[-1])
    assert nxt == pytest.approx(es_smooth(np.append(z, 99.0), 0.3)[-1])
    assert model.last_smoothed == pytest.approx(nxt)


def test_uninitialized_model():
    with pytest.raises(UninitializedError):
        es_forecast_next(EsModel(alpha=0.5), 1.0)


def test_model_state_round_trip():
    model = EsModel.from_series([1.0, 2.0, 3.0], 0.4)
    assert EsModel.from_dict(model.to_dict()) == model


def test_select_alpha_ties_go_to_smallest():
    alpha, err = es_select_alpha(np.full(10, 2.0))
    assert alpha == 0.05
    assert err == 0.0


def test_select_alpha_follows_the_data():
    rng = np.random.default_rng(11)
    walk = 50.0 + np.cumsum(rng.normal(size=300))
    noise = 5.0 + rng.normal(size=300)
    assert es_select_alpha(walk)[0] >= 0.8
    assert es_select_alpha(noise)[0] <= 0.2


def test_select_alpha_errors():
    with pytest.raises(SeriesTooShortError):
        es_select_alpha([1.0, 2.0])
    with pytest.raises(AlphaOutOfRangeError):
        es_select_alpha([1.0, 2.0, 3.0], grid=(0.5, 1.0))


def test_affine_equivariance():
    x = np.random.default_rng(8).uniform(0, 10, size=50)
    np.testing.assert_allclose(es_smooth(3.0 * x - 2.0, 0.3), 3.0 * es_smooth(x, 0.3) - 2.0, rtol=0, atol=1e-12)


def test_forecast_next_by_hand():
    model = EsModel(alpha=0.5, last_smoothed=4.0, initialized=True)
    assert es_forecast_next(model, 8.0) == 6.0
    assert model.last_smoothed == 6.0
    steady = EsModel(alpha=0.3, last_smoothed=5.0, initialized=True)
    assert es_forecast_next(steady, 5.0) == pytest.approx(5.0)


def test_alternating_series_prefers_small_alpha():
    z = np.tile([0.0, 10.0], 100)
    alpha, err = es_select_alpha(z)
    assert alpha <= 0.2
    naive_like = np.mean((z[1:] - es_smooth(z, 0.95)[1:]) ** 2)
    assert err < naive_like


def test_select_alpha_matches_exhaustive_grid():
    rng = np.random.default_rng(21)
    z = np.zeros(200)
    for t in range(1, z.size):
        z[t] = 0.9 * z[t - 1] + rng.normal()
    scores = []
    for alpha in DEFAULT_ALPHA_GRID:
        s, errors = z[0], []
        for t in range(1, z.size):
            errors.append((z[t] - s) ** 2)
            s = alpha * z[t] + (1 - alpha) * s
        scores.append(np.mean(errors))
    expected = DEFAULT_ALPHA_GRID[int(np.argmin(scores))]
    assert abs(es_select_alpha(z)[0] - expected) <= 0.05 + 1e-9
