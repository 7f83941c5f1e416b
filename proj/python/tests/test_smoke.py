"""Smoke tests for the _telescope extension module."""

import math

import pytest

import _telescope as ts


def seasonal_series(n=120, period=12, level=50.0, slope=0.2, amplitude=8.0):
    return [
        level + slope * t + amplitude * math.sin(2.0 * math.pi * t / period)
        for t in range(n)
    ]


def test_dominant_periods():
    assert ts.dominant_periods(seasonal_series())[0] == 12
    flat = [float(v % 3 == 0) * 0.0 + 5.0 for v in range(50)]
    assert ts.dominant_periods(flat) == [1]


def test_boxcox_roundtrip():
    values = [0.5, 3.0, 42.0, 7.7]
    for lam in (0.0, 0.5, 1.0, 2.0):
        back = ts.inv_boxcox(ts.boxcox(values, lam), lam)
        assert back == pytest.approx(values, rel=1e-9)


def test_guerrero_lambda_range():
    lam = ts.guerrero_lambda(seasonal_series(), 12)
    assert 0.0 <= lam <= 2.0


def test_decompose_additivity():
    values = seasonal_series()
    parts = ts.decompose(values)
    assert parts["period"] == 12
    for v, t, s, i in zip(values, parts["trend"], parts["season"], parts["irregular"]):
        assert v == pytest.approx(t + s + i, abs=1e-8)


def test_periodogram_peak():
    # slope 0: the raw periodogram is mean-removed only, so a trend would
    # dominate the low-frequency bins
    freqs, power = ts.periodogram(seasonal_series(n=144, slope=0.0))
    peak = freqs[power.index(max(power))]
    assert peak == pytest.approx(1.0 / 12.0)


def test_forecast_seasonal():
    values = seasonal_series(n=120)
    result = ts.forecast(values, horizon=24, seed=7)
    assert len(result["forecast"]) == 24
    assert result["periods"][0] == 12
    assert result["regressor_used"] == "gradient_boosting"

    truth = [
        50.0 + 0.2 * t + 8.0 * math.sin(2.0 * math.pi * t / 12) for t in range(120, 144)
    ]
    assert ts.smape(truth, result["forecast"]) < 5.0


def test_forecast_is_deterministic():
    values = seasonal_series(n=96, period=8)
    a = ts.forecast(values, horizon=8, seed=3)
    b = ts.forecast(values, horizon=8, seed=3)
    assert a["forecast"] == b["forecast"]


def test_fallback_on_noise():
    import random

    rng = random.Random(5)
    values = [20.0 + rng.gauss(0.0, 1.0) for _ in range(100)]
    result = ts.forecast(values, horizon=5)
    assert result["regressor_used"] == "fallback_arima"
    assert result["periods"] == [1]


def test_naive_baselines():
    assert ts.naive_forecast([1.0, 2.0, 3.0], 2) == [3.0, 3.0]
    continued = ts.seasonal_naive_forecast(seasonal_series(n=48), 12)
    assert len(continued) == 12


def test_smape_basics():
    assert ts.smape([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert ts.smape([1.0], [3.0]) == pytest.approx(100.0)


def test_errors_are_python_exceptions():
    with pytest.raises(Exception):
        ts.forecast([1.0, 2.0], horizon=5)  # too short


def test_train_recommender(tmp_path):
    corpus = [seasonal_series(n=60, period=12, amplitude=6.0 + i) for i in range(4)]
    out = tmp_path / "rec.model"
    ts.train_recommender(corpus, augment_to=6, seed=9, out_path=str(out))
    assert out.exists()

    result = ts.forecast(
        seasonal_series(n=72), horizon=6, mode="recommended", model_path=str(out)
    )
    assert result["regressor_used"] in {"cart", "random_forest", "gradient_boosting"}
