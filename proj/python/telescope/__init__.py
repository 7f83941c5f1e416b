"""Automated hybrid time-series forecasting."""

from telescope._telescope import (
    TelescopeError,
    boxcox,
    decompose,
    dominant_periods,
    forecast,
    guerrero_lambda,
    inv_boxcox,
    naive_forecast,
    periodogram,
    seasonal_naive_forecast,
    smape,
    train_recommender,
)

__all__ = [
    "TelescopeError",
    "boxcox",
    "decompose",
    "dominant_periods",
    "forecast",
    "guerrero_lambda",
    "inv_boxcox",
    "naive_forecast",
    "periodogram",
    "seasonal_naive_forecast",
    "smape",
    "train_recommender",
]
