#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include "telescope/decomposition.hpp"
#include "telescope/regressors.hpp"
#include "telescope/spectral.hpp"
#include "telescope/time_series.hpp"

namespace telescope {

struct RecommenderModel; // recommender.hpp

enum class ForecastMode { time_critical, recommended };

/// Tunables surfaced through the key=value config file.
struct PipelineConfig {
    Hyperparameters regressor;
    SpectralOptions spectral;
};

struct ForecastRequest {
    TimeSeries series;
    int horizon = 1;
    ForecastMode mode = ForecastMode::time_critical;
    std::uint64_t seed = 0;
    /// Required for mode == recommended.
    const RecommenderModel* recommender = nullptr;
    /// Forces a specific learner regardless of mode (used by the base-method
    /// evaluation and benchmark adapters).
    std::optional<RegressorKind> learner_override;
    PipelineConfig config;
};

/// Per-component forecasts on the transformed scale.
struct ComponentForecasts {
    TimeSeries trend;
    TimeSeries season;
    TimeSeries detrended;
};

struct ForecastDiagnostics {
    FrequencySet frequencies;
    TransformState transform; // Box-Cox lambda and ordinate shift to invert
    std::string regressor_used; // learner name or "fallback_arima"
    ComponentForecasts components;
    std::chrono::nanoseconds elapsed{0};
};

struct ForecastResult {
    TimeSeries forecast;
    ForecastDiagnostics diagnostics;
};

/// The complete forecasting workflow: preprocessing (shift, Guerrero lambda,
/// Box-Cox, frequency detection), feature extraction (Fourier terms, STL),
/// model building on the de-trended series, component forecasting
/// (continuation + learner + ARIMA trend), reassembly and postprocessing.
/// Non-seasonal series take the ARIMA fallback on the transformed series.
ForecastResult forecast(const ForecastRequest& request);

} // namespace telescope
