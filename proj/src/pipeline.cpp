#include "telescope/pipeline.hpp"

#include <chrono>

#include "telescope/arima.hpp"
#include "telescope/recommender.hpp"

namespace telescope {

namespace {

TimeSeries zeros(int horizon) {
    return TimeSeries(std::vector<double>(static_cast<std::size_t>(horizon), 0.0));
}

} // namespace

ForecastResult forecast(const ForecastRequest& request) {
    const auto started = std::chrono::steady_clock::now();

    require_valid(request.series);
    if (request.series.size() < 10)
        throw TooShortError("forecasting requires at least 10 observations");
    if (request.horizon < 1) throw Error("horizon must be >= 1");

    ForecastResult result;
    ForecastDiagnostics& diag = result.diagnostics;

    // Preprocessing: ordinate shift, frequency detection, Box-Cox.
    auto [shifted, shift] = shift_positive(request.series);
    diag.transform.shift = shift;
    diag.frequencies = dominant_frequencies(shifted, request.config.spectral);
    diag.transform.lambda = estimate_lambda_guerrero(shifted, diag.frequencies.dominant());
    const TimeSeries transformed = boxcox(shifted, diag.transform.lambda);

    TimeSeries combined; // transformed-scale forecast

    if (diag.frequencies.seasonal()) {
        const int period = diag.frequencies.dominant();
        const Decomposition parts = stl(transformed, period);

        // Feature extraction: Fourier terms per dominant period plus the
        // seasonal component; the learner's target is the de-trended series.
        const FourierTerms fourier = fourier_terms(transformed.size(), diag.frequencies.periods);
        FeatureMatrix features;
        features.names = fourier.column_names();
        features.columns = fourier.columns;
        features.add_column("season", parts.season.values);
        features.target.resize(transformed.size());
        for (std::size_t t = 0; t < transformed.size(); ++t)
            features.target[t] = transformed.values[t] - parts.trend.values[t];

        RegressorKind learner = RegressorKind::gradient_boosting;
        if (request.learner_override) {
            learner = *request.learner_override;
        } else if (request.mode == ForecastMode::recommended) {
            if (request.recommender == nullptr || !request.recommender->trained())
                throw RecommenderNotTrainedError();
            learner = recommend(*request.recommender, TimeSeries(features.target));
        }
        const FittedModel model = fit(learner, features, request.seed, request.config.regressor);

        // Forecasting: continue the recurring patterns, regress the future
        // de-trended series, extrapolate the trend with auto-ARIMA, sum.
        const FourierTerms future_fourier = extend_fourier(fourier, request.horizon);
        diag.components.season = continue_season(parts.season, period, request.horizon);

        FeatureMatrix future;
        future.names = future_fourier.column_names();
        future.columns = future_fourier.columns;
        future.add_column("season", diag.components.season.values);
        diag.components.detrended = TimeSeries(predict(model, future));

        const ArimaFit trend_fit = auto_arima(parts.trend);
        diag.components.trend = forecast_arima(trend_fit, parts.trend, request.horizon);

        combined.values.resize(static_cast<std::size_t>(request.horizon));
        for (std::size_t k = 0; k < combined.size(); ++k)
            combined.values[k] =
                diag.components.trend.values[k] + diag.components.detrended.values[k];
        diag.regressor_used = to_string(learner);
    } else {
        // Fallback: non-seasonal ARIMA on the transformed series.
        const ArimaFit fit = auto_arima(transformed);
        combined = forecast_arima(fit, transformed, request.horizon);
        diag.components.trend = combined;
        diag.components.season = zeros(request.horizon);
        diag.components.detrended = zeros(request.horizon);
        diag.regressor_used = "fallback_arima";
    }

    // Postprocessing: invert the Box-Cox transform, undo the ordinate shift.
    result.forecast = inv_boxcox(combined, diag.transform.lambda);
    for (auto& v : result.forecast.values) v -= diag.transform.shift;
    result.forecast.start_index =
        request.series.start_index + static_cast<long>(request.series.size());

    diag.elapsed = std::chrono::steady_clock::now() - started;
    return result;
}

} // namespace telescope
