#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "telescope/benchmark.hpp"
#include "telescope/pipeline.hpp"
#include "telescope/recommender.hpp"
#include "telescope/stats.hpp"
#include "telescope/synth.hpp"

using namespace telescope;

TEST_CASE("forecast tracks a trend-plus-sine generator") {
    synth::SeasonalParams params;
    params.length = 120;
    params.period = 12;
    params.level = 10.0;
    params.slope = 0.5;
    params.amplitude = 3.0;
    params.noise_sd = 0.0;

    ForecastRequest request;
    request.series = synth::make_seasonal(params, 0);
    request.horizon = 24;
    const ForecastResult result = forecast(request);

    REQUIRE(result.forecast.size() == 24);
    TimeSeries truth;
    for (std::size_t k = 0; k < 24; ++k)
        truth.values.push_back(synth::seasonal_value(params, 120 + k));
    CHECK(smape(truth, result.forecast) < 5.0);
    CHECK(result.diagnostics.frequencies.dominant() == 12);
    CHECK(result.diagnostics.regressor_used == "gradient_boosting");
}

TEST_CASE("white noise takes the fallback and forecasts near the mean") {
    ForecastRequest request;
    request.series = synth::make_white_noise(150, 50.0, 2.0, 7);
    request.horizon = 10;
    const ForecastResult result = forecast(request);

    CHECK(result.diagnostics.regressor_used == "fallback_arima");
    CHECK(result.diagnostics.frequencies.periods == std::vector<int>{1});

    const double mean = stats::mean(request.series.values);
    const double sd = stats::std_dev(request.series.values);
    for (double v : result.forecast.values) CHECK(std::abs(v - mean) <= 3.0 * sd);
}

TEST_CASE("a constant series forecasts itself") {
    ForecastRequest request;
    request.series = TimeSeries(std::vector<double>(20, 7.0));
    request.horizon = 5;
    const ForecastResult result = forecast(request);
    for (double v : result.forecast.values) CHECK(std::abs(v - 7.0) < 1e-6);
}

TEST_CASE("forecasts are deterministic") {
    synth::SeasonalParams params;
    params.length = 96;
    params.period = 8;
    params.noise_sd = 0.8;

    ForecastRequest request;
    request.series = synth::make_seasonal(params, 5);
    request.horizon = 16;
    request.seed = 99;
    const ForecastResult a = forecast(request);
    const ForecastResult b = forecast(request);
    CHECK(a.forecast.values == b.forecast.values);
    CHECK(a.diagnostics.transform.lambda == b.diagnostics.transform.lambda);
    CHECK(a.diagnostics.regressor_used == b.diagnostics.regressor_used);
}

TEST_CASE("forecast is invariant under an ordinate shift") {
    synth::SeasonalParams params;
    params.length = 96;
    params.period = 12;
    params.level = 40.0;
    params.slope = 0.0; // pure level + season keeps both transforms exact
    params.amplitude = 6.0;
    params.noise_sd = 0.0;

    ForecastRequest request;
    request.series = synth::make_seasonal(params, 0);
    request.horizon = 12;
    const ForecastResult base = forecast(request);

    ForecastRequest shifted_request = request;
    for (auto& v : shifted_request.series.values) v += 100.0;
    const ForecastResult shifted = forecast(shifted_request);

    for (std::size_t k = 0; k < 12; ++k) {
        const double a = base.forecast.values[k];
        const double b = shifted.forecast.values[k] - 100.0;
        CHECK(std::abs(a - b) <= 1e-3 * std::max(std::abs(a), 1.0));
    }
}

TEST_CASE("transformed-scale forecast equals trend plus detrended") {
    synth::SeasonalParams params;
    params.length = 144;
    params.period = 12;
    params.slope = 0.2;
    params.noise_sd = 0.5;

    ForecastRequest request;
    request.series = synth::make_seasonal(params, 11);
    request.horizon = 24;
    const ForecastResult result = forecast(request);
    const auto& diag = result.diagnostics;

    TimeSeries unshifted = result.forecast;
    for (auto& v : unshifted.values) v += diag.transform.shift;
    const TimeSeries transformed = boxcox(unshifted, diag.transform.lambda);
    for (std::size_t k = 0; k < transformed.size(); ++k) {
        const double combined =
            diag.components.trend.values[k] + diag.components.detrended.values[k];
        CHECK(std::abs(transformed.values[k] - combined) <
              1e-9 * std::max(1.0, std::abs(combined)));
    }
}

TEST_CASE("fallback routing matches the non-seasonal verdict") {
    // seasonal input: learner path
    synth::SeasonalParams params;
    params.length = 72;
    params.period = 12;
    ForecastRequest seasonal_request;
    seasonal_request.series = synth::make_seasonal(params, 2);
    seasonal_request.horizon = 6;
    const ForecastResult seasonal_result = forecast(seasonal_request);
    CHECK(seasonal_result.diagnostics.frequencies.periods.front() > 1);
    CHECK(seasonal_result.diagnostics.regressor_used != "fallback_arima");

    // noise input: fallback
    ForecastRequest noise_request;
    noise_request.series = synth::make_white_noise(100, 20.0, 1.0, 3);
    noise_request.horizon = 6;
    const ForecastResult noise_result = forecast(noise_request);
    CHECK(noise_result.diagnostics.frequencies.periods.front() == 1);
    CHECK(noise_result.diagnostics.regressor_used == "fallback_arima");
}

TEST_CASE("learner override forces the requested regressor") {
    synth::SeasonalParams params;
    params.length = 72;
    params.period = 8;
    ForecastRequest request;
    request.series = synth::make_seasonal(params, 4);
    request.horizon = 8;
    request.learner_override = RegressorKind::cart;
    CHECK(forecast(request).diagnostics.regressor_used == "cart");
}

TEST_CASE("recommended mode without a model is an explicit error") {
    synth::SeasonalParams params;
    params.length = 72;
    params.period = 8;
    ForecastRequest request;
    request.series = synth::make_seasonal(params, 4);
    request.horizon = 8;
    request.mode = ForecastMode::recommended;
    CHECK_THROWS_AS(forecast(request), RecommenderNotTrainedError);
}

TEST_CASE("series with non-positive values forecast through the shift") {
    synth::SeasonalParams params;
    params.length = 96;
    params.period = 12;
    params.level = 0.0; // oscillates around zero
    params.slope = 0.0;
    params.amplitude = 5.0;
    params.noise_sd = 0.2;

    ForecastRequest request;
    request.series = synth::make_seasonal(params, 21);
    request.horizon = 12;
    const ForecastResult result = forecast(request);

    CHECK(result.diagnostics.transform.shift > 0.0);
    TimeSeries truth;
    for (std::size_t k = 0; k < 12; ++k)
        truth.values.push_back(synth::seasonal_value(params, 96 + k));
    for (std::size_t k = 0; k < 12; ++k)
        CHECK(std::abs(result.forecast.values[k] - truth.values[k]) < 1.0);
}

TEST_CASE("input validation") {
    ForecastRequest request;
    request.series = TimeSeries({1.0, 2.0, 3.0});
    request.horizon = 5;
    CHECK_THROWS_AS(forecast(request), TooShortError);

    request.series = synth::make_white_noise(30, 5.0, 1.0, 1);
    request.horizon = 0;
    CHECK_THROWS_AS(forecast(request), Error);
}
