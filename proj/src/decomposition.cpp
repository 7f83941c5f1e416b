#include "telescope/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace telescope {

namespace {

// Least-squares line through (0, y[0]) .. (m-1, y[m-1]).
void fit_line(const double* y, std::size_t m, double& intercept, double& slope) {
    const double n = static_cast<double>(m);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = static_cast<double>(i);
        sx += x;
        sy += y[i];
        sxx += x * x;
        sxy += x * y[i];
    }
    const double denom = n * sxx - sx * sx;
    slope = denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
    intercept = (sy - slope * sx) / n;
}

// Centered moving average that annihilates any zero-sum pattern of the given
// period: uniform window of `period` taps when the period is odd, a
// (period+1)-tap window with half weights at both ends when it is even.
// Positions where the window does not fit are linearly extrapolated from the
// nearest smoothed interior values; extrapolating the raw series instead
// would let residual oscillations tilt the boundary.
std::vector<double> trend_filter(const std::vector<double>& y, int period) {
    const std::size_t n = y.size();
    const int window = period % 2 == 1 ? period : period + 1;
    const std::size_t half = static_cast<std::size_t>(window / 2);
    std::vector<double> trend(n);

    std::vector<double> weights(static_cast<std::size_t>(window),
                                1.0 / static_cast<double>(period));
    if (period % 2 == 0) {
        weights.front() = 0.5 / static_cast<double>(period);
        weights.back() = 0.5 / static_cast<double>(period);
    }

    for (std::size_t t = half; t + half < n; ++t) {
        double acc = 0.0;
        for (std::size_t j = 0; j < weights.size(); ++j)
            acc += weights[j] * y[t + j - half];
        trend[t] = acc;
    }

    const std::size_t interior = n - 2 * half;
    const std::size_t fit_span =
        std::min(interior, static_cast<std::size_t>(std::max(window, 2 * period)));
    double intercept = 0.0, slope = 0.0;

    fit_line(trend.data() + half, fit_span, intercept, slope);
    for (std::size_t t = 0; t < half; ++t)
        trend[t] = intercept + slope * (static_cast<double>(t) - static_cast<double>(half));

    const std::size_t tail_start = n - half - fit_span;
    fit_line(trend.data() + tail_start, fit_span, intercept, slope);
    for (std::size_t t = n - half; t < n; ++t)
        trend[t] = intercept + slope * static_cast<double>(t - tail_start);

    return trend;
}

// Per-phase means of the detrended series, centered so one period sums to zero.
std::vector<double> seasonal_component(const std::vector<double>& detrended, int period) {
    const std::size_t n = detrended.size();
    const std::size_t m = static_cast<std::size_t>(period);
    std::vector<double> phase_mean(m, 0.0);
    std::vector<std::size_t> count(m, 0);
    for (std::size_t t = 0; t < n; ++t) {
        phase_mean[t % m] += detrended[t];
        ++count[t % m];
    }
    double grand = 0.0;
    for (std::size_t p = 0; p < m; ++p) {
        phase_mean[p] /= static_cast<double>(count[p]);
        grand += phase_mean[p];
    }
    grand /= static_cast<double>(m);
    std::vector<double> season(n);
    for (std::size_t t = 0; t < n; ++t) season[t] = phase_mean[t % m] - grand;
    return season;
}

} // namespace

Decomposition stl(const TimeSeries& series, int period) {
    require_valid(series);
    if (period < 2) throw Error("stl period must be >= 2");
    const std::size_t n = series.size();
    if (n < 2 * static_cast<std::size_t>(period))
        throw TooShortError("stl requires at least two full periods");

    const auto& y = series.values;
    std::vector<double> trend = trend_filter(y, period);
    std::vector<double> season(n, 0.0);

    // Iterate season/trend to a fixed point. Two passes are usually close but
    // endpoint leakage decays by roughly one decade per pass, so run until the
    // season stabilises.
    constexpr int max_iterations = 30;
    constexpr double tolerance = 1e-11;
    std::vector<double> detrended(n), deseasonalized(n);
    for (int iteration = 0; iteration < max_iterations; ++iteration) {
        for (std::size_t t = 0; t < n; ++t) detrended[t] = y[t] - trend[t];
        std::vector<double> season_next = seasonal_component(detrended, period);

        double delta = 0.0;
        for (std::size_t t = 0; t < n; ++t)
            delta = std::max(delta, std::abs(season_next[t] - season[t]));
        season = std::move(season_next);

        for (std::size_t t = 0; t < n; ++t) deseasonalized[t] = y[t] - season[t];
        trend = trend_filter(deseasonalized, period);

        if (delta < tolerance) break;
    }

    Decomposition result;
    result.period = period;
    result.trend = TimeSeries(std::move(trend), series.start_index);
    result.season = TimeSeries(std::move(season), series.start_index);
    result.irregular.start_index = series.start_index;
    result.irregular.values.resize(n);
    for (std::size_t t = 0; t < n; ++t)
        result.irregular.values[t] = y[t] - result.trend.values[t] - result.season.values[t];
    return result;
}

std::vector<std::string> FourierTerms::column_names() const {
    std::vector<std::string> names;
    names.reserve(columns.size());
    for (int m : periods) {
        names.push_back("sin_" + std::to_string(m));
        names.push_back("cos_" + std::to_string(m));
    }
    return names;
}

FourierTerms fourier_terms(std::size_t length, const std::vector<int>& periods) {
    if (length < 1) throw Error("fourier_terms requires length >= 1");
    for (int m : periods)
        if (m < 2) throw Error("fourier periods must be >= 2");

    FourierTerms terms;
    terms.periods = periods;
    terms.rows = length;
    terms.columns.reserve(2 * periods.size());
    for (int m : periods) {
        std::vector<double> sin_col(length), cos_col(length);
        for (std::size_t t = 0; t < length; ++t) {
            const double angle =
                2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(m);
            sin_col[t] = std::sin(angle);
            cos_col[t] = std::cos(angle);
        }
        terms.columns.push_back(std::move(sin_col));
        terms.columns.push_back(std::move(cos_col));
    }
    return terms;
}

namespace {

// Source index of the periodic continuation rule, 0-based storage:
// out[k-1] = y[n + k - m * (floor((k-1)/m) + 1) - 1] for k = 1..horizon.
std::size_t continuation_index(std::size_t n, int period, int k) {
    const long m = period;
    const long cycles = static_cast<long>((k - 1) / m) + 1;
    return static_cast<std::size_t>(static_cast<long>(n) + k - m * cycles - 1);
}

} // namespace

FourierTerms extend_fourier(const FourierTerms& terms, int horizon) {
    if (horizon < 1) throw Error("horizon must be >= 1");

    FourierTerms future;
    future.periods = terms.periods;
    future.rows = static_cast<std::size_t>(horizon);
    future.columns.resize(terms.columns.size());
    for (std::size_t c = 0; c < terms.columns.size(); ++c) {
        const int m = terms.periods[c / 2];
        auto& col = future.columns[c];
        col.resize(static_cast<std::size_t>(horizon));
        for (int k = 1; k <= horizon; ++k)
            col[static_cast<std::size_t>(k - 1)] =
                terms.columns[c][continuation_index(terms.rows, m, k)];
    }
    return future;
}

TimeSeries continue_season(const TimeSeries& season, int period, int horizon) {
    require_valid(season);
    if (period < 1) throw Error("period must be >= 1");
    if (horizon < 1) throw Error("horizon must be >= 1");
    if (season.size() < static_cast<std::size_t>(period))
        throw TooShortError("season shorter than one period");

    TimeSeries future;
    future.values.resize(static_cast<std::size_t>(horizon));
    for (int k = 1; k <= horizon; ++k)
        future.values[static_cast<std::size_t>(k - 1)] =
            season.values[continuation_index(season.size(), period, k)];
    return future;
}

} // namespace telescope
