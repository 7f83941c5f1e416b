#include "telescope/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace telescope {

std::string ValidationResult::message() const {
    switch (issue) {
    case ValidationIssue::ok: return "ok";
    case ValidationIssue::empty: return "series is empty";
    case ValidationIssue::non_finite:
        return "non-finite value at index " + std::to_string(index);
    }
    return "unknown";
}

ValidationResult validate(const TimeSeries& series) {
    if (series.empty()) return {ValidationIssue::empty, 0};
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!std::isfinite(series.values[i])) return {ValidationIssue::non_finite, i};
    }
    return {};
}

void require_valid(const TimeSeries& series) {
    const auto result = validate(series);
    if (result.ok()) return;
    if (result.issue == ValidationIssue::empty) throw DataError("series is empty");
    throw ValueError("non-finite value", result.index);
}

std::pair<TimeSeries, double> shift_positive(const TimeSeries& series) {
    require_valid(series);
    const double lo = *std::min_element(series.values.begin(), series.values.end());
    if (lo > 0.0) return {series, 0.0};
    const double shift = 1.0 - lo; // new minimum is exactly 1
    TimeSeries shifted = series;
    for (auto& v : shifted.values) v += shift;
    return {shifted, shift};
}

namespace {

// Coefficient of variation of the per-block ratio sd_b / mean_b^(1-lambda).
double guerrero_cv(const std::vector<double>& block_sd,
                   const std::vector<double>& block_mean, double lambda) {
    const std::size_t k = block_sd.size();
    std::vector<double> ratio(k);
    for (std::size_t b = 0; b < k; ++b) {
        ratio[b] = block_sd[b] / std::pow(block_mean[b], 1.0 - lambda);
    }
    double mean = 0.0;
    for (double r : ratio) mean += r;
    mean /= static_cast<double>(k);
    double var = 0.0;
    for (double r : ratio) var += (r - mean) * (r - mean);
    var /= static_cast<double>(k - 1);
    if (mean == 0.0) return 0.0;
    return std::sqrt(var) / mean;
}

} // namespace

double estimate_lambda_guerrero(const TimeSeries& series, int frequency) {
    require_valid(series);
    if (frequency < 1) throw Error("frequency must be >= 1");
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series.values[i] <= 0.0) throw ValueError("non-positive value", i);
    }

    const std::size_t block_len = static_cast<std::size_t>(std::max(frequency, 2));
    const std::size_t n_blocks = series.size() / block_len;
    if (n_blocks < 2) return 1.0; // too short: identity transform

    // Use the most recent complete blocks; drop the oldest remainder.
    const std::size_t offset = series.size() - n_blocks * block_len;
    std::vector<double> block_sd(n_blocks), block_mean(n_blocks);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const double* x = series.values.data() + offset + b * block_len;
        double mean = 0.0;
        for (std::size_t i = 0; i < block_len; ++i) mean += x[i];
        mean /= static_cast<double>(block_len);
        double var = 0.0;
        for (std::size_t i = 0; i < block_len; ++i) var += (x[i] - mean) * (x[i] - mean);
        var /= static_cast<double>(block_len - 1);
        block_mean[b] = mean;
        block_sd[b] = std::sqrt(var);
    }

    // Dense deterministic grid search, lambda in {0, 0.01, ..., 2}.
    double best_lambda = 0.0;
    double best_cv = std::numeric_limits<double>::infinity();
    for (int step = 0; step <= 200; ++step) {
        const double lambda = 0.01 * static_cast<double>(step);
        const double cv = guerrero_cv(block_sd, block_mean, lambda);
        if (cv < best_cv) {
            best_cv = cv;
            best_lambda = lambda;
        }
    }
    return best_lambda;
}

TimeSeries boxcox(const TimeSeries& series, double lambda) {
    require_valid(series);
    TimeSeries out = series;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double y = out.values[i];
        if (y <= 0.0) throw ValueError("non-positive value", i);
        out.values[i] = lambda == 0.0 ? std::log(y) : (std::pow(y, lambda) - 1.0) / lambda;
    }
    return out;
}

TimeSeries inv_boxcox(const TimeSeries& series, double lambda) {
    require_valid(series);
    TimeSeries out = series;
    for (auto& w : out.values) {
        if (lambda == 0.0) {
            w = std::exp(w);
        } else {
            const double base = std::max(lambda * w + 1.0, 1e-12);
            w = std::pow(base, 1.0 / lambda);
        }
    }
    return out;
}

} // namespace telescope
