#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "telescope/errors.hpp"

namespace telescope {

/// Ordered, equidistant, fully numeric observations. Index position is time;
/// there is no timestamp field.
struct TimeSeries {
    std::vector<double> values;
    long start_index = 0;

    TimeSeries() = default;
    explicit TimeSeries(std::vector<double> v, long start = 0)
        : values(std::move(v)), start_index(start) {}

    std::size_t size() const noexcept { return values.size(); }
    bool empty() const noexcept { return values.empty(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
    double front() const { return values.front(); }
    double back() const { return values.back(); }
};

/// Box-Cox parameter and ordinate shift needed to invert preprocessing.
struct TransformState {
    double lambda = 1.0; // >= 0
    double shift = 0.0;  // > 0 only when the raw series contained a value <= 0
};

enum class ValidationIssue { ok, empty, non_finite };

struct ValidationResult {
    ValidationIssue issue = ValidationIssue::ok;
    std::size_t index = 0; // offending index for non_finite

    bool ok() const noexcept { return issue == ValidationIssue::ok; }
    std::string message() const;
};

/// Checks the TimeSeries invariants: non-empty and every value finite.
ValidationResult validate(const TimeSeries& series);

/// Throws DataError/ValueError when validate() fails.
void require_valid(const TimeSeries& series);

/// Shifts the series so every value is strictly positive. Returns the shifted
/// series and the shift amount: 0 when min > 0, otherwise 1 - min so the new
/// minimum is exactly 1.
std::pair<TimeSeries, double> shift_positive(const TimeSeries& series);

/// Guerrero lambda estimate on a dense grid over [0, 2]: the series is split
/// into non-overlapping blocks of length max(frequency, 2) and lambda is
/// chosen to minimise the coefficient of variation of the per-block
/// dispersion sd / mean^(1-lambda). Falls back to lambda = 1 when fewer than
/// two complete blocks exist.
double estimate_lambda_guerrero(const TimeSeries& series, int frequency);

/// Box-Cox transform: ln(y) for lambda = 0, (y^lambda - 1) / lambda otherwise.
/// Every value must be strictly positive.
TimeSeries boxcox(const TimeSeries& series, double lambda);

/// Inverse Box-Cox. For lambda > 0 the argument lambda*w + 1 is clamped below
/// at 1e-12 so forecast overshoot cannot leave the domain.
TimeSeries inv_boxcox(const TimeSeries& series, double lambda);

} // namespace telescope
