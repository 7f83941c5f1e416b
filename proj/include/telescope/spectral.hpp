#pragma once

#include <vector>

#include "telescope/time_series.hpp"

namespace telescope {

/// Classical periodogram at the Fourier frequencies k/n, k = 1..floor(n/2).
struct Periodogram {
    std::vector<double> frequency; // cycles per observation, in (0, 0.5]
    std::vector<double> power;     // squared DFT magnitude / n

    std::size_t size() const noexcept { return frequency.size(); }
};

/// Candidate seasonal periods, most dominant first. periods == {1} encodes a
/// non-seasonal series.
struct FrequencySet {
    std::vector<int> periods;

    bool seasonal() const noexcept { return !periods.empty() && periods.front() > 1; }
    int dominant() const noexcept { return periods.empty() ? 1 : periods.front(); }
};

/// Tunable thresholds of the seasonality test (config-file overridable).
struct SpectralOptions {
    double peak_share = 0.5;      // peak must reach this share of the max power
    double dominance_ratio = 15.0;// max power must exceed this multiple of the median power
    int max_count = 3;
};

/// Mean-removed DFT power at the Fourier frequencies. Requires length >= 4.
Periodogram periodogram(const TimeSeries& series);

/// Periodogram peaks converted to integer periods round(1/f), filtered to
/// 2 <= period <= n/2, ordered by descending power and truncated to
/// max_count. Returns {1} when no peak passes the seasonality test.
FrequencySet dominant_frequencies(const TimeSeries& series, int max_count = 3);
FrequencySet dominant_frequencies(const TimeSeries& series, const SpectralOptions& options);

} // namespace telescope
