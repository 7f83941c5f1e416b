#include "telescope/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace telescope {

Periodogram periodogram(const TimeSeries& series) {
    require_valid(series);
    const std::size_t n = series.size();
    if (n < 4) throw TooShortError("periodogram requires at least 4 observations");

    double mean = 0.0;
    for (double v : series.values) mean += v;
    mean /= static_cast<double>(n);

    const std::size_t bins = n / 2;
    Periodogram gram;
    gram.frequency.resize(bins);
    gram.power.resize(bins);

    for (std::size_t k = 1; k <= bins; ++k) {
        const double omega = 2.0 * std::numbers::pi * static_cast<double>(k) /
                             static_cast<double>(n);
        // Recurrence-based oscillator; one sin/cos pair per bin instead of per sample.
        const double cos_step = std::cos(omega);
        const double sin_step = std::sin(omega);
        double c = 1.0, s = 0.0; // cos(0), sin(0)
        double re = 0.0, im = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double x = series.values[t] - mean;
            re += x * c;
            im -= x * s;
            const double c_next = c * cos_step - s * sin_step;
            s = s * cos_step + c * sin_step;
            c = c_next;
        }
        gram.frequency[k - 1] = static_cast<double>(k) / static_cast<double>(n);
        gram.power[k - 1] = (re * re + im * im) / static_cast<double>(n);
    }
    return gram;
}

FrequencySet dominant_frequencies(const TimeSeries& series, int max_count) {
    SpectralOptions options;
    options.max_count = max_count;
    return dominant_frequencies(series, options);
}

FrequencySet dominant_frequencies(const TimeSeries& series, const SpectralOptions& options) {
    require_valid(series);
    if (options.max_count < 1) throw Error("max_count must be >= 1");
    const std::size_t n = series.size();
    if (n < 4) return {{1}};

    // A strong trend leaks low-frequency power past any seasonal line, which
    // would poison both the max-power reference and the peak-share test, so
    // the test runs on the residual of a least-squares line. The public
    // periodogram stays mean-removal only.
    TimeSeries working = series;
    {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double x = static_cast<double>(t);
            sx += x;
            sy += working.values[t];
            sxx += x * x;
            sxy += x * working.values[t];
        }
        const double nn = static_cast<double>(n);
        const double denom = nn * sxx - sx * sx;
        const double slope = denom == 0.0 ? 0.0 : (nn * sxy - sx * sy) / denom;
        const double intercept = (sy - slope * sx) / nn;
        for (std::size_t t = 0; t < n; ++t)
            working.values[t] -= intercept + slope * static_cast<double>(t);
    }

    const Periodogram gram = periodogram(working);
    const std::size_t bins = gram.size();

    const double max_power = *std::max_element(gram.power.begin(), gram.power.end());
    std::vector<double> sorted_power = gram.power;
    std::nth_element(sorted_power.begin(), sorted_power.begin() + bins / 2, sorted_power.end());
    const double median_power = sorted_power[bins / 2];

    // Noise floor against the original scale: a detrended residual of pure
    // trend is numerical dust, not seasonality.
    double series_mean = 0.0, series_ss = 0.0;
    for (double v : series.values) series_mean += v;
    series_mean /= static_cast<double>(n);
    for (double v : series.values) series_ss += (v - series_mean) * (v - series_mean);
    if (max_power <= 1e-12 * std::max(series_ss, 1e-12)) return {{1}};

    // Seasonality test: a lone strong line must tower over the noise floor.
    if (max_power < options.dominance_ratio * median_power) return {{1}};

    const int max_period = static_cast<int>(n / 2);
    struct Candidate {
        int period;
        double power;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < bins; ++i) {
        const bool left_ok = i == 0 || gram.power[i] >= gram.power[i - 1];
        const bool right_ok = i + 1 == bins || gram.power[i] >= gram.power[i + 1];
        if (!left_ok || !right_ok) continue; // peaks only
        if (gram.power[i] < options.peak_share * max_power) continue;
        const int period = static_cast<int>(std::lround(1.0 / gram.frequency[i]));
        if (period < 2 || period > max_period) continue;
        candidates.push_back({period, gram.power[i]});
    }
    if (candidates.empty()) return {{1}};

    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.power > b.power; });

    FrequencySet freqs;
    for (const auto& cand : candidates) {
        if (std::find(freqs.periods.begin(), freqs.periods.end(), cand.period) !=
            freqs.periods.end())
            continue;
        freqs.periods.push_back(cand.period);
        if (static_cast<int>(freqs.periods.size()) == options.max_count) break;
    }
    return freqs;
}

} // namespace telescope
