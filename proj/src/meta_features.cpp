#include "telescope/meta_features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "telescope/decomposition.hpp"
#include "telescope/stats.hpp"

namespace telescope {

const std::array<std::string, 20>& MetaAttributes::names() {
    static const std::array<std::string, 20> kNames{
        "s1_frequency",
        "s2_length",
        "s3_std_dev",
        "s4_skewness",
        "s5_irregular_skewness",
        "s6_irregular_kurtosis",
        "b1_mean_period_entropy",
        "b2_entropy_cv",
        "b3_mean_cosine_similarity",
        "b4_sinus_approx_dw",
        "l1_second_frequency",
        "l2_third_frequency",
        "l3_max_spectral_value",
        "l4_peak_count",
        "w1_seasonal_strength",
        "w2_serial_correlation",
        "w3_irregular_serial_correlation",
        "w4_nonlinearity",
        "w5_irregular_nonlinearity",
        "w6_self_similarity"};
    return kNames;
}

std::array<double, 20> MetaAttributes::to_array() const {
    return {s1_frequency,
            s2_length,
            s3_std_dev,
            s4_skewness,
            s5_irregular_skewness,
            s6_irregular_kurtosis,
            b1_mean_period_entropy,
            b2_entropy_cv,
            b3_mean_cosine_similarity,
            b4_sinus_approx_dw,
            l1_second_frequency,
            l2_third_frequency,
            l3_max_spectral_value,
            l4_peak_count,
            w1_seasonal_strength,
            w2_serial_correlation,
            w3_irregular_serial_correlation,
            w4_nonlinearity,
            w5_irregular_nonlinearity,
            w6_self_similarity};
}

namespace {

// Approximate entropy with embedding dimension 2 and the given tolerance.
double approximate_entropy(std::span<const double> x, double r) {
    const std::size_t n = x.size();
    if (n < 4 || r <= 0.0) return 0.0;

    const auto phi = [&](std::size_t m) {
        const std::size_t count = n - m + 1;
        double acc = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            std::size_t matches = 0;
            for (std::size_t j = 0; j < count; ++j) {
                double dist = 0.0;
                for (std::size_t k = 0; k < m; ++k)
                    dist = std::max(dist, std::abs(x[i + k] - x[j + k]));
                if (dist <= r) ++matches;
            }
            acc += std::log(static_cast<double>(matches) / static_cast<double>(count));
        }
        return acc / static_cast<double>(count);
    };
    return phi(2) - phi(3);
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu <= 0.0 || nv <= 0.0) return 0.0;
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

// Durbin-Watson statistic of the residuals from a least-squares single-sine
// fit at the dominant period.
double sine_fit_durbin_watson(const std::vector<double>& y, int period) {
    const std::size_t n = y.size();
    std::vector<double> design(n * 3);
    for (std::size_t t = 0; t < n; ++t) {
        const double angle =
            2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(period);
        design[t * 3 + 0] = 1.0;
        design[t * 3 + 1] = std::sin(angle);
        design[t * 3 + 2] = std::cos(angle);
    }
    std::vector<double> coeffs;
    if (!stats::ols(design, y, n, 3, coeffs)) return 2.0;

    std::vector<double> residual(n);
    for (std::size_t t = 0; t < n; ++t) {
        residual[t] = y[t] - coeffs[0] - coeffs[1] * design[t * 3 + 1] -
                      coeffs[2] * design[t * 3 + 2];
    }
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        if (t > 0) {
            const double d = residual[t] - residual[t - 1];
            num += d * d;
        }
        den += residual[t] * residual[t];
    }
    return den <= 0.0 ? 2.0 : num / den;
}

// F-statistic of quadratic and cubic lag terms over a linear AR(1) fit, the
// Terasvirta-style non-linearity score.
double nonlinearity_f_stat(const std::vector<double>& y) {
    const std::size_t n = y.size();
    if (n < 8) return 0.0;
    const std::size_t rows = n - 1;

    std::vector<double> restricted(rows * 2), full(rows * 4), target(rows);
    for (std::size_t t = 1; t < n; ++t) {
        const std::size_t r = t - 1;
        const double lag = y[t - 1];
        restricted[r * 2 + 0] = 1.0;
        restricted[r * 2 + 1] = lag;
        full[r * 4 + 0] = 1.0;
        full[r * 4 + 1] = lag;
        full[r * 4 + 2] = lag * lag;
        full[r * 4 + 3] = lag * lag * lag;
        target[r] = y[t];
    }

    const auto sse = [&](const std::vector<double>& design, std::size_t cols) {
        std::vector<double> coeffs;
        if (!stats::ols(design, target, rows, cols, coeffs)) return -1.0;
        double acc = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            double fitted = 0.0;
            for (std::size_t c = 0; c < cols; ++c) fitted += design[r * cols + c] * coeffs[c];
            const double e = target[r] - fitted;
            acc += e * e;
        }
        return acc;
    };

    const double sse_restricted = sse(restricted, 2);
    const double sse_full = sse(full, 4);
    if (sse_restricted < 0.0 || sse_full <= 0.0) return 0.0;
    const double df = static_cast<double>(rows) - 4.0;
    if (df <= 0.0) return 0.0;
    return std::max(0.0, ((sse_restricted - sse_full) / 2.0) / (sse_full / df));
}

// Hurst exponent by rescaled-range regression over dyadic window sizes,
// floored at 0.5.
double hurst_rescaled_range(const std::vector<double>& y) {
    const std::size_t n = y.size();
    std::vector<double> log_size, log_rs;
    for (std::size_t size = 8; size <= n / 2; size *= 2) {
        const std::size_t blocks = n / size;
        double rs_sum = 0.0;
        std::size_t rs_count = 0;
        for (std::size_t b = 0; b < blocks; ++b) {
            const double* x = y.data() + b * size;
            double mean = 0.0;
            for (std::size_t i = 0; i < size; ++i) mean += x[i];
            mean /= static_cast<double>(size);

            double cum = 0.0, lo = 0.0, hi = 0.0, var = 0.0;
            for (std::size_t i = 0; i < size; ++i) {
                cum += x[i] - mean;
                lo = std::min(lo, cum);
                hi = std::max(hi, cum);
                var += (x[i] - mean) * (x[i] - mean);
            }
            const double sd = std::sqrt(var / static_cast<double>(size));
            if (sd <= 0.0) continue;
            rs_sum += (hi - lo) / sd;
            ++rs_count;
        }
        if (rs_count == 0) continue;
        log_size.push_back(std::log(static_cast<double>(size)));
        log_rs.push_back(std::log(rs_sum / static_cast<double>(rs_count)));
    }
    if (log_size.size() < 2) return 0.5;

    const std::size_t k = log_size.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sx += log_size[i];
        sy += log_rs[i];
        sxx += log_size[i] * log_size[i];
        sxy += log_size[i] * log_rs[i];
    }
    const double denom = static_cast<double>(k) * sxx - sx * sx;
    if (denom == 0.0) return 0.5;
    const double slope = (static_cast<double>(k) * sxy - sx * sy) / denom;
    return std::max(0.5, slope);
}

} // namespace

MetaAttributes extract_meta_attributes(const TimeSeries& detrended) {
    return extract_meta_attributes(detrended, SpectralOptions{});
}

MetaAttributes extract_meta_attributes(const TimeSeries& detrended,
                                       const SpectralOptions& options) {
    require_valid(detrended);
    const std::size_t n = detrended.size();
    const auto& y = detrended.values;

    MetaAttributes attrs;
    attrs.s2_length = static_cast<double>(n);
    attrs.s3_std_dev = stats::std_dev(y);
    attrs.s4_skewness = stats::skewness(y);
    attrs.w2_serial_correlation = stats::autocorrelation(y, 1);
    attrs.w4_nonlinearity = nonlinearity_f_stat(y);
    attrs.w6_self_similarity = hurst_rescaled_range(y);

    const FrequencySet freqs = n >= 4 ? dominant_frequencies(detrended, options) : FrequencySet{{1}};
    const int period = freqs.dominant();
    const bool seasonal = freqs.seasonal() && n >= 2 * static_cast<std::size_t>(period);

    if (n >= 4) {
        const Periodogram gram = periodogram(detrended);
        const double max_power = *std::max_element(gram.power.begin(), gram.power.end());
        attrs.l3_max_spectral_value = max_power;
        if (max_power > 0.0) {
            int peaks = 0;
            for (std::size_t i = 0; i < gram.size(); ++i) {
                const bool left_ok = i == 0 || gram.power[i] >= gram.power[i - 1];
                const bool right_ok = i + 1 == gram.size() || gram.power[i] >= gram.power[i + 1];
                if (left_ok && right_ok && gram.power[i] >= 0.6 * max_power) ++peaks;
            }
            attrs.l4_peak_count = std::max(1, peaks);
        }
    }

    // The irregular part is the series itself when there is no seasonal
    // structure to strip.
    std::vector<double> irregular = y;

    if (seasonal) {
        attrs.s1_frequency = static_cast<double>(period);
        if (freqs.periods.size() >= 2) attrs.l1_second_frequency = freqs.periods[1];
        if (freqs.periods.size() >= 3) attrs.l2_third_frequency = freqs.periods[2];

        const Decomposition parts = stl(detrended, period);
        irregular = parts.irregular.values;

        std::vector<double> season_plus_irregular(n);
        for (std::size_t t = 0; t < n; ++t)
            season_plus_irregular[t] = parts.season.values[t] + parts.irregular.values[t];
        const double var_si = stats::variance(season_plus_irregular);
        const double var_i = stats::variance(irregular);
        attrs.w1_seasonal_strength = var_si <= 0.0 ? 0.0 : std::max(0.0, 1.0 - var_i / var_si);

        // Per-period entropies over complete periods.
        const std::size_t m = static_cast<std::size_t>(period);
        const std::size_t full_periods = n / m;
        std::vector<double> entropies;
        entropies.reserve(full_periods);
        for (std::size_t b = 0; b < full_periods; ++b) {
            const std::span<const double> window(y.data() + b * m, m);
            entropies.push_back(approximate_entropy(window, 0.2 * stats::std_dev(window)));
        }
        attrs.b1_mean_period_entropy = stats::mean(entropies);
        const double entropy_mean = attrs.b1_mean_period_entropy;
        attrs.b2_entropy_cv =
            entropy_mean == 0.0 ? 0.0 : stats::std_dev(entropies) / entropy_mean;

        double similarity_sum = 0.0;
        std::size_t pairs = 0;
        for (std::size_t a = 0; a < full_periods; ++a) {
            for (std::size_t b = a + 1; b < full_periods; ++b) {
                similarity_sum += cosine_similarity({y.data() + a * m, m}, {y.data() + b * m, m});
                ++pairs;
            }
        }
        attrs.b3_mean_cosine_similarity = pairs == 0 ? 0.0 : similarity_sum / static_cast<double>(pairs);
        attrs.b4_sinus_approx_dw = sine_fit_durbin_watson(y, period);
    }

    attrs.s5_irregular_skewness = stats::skewness(irregular);
    attrs.s6_irregular_kurtosis = stats::excess_kurtosis(irregular);
    attrs.w3_irregular_serial_correlation = stats::autocorrelation(irregular, 1);
    attrs.w5_irregular_nonlinearity = nonlinearity_f_stat(irregular);
    return attrs;
}

} // namespace telescope
