#pragma once

#include <array>
#include <string>

#include "telescope/spectral.hpp"
#include "telescope/time_series.hpp"

namespace telescope {

/// The 20 series characteristics driving the learner recommendation, computed
/// on the de-trended (Box-Cox transformed) series.
struct MetaAttributes {
    double s1_frequency = 1.0;
    double s2_length = 0.0;
    double s3_std_dev = 0.0;
    double s4_skewness = 0.0;
    double s5_irregular_skewness = 0.0;
    double s6_irregular_kurtosis = 0.0;
    double b1_mean_period_entropy = 0.0;
    double b2_entropy_cv = 0.0;
    double b3_mean_cosine_similarity = 0.0;
    double b4_sinus_approx_dw = 2.0;
    double l1_second_frequency = 1.0;
    double l2_third_frequency = 1.0;
    double l3_max_spectral_value = 0.0;
    double l4_peak_count = 1.0;
    double w1_seasonal_strength = 0.0;
    double w2_serial_correlation = 0.0;
    double w3_irregular_serial_correlation = 0.0;
    double w4_nonlinearity = 0.0;
    double w5_irregular_nonlinearity = 0.0;
    double w6_self_similarity = 0.5;

    static const std::array<std::string, 20>& names();
    std::array<double, 20> to_array() const;
};

/// Computes every attribute. Non-seasonal inputs map to the documented
/// sentinels (s1 = 1, l1 = l2 = 1, b1 = b2 = b3 = 0, b4 = 2, w1 = 0) with the
/// irregular part taken as the series itself.
MetaAttributes extract_meta_attributes(const TimeSeries& detrended);
MetaAttributes extract_meta_attributes(const TimeSeries& detrended,
                                       const SpectralOptions& options);

} // namespace telescope
