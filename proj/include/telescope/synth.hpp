#pragma once

#include <cstdint>

#include "telescope/rng.hpp"
#include "telescope/time_series.hpp"

namespace telescope::synth {

/// Deterministic generator of level + slope * t + amplitude * sin pattern.
struct SeasonalParams {
    std::size_t length = 120;
    int period = 12;
    double level = 50.0;
    double slope = 0.1;
    double amplitude = 10.0;
    double phase = 0.0;    // radians
    double noise_sd = 0.0; // additive gaussian noise
};

/// Noise-free value of the generator at time t (also valid for t >= length,
/// which makes it its own forecast oracle).
double seasonal_value(const SeasonalParams& params, std::size_t t);

TimeSeries make_seasonal(const SeasonalParams& params, std::uint64_t noise_seed);

TimeSeries make_white_noise(std::size_t length, double mean, double sd, std::uint64_t seed);

/// Randomised generator parameters for corpus synthesis. Lengths land in
/// [96, 240], periods in {4, 7, 12, 24}.
SeasonalParams random_seasonal_params(Rng& rng);

} // namespace telescope::synth
