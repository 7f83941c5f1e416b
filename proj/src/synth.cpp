#include "telescope/synth.hpp"

#include <cmath>
#include <numbers>

namespace telescope::synth {

double seasonal_value(const SeasonalParams& params, std::size_t t) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(t) /
                             static_cast<double>(params.period) +
                         params.phase;
    return params.level + params.slope * static_cast<double>(t) +
           params.amplitude * std::sin(angle);
}

TimeSeries make_seasonal(const SeasonalParams& params, std::uint64_t noise_seed) {
    Rng rng(noise_seed);
    TimeSeries series;
    series.values.resize(params.length);
    for (std::size_t t = 0; t < params.length; ++t) {
        double value = seasonal_value(params, t);
        if (params.noise_sd > 0.0) value += params.noise_sd * rng.normal();
        series.values[t] = value;
    }
    return series;
}

TimeSeries make_white_noise(std::size_t length, double mean, double sd, std::uint64_t seed) {
    Rng rng(seed);
    TimeSeries series;
    series.values.resize(length);
    for (auto& v : series.values) v = mean + sd * rng.normal();
    return series;
}

SeasonalParams random_seasonal_params(Rng& rng) {
    static constexpr int kPeriods[] = {4, 7, 12, 24};
    SeasonalParams params;
    params.length = static_cast<std::size_t>(rng.uniform_int(96, 240));
    params.period = kPeriods[rng.uniform_int(0, 3)];
    params.level = rng.uniform(30.0, 120.0);
    params.slope = rng.uniform(-0.3, 0.5);
    params.amplitude = rng.uniform(5.0, 20.0);
    params.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    params.noise_sd = rng.uniform(0.01, 0.10) * params.amplitude;
    return params;
}

} // namespace telescope::synth
