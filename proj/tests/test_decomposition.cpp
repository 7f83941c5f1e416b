#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "telescope/decomposition.hpp"
#include "telescope/rng.hpp"

using namespace telescope;

namespace {

void check_reconstruction(const TimeSeries& input, const Decomposition& parts) {
    for (std::size_t t = 0; t < input.size(); ++t) {
        const double sum =
            parts.trend.values[t] + parts.season.values[t] + parts.irregular.values[t];
        CHECK(std::abs(sum - input.values[t]) < 1e-8);
    }
}

void check_season_shape(const Decomposition& parts) {
    const std::size_t m = static_cast<std::size_t>(parts.period);
    const auto& season = parts.season.values;
    for (std::size_t t = 0; t + m < season.size(); ++t)
        CHECK(std::abs(season[t] - season[t + m]) < 1e-9);
    for (std::size_t start = 0; start + m <= std::min(season.size(), 3 * m); ++start) {
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) sum += season[start + i];
        CHECK(std::abs(sum) < 1e-6);
    }
}

} // namespace

TEST_CASE("stl on a pure ramp finds no season") {
    TimeSeries series;
    for (int t = 0; t < 24; ++t) series.values.push_back(2.0 * t);
    const Decomposition parts = stl(series, 4);

    for (double s : parts.season.values) CHECK(std::abs(s) < 1e-6);
    for (std::size_t t = 0; t < series.size(); ++t)
        CHECK(parts.trend.values[t] == doctest::Approx(2.0 * static_cast<double>(t)).epsilon(1e-6));
    check_reconstruction(series, parts);
    check_season_shape(parts);
}

TEST_CASE("stl recovers a known ramp-plus-pattern construction") {
    // centered pattern, sums to zero over one period
    const double pattern[4] = {3.0, -1.0, -1.0, -1.0};
    TimeSeries series;
    for (int t = 0; t < 40; ++t) series.values.push_back(t + pattern[t % 4]);

    const Decomposition parts = stl(series, 4);
    for (std::size_t t = 0; t < series.size(); ++t)
        CHECK(std::abs(parts.season.values[t] - pattern[t % 4]) < 1e-3);
    for (std::size_t t = 4; t + 4 < series.size(); ++t)
        CHECK(std::abs(parts.trend.values[t] - static_cast<double>(t)) < 0.2);
    check_reconstruction(series, parts);
    check_season_shape(parts);
}

TEST_CASE("stl of a constant series is trivial") {
    const TimeSeries series(std::vector<double>(18, 4.5));
    const Decomposition parts = stl(series, 3);
    for (std::size_t t = 0; t < series.size(); ++t) {
        CHECK(parts.trend.values[t] == doctest::Approx(4.5).epsilon(1e-9));
        CHECK(std::abs(parts.season.values[t]) < 1e-9);
        CHECK(std::abs(parts.irregular.values[t]) < 1e-9);
    }
}

TEST_CASE("stl rejects series shorter than two periods") {
    CHECK_THROWS_AS(stl(TimeSeries({1.0, 2.0, 3.0, 4.0, 5.0}), 3), TooShortError);
    CHECK_THROWS_AS(stl(TimeSeries({1.0, 2.0, 3.0, 4.0, 5.0, 6.0}), 1), Error);
}

TEST_CASE("stl invariants hold on random seasonal series") {
    Rng rng(31);
    for (int rep = 0; rep < 25; ++rep) {
        const int period = static_cast<int>(rng.uniform_int(2, 16));
        const std::size_t cycles = static_cast<std::size_t>(rng.uniform_int(3, 12));
        const std::size_t n = static_cast<std::size_t>(period) * cycles +
                              static_cast<std::size_t>(rng.uniform_int(0, period - 1));

        std::vector<double> pattern(static_cast<std::size_t>(period));
        double mean = 0.0;
        for (auto& p : pattern) {
            p = rng.uniform(-5.0, 5.0);
            mean += p;
        }
        for (auto& p : pattern) p -= mean / static_cast<double>(period);

        TimeSeries series;
        const double level = rng.uniform(-20.0, 50.0);
        const double slope = rng.uniform(-0.5, 0.5);
        for (std::size_t t = 0; t < n; ++t)
            series.values.push_back(level + slope * static_cast<double>(t) +
                                    pattern[t % static_cast<std::size_t>(period)] +
                                    0.3 * rng.normal());

        const Decomposition parts = stl(series, period);
        check_reconstruction(series, parts);
        check_season_shape(parts);
    }
}

TEST_CASE("stl is deterministic") {
    Rng rng(77);
    TimeSeries series;
    for (int t = 0; t < 60; ++t)
        series.values.push_back(0.2 * t + 3.0 * std::sin(t / 12.0 * 2.0 * std::numbers::pi) +
                                rng.normal());
    const Decomposition a = stl(series, 12);
    const Decomposition b = stl(series, 12);
    CHECK(a.trend.values == b.trend.values);
    CHECK(a.season.values == b.season.values);
    CHECK(a.irregular.values == b.irregular.values);
}

TEST_CASE("fourier_terms quarter-cycle values") {
    const FourierTerms terms = fourier_terms(4, {4});
    REQUIRE(terms.columns.size() == 2);
    const std::vector<double> expected_sin{0.0, 1.0, 0.0, -1.0};
    const std::vector<double> expected_cos{1.0, 0.0, -1.0, 0.0};
    for (std::size_t t = 0; t < 4; ++t) {
        CHECK(std::abs(terms.columns[0][t] - expected_sin[t]) < 1e-12);
        CHECK(std::abs(terms.columns[1][t] - expected_cos[t]) < 1e-12);
    }
    CHECK(terms.column_names() == std::vector<std::string>{"sin_4", "cos_4"});
}

TEST_CASE("fourier_terms single row") {
    const FourierTerms terms = fourier_terms(1, {2, 3});
    REQUIRE(terms.columns.size() == 4);
    CHECK(terms.columns[0][0] == doctest::Approx(0.0));
    CHECK(terms.columns[1][0] == doctest::Approx(1.0));
    CHECK(terms.columns[2][0] == doctest::Approx(0.0));
    CHECK(terms.columns[3][0] == doctest::Approx(1.0));
}

TEST_CASE("fourier columns are m-periodic") {
    const FourierTerms terms = fourier_terms(50, {5, 9});
    for (std::size_t c = 0; c < terms.columns.size(); ++c) {
        const int m = terms.periods[c / 2];
        for (std::size_t t = 0; t + static_cast<std::size_t>(m) < 50; ++t)
            CHECK(std::abs(terms.columns[c][t] - terms.columns[c][t + static_cast<std::size_t>(m)]) < 1e-12);
    }
}

TEST_CASE("extend_fourier follows the continuation rule") {
    const FourierTerms terms = fourier_terms(8, {4});

    const FourierTerms one = extend_fourier(terms, 1);
    CHECK(one.columns[0][0] == terms.columns[0][4]);
    CHECK(one.columns[1][0] == terms.columns[1][4]);

    const FourierTerms four = extend_fourier(terms, 4);
    for (int k = 0; k < 4; ++k) {
        CHECK(four.columns[0][static_cast<std::size_t>(k)] ==
              terms.columns[0][static_cast<std::size_t>(4 + k)]);
    }

    // hand-evaluated source indices for horizon 9: rows 4,5,6,7,4,5,6,7,4
    const FourierTerms nine = extend_fourier(terms, 9);
    const std::size_t expected[9] = {4, 5, 6, 7, 4, 5, 6, 7, 4};
    for (std::size_t k = 0; k < 9; ++k)
        CHECK(nine.columns[0][k] == terms.columns[0][expected[k]]);
}

TEST_CASE("continue_season repeats the last full period") {
    const TimeSeries season({1.0, 2.0, 3.0, 1.0, 2.0, 3.0});
    CHECK(continue_season(season, 3, 3).values == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(continue_season(season, 3, 1).values == std::vector<double>{1.0});
    CHECK(continue_season(season, 3, 7).values ==
          std::vector<double>{1.0, 2.0, 3.0, 1.0, 2.0, 3.0, 1.0});
}

TEST_CASE("continued season preserves periodicity after concatenation") {
    Rng rng(13);
    std::vector<double> season;
    for (int t = 0; t < 35; ++t) season.push_back(std::sin(2.0 * std::numbers::pi * (t % 7) / 7.0));
    const TimeSeries continued = continue_season(TimeSeries(season), 7, 20);

    std::vector<double> joined = season;
    joined.insert(joined.end(), continued.values.begin(), continued.values.end());
    for (std::size_t t = 0; t + 7 < joined.size(); ++t)
        CHECK(std::abs(joined[t] - joined[t + 7]) < 1e-9);
}
