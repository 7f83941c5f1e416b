#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "telescope/csv.hpp"
#include "telescope/rng.hpp"
#include "telescope/time_series.hpp"

using namespace telescope;

namespace {

// Independent brute force of the Guerrero criterion: same definition, written
// straight from the formula, used as the oracle for the grid argmin.
double guerrero_oracle(const std::vector<double>& values, int frequency) {
    const std::size_t block = static_cast<std::size_t>(std::max(frequency, 2));
    const std::size_t n_blocks = values.size() / block;
    if (n_blocks < 2) return 1.0;
    const std::size_t offset = values.size() - n_blocks * block;

    double best_lambda = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int step = 0; step <= 200; ++step) {
        const double lambda = step / 100.0;
        std::vector<double> ratios;
        for (std::size_t b = 0; b < n_blocks; ++b) {
            double mean = 0.0, var = 0.0;
            for (std::size_t i = 0; i < block; ++i) mean += values[offset + b * block + i];
            mean /= static_cast<double>(block);
            for (std::size_t i = 0; i < block; ++i) {
                const double d = values[offset + b * block + i] - mean;
                var += d * d;
            }
            var /= static_cast<double>(block - 1);
            ratios.push_back(std::sqrt(var) / std::pow(mean, 1.0 - lambda));
        }
        double rm = 0.0, rv = 0.0;
        for (double r : ratios) rm += r;
        rm /= static_cast<double>(ratios.size());
        for (double r : ratios) rv += (r - rm) * (r - rm);
        rv /= static_cast<double>(ratios.size() - 1);
        const double cv = rm == 0.0 ? 0.0 : std::sqrt(rv) / rm;
        if (cv < best) {
            best = cv;
            best_lambda = lambda;
        }
    }
    return best_lambda;
}

} // namespace

TEST_CASE("validate") {
    CHECK(validate(TimeSeries({1.0, 2.0, 3.0})).ok());

    const auto empty = validate(TimeSeries{});
    CHECK(empty.issue == ValidationIssue::empty);

    const auto bad = validate(TimeSeries({1.0, std::nan("")}));
    CHECK(bad.issue == ValidationIssue::non_finite);
    CHECK(bad.index == 1);

    CHECK_THROWS_AS(require_valid(TimeSeries({std::numeric_limits<double>::infinity()})),
                    ValueError);
}

TEST_CASE("shift_positive") {
    const auto [a, sa] = shift_positive(TimeSeries({1.0, 2.0, 3.0}));
    CHECK(sa == 0.0);
    CHECK(a.values == std::vector<double>{1.0, 2.0, 3.0});

    const auto [b, sb] = shift_positive(TimeSeries({0.0, 5.0}));
    CHECK(sb == 1.0);
    CHECK(b.values == std::vector<double>{1.0, 6.0});

    const auto [c, sc] = shift_positive(TimeSeries({-2.0, 0.0, 3.0}));
    CHECK(sc == 3.0);
    CHECK(c.values == std::vector<double>{1.0, 3.0, 6.0});
}

TEST_CASE("shift_positive minimum is exactly 1 when input has values <= 0") {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> values(20);
        for (auto& v : values) v = rng.uniform(-40.0, 40.0);
        const TimeSeries series(values);
        const auto [shifted, shift] = shift_positive(series);
        const double lo = *std::min_element(series.values.begin(), series.values.end());
        if (lo > 0.0) {
            CHECK(shift == 0.0);
        } else {
            CHECK(*std::min_element(shifted.values.begin(), shifted.values.end()) ==
                  doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("guerrero lambda matches the brute-force oracle") {
    // near-constant series with a small repeating wiggle
    std::vector<double> wiggle;
    for (int i = 0; i < 8; ++i) {
        wiggle.push_back(10.0);
        wiggle.push_back(10.1);
        wiggle.push_back(9.9);
    }
    const double lambda_wiggle = estimate_lambda_guerrero(TimeSeries(wiggle), 4);
    CHECK(lambda_wiggle == doctest::Approx(guerrero_oracle(wiggle, 4)).epsilon(1e-12));
    CHECK(std::abs(lambda_wiggle - 1.0) < 0.25); // a stable series stays near identity

    // exponential growth stabilises under the log transform
    std::vector<double> growth;
    for (int t = 0; t < 48; ++t) growth.push_back(std::exp(0.1 * t));
    const double lambda_growth = estimate_lambda_guerrero(TimeSeries(growth), 12);
    CHECK(lambda_growth == doctest::Approx(guerrero_oracle(growth, 12)).epsilon(1e-12));
    CHECK(lambda_growth < 0.1);
}

TEST_CASE("guerrero falls back to identity when under two blocks") {
    CHECK(estimate_lambda_guerrero(TimeSeries({1.0, 2.0, 3.0}), 4) == 1.0);
}

TEST_CASE("guerrero is deterministic") {
    std::vector<double> values;
    Rng rng(7);
    for (int i = 0; i < 60; ++i) values.push_back(rng.uniform(5.0, 50.0));
    const TimeSeries series(values);
    CHECK(estimate_lambda_guerrero(series, 12) == estimate_lambda_guerrero(series, 12));
}

TEST_CASE("boxcox") {
    CHECK(boxcox(TimeSeries({std::exp(1.0)}), 0.0).values[0] == doctest::Approx(1.0));
    CHECK(boxcox(TimeSeries({5.0}), 1.0).values[0] == doctest::Approx(4.0));
    // (4^0.5 - 1) / 0.5 = 2
    CHECK(boxcox(TimeSeries({4.0}), 0.5).values[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(boxcox(TimeSeries({1.0, -1.0}), 0.5), ValueError);
}

TEST_CASE("boxcox with lambda 1 is exactly x - 1") {
    Rng rng(3);
    std::vector<double> values(40);
    for (auto& v : values) v = rng.uniform(0.5, 90.0);
    const auto out = boxcox(TimeSeries(values), 1.0);
    for (std::size_t i = 0; i < values.size(); ++i) CHECK(out.values[i] == values[i] - 1.0);
}

TEST_CASE("inv_boxcox") {
    CHECK(inv_boxcox(TimeSeries({1.0}), 0.0).values[0] == doctest::Approx(std::exp(1.0)));
    CHECK(inv_boxcox(TimeSeries({4.0}), 1.0).values[0] == doctest::Approx(5.0));

    const TimeSeries original({0.5, 7.0, 19.0});
    const auto round = inv_boxcox(boxcox(original, 0.3), 0.3);
    for (std::size_t i = 0; i < original.size(); ++i)
        CHECK(round.values[i] == doctest::Approx(original.values[i]).epsilon(1e-9));
}

TEST_CASE("inv_boxcox clamps domain violations instead of failing") {
    const auto out = inv_boxcox(TimeSeries({-100.0}), 0.5); // 0.5*w+1 << 0
    CHECK(std::isfinite(out.values[0]));
    CHECK(out.values[0] >= 0.0);
}

TEST_CASE("boxcox round trip across the lambda grid") {
    Rng rng(17);
    for (const double lambda : {0.0, 0.25, 0.5, 1.0, 2.0}) {
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<double> values(30);
            for (auto& v : values) v = rng.uniform(0.05, 200.0);
            const TimeSeries series(values);
            const auto round = inv_boxcox(boxcox(series, lambda), lambda);
            for (std::size_t i = 0; i < values.size(); ++i)
                CHECK(round.values[i] == doctest::Approx(values[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("csv reader handles comments, blank lines and timestamp columns") {
    const auto dir = std::filesystem::temp_directory_path() / "telescope_csv_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "series.csv").string();
    {
        std::ofstream out(path);
        out << "# a comment\n";
        out << "1.5\n";
        out << "\n";
        out << "2020-01-02,2.5\n";
        out << "3,-4.25\n";
    }
    const TimeSeries series = read_series_csv(path);
    CHECK(series.values == std::vector<double>{1.5, 2.5, -4.25});
}

TEST_CASE("csv writer round trip is exact") {
    const auto dir = std::filesystem::temp_directory_path() / "telescope_csv_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "roundtrip.csv").string();

    Rng rng(23);
    std::vector<double> values(100);
    for (auto& v : values) v = rng.uniform(-1e6, 1e6) * std::pow(10.0, rng.uniform(-12.0, 12.0));
    write_series_csv(path, TimeSeries(values));
    CHECK(read_series_csv(path).values == values);
}

TEST_CASE("csv reader reports bad values with their line number") {
    const auto dir = std::filesystem::temp_directory_path() / "telescope_csv_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "bad.csv").string();
    {
        std::ofstream out(path);
        out << "1\nthree\n";
    }
    try {
        read_series_csv(path);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
    CHECK_THROWS_AS(read_series_csv((dir / "does_not_exist.csv").string()), DataError);
}
