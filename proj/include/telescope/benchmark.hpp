#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "telescope/time_series.hpp"

namespace telescope {

/// Multi-step-ahead evaluation protocol: history/test split fraction and the
/// number of timed repetitions per (series, method) cell.
struct EvalProtocol {
    double history_fraction = 0.8;
    int repetitions = 10;
    std::uint64_t seed = 0;
};

/// A forecasting method under benchmark: (history, horizon) -> forecast.
struct MethodAdapter {
    std::string name;
    std::function<TimeSeries(const TimeSeries&, int)> forecast;
};

/// Monotonic nanosecond clock, injectable for reproducible reports.
using ClockFn = std::function<std::uint64_t()>;

struct RepMeasurement {
    double smape = 0.0;
    double seconds = 0.0;
    double t_normalized = 0.0; // seconds / median naive seconds
};

struct BenchmarkCell {
    std::string series_name;
    std::string method_name;
    std::vector<RepMeasurement> reps;
    double mean_smape = 0.0;
    double sd_smape = 0.0;
    double mean_tn = 0.0;
    double sd_tn = 0.0;
    /// Canonical normalized time: median method seconds / median naive seconds.
    double t_normalized = 0.0;
    int quadrant = 0; // 1..4, Table-style partition at the global medians
    bool failed = false;
    std::string error;
};

struct FriedmanResult {
    std::vector<double> mean_ranks; // per method, ties resolved by averaging
    double statistic = 0.0;
    double p_value = 1.0;
};

struct BenchmarkReport {
    std::vector<std::string> method_names;
    std::vector<BenchmarkCell> cells; // series-major
    double median_smape = 0.0;
    double median_tn = 0.0;
    std::map<std::string, std::array<int, 4>> quadrant_tally;
    FriedmanResult friedman_error;
    FriedmanResult friedman_time;
};

struct SmapeResult {
    double value = 0.0;   // percent
    int skipped = 0;      // terms with y + f == 0 but y != f
};

/// Symmetric MAPE in percent: 200/n * sum |y - f| / |y + f|, with a term of 0
/// when y = f = 0 and skipped terms counted when only the denominator is 0.
double smape(const TimeSeries& actual, const TimeSeries& forecast);
SmapeResult smape_detailed(const TimeSeries& actual, const TimeSeries& forecast);

/// Last observed value repeated; the timing normalization baseline.
TimeSeries naive_forecast(const TimeSeries& series, int horizon);

/// Periodic continuation of the raw series at its detected dominant period;
/// degrades to the naive forecast for non-seasonal series.
TimeSeries seasonal_naive_forecast(const TimeSeries& series, int horizon);

/// Friedman rank test over an N x k value matrix (one row per series, one
/// column per method, lower is better).
FriedmanResult friedman_test(const std::vector<std::vector<double>>& values);

/// Runs the full protocol. Cells of a series run on one worker so timing is
/// never co-scheduled with that series' baseline; failures are recorded per
/// cell, not fatal.
BenchmarkReport run_benchmark(const std::vector<std::pair<std::string, TimeSeries>>& corpus,
                              const std::vector<MethodAdapter>& methods,
                              const EvalProtocol& protocol, ClockFn clock = {}, int jobs = 1);

/// Report writers for the CLI: per-rep cells, Table-style summary, quadrants.
void write_cells_csv(const BenchmarkReport& report, const std::string& path);
void write_summary_csv(const BenchmarkReport& report, const std::string& path);
void write_quadrants_csv(const BenchmarkReport& report, const std::string& path);

} // namespace telescope
