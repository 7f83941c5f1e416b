#include "telescope/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "telescope/csv.hpp"
#include "telescope/decomposition.hpp"
#include "telescope/spectral.hpp"
#include "telescope/stats.hpp"

namespace telescope {

SmapeResult smape_detailed(const TimeSeries& actual, const TimeSeries& forecast) {
    if (actual.size() != forecast.size())
        throw DataError("smape length mismatch: " + std::to_string(actual.size()) + " vs " +
                        std::to_string(forecast.size()));
    if (actual.empty()) throw DataError("smape requires at least one value");

    SmapeResult result;
    double acc = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        const double y = actual.values[t];
        const double f = forecast.values[t];
        const double denom = y + f;
        if (denom == 0.0) {
            if (y != f) ++result.skipped; // undefined term, recorded
            continue;                     // both zero contributes 0
        }
        acc += std::abs(y - f) / std::abs(denom);
    }
    result.value = 200.0 * acc / static_cast<double>(actual.size());
    return result;
}

double smape(const TimeSeries& actual, const TimeSeries& forecast) {
    return smape_detailed(actual, forecast).value;
}

TimeSeries naive_forecast(const TimeSeries& series, int horizon) {
    require_valid(series);
    if (horizon < 1) throw Error("horizon must be >= 1");
    return TimeSeries(std::vector<double>(static_cast<std::size_t>(horizon), series.back()),
                      series.start_index + static_cast<long>(series.size()));
}

TimeSeries seasonal_naive_forecast(const TimeSeries& series, int horizon) {
    require_valid(series);
    if (horizon < 1) throw Error("horizon must be >= 1");
    const int period = series.size() >= 4 ? dominant_frequencies(series).dominant() : 1;
    if (period <= 1) return naive_forecast(series, horizon);
    return continue_season(series, period, horizon);
}

FriedmanResult friedman_test(const std::vector<std::vector<double>>& values) {
    const std::size_t n_series = values.size();
    if (n_series == 0) throw DataError("friedman test requires at least one series");
    const std::size_t k = values.front().size();
    if (k < 2) throw DataError("friedman test requires at least two methods");

    FriedmanResult result;
    result.mean_ranks.assign(k, 0.0);

    for (const auto& row : values) {
        if (row.size() != k) throw DataError("friedman test row length mismatch");
        std::vector<std::size_t> order(k);
        for (std::size_t i = 0; i < k; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });

        // Tied values share the average of the ranks they span.
        std::size_t i = 0;
        while (i < k) {
            std::size_t j = i;
            while (j + 1 < k && row[order[j + 1]] == row[order[i]]) ++j;
            const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
            for (std::size_t t = i; t <= j; ++t) result.mean_ranks[order[t]] += shared;
            i = j + 1;
        }
    }
    for (auto& r : result.mean_ranks) r /= static_cast<double>(n_series);

    const double kk = static_cast<double>(k);
    const double nn = static_cast<double>(n_series);
    double spread = 0.0;
    for (double r : result.mean_ranks) {
        const double d = r - (kk + 1.0) / 2.0;
        spread += d * d;
    }
    result.statistic = 12.0 * nn / (kk * (kk + 1.0)) * spread;
    result.p_value = stats::chi_square_sf(result.statistic, kk - 1.0);
    return result;
}

namespace {

double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

int quadrant_of(double t_normalized, double smape_value, double median_tn, double median_smape) {
    const bool slow = t_normalized >= median_tn; // closed lower bounds
    const bool bad = smape_value >= median_smape;
    if (slow && bad) return 1;
    if (!slow && bad) return 2;
    if (!slow && !bad) return 3;
    return 4;
}

} // namespace

BenchmarkReport run_benchmark(const std::vector<std::pair<std::string, TimeSeries>>& corpus,
                              const std::vector<MethodAdapter>& methods,
                              const EvalProtocol& protocol, ClockFn clock, int jobs) {
    if (corpus.empty()) throw DataError("benchmark corpus is empty");
    if (methods.empty()) throw DataError("no benchmark methods given");
    if (protocol.repetitions < 1) throw Error("repetitions must be >= 1");
    if (!(protocol.history_fraction > 0.0 && protocol.history_fraction < 1.0))
        throw Error("history_fraction must lie in (0, 1)");

    if (!clock) {
        clock = [] {
            return static_cast<std::uint64_t>(
                std::chrono::duration_cast<std::chrono::nanoseconds>(
                    std::chrono::steady_clock::now().time_since_epoch())
                    .count());
        };
    }

    BenchmarkReport report;
    for (const auto& method : methods) report.method_names.push_back(method.name);
    report.cells.resize(corpus.size() * methods.size());

    // One worker owns all cells of a series: the naive baseline and every
    // timed invocation for that series run on the same thread.
    const auto run_series = [&](std::size_t s) {
        const auto& [series_name, series] = corpus[s];
        const std::size_t history_len = static_cast<std::size_t>(
            std::floor(static_cast<double>(series.size()) * protocol.history_fraction));
        const int horizon = static_cast<int>(series.size() - history_len);

        TimeSeries history, actual;
        if (history_len >= 1 && horizon >= 1) {
            history.values.assign(series.values.begin(),
                                  series.values.begin() + static_cast<long>(history_len));
            actual.values.assign(series.values.begin() + static_cast<long>(history_len),
                                 series.values.end());
        }

        // Naive timing baseline, median over the same number of repetitions.
        std::vector<double> naive_seconds;
        for (int rep = 0; rep < protocol.repetitions; ++rep) {
            const std::uint64_t t0 = clock();
            TimeSeries ignored = naive_forecast(history.empty() ? series : history,
                                                std::max(horizon, 1));
            const std::uint64_t t1 = clock();
            naive_seconds.push_back(static_cast<double>(t1 - t0) * 1e-9);
        }
        const double naive_median = std::max(median_of(naive_seconds), 1e-12);

        for (std::size_t m = 0; m < methods.size(); ++m) {
            BenchmarkCell& cell = report.cells[s * methods.size() + m];
            cell.series_name = series_name;
            cell.method_name = methods[m].name;
            if (history.empty()) {
                cell.failed = true;
                cell.error = "series too short for the 80/20 split";
                continue;
            }
            std::vector<double> seconds, errors;
            try {
                for (int rep = 0; rep < protocol.repetitions; ++rep) {
                    const std::uint64_t t0 = clock();
                    const TimeSeries fc = methods[m].forecast(history, horizon);
                    const std::uint64_t t1 = clock();
                    seconds.push_back(static_cast<double>(t1 - t0) * 1e-9);
                    errors.push_back(smape(actual, fc));
                }
            } catch (const std::exception& e) {
                cell.failed = true;
                cell.error = e.what();
                continue;
            }
            for (int rep = 0; rep < protocol.repetitions; ++rep) {
                cell.reps.push_back({errors[static_cast<std::size_t>(rep)],
                                     seconds[static_cast<std::size_t>(rep)],
                                     seconds[static_cast<std::size_t>(rep)] / naive_median});
            }
            std::vector<double> tn;
            for (const auto& rep : cell.reps) tn.push_back(rep.t_normalized);
            cell.mean_smape = stats::mean(errors);
            cell.sd_smape = stats::std_dev(errors);
            cell.mean_tn = stats::mean(tn);
            cell.sd_tn = stats::std_dev(tn);
            cell.t_normalized = median_of(seconds) / naive_median;
        }
    };

    jobs = std::max(1, jobs);
    if (jobs == 1) {
        for (std::size_t s = 0; s < corpus.size(); ++s) run_series(s);
    } else {
        std::vector<std::thread> workers;
        std::size_t next = 0;
        std::mutex mutex;
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                while (true) {
                    std::size_t s;
                    {
                        std::lock_guard<std::mutex> lock(mutex);
                        if (next >= corpus.size()) return;
                        s = next++;
                    }
                    run_series(s);
                }
            });
        }
        for (auto& worker : workers) worker.join();
    }

    // Global medians over all successful cells, then the quadrant partition.
    std::vector<double> all_smape, all_tn;
    for (const auto& cell : report.cells) {
        if (cell.failed) continue;
        all_smape.push_back(cell.mean_smape);
        all_tn.push_back(cell.t_normalized);
    }
    report.median_smape = median_of(all_smape);
    report.median_tn = median_of(all_tn);

    for (auto& cell : report.cells) {
        if (cell.failed) {
            cell.quadrant = 1; // worst quadrant keeps the tallies a partition
        } else {
            cell.quadrant =
                quadrant_of(cell.t_normalized, cell.mean_smape, report.median_tn, report.median_smape);
        }
    }
    for (const auto& name : report.method_names) report.quadrant_tally[name] = {0, 0, 0, 0};
    for (const auto& cell : report.cells)
        ++report.quadrant_tally[cell.method_name][static_cast<std::size_t>(cell.quadrant - 1)];

    // Friedman ranks on the per-series error and normalized time.
    const double worst = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> error_rows, time_rows;
    for (std::size_t s = 0; s < corpus.size(); ++s) {
        std::vector<double> error_row, time_row;
        for (std::size_t m = 0; m < methods.size(); ++m) {
            const auto& cell = report.cells[s * methods.size() + m];
            error_row.push_back(cell.failed ? worst : cell.mean_smape);
            time_row.push_back(cell.failed ? worst : cell.t_normalized);
        }
        error_rows.push_back(std::move(error_row));
        time_rows.push_back(std::move(time_row));
    }
    if (methods.size() >= 2) {
        report.friedman_error = friedman_test(error_rows);
        report.friedman_time = friedman_test(time_rows);
    }
    return report;
}

void write_cells_csv(const BenchmarkReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open output file: " + path);
    out << "series,method,rep,smape,seconds,t_normalized\n";
    for (const auto& cell : report.cells) {
        if (cell.failed) {
            out << cell.series_name << ',' << cell.method_name << ",,,," << '\n';
            continue;
        }
        for (std::size_t rep = 0; rep < cell.reps.size(); ++rep) {
            out << cell.series_name << ',' << cell.method_name << ',' << rep << ','
                << format_double(cell.reps[rep].smape) << ','
                << format_double(cell.reps[rep].seconds) << ','
                << format_double(cell.reps[rep].t_normalized) << '\n';
        }
    }
}

void write_summary_csv(const BenchmarkReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open output file: " + path);

    const std::size_t k = report.method_names.size();
    const std::size_t n_series = k == 0 ? 0 : report.cells.size() / k;

    out << "measure";
    for (const auto& name : report.method_names) out << ',' << name;
    out << '\n';

    const auto aggregate = [&](const char* label, auto&& extract) {
        out << label;
        for (std::size_t m = 0; m < k; ++m) {
            std::vector<double> values;
            for (std::size_t s = 0; s < n_series; ++s) {
                const auto& cell = report.cells[s * k + m];
                if (!cell.failed) values.push_back(extract(cell));
            }
            out << ',' << format_double(stats::mean(values));
        }
        out << '\n';
    };
    aggregate("mean_smape", [](const BenchmarkCell& c) { return c.mean_smape; });
    aggregate("sd_smape", [](const BenchmarkCell& c) { return c.sd_smape; });
    aggregate("mean_t_normalized", [](const BenchmarkCell& c) { return c.mean_tn; });
    aggregate("sd_t_normalized", [](const BenchmarkCell& c) { return c.sd_tn; });

    out << "friedman_mean_rank_error";
    for (double r : report.friedman_error.mean_ranks) out << ',' << format_double(r);
    out << '\n';
    out << "friedman_mean_rank_time";
    for (double r : report.friedman_time.mean_ranks) out << ',' << format_double(r);
    out << '\n';
    out << "# friedman_error: statistic=" << format_double(report.friedman_error.statistic)
        << " p=" << format_double(report.friedman_error.p_value) << '\n';
    out << "# friedman_time: statistic=" << format_double(report.friedman_time.statistic)
        << " p=" << format_double(report.friedman_time.p_value) << '\n';
    out << "# medians: smape=" << format_double(report.median_smape)
        << " t_normalized=" << format_double(report.median_tn) << '\n';
}

void write_quadrants_csv(const BenchmarkReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open output file: " + path);
    out << "quadrant";
    for (const auto& name : report.method_names) out << ',' << name;
    out << '\n';
    static const char* kLabels[4] = {"QI", "QII", "QIII", "QIV"};
    for (int q = 0; q < 4; ++q) {
        out << kLabels[q];
        for (const auto& name : report.method_names)
            out << ',' << report.quadrant_tally.at(name)[static_cast<std::size_t>(q)];
        out << '\n';
    }
}

} // namespace telescope
