#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "telescope/benchmark.hpp"
#include "telescope/config.hpp"
#include "telescope/csv.hpp"
#include "telescope/pipeline.hpp"
#include "telescope/recommender.hpp"
#include "telescope/rng.hpp"
#include "telescope/synth.hpp"

namespace {

using namespace telescope;

struct CommonOptions {
    std::string config_path;
    std::uint64_t seed = 0;

    PipelineConfig load() const {
        return config_path.empty() ? PipelineConfig{} : load_config(config_path);
    }
};

void write_diagnostics(const std::string& path, const ForecastDiagnostics& diag) {
    nlohmann::json j = {
        {"frequencies", diag.frequencies.periods},
        {"lambda", diag.transform.lambda},
        {"shift", diag.transform.shift},
        {"regressor_used", diag.regressor_used},
        {"component_forecasts",
         {{"trend", diag.components.trend.values},
          {"season", diag.components.season.values},
          {"detrended", diag.components.detrended.values}}},
        {"elapsed_seconds", std::chrono::duration<double>(diag.elapsed).count()}};
    std::ofstream out(path);
    if (!out) throw DataError("cannot open output file: " + path);
    out << j.dump(1) << '\n';
}

int run_forecast(const std::string& input, int horizon, const std::string& mode_name,
                 const std::string& model_path, const std::string& output,
                 const std::string& diagnostics_path, const CommonOptions& common) {
    ForecastRequest request;
    request.series = read_series_csv(input);
    request.horizon = horizon;
    request.seed = common.seed;
    request.config = common.load();

    RecommenderModel model;
    if (mode_name == "recommended") {
        request.mode = ForecastMode::recommended;
        if (!model_path.empty()) {
            model = load_recommender(model_path);
            request.recommender = &model;
        }
    } else if (mode_name != "time-critical") {
        throw CLI::ValidationError("--mode must be time-critical or recommended");
    }

    const ForecastResult result = forecast(request);

    if (output.empty()) {
        for (double v : result.forecast.values) std::cout << format_double(v) << '\n';
    } else {
        write_series_csv(output, result.forecast);
    }
    if (!diagnostics_path.empty()) write_diagnostics(diagnostics_path, result.diagnostics);
    return 0;
}

int run_decompose(const std::string& input, int period, const std::string& output,
                  const std::string& spectrum_path, const CommonOptions& common) {
    const TimeSeries series = read_series_csv(input);
    const PipelineConfig config = common.load();

    if (!spectrum_path.empty()) {
        const Periodogram gram = periodogram(series);
        std::ofstream out(spectrum_path);
        if (!out) throw DataError("cannot open output file: " + spectrum_path);
        out << "frequency,power\n";
        for (std::size_t i = 0; i < gram.size(); ++i)
            out << format_double(gram.frequency[i]) << ',' << format_double(gram.power[i])
                << '\n';
    }

    if (period < 2) {
        const FrequencySet freqs = dominant_frequencies(series, config.spectral);
        if (!freqs.seasonal())
            throw DataError(input + ": no dominant seasonal period found; pass --period");
        period = freqs.dominant();
    }
    const Decomposition parts = stl(series, period);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!output.empty()) {
        file.open(output);
        if (!file) throw DataError("cannot open output file: " + output);
        out = &file;
    }
    *out << "value,trend,season,irregular\n";
    for (std::size_t t = 0; t < series.size(); ++t) {
        *out << format_double(series.values[t]) << ',' << format_double(parts.trend.values[t])
             << ',' << format_double(parts.season.values[t]) << ','
             << format_double(parts.irregular.values[t]) << '\n';
    }
    return 0;
}

int run_train(const std::string& corpus_dir, std::size_t augment_to, const std::string& out_path,
              int jobs, const CommonOptions& common) {
    const auto corpus_named = read_corpus_dir(corpus_dir);
    std::vector<TimeSeries> corpus;
    corpus.reserve(corpus_named.size());
    for (const auto& [name, series] : corpus_named) corpus.push_back(series);

    const RecommenderModel model =
        train_recommender(corpus, augment_to, common.seed, common.load(), jobs);
    save_recommender(model, out_path);
    std::cout << "trained on " << model.provenance.augmented_size << " series ("
              << model.provenance.corpus_size << " originals), wrote " << out_path << '\n';
    return 0;
}

int run_benchmark_cmd(const std::string& corpus_dir, const std::string& methods_arg, int reps,
                      const std::string& out_dir, const std::string& model_path, int jobs,
                      const CommonOptions& common) {
    const auto corpus = read_corpus_dir(corpus_dir);
    const PipelineConfig config = common.load();

    RecommenderModel model;
    bool model_loaded = false;
    if (!model_path.empty()) {
        model = load_recommender(model_path);
        model_loaded = true;
    }

    std::vector<MethodAdapter> methods;
    std::string token;
    std::stringstream stream(methods_arg);
    while (std::getline(stream, token, ',')) {
        if (token == "telescope") {
            methods.push_back({token, [config, seed = common.seed](const TimeSeries& s, int h) {
                                   ForecastRequest request;
                                   request.series = s;
                                   request.horizon = h;
                                   request.seed = seed;
                                   request.config = config;
                                   return forecast(request).forecast;
                               }});
        } else if (token == "telescope-star") {
            if (!model_loaded)
                throw DataError("method telescope-star requires --model <recommender>");
            methods.push_back(
                {token, [config, seed = common.seed, &model](const TimeSeries& s, int h) {
                     ForecastRequest request;
                     request.series = s;
                     request.horizon = h;
                     request.seed = seed;
                     request.mode = ForecastMode::recommended;
                     request.recommender = &model;
                     request.config = config;
                     return forecast(request).forecast;
                 }});
        } else if (token == "naive") {
            methods.push_back({token, naive_forecast});
        } else if (token == "seasonal-naive") {
            methods.push_back({token, seasonal_naive_forecast});
        } else {
            throw DataError("unknown benchmark method: " + token);
        }
    }

    EvalProtocol protocol;
    protocol.repetitions = reps;
    protocol.seed = common.seed;
    const BenchmarkReport report = run_benchmark(corpus, methods, protocol, {}, jobs);

    std::filesystem::create_directories(out_dir);
    write_cells_csv(report, out_dir + "/cells.csv");
    write_summary_csv(report, out_dir + "/summary.csv");
    write_quadrants_csv(report, out_dir + "/quadrants.csv");
    std::cout << "benchmarked " << corpus.size() << " series x " << methods.size()
              << " methods, reports in " << out_dir << '\n';
    return 0;
}

int run_synth(const std::string& out_dir, int count, const std::string& kind, int length,
              const CommonOptions& common) {
    std::filesystem::create_directories(out_dir);
    Rng rng(common.seed);
    for (int i = 0; i < count; ++i) {
        TimeSeries series;
        const bool seasonal =
            kind == "seasonal" || (kind == "mixed" && rng.uniform() < 0.85);
        if (seasonal) {
            synth::SeasonalParams params = synth::random_seasonal_params(rng);
            if (length > 0) params.length = static_cast<std::size_t>(length);
            series = synth::make_seasonal(params, derive_seed(common.seed, static_cast<std::uint64_t>(i)));
        } else {
            const std::size_t n =
                length > 0 ? static_cast<std::size_t>(length)
                           : static_cast<std::size_t>(rng.uniform_int(96, 240));
            const double level = rng.uniform(20.0, 100.0);
            const double sd = rng.uniform(1.0, 8.0);
            series = synth::make_white_noise(n, level, sd,
                                             derive_seed(common.seed, 0x5000 + static_cast<std::uint64_t>(i)));
        }
        char name[32];
        std::snprintf(name, sizeof(name), "series_%03d.csv", i);
        write_series_csv(out_dir + "/" + name, series);
    }
    std::cout << "wrote " << count << " series to " << out_dir << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Automated hybrid time-series forecasting toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // global --seed/--config may follow the subcommand

    CommonOptions common;
    app.add_option("--seed", common.seed, "Global RNG seed")->capture_default_str();
    app.add_option("--config", common.config_path, "key=value config file");

    // forecast
    auto* cmd_forecast = app.add_subcommand("forecast", "Forecast a series from CSV");
    std::string input, output, mode = "time-critical", model_path, diagnostics_path;
    int horizon = 1;
    cmd_forecast->add_option("--input", input, "Input series CSV")->required();
    cmd_forecast->add_option("--horizon", horizon, "Number of values to forecast")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd_forecast->add_option("--mode", mode, "time-critical or recommended")
        ->capture_default_str();
    cmd_forecast->add_option("--model", model_path, "Recommender model (for --mode recommended)");
    cmd_forecast->add_option("--output", output, "Output CSV (default: stdout)");
    cmd_forecast->add_option("--diagnostics", diagnostics_path, "Diagnostics JSON output");

    // decompose
    auto* cmd_decompose = app.add_subcommand("decompose", "STL decomposition to CSV");
    std::string dec_input, dec_output, spectrum_path;
    int period = 0;
    cmd_decompose->add_option("--input", dec_input, "Input series CSV")->required();
    cmd_decompose->add_option("--period", period, "Seasonal period (default: detected)");
    cmd_decompose->add_option("--output", dec_output, "Output CSV (default: stdout)");
    cmd_decompose->add_option("--spectrum", spectrum_path, "Write the periodogram CSV here");

    // train-recommender
    auto* cmd_train = app.add_subcommand("train-recommender", "Train the learner recommender");
    std::string corpus_dir, train_out = "recommender.model";
    std::size_t augment_to = 0;
    int jobs = 1;
    cmd_train->add_option("--corpus", corpus_dir, "Directory of CSV series")->required();
    cmd_train->add_option("--augment-to", augment_to, "Total corpus size after augmentation")
        ->required();
    cmd_train->add_option("--out", train_out, "Model output path")->capture_default_str();
    cmd_train->add_option("--jobs", jobs, "Worker threads")->capture_default_str();

    // benchmark
    auto* cmd_bench = app.add_subcommand("benchmark", "Run the evaluation harness");
    std::string bench_corpus, bench_methods = "telescope,naive,seasonal-naive";
    std::string bench_out = "report", bench_model;
    int reps = 10, bench_jobs = 1;
    cmd_bench->add_option("--corpus", bench_corpus, "Directory of CSV series")->required();
    cmd_bench->add_option("--methods", bench_methods, "Comma-separated method list")
        ->capture_default_str();
    cmd_bench->add_option("--reps", reps, "Repetitions per cell")->capture_default_str();
    cmd_bench->add_option("--out", bench_out, "Report directory")->capture_default_str();
    cmd_bench->add_option("--model", bench_model, "Recommender model for telescope-star");
    cmd_bench->add_option("--jobs", bench_jobs, "Worker threads")->capture_default_str();

    // synth
    auto* cmd_synth = app.add_subcommand("synth", "Generate a synthetic corpus");
    std::string synth_out = "corpus", synth_kind = "mixed";
    int synth_count = 10, synth_length = 0;
    cmd_synth->add_option("--out", synth_out, "Output directory")->capture_default_str();
    cmd_synth->add_option("--count", synth_count, "Number of series")->capture_default_str();
    cmd_synth->add_option("--kind", synth_kind, "seasonal, nonseasonal or mixed")
        ->capture_default_str()
        ->check(CLI::IsMember({"seasonal", "nonseasonal", "mixed"}));
    cmd_synth->add_option("--length", synth_length, "Series length (0: randomised)");

    try {
        app.parse(argc, argv);
        if (cmd_forecast->parsed())
            return run_forecast(input, horizon, mode, model_path, output, diagnostics_path,
                                common);
        if (cmd_decompose->parsed())
            return run_decompose(dec_input, period, dec_output, spectrum_path, common);
        if (cmd_train->parsed())
            return run_train(corpus_dir, augment_to, train_out, jobs, common);
        if (cmd_bench->parsed())
            return run_benchmark_cmd(bench_corpus, bench_methods, reps, bench_out, bench_model,
                                     bench_jobs, common);
        if (cmd_synth->parsed())
            return run_synth(synth_out, synth_count, synth_kind, synth_length, common);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage errors exit 1, --help exits 0
    } catch (const telescope::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
