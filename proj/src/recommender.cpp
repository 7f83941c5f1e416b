#include "telescope/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "telescope/benchmark.hpp"
#include "telescope/parallel.hpp"
#include "telescope/rng.hpp"

namespace telescope {

namespace {

struct Components {
    std::vector<double> trend;
    std::vector<double> season; // empty for non-seasonal members
    std::vector<double> irregular;
    int period = 1;
};

// Centered moving average with linear endpoint fill, for splitting
// non-seasonal members into trend + irregular.
std::vector<double> smooth(const std::vector<double>& y, std::size_t window) {
    const std::size_t n = y.size();
    if (window % 2 == 0) ++window;
    window = std::min(window, n % 2 == 1 ? n : n - 1);
    const std::size_t half = window / 2;
    std::vector<double> out(n);
    for (std::size_t t = half; t + half < n; ++t) {
        double acc = 0.0;
        for (std::size_t j = t - half; j <= t + half; ++j) acc += y[j];
        out[t] = acc / static_cast<double>(window);
    }
    for (std::size_t t = 0; t < half && t < n; ++t) out[t] = out[std::min(half, n - 1)];
    for (std::size_t t = n - std::min(half, n); t < n; ++t)
        out[t] = out[n - 1 - std::min(half, n - 1)];
    return out;
}

Components decompose_member(const TimeSeries& series, const PipelineConfig& config) {
    Components parts;
    const FrequencySet freqs =
        series.size() >= 4 ? dominant_frequencies(series, config.spectral) : FrequencySet{{1}};
    const int period = freqs.dominant();
    if (freqs.seasonal() && series.size() >= 2 * static_cast<std::size_t>(period)) {
        const Decomposition decomp = stl(series, period);
        parts.trend = decomp.trend.values;
        parts.season = decomp.season.values;
        parts.irregular = decomp.irregular.values;
        parts.period = period;
    } else {
        parts.trend = smooth(series.values, std::max<std::size_t>(3, series.size() / 10));
        parts.irregular.resize(series.size());
        for (std::size_t t = 0; t < series.size(); ++t)
            parts.irregular[t] = series.values[t] - parts.trend[t];
    }
    return parts;
}

// De-trended transform of a raw series: shift, Box-Cox, minus the STL trend
// (identity de-trending for non-seasonal members).
TimeSeries detrend_transformed(const TimeSeries& series, const PipelineConfig& config) {
    auto [shifted, shift] = shift_positive(series);
    (void)shift;
    const FrequencySet freqs =
        shifted.size() >= 4 ? dominant_frequencies(shifted, config.spectral) : FrequencySet{{1}};
    const double lambda = estimate_lambda_guerrero(shifted, freqs.dominant());
    TimeSeries transformed = boxcox(shifted, lambda);

    const int period = freqs.dominant();
    if (freqs.seasonal() && transformed.size() >= 2 * static_cast<std::size_t>(period)) {
        const Decomposition decomp = stl(transformed, period);
        for (std::size_t t = 0; t < transformed.size(); ++t)
            transformed.values[t] -= decomp.trend.values[t];
    }
    return transformed;
}

} // namespace

std::vector<TimeSeries> generate_series(const std::vector<TimeSeries>& corpus, std::size_t count,
                                        std::uint64_t seed) {
    if (corpus.empty()) throw DataError("empty corpus");
    for (const auto& member : corpus) require_valid(member);

    PipelineConfig config;
    std::vector<Components> decomposed;
    decomposed.reserve(corpus.size());
    for (const auto& member : corpus) decomposed.push_back(decompose_member(member, config));

    Rng rng(seed);
    std::vector<TimeSeries> generated;
    generated.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto& trend_of = decomposed[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(corpus.size()) - 1))];
        const auto& season_of = decomposed[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(corpus.size()) - 1))];
        const auto& irregular_of = decomposed[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(corpus.size()) - 1))];
        const double season_scale = rng.uniform(0.5, 2.0);
        const double irregular_scale = rng.uniform(0.5, 2.0);
        const std::size_t phase = static_cast<std::size_t>(
            rng.uniform_int(0, std::max(season_of.period, 1) - 1));

        std::size_t length = std::min(trend_of.trend.size(), irregular_of.irregular.size());
        if (!season_of.season.empty()) length = std::min(length, season_of.season.size());

        TimeSeries series;
        series.values.resize(length);
        for (std::size_t t = 0; t < length; ++t) {
            double value = trend_of.trend[t] + irregular_scale * irregular_of.irregular[t];
            if (!season_of.season.empty())
                value += season_scale *
                         season_of.season[(t + phase) % season_of.season.size()];
            series.values[t] = value;
        }
        generated.push_back(std::move(series));
    }
    return generated;
}

std::vector<double> degradation_from_errors(const std::vector<double>& epsilon) {
    if (epsilon.empty()) throw DataError("empty error vector");
    constexpr double kEpsilonFloor = 1e-9;
    std::vector<double> floored;
    floored.reserve(epsilon.size());
    for (double eps : epsilon) {
        if (!std::isfinite(eps) || eps < 0.0) throw DataError("errors must be finite and >= 0");
        floored.push_back(std::max(eps, kEpsilonFloor));
    }
    const double best = *std::min_element(floored.begin(), floored.end());
    std::vector<double> theta;
    theta.reserve(floored.size());
    for (double eps : floored) theta.push_back(eps / best);
    return theta;
}

DegradationVector evaluate_base_methods(const TimeSeries& series, std::uint64_t seed,
                                        const PipelineConfig& config) {
    require_valid(series);
    const auto& kinds = all_regressor_kinds();
    constexpr double kWorstSmape = 200.0;
    constexpr double kEpsilonFloor = 1e-9;

    const std::size_t history_len = static_cast<std::size_t>(
        std::floor(static_cast<double>(series.size()) * 0.8));
    const int horizon = static_cast<int>(series.size() - history_len);

    TimeSeries history, actual;
    if (history_len >= 1 && horizon >= 1) {
        history.values.assign(series.values.begin(),
                              series.values.begin() + static_cast<long>(history_len));
        actual.values.assign(series.values.begin() + static_cast<long>(history_len),
                             series.values.end());
    }

    DegradationVector result;
    result.epsilon.reserve(kinds.size());
    std::vector<bool> ok(kinds.size(), false);
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        double eps = kWorstSmape;
        try {
            ForecastRequest request;
            request.series = history;
            request.horizon = horizon;
            request.seed = seed;
            request.learner_override = kinds[k];
            request.config = config;
            eps = smape(actual, forecast(request).forecast);
            ok[k] = true;
        } catch (const std::exception&) {
            // failed method keeps the worst score and is excluded from the min
        }
        result.epsilon.push_back(std::max(eps, kEpsilonFloor));
    }

    double best = kWorstSmape;
    bool any_ok = false;
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        if (ok[k]) {
            best = any_ok ? std::min(best, result.epsilon[k]) : result.epsilon[k];
            any_ok = true;
        }
    }
    if (!any_ok) best = kWorstSmape;

    result.theta.reserve(kinds.size());
    for (double eps : result.epsilon) result.theta.push_back(eps / best);
    return result;
}

RecommenderModel train_recommender(const std::vector<TimeSeries>& corpus, std::size_t augment_to,
                                   std::uint64_t seed, const PipelineConfig& config, int jobs) {
    if (corpus.empty()) throw DataError("empty corpus");

    std::vector<TimeSeries> extended = corpus;
    if (augment_to > corpus.size()) {
        auto generated = generate_series(corpus, augment_to - corpus.size(), seed);
        extended.insert(extended.end(), std::make_move_iterator(generated.begin()),
                        std::make_move_iterator(generated.end()));
    }

    const auto& kinds = all_regressor_kinds();
    const std::size_t rows = extended.size();
    std::vector<std::array<double, 20>> attribute_rows(rows);
    std::vector<DegradationVector> degradations(rows);

    // Results land in index-addressed slots, so the model is identical for
    // any worker count.
    parallel_for(rows, jobs, [&](std::size_t i) {
        attribute_rows[i] =
            extract_meta_attributes(detrend_transformed(extended[i], config), config.spectral)
                .to_array();
        degradations[i] = evaluate_base_methods(extended[i], derive_seed(seed, i), config);
    });

    FeatureMatrix features;
    for (std::size_t a = 0; a < 20; ++a) {
        std::vector<double> column(rows);
        for (std::size_t i = 0; i < rows; ++i) column[i] = attribute_rows[i][a];
        features.add_column(MetaAttributes::names()[a], std::move(column));
    }

    RecommenderModel model;
    model.schema.assign(MetaAttributes::names().begin(), MetaAttributes::names().end());
    model.provenance = {corpus.size(), extended.size(), seed};
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        features.target.resize(rows);
        for (std::size_t i = 0; i < rows; ++i) features.target[i] = degradations[i].theta[k];
        model.regressors.push_back(fit(RegressorKind::random_forest, features,
                                       derive_seed(seed, 0x9000 + k), config.regressor));
    }
    return model;
}

RegressorKind recommend(const RecommenderModel& model, const TimeSeries& detrended) {
    if (!model.trained()) throw RecommenderNotTrainedError();
    require_valid(detrended);

    const auto attrs = extract_meta_attributes(detrended).to_array();
    FeatureMatrix row;
    for (std::size_t a = 0; a < attrs.size(); ++a)
        row.add_column(model.schema[a], {attrs[a]});

    const auto& kinds = all_regressor_kinds();
    RegressorKind best = kinds.front();
    double best_theta = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        const double theta = predict(model.regressors[k], row).front();
        if (theta < best_theta) { // strict: ties keep the earlier kind
            best_theta = theta;
            best = kinds[k];
        }
    }
    return best;
}

void save_recommender(const RecommenderModel& model, const std::string& path) {
    nlohmann::json regressors = nlohmann::json::array();
    for (const auto& regressor : model.regressors)
        regressors.push_back(nlohmann::json::parse(model_to_json_string(regressor)));
    const nlohmann::json j = {
        {"format", "telescope-recommender"},
        {"schema", model.schema},
        {"provenance",
         {{"corpus_size", model.provenance.corpus_size},
          {"augmented_size", model.provenance.augmented_size},
          {"seed", model.provenance.seed}}},
        {"method_order", [] {
             std::vector<std::string> names;
             for (auto kind : all_regressor_kinds()) names.emplace_back(to_string(kind));
             return names;
         }()},
        {"regressors", std::move(regressors)}};
    std::ofstream out(path);
    if (!out) throw DataError("cannot open output file: " + path);
    out << j.dump(1) << '\n';
}

RecommenderModel load_recommender(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    nlohmann::json j;
    in >> j;
    if (j.value("format", "") != "telescope-recommender")
        throw DataError("not a telescope recommender model: " + path);

    RecommenderModel model;
    model.schema = j.at("schema").get<std::vector<std::string>>();
    model.provenance.corpus_size = j.at("provenance").at("corpus_size");
    model.provenance.augmented_size = j.at("provenance").at("augmented_size");
    model.provenance.seed = j.at("provenance").at("seed");
    for (const auto& jregressor : j.at("regressors"))
        model.regressors.push_back(model_from_json_string(jregressor.dump()));
    if (model.regressors.size() != all_regressor_kinds().size())
        throw DataError("recommender model has the wrong number of regressors");
    return model;
}

} // namespace telescope
