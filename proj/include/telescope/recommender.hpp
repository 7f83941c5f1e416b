#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "telescope/meta_features.hpp"
#include "telescope/pipeline.hpp"
#include "telescope/regressors.hpp"
#include "telescope/time_series.hpp"

namespace telescope {

/// Per-method holdout error epsilon and its degradation theta = epsilon /
/// min(epsilon). Entries follow all_regressor_kinds() order.
struct DegradationVector {
    std::vector<double> epsilon;
    std::vector<double> theta;
};

struct RecommenderProvenance {
    std::size_t corpus_size = 0;
    std::size_t augmented_size = 0;
    std::uint64_t seed = 0;
};

/// One degradation regressor (random forest) per base-level method over the
/// meta-attribute schema.
struct RecommenderModel {
    std::vector<std::string> schema;
    std::vector<FittedModel> regressors; // all_regressor_kinds() order
    RecommenderProvenance provenance;

    bool trained() const noexcept { return !regressors.empty(); }
};

/// The degradation equation: theta_i = epsilon_i / min(epsilon), with every
/// epsilon floored at 1e-9 first. The minimum entry is exactly 1.
std::vector<double> degradation_from_errors(const std::vector<double>& epsilon);

/// Builds new series by recombining decomposed corpus components:
/// trend(a) + season(b) * scale + irregular(c) * scale, truncated to the
/// shortest component with the season rotated by a random phase.
std::vector<TimeSeries> generate_series(const std::vector<TimeSeries>& corpus, std::size_t count,
                                        std::uint64_t seed);

/// 80/20 split, one pipeline run per implemented learner on the history,
/// sMAPE against the holdout, degradation ratios with an epsilon floor of
/// 1e-9. A failed method scores the worst possible sMAPE (200) and is
/// excluded from the minimum.
DegradationVector evaluate_base_methods(const TimeSeries& series, std::uint64_t seed,
                                        const PipelineConfig& config = {});

/// Offline training: augment the corpus, extract meta attributes of each
/// de-trended member, evaluate the base methods, and fit one random-forest
/// degradation regressor per method.
RecommenderModel train_recommender(const std::vector<TimeSeries>& corpus, std::size_t augment_to,
                                   std::uint64_t seed, const PipelineConfig& config = {},
                                   int jobs = 1);

/// Attribute extraction on the de-trended series, then argmin of the
/// predicted degradations. Ties resolve in all_regressor_kinds() order.
RegressorKind recommend(const RecommenderModel& model, const TimeSeries& detrended);

void save_recommender(const RecommenderModel& model, const std::string& path);
RecommenderModel load_recommender(const std::string& path);

} // namespace telescope
