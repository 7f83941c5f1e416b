#pragma once

#include <string>

#include "telescope/pipeline.hpp"

namespace telescope {

/// Applies key=value overrides from a config file on top of the defaults.
/// Recognised keys: the regressor hyperparameters (gb_rounds, gb_shrinkage,
/// gb_depth, gb_min_leaf, rf_trees, rf_depth, rf_min_leaf, cart_depth,
/// cart_min_leaf, cart_cv_folds), the periodogram thresholds (peak_share,
/// dominance_ratio) and max_count. Lines starting with `#` are skipped;
/// unknown keys are errors.
PipelineConfig load_config(const std::string& path, PipelineConfig base = {});

} // namespace telescope
