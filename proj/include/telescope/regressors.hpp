#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "telescope/errors.hpp"

namespace telescope {

/// Implemented subset of the base-level learners. The fit/predict contract is
/// the extension seam for further methods.
enum class RegressorKind { cart, random_forest, gradient_boosting };

const char* to_string(RegressorKind kind);
RegressorKind regressor_kind_from_string(const std::string& name);

/// All implemented kinds in the fixed tie-break order.
const std::vector<RegressorKind>& all_regressor_kinds();

/// Named feature columns plus an optional training target, column-major.
struct FeatureMatrix {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    std::vector<double> target; // empty when unlabeled

    std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
    std::size_t cols() const noexcept { return columns.size(); }
    double at(std::size_t row, std::size_t col) const { return columns[col][row]; }

    void add_column(std::string name, std::vector<double> values) {
        names.push_back(std::move(name));
        columns.push_back(std::move(values));
    }
};

struct Hyperparameters {
    int gb_rounds = 200;
    double gb_shrinkage = 0.1;
    int gb_depth = 4;
    int gb_min_leaf = 2;
    int rf_trees = 100;
    int rf_depth = 12;
    int rf_min_leaf = 2;
    int cart_depth = 8;
    int cart_min_leaf = 2;
    int cart_cv_folds = 5;
};

/// Axis-aligned binary split node. feature < 0 marks a leaf. Rows with
/// x[feature] <= threshold go left.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;

    bool is_leaf() const noexcept { return feature < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;

    double predict_row(const FeatureMatrix& features, std::size_t row) const;
};

struct TrainingMeta {
    std::uint64_t seed = 0;
    Hyperparameters params;
    /// In-sample squared error after each boosting round (gradient_boosting only).
    std::vector<double> boost_train_loss;
};

struct FittedModel {
    RegressorKind kind = RegressorKind::cart;
    std::vector<std::string> feature_names;
    std::vector<Tree> trees;
    double base_score = 0.0; // gradient boosting initial prediction
    double target_min = 0.0;
    double target_max = 0.0;
    TrainingMeta meta;
};

/// Trains the requested learner. Deterministic for a fixed seed. A constant
/// target yields a constant-predicting model; fewer than 4 rows is an error.
FittedModel fit(RegressorKind kind, const FeatureMatrix& features, std::uint64_t seed,
                const Hyperparameters& params = {});

/// One finite prediction per row. The feature schema must match training.
std::vector<double> predict(const FittedModel& model, const FeatureMatrix& features);

/// Self-describing JSON persistence. Doubles use shortest round-trip
/// formatting so save/load reproduces predictions bitwise.
void save_model(const FittedModel& model, const std::string& path);
FittedModel load_model(const std::string& path);

std::string model_to_json_string(const FittedModel& model);
FittedModel model_from_json_string(const std::string& text);

} // namespace telescope
