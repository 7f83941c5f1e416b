#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "telescope/regressors.hpp"
#include "telescope/rng.hpp"

using namespace telescope;

namespace {

FeatureMatrix pattern_features(std::size_t n, int period) {
    FeatureMatrix features;
    std::vector<double> season(n);
    for (std::size_t t = 0; t < n; ++t)
        season[t] = std::sin(2.0 * 3.14159265358979 * static_cast<double>(t % static_cast<std::size_t>(period)) /
                             static_cast<double>(period));
    features.add_column("season", std::move(season));
    return features;
}

FeatureMatrix random_features(std::size_t n, std::size_t p, std::uint64_t seed) {
    Rng rng(seed);
    FeatureMatrix features;
    for (std::size_t c = 0; c < p; ++c) {
        std::vector<double> column(n);
        for (auto& v : column) v = rng.uniform(-4.0, 4.0);
        features.add_column("f" + std::to_string(c), std::move(column));
    }
    features.target.resize(n);
    for (std::size_t r = 0; r < n; ++r)
        features.target[r] = features.at(r, 0) * 2.0 + std::abs(features.at(r, p / 2)) +
                             0.1 * rng.normal();
    return features;
}

} // namespace

TEST_CASE("constant target yields a constant model for every kind") {
    FeatureMatrix features = pattern_features(24, 6);
    features.target.assign(24, 5.0);
    for (const auto kind : all_regressor_kinds()) {
        const FittedModel model = fit(kind, features, 1);
        for (double v : predict(model, features)) CHECK(std::abs(v - 5.0) < 1e-9);
    }
}

TEST_CASE("gradient boosting drives a representable target to machine precision") {
    FeatureMatrix features = pattern_features(48, 12);
    features.target = features.columns[0]; // target equals the feature exactly
    const FittedModel model = fit(RegressorKind::gradient_boosting, features, 3);
    const auto prediction = predict(model, features);
    for (std::size_t r = 0; r < features.rows(); ++r)
        CHECK(std::abs(prediction[r] - features.target[r]) < 1e-6);
}

TEST_CASE("fit and predict are bitwise deterministic") {
    const FeatureMatrix features = random_features(80, 5, 99);
    for (const auto kind : all_regressor_kinds()) {
        const FittedModel a = fit(kind, features, 12345);
        const FittedModel b = fit(kind, features, 12345);
        CHECK(predict(a, features) == predict(b, features));
    }
}

TEST_CASE("zero boosting rounds predict the target mean") {
    FeatureMatrix features = pattern_features(20, 5);
    features.target.resize(20);
    double mean = 0.0;
    for (std::size_t t = 0; t < 20; ++t) {
        features.target[t] = static_cast<double>(t);
        mean += features.target[t];
    }
    mean /= 20.0;

    Hyperparameters params;
    params.gb_rounds = 0;
    const FittedModel model = fit(RegressorKind::gradient_boosting, features, 0, params);
    for (double v : predict(model, features)) CHECK(v == doctest::Approx(mean));
}

TEST_CASE("cart separates distinct rows exactly") {
    // two separable rows, each duplicated to satisfy the minimum row count
    FeatureMatrix features;
    features.add_column("x", {0.0, 0.0, 10.0, 10.0});
    features.target = {1.0, 1.0, 7.0, 7.0};
    const FittedModel model = fit(RegressorKind::cart, features, 0);
    const auto prediction = predict(model, features);
    for (std::size_t r = 0; r < 4; ++r)
        CHECK(prediction[r] == doctest::Approx(features.target[r]).epsilon(1e-12));
}

TEST_CASE("random forest prediction is the mean of its trees") {
    const FeatureMatrix features = random_features(60, 4, 5);
    const FittedModel model = fit(RegressorKind::random_forest, features, 17);
    const auto prediction = predict(model, features);
    for (std::size_t r = 0; r < features.rows(); ++r) {
        double acc = 0.0;
        for (const Tree& tree : model.trees) acc += tree.predict_row(features, r);
        acc /= static_cast<double>(model.trees.size());
        CHECK(std::abs(prediction[r] - acc) < 1e-12);
    }
}

TEST_CASE("boosting training loss is non-increasing") {
    const FeatureMatrix features = random_features(100, 6, 21);
    const FittedModel model = fit(RegressorKind::gradient_boosting, features, 4);
    REQUIRE(!model.meta.boost_train_loss.empty());
    for (std::size_t i = 1; i < model.meta.boost_train_loss.size(); ++i)
        CHECK(model.meta.boost_train_loss[i] <= model.meta.boost_train_loss[i - 1] + 1e-9);
}

TEST_CASE("predictions stay within the training target range") {
    for (const std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const FeatureMatrix train = random_features(120, 5, seed);
        const double lo = *std::min_element(train.target.begin(), train.target.end());
        const double hi = *std::max_element(train.target.begin(), train.target.end());

        FeatureMatrix probe = random_features(200, 5, seed + 1000);
        probe.target.clear();
        for (const auto kind : all_regressor_kinds()) {
            const FittedModel model = fit(kind, train, seed);
            for (double v : predict(model, probe)) {
                CHECK(v >= lo - 1e-12);
                CHECK(v <= hi + 1e-12);
            }
        }
    }
}

TEST_CASE("model persistence round-trips predictions bitwise") {
    const auto dir = std::filesystem::temp_directory_path() / "telescope_model_test";
    std::filesystem::create_directories(dir);

    const FeatureMatrix features = random_features(70, 5, 31);
    FeatureMatrix probe = random_features(25, 5, 32);
    probe.target.clear();

    for (const auto kind : all_regressor_kinds()) {
        const FittedModel model = fit(kind, features, 8);
        const std::string path =
            (dir / (std::string(to_string(kind)) + ".model.json")).string();
        save_model(model, path);
        const FittedModel loaded = load_model(path);
        CHECK(predict(loaded, probe) == predict(model, probe));
        CHECK(loaded.meta.seed == model.meta.seed);
        CHECK(loaded.meta.params.gb_rounds == model.meta.params.gb_rounds);
    }
}

TEST_CASE("predict rejects a schema mismatch") {
    const FeatureMatrix features = random_features(30, 3, 1);
    const FittedModel model = fit(RegressorKind::cart, features, 0);

    FeatureMatrix renamed = features;
    renamed.names[1] = "other";
    CHECK_THROWS_AS(predict(model, renamed), SchemaMismatchError);
}

TEST_CASE("training rejects degenerate inputs") {
    FeatureMatrix tiny;
    tiny.add_column("x", {1.0, 2.0, 3.0});
    tiny.target = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(fit(RegressorKind::cart, tiny, 0), TooShortError);

    FeatureMatrix no_target;
    no_target.add_column("x", {1.0, 2.0, 3.0, 4.0});
    CHECK_THROWS_AS(fit(RegressorKind::cart, no_target, 0), DataError);

    FeatureMatrix with_nan;
    with_nan.add_column("x", {1.0, 2.0, std::nan(""), 4.0});
    with_nan.target = {1.0, 2.0, 3.0, 4.0};
    CHECK_THROWS_AS(fit(RegressorKind::cart, with_nan, 0), DataError);
}
