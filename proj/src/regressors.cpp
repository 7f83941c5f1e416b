#include "telescope/regressors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <span>

#include <json.hpp>

#include "telescope/rng.hpp"

namespace telescope {

const char* to_string(RegressorKind kind) {
    switch (kind) {
    case RegressorKind::cart: return "cart";
    case RegressorKind::random_forest: return "random_forest";
    case RegressorKind::gradient_boosting: return "gradient_boosting";
    }
    return "unknown";
}

RegressorKind regressor_kind_from_string(const std::string& name) {
    if (name == "cart") return RegressorKind::cart;
    if (name == "random_forest") return RegressorKind::random_forest;
    if (name == "gradient_boosting") return RegressorKind::gradient_boosting;
    throw Error("unknown regressor kind: " + name);
}

const std::vector<RegressorKind>& all_regressor_kinds() {
    static const std::vector<RegressorKind> kinds{
        RegressorKind::cart, RegressorKind::random_forest, RegressorKind::gradient_boosting};
    return kinds;
}

double Tree::predict_row(const FeatureMatrix& features, std::size_t row) const {
    int node = 0;
    while (!nodes[static_cast<std::size_t>(node)].is_leaf()) {
        const TreeNode& n = nodes[static_cast<std::size_t>(node)];
        node = features.at(row, static_cast<std::size_t>(n.feature)) <= n.threshold ? n.left
                                                                                    : n.right;
    }
    return nodes[static_cast<std::size_t>(node)].value;
}

namespace {

void check_training_input(const FeatureMatrix& features) {
    if (features.cols() == 0) throw DataError("feature matrix has no columns");
    const std::size_t rows = features.rows();
    for (std::size_t c = 0; c < features.cols(); ++c) {
        if (features.columns[c].size() != rows)
            throw DataError("feature column length mismatch: " + features.names[c]);
        for (double v : features.columns[c])
            if (!std::isfinite(v)) throw DataError("non-finite feature value in " + features.names[c]);
    }
    if (features.target.empty()) throw DataError("feature matrix has no target");
    if (features.target.size() != rows) throw DataError("target length mismatch");
    for (double v : features.target)
        if (!std::isfinite(v)) throw DataError("non-finite target value");
    if (rows < 4) throw TooShortError("training requires at least 4 rows");
}

// Greedy variance-reduction tree growing on weighted rows, level-wise: each
// feature column is argsorted once per tree and every depth level costs one
// pass over (features x rows). Ties between splits of equal gain resolve to
// the lowest feature index, then the lowest threshold, because candidates are
// scanned in that order and only strictly better gains replace the incumbent.
class TreeBuilder {
public:
    TreeBuilder(const FeatureMatrix& features, std::span<const double> target,
                std::span<const double> weights, int max_depth, int min_leaf)
        : features_(features), target_(target), weights_(weights), max_depth_(max_depth),
          min_leaf_(static_cast<double>(min_leaf)) {}

    /// Enables per-split random feature subsets of the given size.
    void set_feature_sampling(int mtry, Rng* rng) {
        mtry_ = mtry;
        rng_ = rng;
    }

    /// Grows the tree and fills node_sse with each node's training SSE when
    /// collapsed to a leaf (used by cost-complexity pruning).
    Tree build(std::vector<std::size_t> rows, std::vector<double>* node_sse = nullptr) {
        const std::size_t p = features_.cols();

        // per-tree argsort of every feature column over the tree's rows,
        // (value, row) order for a deterministic scan
        std::vector<std::vector<std::uint32_t>> sorted(p);
        for (std::size_t f = 0; f < p; ++f) {
            auto& order = sorted[f];
            order.assign(rows.begin(), rows.end());
            const auto& column = features_.columns[f];
            std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
                return column[a] != column[b] ? column[a] < column[b] : a < b;
            });
        }

        Tree tree;
        std::vector<int> node_of(features_.rows(), -1);

        struct Active {
            int id;
            double sum_w, sum_wy, sum_wyy, sse;
            std::vector<int> mask; // candidate features, ascending
            Split best;
            // running scan state, reset per feature
            double left_w, left_wy, left_wyy, prev_value;
            bool started;
            int scan_feature;
        };

        const auto make_active = [&](int id, double sum_w, double sum_wy, double sum_wyy) {
            Active node;
            node.id = id;
            node.sum_w = sum_w;
            node.sum_wy = sum_wy;
            node.sum_wyy = sum_wyy;
            node.sse = std::max(0.0, sum_wyy - sum_wy * sum_wy / sum_w);
            node.mask = candidate_features();
            node.scan_feature = -1;
            tree.nodes[static_cast<std::size_t>(id)].value = sum_wy / sum_w;
            if (node_sse) (*node_sse)[static_cast<std::size_t>(id)] = node.sse;
            return node;
        };

        tree.nodes.emplace_back();
        if (node_sse) node_sse->push_back(0.0);
        double root_w = 0.0, root_wy = 0.0, root_wyy = 0.0;
        for (std::size_t r : rows) {
            node_of[r] = 0;
            root_w += weights_[r];
            root_wy += weights_[r] * target_[r];
            root_wyy += weights_[r] * target_[r] * target_[r];
        }
        std::vector<Active> level{make_active(0, root_w, root_wy, root_wyy)};

        for (int depth = 0; depth < max_depth_ && !level.empty(); ++depth) {
            std::vector<int> slot_of_node(tree.nodes.size(), -1);
            for (std::size_t s = 0; s < level.size(); ++s) {
                slot_of_node[static_cast<std::size_t>(level[s].id)] = static_cast<int>(s);
                level[s].best = Split{};
            }

            for (std::size_t f = 0; f < p; ++f) {
                const auto& column = features_.columns[f];
                for (const std::uint32_t r : sorted[f]) {
                    const int slot = slot_of_node[static_cast<std::size_t>(node_of[r])];
                    if (slot < 0) continue;
                    Active& node = level[static_cast<std::size_t>(slot)];
                    if (node.sum_w < 2.0 * min_leaf_ || node.sse <= 0.0) continue;
                    if (!std::binary_search(node.mask.begin(), node.mask.end(),
                                            static_cast<int>(f)))
                        continue;

                    if (node.scan_feature != static_cast<int>(f)) {
                        node.scan_feature = static_cast<int>(f);
                        node.left_w = node.left_wy = node.left_wyy = 0.0;
                        node.started = false;
                    }
                    const double value = column[r];
                    if (node.started && value != node.prev_value) {
                        const double right_w = node.sum_w - node.left_w;
                        if (node.left_w >= min_leaf_ && right_w >= min_leaf_) {
                            const double right_wy = node.sum_wy - node.left_wy;
                            const double left_sse = std::max(
                                0.0, node.left_wyy - node.left_wy * node.left_wy / node.left_w);
                            const double right_sse =
                                std::max(0.0, (node.sum_wyy - node.left_wyy) -
                                                  right_wy * right_wy / right_w);
                            const double gain = node.sse - left_sse - right_sse;
                            if (gain > node.best.gain && gain > node.sse * 1e-12) {
                                node.best.feature = static_cast<int>(f);
                                // midpoint may round up to `value` when the two
                                // are one ulp apart; the cut must stay below it
                                double threshold =
                                    node.prev_value + 0.5 * (value - node.prev_value);
                                if (!(threshold < value)) threshold = node.prev_value;
                                node.best.threshold = threshold;
                                node.best.gain = gain;
                            }
                        }
                    }
                    node.left_w += weights_[r];
                    node.left_wy += weights_[r] * target_[r];
                    node.left_wyy += weights_[r] * target_[r] * target_[r];
                    node.prev_value = value;
                    node.started = true;
                }
            }

            // materialise the accepted splits; children are created in level
            // order so node ids (and the RNG draws above) stay deterministic
            struct ChildPair {
                int left, right;
            };
            std::vector<ChildPair> children(level.size(), {-1, -1});
            for (std::size_t s = 0; s < level.size(); ++s) {
                if (level[s].best.feature < 0) continue;
                const int left_id = static_cast<int>(tree.nodes.size());
                tree.nodes.emplace_back();
                tree.nodes.emplace_back();
                if (node_sse) {
                    node_sse->push_back(0.0);
                    node_sse->push_back(0.0);
                }
                TreeNode& parent = tree.nodes[static_cast<std::size_t>(level[s].id)];
                parent.feature = level[s].best.feature;
                parent.threshold = level[s].best.threshold;
                parent.left = left_id;
                parent.right = left_id + 1;
                children[s] = {left_id, left_id + 1};
            }

            struct Stats {
                double w = 0.0, wy = 0.0, wyy = 0.0;
            };
            std::vector<Stats> child_stats(2 * level.size());
            for (const std::uint32_t r : sorted[0]) {
                const int slot = slot_of_node[static_cast<std::size_t>(node_of[r])];
                if (slot < 0 || children[static_cast<std::size_t>(slot)].left < 0) continue;
                const Active& node = level[static_cast<std::size_t>(slot)];
                const TreeNode& parent = tree.nodes[static_cast<std::size_t>(node.id)];
                const bool go_left =
                    features_.at(r, static_cast<std::size_t>(parent.feature)) <= parent.threshold;
                node_of[r] = go_left ? parent.left : parent.right;
                Stats& stats =
                    child_stats[2 * static_cast<std::size_t>(slot) + (go_left ? 0 : 1)];
                stats.w += weights_[r];
                stats.wy += weights_[r] * target_[r];
                stats.wyy += weights_[r] * target_[r] * target_[r];
            }

            std::vector<Active> next;
            next.reserve(2 * level.size());
            for (std::size_t s = 0; s < level.size(); ++s) {
                if (children[s].left < 0) continue;
                next.push_back(make_active(children[s].left, child_stats[2 * s].w,
                                           child_stats[2 * s].wy, child_stats[2 * s].wyy));
                next.push_back(make_active(children[s].right, child_stats[2 * s + 1].w,
                                           child_stats[2 * s + 1].wy, child_stats[2 * s + 1].wyy));
            }
            level = std::move(next);
        }
        return tree;
    }

private:
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double gain = 0.0;
    };

    std::vector<int> candidate_features() {
        const int p = static_cast<int>(features_.cols());
        std::vector<int> all(static_cast<std::size_t>(p));
        std::iota(all.begin(), all.end(), 0);
        if (mtry_ <= 0 || mtry_ >= p || rng_ == nullptr) return all;
        // Partial Fisher-Yates, then ascending order so the scan keeps the
        // lowest-index tie-break.
        for (int i = 0; i < mtry_; ++i) {
            const auto j = static_cast<std::size_t>(rng_->uniform_int(i, p - 1));
            std::swap(all[static_cast<std::size_t>(i)], all[j]);
        }
        all.resize(static_cast<std::size_t>(mtry_));
        std::sort(all.begin(), all.end());
        return all;
    }

    const FeatureMatrix& features_;
    std::span<const double> target_;
    std::span<const double> weights_;
    int max_depth_;
    double min_leaf_;
    int mtry_ = 0;
    Rng* rng_ = nullptr;
};

// ---------------------------------------------------------------------------
// Cost-complexity pruning
// ---------------------------------------------------------------------------

struct SubtreeStats {
    double r_subtree = 0.0;
    int leaves = 0;
};

// Post-order accumulation of subtree risk and leaf counts, honouring an
// overlay of collapsed nodes.
SubtreeStats subtree_stats(const Tree& tree, const std::vector<double>& node_sse,
                           const std::vector<bool>& collapsed, int node,
                           std::vector<double>& g_out) {
    const TreeNode& n = tree.nodes[static_cast<std::size_t>(node)];
    if (n.is_leaf() || collapsed[static_cast<std::size_t>(node)]) {
        return {node_sse[static_cast<std::size_t>(node)], 1};
    }
    const SubtreeStats left = subtree_stats(tree, node_sse, collapsed, n.left, g_out);
    const SubtreeStats right = subtree_stats(tree, node_sse, collapsed, n.right, g_out);
    SubtreeStats total{left.r_subtree + right.r_subtree, left.leaves + right.leaves};
    const double r_node = node_sse[static_cast<std::size_t>(node)];
    g_out[static_cast<std::size_t>(node)] =
        (r_node - total.r_subtree) / static_cast<double>(total.leaves - 1);
    return total;
}

// Weakest-link pruning at complexity alpha: repeatedly collapse the nodes
// holding the minimum g while that minimum stays below alpha. Only the
// minimum may collapse per pass: a root with many leaves can have a smaller
// g than a strong subtree split, and the g values rise as weaker links go.
void collapse_to_alpha(const Tree& tree, const std::vector<double>& node_sse, double alpha,
                       std::vector<bool>& collapsed) {
    const double eps = 1e-12;
    while (!collapsed[0] && !tree.nodes[0].is_leaf()) {
        std::vector<double> g(tree.nodes.size(), std::numeric_limits<double>::infinity());
        subtree_stats(tree, node_sse, collapsed, 0, g);
        double g_min = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < tree.nodes.size(); ++i)
            if (!tree.nodes[i].is_leaf() && !collapsed[i]) g_min = std::min(g_min, g[i]);
        if (!std::isfinite(g_min) || g_min > alpha + eps) return;
        for (std::size_t i = 0; i < tree.nodes.size(); ++i)
            if (!tree.nodes[i].is_leaf() && !collapsed[i] && g[i] <= g_min + eps)
                collapsed[i] = true;
    }
}

// Weakest-link alpha sequence of the fully grown tree, starting at 0.
std::vector<double> prune_alphas(const Tree& tree, const std::vector<double>& node_sse) {
    std::vector<double> alphas{0.0};
    std::vector<bool> collapsed(tree.nodes.size(), false);
    if (tree.nodes[0].is_leaf()) return alphas;
    while (!collapsed[0]) {
        std::vector<double> g(tree.nodes.size(), std::numeric_limits<double>::infinity());
        subtree_stats(tree, node_sse, collapsed, 0, g);
        double g_min = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < tree.nodes.size(); ++i)
            if (!tree.nodes[i].is_leaf() && !collapsed[i]) g_min = std::min(g_min, g[i]);
        if (!std::isfinite(g_min)) break;
        for (std::size_t i = 0; i < tree.nodes.size(); ++i)
            if (!tree.nodes[i].is_leaf() && !collapsed[i] && g[i] <= g_min + 1e-12)
                collapsed[i] = true;
        alphas.push_back(std::max(g_min, alphas.back()));
    }
    return alphas;
}

double predict_collapsed(const Tree& tree, const std::vector<bool>& collapsed,
                         const FeatureMatrix& features, std::size_t row) {
    int node = 0;
    while (!tree.nodes[static_cast<std::size_t>(node)].is_leaf() &&
           !collapsed[static_cast<std::size_t>(node)]) {
        const TreeNode& n = tree.nodes[static_cast<std::size_t>(node)];
        node = features.at(row, static_cast<std::size_t>(n.feature)) <= n.threshold ? n.left
                                                                                    : n.right;
    }
    return tree.nodes[static_cast<std::size_t>(node)].value;
}

// Rebuilds a compact tree with collapsed subtrees dropped.
Tree compact_tree(const Tree& tree, const std::vector<bool>& collapsed) {
    Tree out;
    struct Item {
        int src;
        int dst;
    };
    out.nodes.push_back(tree.nodes[0]);
    std::vector<Item> stack{{0, 0}};
    while (!stack.empty()) {
        const Item item = stack.back();
        stack.pop_back();
        const TreeNode& src = tree.nodes[static_cast<std::size_t>(item.src)];
        TreeNode& dst = out.nodes[static_cast<std::size_t>(item.dst)];
        if (src.is_leaf() || collapsed[static_cast<std::size_t>(item.src)]) {
            dst.feature = -1;
            dst.left = dst.right = -1;
            continue;
        }
        dst.left = static_cast<int>(out.nodes.size());
        dst.right = dst.left + 1;
        out.nodes.push_back(tree.nodes[static_cast<std::size_t>(src.left)]);
        out.nodes.push_back(tree.nodes[static_cast<std::size_t>(src.right)]);
        stack.push_back({src.right, dst.right});
        stack.push_back({src.left, dst.left});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Learners
// ---------------------------------------------------------------------------

std::vector<std::size_t> all_rows(std::size_t n) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
}

FittedModel fit_cart(const FeatureMatrix& features, std::uint64_t seed,
                     const Hyperparameters& params) {
    const std::size_t n = features.rows();
    const std::vector<double> unit_weights(n, 1.0);

    std::vector<double> node_sse;
    TreeBuilder builder(features, features.target, unit_weights, params.cart_depth,
                        params.cart_min_leaf);
    Tree full = builder.build(all_rows(n), &node_sse);

    FittedModel model;
    model.kind = RegressorKind::cart;
    model.feature_names = features.names;
    model.meta.seed = seed;
    model.meta.params = params;

    const int folds = params.cart_cv_folds;
    if (full.nodes[0].is_leaf() || folds < 2 || n < static_cast<std::size_t>(2 * folds)) {
        model.trees.push_back(std::move(full));
        return model;
    }

    // Candidate alphas: geometric midpoints of the weakest-link sequence plus
    // an everything-collapses endpoint.
    const std::vector<double> alphas = prune_alphas(full, node_sse);
    std::vector<double> candidates;
    for (std::size_t i = 0; i + 1 < alphas.size(); ++i) {
        candidates.push_back(alphas[i] == 0.0 ? 0.5 * alphas[i + 1]
                                              : std::sqrt(alphas[i] * alphas[i + 1]));
    }
    candidates.insert(candidates.begin(), 0.0);
    candidates.push_back(alphas.back() * 1.5 + 1e-9);

    // Deterministic fold assignment from a seeded shuffle.
    Rng fold_rng = Rng(seed).split(0x0f01d5);
    std::vector<std::size_t> perm = all_rows(n);
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(fold_rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
        std::swap(perm[i - 1], perm[j]);
    }
    std::vector<int> fold_of(n);
    for (std::size_t i = 0; i < n; ++i) fold_of[perm[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));

    std::vector<std::vector<double>> fold_mse(static_cast<std::size_t>(folds),
                                              std::vector<double>(candidates.size(), 0.0));
    for (int f = 0; f < folds; ++f) {
        std::vector<std::size_t> train_rows, test_rows;
        for (std::size_t i = 0; i < n; ++i)
            (fold_of[i] == f ? test_rows : train_rows).push_back(i);
        if (train_rows.size() < 4 || test_rows.empty()) continue;

        std::vector<double> fold_sse;
        TreeBuilder fold_builder(features, features.target, unit_weights, params.cart_depth,
                                 params.cart_min_leaf);
        Tree fold_tree = fold_builder.build(train_rows, &fold_sse);

        std::vector<bool> collapsed(fold_tree.nodes.size(), false);
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            // candidates ascend, so collapsing accumulates monotonically
            collapse_to_alpha(fold_tree, fold_sse, candidates[c], collapsed);
            double sse = 0.0;
            for (std::size_t r : test_rows) {
                const double err =
                    features.target[r] - predict_collapsed(fold_tree, collapsed, features, r);
                sse += err * err;
            }
            fold_mse[static_cast<std::size_t>(f)][c] = sse / static_cast<double>(test_rows.size());
        }
    }

    std::vector<double> cv(candidates.size(), 0.0), se(candidates.size(), 0.0);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        double mean = 0.0;
        for (int f = 0; f < folds; ++f) mean += fold_mse[static_cast<std::size_t>(f)][c];
        mean /= static_cast<double>(folds);
        double var = 0.0;
        for (int f = 0; f < folds; ++f) {
            const double d = fold_mse[static_cast<std::size_t>(f)][c] - mean;
            var += d * d;
        }
        var /= static_cast<double>(folds - 1);
        cv[c] = mean;
        se[c] = std::sqrt(var / static_cast<double>(folds));
    }

    std::size_t best = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c)
        if (cv[c] < cv[best]) best = c;
    const double limit = cv[best] + se[best];
    std::size_t chosen = best;
    for (std::size_t c = candidates.size(); c-- > 0;) {
        if (cv[c] <= limit) {
            chosen = c; // largest alpha within one SE of the minimum
            break;
        }
    }

    std::vector<bool> collapsed(full.nodes.size(), false);
    collapse_to_alpha(full, node_sse, candidates[chosen], collapsed);
    model.trees.push_back(compact_tree(full, collapsed));
    return model;
}

FittedModel fit_random_forest(const FeatureMatrix& features, std::uint64_t seed,
                              const Hyperparameters& params) {
    const std::size_t n = features.rows();
    const int p = static_cast<int>(features.cols());
    const int mtry = std::max(1, (p + 2) / 3); // ceil(p/3)

    FittedModel model;
    model.kind = RegressorKind::random_forest;
    model.feature_names = features.names;
    model.meta.seed = seed;
    model.meta.params = params;
    model.trees.reserve(static_cast<std::size_t>(params.rf_trees));

    const Rng root(seed);
    for (int b = 0; b < params.rf_trees; ++b) {
        // One independent stream per tree: the forest is reproducible no
        // matter how trees would be scheduled.
        Rng tree_rng = root.split(static_cast<std::uint64_t>(b) + 1);

        std::vector<double> weights(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            weights[static_cast<std::size_t>(
                tree_rng.uniform_int(0, static_cast<std::int64_t>(n) - 1))] += 1.0;
        std::vector<std::size_t> rows;
        rows.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            if (weights[i] > 0.0) rows.push_back(i);

        TreeBuilder builder(features, features.target, weights, params.rf_depth,
                            params.rf_min_leaf);
        builder.set_feature_sampling(mtry, &tree_rng);
        model.trees.push_back(builder.build(std::move(rows)));
    }
    return model;
}

FittedModel fit_gradient_boosting(const FeatureMatrix& features, std::uint64_t seed,
                                  const Hyperparameters& params) {
    const std::size_t n = features.rows();
    const std::vector<double> unit_weights(n, 1.0);

    FittedModel model;
    model.kind = RegressorKind::gradient_boosting;
    model.feature_names = features.names;
    model.meta.seed = seed;
    model.meta.params = params;

    double base = 0.0;
    for (double y : features.target) base += y;
    base /= static_cast<double>(n);
    model.base_score = base;

    std::vector<double> prediction(n, base);
    std::vector<double> residual(n);
    model.meta.boost_train_loss.reserve(static_cast<std::size_t>(params.gb_rounds));
    model.trees.reserve(static_cast<std::size_t>(params.gb_rounds));

    for (int round = 0; round < params.gb_rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i) residual[i] = features.target[i] - prediction[i];

        TreeBuilder builder(features, residual, unit_weights, params.gb_depth, params.gb_min_leaf);
        Tree tree = builder.build(all_rows(n));
        // Shrinkage is baked into the stored leaf values.
        for (auto& node : tree.nodes) node.value *= params.gb_shrinkage;

        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            prediction[i] += tree.predict_row(features, i);
            const double err = features.target[i] - prediction[i];
            loss += err * err;
        }
        model.meta.boost_train_loss.push_back(loss);
        model.trees.push_back(std::move(tree));
    }
    return model;
}

} // namespace

FittedModel fit(RegressorKind kind, const FeatureMatrix& features, std::uint64_t seed,
                const Hyperparameters& params) {
    check_training_input(features);

    FittedModel model;
    switch (kind) {
    case RegressorKind::cart: model = fit_cart(features, seed, params); break;
    case RegressorKind::random_forest: model = fit_random_forest(features, seed, params); break;
    case RegressorKind::gradient_boosting:
        model = fit_gradient_boosting(features, seed, params);
        break;
    }
    const auto [lo, hi] = std::minmax_element(features.target.begin(), features.target.end());
    model.target_min = *lo;
    model.target_max = *hi;
    return model;
}

std::vector<double> predict(const FittedModel& model, const FeatureMatrix& features) {
    if (features.names != model.feature_names)
        throw SchemaMismatchError("feature columns do not match the training schema");
    const std::size_t n = features.rows();
    std::vector<double> out(n, 0.0);

    switch (model.kind) {
    case RegressorKind::cart:
        for (std::size_t r = 0; r < n; ++r) out[r] = model.trees.front().predict_row(features, r);
        break;
    case RegressorKind::random_forest:
        for (std::size_t r = 0; r < n; ++r) {
            double acc = 0.0;
            for (const Tree& tree : model.trees) acc += tree.predict_row(features, r);
            out[r] = acc / static_cast<double>(model.trees.size());
        }
        break;
    case RegressorKind::gradient_boosting:
        for (std::size_t r = 0; r < n; ++r) {
            double acc = model.base_score;
            for (const Tree& tree : model.trees) acc += tree.predict_row(features, r);
            // Leaf means cannot leave the training target range for single
            // trees; the boosted sum is clamped to keep the same guarantee.
            out[r] = std::clamp(acc, model.target_min, model.target_max);
        }
        break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

namespace {

nlohmann::json params_to_json(const Hyperparameters& p) {
    return {{"gb_rounds", p.gb_rounds},   {"gb_shrinkage", p.gb_shrinkage},
            {"gb_depth", p.gb_depth},     {"gb_min_leaf", p.gb_min_leaf},
            {"rf_trees", p.rf_trees},     {"rf_depth", p.rf_depth},
            {"rf_min_leaf", p.rf_min_leaf},{"cart_depth", p.cart_depth},
            {"cart_min_leaf", p.cart_min_leaf}, {"cart_cv_folds", p.cart_cv_folds}};
}

Hyperparameters params_from_json(const nlohmann::json& j) {
    Hyperparameters p;
    p.gb_rounds = j.at("gb_rounds");
    p.gb_shrinkage = j.at("gb_shrinkage");
    p.gb_depth = j.at("gb_depth");
    p.gb_min_leaf = j.at("gb_min_leaf");
    p.rf_trees = j.at("rf_trees");
    p.rf_depth = j.at("rf_depth");
    p.rf_min_leaf = j.at("rf_min_leaf");
    p.cart_depth = j.at("cart_depth");
    p.cart_min_leaf = j.at("cart_min_leaf");
    p.cart_cv_folds = j.at("cart_cv_folds");
    return p;
}

} // namespace

nlohmann::json model_to_json(const FittedModel& model) {
    nlohmann::json trees = nlohmann::json::array();
    for (const Tree& tree : model.trees) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const TreeNode& n : tree.nodes) {
            if (n.is_leaf()) {
                nodes.push_back({{"value", n.value}});
            } else {
                nodes.push_back({{"split", model.feature_names[static_cast<std::size_t>(n.feature)]},
                                 {"threshold", n.threshold},
                                 {"left", n.left},
                                 {"right", n.right},
                                 {"value", n.value}});
            }
        }
        trees.push_back({{"nodes", std::move(nodes)}});
    }
    return {{"format", "telescope-regressor"},
            {"kind", to_string(model.kind)},
            {"seed", model.meta.seed},
            {"hyperparameters", params_to_json(model.meta.params)},
            {"feature_names", model.feature_names},
            {"base_score", model.base_score},
            {"target_min", model.target_min},
            {"target_max", model.target_max},
            {"boost_train_loss", model.meta.boost_train_loss},
            {"trees", std::move(trees)}};
}

FittedModel model_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "telescope-regressor")
        throw DataError("not a telescope regressor model");
    FittedModel model;
    model.kind = regressor_kind_from_string(j.at("kind"));
    model.meta.seed = j.at("seed");
    model.meta.params = params_from_json(j.at("hyperparameters"));
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    model.base_score = j.at("base_score");
    model.target_min = j.at("target_min");
    model.target_max = j.at("target_max");
    model.meta.boost_train_loss = j.at("boost_train_loss").get<std::vector<double>>();

    for (const auto& jtree : j.at("trees")) {
        Tree tree;
        for (const auto& jnode : jtree.at("nodes")) {
            TreeNode node;
            node.value = jnode.at("value");
            if (jnode.contains("split")) {
                const std::string name = jnode.at("split");
                const auto it =
                    std::find(model.feature_names.begin(), model.feature_names.end(), name);
                if (it == model.feature_names.end())
                    throw DataError("model references unknown feature: " + name);
                node.feature = static_cast<int>(it - model.feature_names.begin());
                node.threshold = jnode.at("threshold");
                node.left = jnode.at("left");
                node.right = jnode.at("right");
            }
            tree.nodes.push_back(node);
        }
        model.trees.push_back(std::move(tree));
    }
    return model;
}

std::string model_to_json_string(const FittedModel& model) {
    return model_to_json(model).dump(1);
}

FittedModel model_from_json_string(const std::string& text) {
    return model_from_json(nlohmann::json::parse(text));
}

void save_model(const FittedModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open output file: " + path);
    out << model_to_json_string(model) << '\n';
}

FittedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    nlohmann::json j;
    in >> j;
    return model_from_json(j);
}

} // namespace telescope
