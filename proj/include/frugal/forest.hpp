#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "frugal/data.hpp"
#include "frugal/errors.hpp"
#include "frugal/rng.hpp"

namespace frugal {

struct ForestConfig {
    int n_trees = 200;
    int max_features = 5;
    std::optional<int> max_depth;  // unset = grow until pure
    int min_samples_split = 2;
    std::uint64_t seed = 0;
};

// Per-class probability vector, aligned with the model's class list.
struct ClassProbabilities {
    std::vector<double> probs;
};

struct TreeNode {
    int feature = -1;  // split feature; -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<double> class_proportions;  // leaves only; sums to 1
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    const TreeNode& leaf_for(const Eigen::VectorXd& x) const {
        int idx = 0;
        while (nodes[idx].feature >= 0) {
            idx = x[nodes[idx].feature] <= nodes[idx].threshold ? nodes[idx].left : nodes[idx].right;
        }
        return nodes[idx];
    }
};

struct ForestModel {
    std::vector<DecisionTree> trees;
    std::vector<int> classes;  // ordered label list
    int n_features = 0;
};

namespace detail {

struct SplitCandidate {
    bool valid = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = -1.0;

    // Gini tie-break: lowest feature index, then lowest threshold.
    bool beats(const SplitCandidate& other) const {
        if (!valid) return false;
        if (!other.valid) return true;
        if (gain != other.gain) return gain > other.gain;
        if (feature != other.feature) return feature < other.feature;
        return threshold < other.threshold;
    }
};

inline double gini(const std::vector<int>& counts, int total) {
    double impurity = 1.0;
    for (int c : counts) {
        const double p = static_cast<double>(c) / total;
        impurity -= p * p;
    }
    return impurity;
}

class TreeBuilder {
public:
    TreeBuilder(const Eigen::MatrixXd& x, const std::vector<int>& class_index, int n_classes,
                const ForestConfig& config, Rng& rng)
        : x_(x), class_index_(class_index), n_classes_(n_classes), config_(config), rng_(rng) {}

    DecisionTree build(std::vector<int> indices) {
        DecisionTree tree;
        grow(tree, std::move(indices), 0);
        return tree;
    }

private:
    int grow(DecisionTree& tree, std::vector<int> indices, int depth) {
        const int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();

        std::vector<int> counts(n_classes_, 0);
        for (int i : indices) ++counts[class_index_[i]];
        const int total = static_cast<int>(indices.size());

        const bool pure = *std::max_element(counts.begin(), counts.end()) == total;
        const bool depth_capped = config_.max_depth && depth >= *config_.max_depth;
        SplitCandidate best;
        if (!pure && !depth_capped && total >= config_.min_samples_split) {
            best = best_split(indices, counts, total);
        }
        if (!best.valid) {
            TreeNode& leaf = tree.nodes[node_id];
            leaf.class_proportions.resize(n_classes_);
            for (int c = 0; c < n_classes_; ++c) {
                leaf.class_proportions[c] = static_cast<double>(counts[c]) / total;
            }
            return node_id;
        }

        std::vector<int> left_idx;
        std::vector<int> right_idx;
        left_idx.reserve(indices.size());
        right_idx.reserve(indices.size());
        for (int i : indices) {
            (x_(i, best.feature) <= best.threshold ? left_idx : right_idx).push_back(i);
        }
        indices.clear();
        indices.shrink_to_fit();

        const int left = grow(tree, std::move(left_idx), depth + 1);
        const int right = grow(tree, std::move(right_idx), depth + 1);
        TreeNode& node = tree.nodes[node_id];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = left;
        node.right = right;
        return node_id;
    }

    SplitCandidate best_split(const std::vector<int>& indices, const std::vector<int>& counts, int total) {
        const int d = static_cast<int>(x_.cols());
        // Sample max_features features without replacement, evaluated in
        // ascending index order so ties resolve deterministically.
        std::vector<int> features(d);
        for (int f = 0; f < d; ++f) features[f] = f;
        const int mf = std::min(config_.max_features, d);
        for (int i = 0; i < mf; ++i) {
            const std::size_t j = i + rng_.uniform_index(static_cast<std::size_t>(d - i));
            std::swap(features[i], features[j]);
        }
        features.resize(mf);
        std::sort(features.begin(), features.end());

        const double parent_impurity = gini(counts, total);
        SplitCandidate best;
        std::vector<std::pair<double, int>> values(indices.size());
        std::vector<int> left_counts(n_classes_);
        for (int f : features) {
            for (std::size_t k = 0; k < indices.size(); ++k) {
                values[k] = {x_(indices[k], f), class_index_[indices[k]]};
            }
            std::sort(values.begin(), values.end());

            std::fill(left_counts.begin(), left_counts.end(), 0);
            int n_left = 0;
            for (std::size_t k = 0; k + 1 < values.size(); ++k) {
                ++left_counts[values[k].second];
                ++n_left;
                if (values[k].first == values[k + 1].first) continue;

                double left_impurity = 1.0;
                double right_impurity = 1.0;
                const int n_right = total - n_left;
                for (int c = 0; c < n_classes_; ++c) {
                    const double pl = static_cast<double>(left_counts[c]) / n_left;
                    const double pr = static_cast<double>(counts[c] - left_counts[c]) / n_right;
                    left_impurity -= pl * pl;
                    right_impurity -= pr * pr;
                }
                SplitCandidate candidate;
                candidate.valid = true;
                candidate.feature = f;
                candidate.threshold = 0.5 * (values[k].first + values[k + 1].first);
                candidate.gain = parent_impurity -
                                 (n_left * left_impurity + n_right * right_impurity) / total;
                if (candidate.beats(best)) best = candidate;
            }
        }
        return best;
    }

    const Eigen::MatrixXd& x_;
    const std::vector<int>& class_index_;
    int n_classes_;
    const ForestConfig& config_;
    Rng& rng_;
};

}  // namespace detail

// Trains n_trees CART trees, each on a same-size bootstrap resample, with
// max_features candidate features per node and Gini-decrease splits.
inline ForestModel forest_fit(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                              const ForestConfig& config) {
    const int n = static_cast<int>(features.rows());
    if (n == 0) throw Error("forest_fit: empty training set");
    if (static_cast<int>(labels.size()) != n) {
        throw ShapeError("forest_fit: feature rows and label count differ");
    }
    if (config.n_trees < 1) throw ConfigError("forest_fit: n_trees must be >= 1");
    if (config.max_features < 1 || config.max_features > features.cols()) {
        throw ConfigError("forest_fit: max_features must lie in [1, D]");
    }
    if (config.min_samples_split < 1) throw ConfigError("forest_fit: min_samples_split must be >= 1");

    ForestModel model;
    model.n_features = static_cast<int>(features.cols());
    model.classes = labels;
    std::sort(model.classes.begin(), model.classes.end());
    model.classes.erase(std::unique(model.classes.begin(), model.classes.end()), model.classes.end());

    std::vector<int> class_index(n);
    for (int i = 0; i < n; ++i) {
        class_index[i] = static_cast<int>(
            std::lower_bound(model.classes.begin(), model.classes.end(), labels[i]) - model.classes.begin());
    }

    model.trees.reserve(config.n_trees);
    for (int t = 0; t < config.n_trees; ++t) {
        Rng tree_rng(derive_seed(config.seed, "tree", static_cast<std::uint64_t>(t)));
        std::vector<int> bootstrap(n);
        for (int i = 0; i < n; ++i) {
            bootstrap[i] = static_cast<int>(tree_rng.uniform_index(static_cast<std::size_t>(n)));
        }
        detail::TreeBuilder builder(features, class_index, static_cast<int>(model.classes.size()), config,
                                    tree_rng);
        model.trees.push_back(builder.build(std::move(bootstrap)));
    }
    return model;
}

// Mean over trees of the leaf class-proportion vector reached by `x`.
inline ClassProbabilities forest_predict_proba(const ForestModel& model, const Eigen::VectorXd& x) {
    if (x.size() != model.n_features) {
        throw ShapeError("forest_predict_proba: expected " + std::to_string(model.n_features) +
                         " features, got " + std::to_string(x.size()));
    }
    ClassProbabilities result;
    result.probs.assign(model.classes.size(), 0.0);
    for (const DecisionTree& tree : model.trees) {
        const TreeNode& leaf = tree.leaf_for(x);
        for (std::size_t c = 0; c < result.probs.size(); ++c) result.probs[c] += leaf.class_proportions[c];
    }
    for (double& p : result.probs) p /= static_cast<double>(model.trees.size());
    return result;
}

// Argmax class for `x`; probability ties break toward the lower class label.
inline int forest_predict(const ForestModel& model, const Eigen::VectorXd& x) {
    const ClassProbabilities p = forest_predict_proba(model, x);
    std::size_t best = 0;
    for (std::size_t c = 1; c < p.probs.size(); ++c) {
        if (p.probs[c] > p.probs[best]) best = c;
    }
    return model.classes[best];
}

// Fraction of all dataset samples whose predicted label matches the truth.
inline double forest_accuracy(const ForestModel& model, const Dataset& dataset) {
    int correct = 0;
    for (const Sample& s : dataset.samples) {
        if (forest_predict(model, s.features) == s.label) ++correct;
    }
    return static_cast<double>(correct) / dataset.n();
}

}  // namespace frugal
