#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "misinfo/common.hpp"
#include "misinfo/pipeline.hpp"
#include "misinfo/rng.hpp"

namespace misinfo::models {

enum class Algorithm { naive_bayes, logistic_regression, linear_svm, sgd, random_forest };

inline Algorithm algorithm_from_string(const std::string& s) {
    if (s == "naive_bayes") return Algorithm::naive_bayes;
    if (s == "logistic_regression") return Algorithm::logistic_regression;
    if (s == "linear_svm") return Algorithm::linear_svm;
    if (s == "sgd") return Algorithm::sgd;
    if (s == "random_forest") return Algorithm::random_forest;
    throw ConfigError("unknown algorithm '" + s + "'");
}

inline std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::naive_bayes: return "naive_bayes";
        case Algorithm::logistic_regression: return "logistic_regression";
        case Algorithm::linear_svm: return "linear_svm";
        case Algorithm::sgd: return "sgd";
        case Algorithm::random_forest: return "random_forest";
    }
    return "naive_bayes";
}

struct Hyperparams {
    double nb_alpha = 1.0;          // additive smoothing
    double l2_lambda = 1e-4;        // L2 strength for the linear models
    double learning_rate = 0.1;     // LR full-batch step; SGD eta0
    std::size_t epochs = 200;       // logistic_regression / linear_svm
    std::size_t sgd_epochs = 20;
    double gradient_tolerance = 1e-6;
    std::size_t rf_trees = 100;
    std::size_t rf_max_depth = 0;       // 0 = grow to purity
    std::size_t rf_features_per_split = 0;  // 0 = floor(sqrt(n_features)), min 1
    bool rf_bootstrap = true;

    friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

struct ModelSpec {
    Algorithm algorithm = Algorithm::logistic_regression;
    Hyperparams params;
    std::uint64_t seed = 0;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Per-algorithm defaults. The linear SVM needs a stronger regularizer and
// more rounds than the other linear models: its 1/(lambda*t) step schedule
// converges on the order of 1/lambda iterations, so the shared
// lambda=1e-4 / 200-epoch setting would leave it far from the optimum.
inline ModelSpec default_spec(Algorithm alg) {
    ModelSpec s;
    s.algorithm = alg;
    if (alg == Algorithm::linear_svm) {
        s.params.l2_lambda = 1e-2;
        s.params.epochs = 500;
    }
    return s;
}

namespace detail {

inline double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

inline double dot_row(const pipeline::FeatureMatrix& X, std::size_t r,
                      std::span<const double> w) {
    double s = 0.0;
    const double* row = X.values.data() + r * X.n_cols;
    for (std::size_t c = 0; c < X.n_cols; ++c) s += row[c] * w[c];
    return s;
}

}  // namespace detail

// ---- Naive Bayes (multinomial event model) --------------------------------

struct NaiveBayesParams {
    double log_prior[2] = {0.0, 0.0};
    std::vector<double> feature_log_likelihood[2];  // per class, per column
};

// ---- Linear models ---------------------------------------------------------

struct LinearParams {
    std::vector<double> weights;
    double bias = 0.0;
};

// L2-regularized log-loss (bias unregularized); the training objective of
// logistic_regression and the function the finite-difference check probes.
inline double logreg_loss(const pipeline::FeatureMatrix& X, std::span<const int> y,
                          std::span<const double> w, double b, double lambda) {
    const auto n = static_cast<double>(X.n_rows);
    double loss = 0.0;
    for (std::size_t i = 0; i < X.n_rows; ++i) {
        const double z = detail::dot_row(X, i, w) + b;
        // -[y ln p + (1-y) ln(1-p)] in a numerically stable form
        const double zy = y[i] == 1 ? z : -z;
        loss += zy >= 0.0 ? std::log1p(std::exp(-zy)) : -zy + std::log1p(std::exp(zy));
    }
    loss /= n;
    double reg = 0.0;
    for (double v : w) reg += v * v;
    return loss + 0.5 * lambda * reg;
}

// Gradient of logreg_loss; returns d/dw (size n_cols) and d/db.
inline std::pair<std::vector<double>, double> logreg_gradient(const pipeline::FeatureMatrix& X,
                                                              std::span<const int> y,
                                                              std::span<const double> w, double b,
                                                              double lambda) {
    const auto n = static_cast<double>(X.n_rows);
    std::vector<double> gw(X.n_cols, 0.0);
    double gb = 0.0;
    for (std::size_t i = 0; i < X.n_rows; ++i) {
        const double p = detail::sigmoid(detail::dot_row(X, i, w) + b);
        const double err = p - (y[i] == 1 ? 1.0 : 0.0);
        const double* row = X.values.data() + i * X.n_cols;
        for (std::size_t c = 0; c < X.n_cols; ++c) gw[c] += err * row[c];
        gb += err;
    }
    for (std::size_t c = 0; c < X.n_cols; ++c) gw[c] = gw[c] / n + lambda * w[c];
    return {std::move(gw), gb / n};
}

// Regularized hinge objective of the linear SVM.
inline double svm_objective(const pipeline::FeatureMatrix& X, std::span<const int> y,
                            std::span<const double> w, double b, double lambda) {
    const auto n = static_cast<double>(X.n_rows);
    double hinge = 0.0;
    for (std::size_t i = 0; i < X.n_rows; ++i) {
        const double margin = (y[i] == 1 ? 1.0 : -1.0) * (detail::dot_row(X, i, w) + b);
        hinge += std::max(0.0, 1.0 - margin);
    }
    double reg = 0.0;
    for (double v : w) reg += v * v;
    return hinge / n + 0.5 * lambda * reg;
}

// ---- Random forest ---------------------------------------------------------

struct TreeNode {
    int feature = -1;       // -1 for leaves
    double threshold = 0.0; // go left when x[feature] <= threshold
    int left = -1;
    int right = -1;
    int leaf_label = -1;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    int predict_row(const pipeline::FeatureMatrix& X, std::size_t r) const {
        int idx = 0;
        while (nodes[idx].feature >= 0) {
            idx = X.at(r, static_cast<std::size_t>(nodes[idx].feature)) <= nodes[idx].threshold
                      ? nodes[idx].left
                      : nodes[idx].right;
        }
        return nodes[idx].leaf_label;
    }
};

struct ForestParams {
    std::vector<DecisionTree> trees;
    std::size_t n_train_rows = 0;  // for regenerating bootstrap masks
};

struct TrainedModel {
    Algorithm algorithm = Algorithm::logistic_regression;
    ModelSpec spec;
    std::size_t n_features = 0;
    std::uint64_t layout_hash = 0;

    NaiveBayesParams nb;
    LinearParams linear;
    ForestParams forest;

    void check_layout(const pipeline::FeatureMatrix& X) const {
        if (X.n_cols != n_features || X.layout_hash() != layout_hash)
            throw ValidationError("predict: feature layout differs from the training layout");
    }

    // NB log posterior (up to the shared evidence term) per class.
    std::pair<double, double> nb_log_posterior(const pipeline::FeatureMatrix& X,
                                               std::size_t r) const {
        double lp0 = nb.log_prior[0], lp1 = nb.log_prior[1];
        const double* row = X.values.data() + r * X.n_cols;
        for (std::size_t c = 0; c < X.n_cols; ++c) {
            if (row[c] == 0.0) continue;
            lp0 += row[c] * nb.feature_log_likelihood[0][c];
            lp1 += row[c] * nb.feature_log_likelihood[1][c];
        }
        return {lp0, lp1};
    }

    double score_row(const pipeline::FeatureMatrix& X, std::size_t r) const {
        switch (algorithm) {
            case Algorithm::naive_bayes: {
                const auto [lp0, lp1] = nb_log_posterior(X, r);
                return lp1 - lp0;
            }
            case Algorithm::random_forest: {
                std::size_t votes = 0;
                for (const auto& tree : forest.trees) votes += tree.predict_row(X, r) == 1;
                return static_cast<double>(votes) / static_cast<double>(forest.trees.size());
            }
            default:
                return detail::dot_row(X, r, linear.weights) + linear.bias;
        }
    }

    // Tie rule: a score exactly at the decision point goes to class 0.
    int predict_row(const pipeline::FeatureMatrix& X, std::size_t r) const {
        if (algorithm == Algorithm::random_forest) {
            const double frac = score_row(X, r);
            return frac > 0.5 ? 1 : 0;
        }
        return score_row(X, r) > 0.0 ? 1 : 0;
    }

    std::vector<int> predict(const pipeline::FeatureMatrix& X) const {
        check_layout(X);
        std::vector<int> out(X.n_rows);
        for (std::size_t r = 0; r < X.n_rows; ++r) out[r] = predict_row(X, r);
        return out;
    }

    std::vector<double> predict_score(const pipeline::FeatureMatrix& X) const {
        check_layout(X);
        std::vector<double> out(X.n_rows);
        for (std::size_t r = 0; r < X.n_rows; ++r) out[r] = score_row(X, r);
        return out;
    }
};

namespace detail {

inline void train_naive_bayes(TrainedModel& model, const pipeline::FeatureMatrix& X,
                              std::span<const int> y, const Hyperparams& hp) {
    const std::size_t m = X.n_cols;
    double class_count[2] = {0.0, 0.0};
    std::vector<double> totals[2];
    totals[0].assign(m, 0.0);
    totals[1].assign(m, 0.0);
    for (std::size_t i = 0; i < X.n_rows; ++i) {
        const int cls = y[i] == 1 ? 1 : 0;
        class_count[cls] += 1.0;
        const double* row = X.values.data() + i * m;
        for (std::size_t c = 0; c < m; ++c) {
            if (row[c] < 0.0)
                throw ValidationError("naive_bayes: negative feature value in column " +
                                      X.column_names[c]);
            totals[cls][c] += row[c];
        }
    }
    const double n = class_count[0] + class_count[1];
    for (int cls = 0; cls < 2; ++cls) {
        model.nb.log_prior[cls] = std::log(class_count[cls] / n);
        double total = 0.0;
        for (double t : totals[cls]) total += t;
        model.nb.feature_log_likelihood[cls].resize(m);
        const double denom = total + hp.nb_alpha * static_cast<double>(m);
        for (std::size_t c = 0; c < m; ++c)
            model.nb.feature_log_likelihood[cls][c] = std::log((totals[cls][c] + hp.nb_alpha) / denom);
    }
}

inline void train_logistic_regression(TrainedModel& model, const pipeline::FeatureMatrix& X,
                                      std::span<const int> y, const Hyperparams& hp) {
    std::vector<double> w(X.n_cols, 0.0);
    double b = 0.0;
    for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
        auto [gw, gb] = logreg_gradient(X, y, w, b, hp.l2_lambda);
        double inf_norm = std::fabs(gb);
        for (double g : gw) inf_norm = std::max(inf_norm, std::fabs(g));
        if (inf_norm < hp.gradient_tolerance) break;
        for (std::size_t c = 0; c < X.n_cols; ++c) w[c] -= hp.learning_rate * gw[c];
        b -= hp.learning_rate * gb;
    }
    model.linear.weights = std::move(w);
    model.linear.bias = b;
}

// Deterministic full-batch subgradient descent with the 1/(lambda*t) step.
// The 1/(lambda*t) schedule takes very large early steps, so the returned
// solution is the iterate with the lowest objective (the zero start
// included), which keeps the objective never worse than the initialization.
inline void train_linear_svm(TrainedModel& model, const pipeline::FeatureMatrix& X,
                             std::span<const int> y, const Hyperparams& hp) {
    const auto n = static_cast<double>(X.n_rows);
    std::vector<double> w(X.n_cols, 0.0);
    double b = 0.0;
    std::vector<double> best_w = w;
    double best_b = b;
    double best_objective = svm_objective(X, y, w, b, hp.l2_lambda);
    for (std::size_t t = 1; t <= hp.epochs; ++t) {
        const double eta = 1.0 / (hp.l2_lambda * static_cast<double>(t));
        std::vector<double> gsum(X.n_cols, 0.0);
        double gsum_b = 0.0;
        for (std::size_t i = 0; i < X.n_rows; ++i) {
            const double ylabel = y[i] == 1 ? 1.0 : -1.0;
            if (ylabel * (detail::dot_row(X, i, w) + b) < 1.0) {
                const double* row = X.values.data() + i * X.n_cols;
                for (std::size_t c = 0; c < X.n_cols; ++c) gsum[c] += ylabel * row[c];
                gsum_b += ylabel;
            }
        }
        const double decay = 1.0 - eta * hp.l2_lambda;
        for (std::size_t c = 0; c < X.n_cols; ++c) w[c] = decay * w[c] + (eta / n) * gsum[c];
        b += (eta / n) * gsum_b;
        const double objective = svm_objective(X, y, w, b, hp.l2_lambda);
        if (objective < best_objective) {
            best_objective = objective;
            best_w = w;
            best_b = b;
        }
    }
    model.linear.weights = std::move(best_w);
    model.linear.bias = best_b;
}

// Per-sample log-loss updates, order reshuffled each epoch from the seed.
inline void train_sgd(TrainedModel& model, const pipeline::FeatureMatrix& X,
                      std::span<const int> y, const Hyperparams& hp, std::uint64_t seed) {
    std::vector<double> w(X.n_cols, 0.0);
    double b = 0.0;
    std::vector<std::size_t> order(X.n_rows);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::size_t step = 0;
    for (std::size_t epoch = 0; epoch < hp.sgd_epochs; ++epoch) {
        auto rng = make_rng(derive_seed(seed, "sgd-epoch", epoch));
        shuffle_inplace(order, rng);
        for (auto i : order) {
            ++step;
            const double eta = hp.learning_rate /
                               (1.0 + hp.learning_rate * hp.l2_lambda * static_cast<double>(step));
            const double p = sigmoid(dot_row(X, i, w) + b);
            const double err = p - (y[i] == 1 ? 1.0 : 0.0);
            const double* row = X.values.data() + i * X.n_cols;
            for (std::size_t c = 0; c < X.n_cols; ++c)
                w[c] -= eta * (err * row[c] + hp.l2_lambda * w[c]);
            b -= eta * err;
        }
    }
    model.linear.weights = std::move(w);
    model.linear.bias = b;
}

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double impurity = std::numeric_limits<double>::infinity();
};

inline double gini(double n1, double n0) {
    const double n = n1 + n0;
    if (n == 0.0) return 0.0;
    const double p1 = n1 / n;
    const double p0 = n0 / n;
    return 1.0 - p1 * p1 - p0 * p0;
}

inline int majority_label(std::span<const int> y, const std::vector<std::size_t>& rows) {
    std::size_t ones = 0;
    for (auto r : rows) ones += y[r] == 1;
    return 2 * ones > rows.size() ? 1 : 0;  // tie -> class 0
}

inline int build_tree(DecisionTree& tree, const pipeline::FeatureMatrix& X,
                      std::span<const int> y, std::vector<std::size_t> rows,
                      std::size_t depth, const Hyperparams& hp, std::mt19937_64& rng) {
    const auto node_index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    bool pure = true;
    for (std::size_t i = 1; i < rows.size() && pure; ++i) pure = y[rows[i]] == y[rows[0]];
    const bool depth_capped = hp.rf_max_depth > 0 && depth >= hp.rf_max_depth;
    if (pure || depth_capped || rows.size() < 2) {
        tree.nodes[node_index].leaf_label = majority_label(y, rows);
        return node_index;
    }

    std::size_t n_candidates = hp.rf_features_per_split;
    if (n_candidates == 0)
        n_candidates = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(X.n_cols)))));
    n_candidates = std::min(n_candidates, X.n_cols);

    // Sample candidate features without replacement.
    std::vector<std::size_t> features(X.n_cols);
    for (std::size_t c = 0; c < X.n_cols; ++c) features[c] = c;
    for (std::size_t i = 0; i < n_candidates; ++i)
        std::swap(features[i], features[i + uniform_index(rng, X.n_cols - i)]);
    features.resize(n_candidates);

    SplitChoice best;
    std::vector<std::pair<double, int>> sorted;
    for (auto f : features) {
        sorted.clear();
        sorted.reserve(rows.size());
        for (auto r : rows) sorted.emplace_back(X.at(r, f), y[r]);
        std::sort(sorted.begin(), sorted.end());
        double left1 = 0, left0 = 0;
        double right1 = 0, right0 = 0;
        for (const auto& [v, label] : sorted) (label == 1 ? right1 : right0) += 1.0;
        const double total = static_cast<double>(rows.size());
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
            (sorted[i].second == 1 ? left1 : left0) += 1.0;
            (sorted[i].second == 1 ? right1 : right0) -= 1.0;
            if (sorted[i].first == sorted[i + 1].first) continue;
            const double nl = left1 + left0, nr = right1 + right0;
            const double impurity = (nl / total) * gini(left1, left0) +
                                    (nr / total) * gini(right1, right0);
            if (impurity < best.impurity) {
                best.impurity = impurity;
                best.feature = static_cast<int>(f);
                best.threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
            }
        }
    }

    if (best.feature < 0) {  // no separating value among the candidates
        tree.nodes[node_index].leaf_label = majority_label(y, rows);
        return node_index;
    }

    std::vector<std::size_t> left_rows, right_rows;
    for (auto r : rows)
        (X.at(r, static_cast<std::size_t>(best.feature)) <= best.threshold ? left_rows : right_rows)
            .push_back(r);
    if (left_rows.empty() || right_rows.empty()) {
        tree.nodes[node_index].leaf_label = majority_label(y, rows);
        return node_index;
    }
    rows.clear();
    rows.shrink_to_fit();

    tree.nodes[node_index].feature = best.feature;
    tree.nodes[node_index].threshold = best.threshold;
    const int left = build_tree(tree, X, y, std::move(left_rows), depth + 1, hp, rng);
    const int right = build_tree(tree, X, y, std::move(right_rows), depth + 1, hp, rng);
    tree.nodes[node_index].left = left;
    tree.nodes[node_index].right = right;
    return node_index;
}

// Bootstrap draw for tree t; regenerable from the model seed, which is how
// out-of-bag prediction recovers the masks without storing them.
inline std::vector<std::size_t> bootstrap_rows(std::size_t n_rows, std::uint64_t seed,
                                               std::size_t tree_index, bool bootstrap) {
    std::vector<std::size_t> rows;
    rows.reserve(n_rows);
    if (!bootstrap) {
        for (std::size_t i = 0; i < n_rows; ++i) rows.push_back(i);
        return rows;
    }
    auto rng = make_rng(derive_seed(seed, "bootstrap", tree_index));
    for (std::size_t i = 0; i < n_rows; ++i) rows.push_back(uniform_index(rng, n_rows));
    return rows;
}

inline void train_random_forest(TrainedModel& model, const pipeline::FeatureMatrix& X,
                                std::span<const int> y, const Hyperparams& hp,
                                std::uint64_t seed) {
    model.forest.n_train_rows = X.n_rows;
    model.forest.trees.resize(hp.rf_trees);
    for (std::size_t t = 0; t < hp.rf_trees; ++t) {
        auto rows = bootstrap_rows(X.n_rows, seed, t, hp.rf_bootstrap);
        auto rng = make_rng(derive_seed(seed, "tree", t));
        build_tree(model.forest.trees[t], X, y, std::move(rows), 0, hp, rng);
    }
}

}  // namespace detail

inline TrainedModel train(const ModelSpec& spec, const pipeline::FeatureMatrix& X,
                          std::span<const int> y) {
    if (X.n_rows == 0 || X.n_cols == 0) throw ValidationError("train: empty matrix");
    if (y.size() != X.n_rows) throw ValidationError("train: label count mismatch");
    if (X.has_missing()) throw ValidationError("train: matrix has missing cells; impute first");
    bool has0 = false, has1 = false;
    for (int label : y) {
        if (label == 1) has1 = true;
        else has0 = true;
    }
    if (!has0 || !has1) throw ValidationError("train: both classes must be present");

    TrainedModel model;
    model.algorithm = spec.algorithm;
    model.spec = spec;
    model.n_features = X.n_cols;
    model.layout_hash = X.layout_hash();

    switch (spec.algorithm) {
        case Algorithm::naive_bayes:
            detail::train_naive_bayes(model, X, y, spec.params);
            break;
        case Algorithm::logistic_regression:
            detail::train_logistic_regression(model, X, y, spec.params);
            break;
        case Algorithm::linear_svm:
            detail::train_linear_svm(model, X, y, spec.params);
            break;
        case Algorithm::sgd:
            detail::train_sgd(model, X, y, spec.params, spec.seed);
            break;
        case Algorithm::random_forest:
            detail::train_random_forest(model, X, y, spec.params, spec.seed);
            break;
    }
    return model;
}

// Out-of-bag majority vote per training row; rows in every bag get -1.
inline std::vector<int> oob_predict(const TrainedModel& model,
                                    const pipeline::FeatureMatrix& X_train) {
    if (model.algorithm != Algorithm::random_forest)
        throw ValidationError("oob_predict: model is not a random forest");
    model.check_layout(X_train);
    if (X_train.n_rows != model.forest.n_train_rows)
        throw ValidationError("oob_predict: row count differs from the training matrix");
    std::vector<std::size_t> votes1(X_train.n_rows, 0), total(X_train.n_rows, 0);
    for (std::size_t t = 0; t < model.forest.trees.size(); ++t) {
        const auto rows = detail::bootstrap_rows(X_train.n_rows, model.spec.seed, t,
                                                 model.spec.params.rf_bootstrap);
        std::vector<bool> in_bag(X_train.n_rows, false);
        for (auto r : rows) in_bag[r] = true;
        for (std::size_t r = 0; r < X_train.n_rows; ++r) {
            if (in_bag[r]) continue;
            ++total[r];
            votes1[r] += model.forest.trees[t].predict_row(X_train, r) == 1;
        }
    }
    std::vector<int> out(X_train.n_rows, -1);
    for (std::size_t r = 0; r < X_train.n_rows; ++r)
        if (total[r] > 0) out[r] = 2 * votes1[r] > total[r] ? 1 : 0;
    return out;
}

// ---- Serialization ---------------------------------------------------------

inline constexpr int kModelFormatVersion = 1;

inline std::string serialize(const TrainedModel& model) {
    nlohmann::json j;
    j["format_version"] = kModelFormatVersion;
    j["algorithm"] = to_string(model.algorithm);
    j["n_features"] = model.n_features;
    j["layout_hash"] = model.layout_hash;
    j["seed"] = model.spec.seed;
    auto& hp = j["hyperparams"];
    hp["nb_alpha"] = model.spec.params.nb_alpha;
    hp["l2_lambda"] = model.spec.params.l2_lambda;
    hp["learning_rate"] = model.spec.params.learning_rate;
    hp["epochs"] = model.spec.params.epochs;
    hp["sgd_epochs"] = model.spec.params.sgd_epochs;
    hp["gradient_tolerance"] = model.spec.params.gradient_tolerance;
    hp["rf_trees"] = model.spec.params.rf_trees;
    hp["rf_max_depth"] = model.spec.params.rf_max_depth;
    hp["rf_features_per_split"] = model.spec.params.rf_features_per_split;
    hp["rf_bootstrap"] = model.spec.params.rf_bootstrap;

    switch (model.algorithm) {
        case Algorithm::naive_bayes:
            j["nb"] = {{"log_prior", {model.nb.log_prior[0], model.nb.log_prior[1]}},
                       {"fll0", model.nb.feature_log_likelihood[0]},
                       {"fll1", model.nb.feature_log_likelihood[1]}};
            break;
        case Algorithm::random_forest: {
            nlohmann::json trees = nlohmann::json::array();
            for (const auto& tree : model.forest.trees) {
                nlohmann::json nodes = nlohmann::json::array();
                for (const auto& n : tree.nodes)
                    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.leaf_label});
                trees.push_back(std::move(nodes));
            }
            j["forest"] = {{"trees", std::move(trees)},
                           {"n_train_rows", model.forest.n_train_rows}};
            break;
        }
        default:
            j["linear"] = {{"weights", model.linear.weights}, {"bias", model.linear.bias}};
            break;
    }
    return j.dump();
}

inline TrainedModel deserialize(const std::string& bytes) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model payload corrupt: ") + e.what());
    }
    try {
        const int version = j.at("format_version").get<int>();
        if (version != kModelFormatVersion)
            throw ParseError("unsupported model format version " + std::to_string(version) +
                             " (expected " + std::to_string(kModelFormatVersion) + ")");
        TrainedModel model;
        model.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
        model.spec.algorithm = model.algorithm;
        model.n_features = j.at("n_features").get<std::size_t>();
        model.layout_hash = j.at("layout_hash").get<std::uint64_t>();
        model.spec.seed = j.at("seed").get<std::uint64_t>();
        const auto& hp = j.at("hyperparams");
        model.spec.params.nb_alpha = hp.at("nb_alpha").get<double>();
        model.spec.params.l2_lambda = hp.at("l2_lambda").get<double>();
        model.spec.params.learning_rate = hp.at("learning_rate").get<double>();
        model.spec.params.epochs = hp.at("epochs").get<std::size_t>();
        model.spec.params.sgd_epochs = hp.at("sgd_epochs").get<std::size_t>();
        model.spec.params.gradient_tolerance = hp.at("gradient_tolerance").get<double>();
        model.spec.params.rf_trees = hp.at("rf_trees").get<std::size_t>();
        model.spec.params.rf_max_depth = hp.at("rf_max_depth").get<std::size_t>();
        model.spec.params.rf_features_per_split = hp.at("rf_features_per_split").get<std::size_t>();
        model.spec.params.rf_bootstrap = hp.at("rf_bootstrap").get<bool>();

        switch (model.algorithm) {
            case Algorithm::naive_bayes: {
                const auto& nb = j.at("nb");
                model.nb.log_prior[0] = nb.at("log_prior").at(0).get<double>();
                model.nb.log_prior[1] = nb.at("log_prior").at(1).get<double>();
                model.nb.feature_log_likelihood[0] = nb.at("fll0").get<std::vector<double>>();
                model.nb.feature_log_likelihood[1] = nb.at("fll1").get<std::vector<double>>();
                break;
            }
            case Algorithm::random_forest: {
                const auto& forest = j.at("forest");
                model.forest.n_train_rows = forest.at("n_train_rows").get<std::size_t>();
                for (const auto& tree_json : forest.at("trees")) {
                    DecisionTree tree;
                    for (const auto& n : tree_json) {
                        TreeNode node;
                        node.feature = n.at(0).get<int>();
                        node.threshold = n.at(1).get<double>();
                        node.left = n.at(2).get<int>();
                        node.right = n.at(3).get<int>();
                        node.leaf_label = n.at(4).get<int>();
                        tree.nodes.push_back(node);
                    }
                    model.forest.trees.push_back(std::move(tree));
                }
                break;
            }
            default: {
                const auto& lin = j.at("linear");
                model.linear.weights = lin.at("weights").get<std::vector<double>>();
                model.linear.bias = lin.at("bias").get<double>();
                break;
            }
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model payload corrupt: ") + e.what());
    }
}

// Permutation importance bound to a trained model (see pipeline.hpp).
inline std::vector<pipeline::Importance> permutation_importance(
    const TrainedModel& model, const pipeline::FeatureMatrix& matrix, std::span<const int> labels,
    eval::Metric metric, std::size_t n_repeats, std::uint64_t seed) {
    return pipeline::permutation_importance(
        [&model](const pipeline::FeatureMatrix& X) { return model.predict(X); }, matrix, labels,
        metric, n_repeats, seed);
}

}  // namespace misinfo::models
