#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "misinfo/common.hpp"
#include "misinfo/corpus.hpp"
#include "misinfo/domain_age.hpp"
#include "misinfo/metrics.hpp"
#include "misinfo/models.hpp"
#include "misinfo/pipeline.hpp"
#include "misinfo/resample.hpp"
#include "misinfo/stats.hpp"

namespace misinfo::eval {

using stats::WelchResult;

inline WelchResult welch_ttest(std::span<const double> a, std::span<const double> b) {
    return stats::welch_ttest(a, b);
}

struct EvalConfig {
    std::size_t k = 5;
    std::size_t knn_k = 5;
    bool selection = true;
    pipeline::SelectionOptions selection_options;
};

// Fit-stage observer. cross_validate reports the dataset row indices each
// fitting stage consumes, which is how the no-leakage tests prove that no
// test-fold row ever reaches a fit, resample or train call.
struct CvInstrumentation {
    std::function<void(std::string_view stage, std::size_t fold,
                       std::span<const std::size_t> dataset_rows)>
        on_stage;
};

struct CVReport {
    // Configuration echo; every number below is recomputable from these.
    models::ModelSpec model_spec;
    pipeline::FeatureConfig feature_config;
    resample::ResampleConfig resample_config;
    std::size_t k = 5;
    std::size_t knn_k = 5;
    bool selection = true;
    std::uint64_t seed = 0;

    std::vector<Metrics> fold_metrics;
    std::vector<ConfusionMatrix> fold_confusion;
    std::vector<std::uint64_t> fold_seeds;
    Metrics mean;
    Metrics stddev;
    Metrics pooled;  // from the summed confusion matrix
    double wall_seconds = 0.0;  // excluded from the canonical report JSON

    std::string feature_set() const {
        return feature_config.include_url ? "text+url" : "text";
    }
    std::string config_label() const {
        return models::to_string(model_spec.algorithm) + "/" +
               text::to_string(feature_config.text_scheme) + "/" +
               resample::to_string(resample_config.method) + "/" + feature_set();
    }
};

namespace detail {

inline Metrics fold_mean(const std::vector<Metrics>& folds) {
    Metrics m;
    for (const auto& f : folds) {
        m.precision += f.precision;
        m.accuracy += f.accuracy;
        m.recall += f.recall;
        m.f1 += f.f1;
    }
    const auto n = static_cast<double>(folds.size());
    m.precision /= n;
    m.accuracy /= n;
    m.recall /= n;
    m.f1 /= n;
    return m;
}

inline Metrics fold_stddev(const std::vector<Metrics>& folds, const Metrics& mean) {
    Metrics s;
    if (folds.size() < 2) return s;
    for (const auto& f : folds) {
        s.precision += (f.precision - mean.precision) * (f.precision - mean.precision);
        s.accuracy += (f.accuracy - mean.accuracy) * (f.accuracy - mean.accuracy);
        s.recall += (f.recall - mean.recall) * (f.recall - mean.recall);
        s.f1 += (f.f1 - mean.f1) * (f.f1 - mean.f1);
    }
    const auto n = static_cast<double>(folds.size() - 1);
    s.precision = std::sqrt(s.precision / n);
    s.accuracy = std::sqrt(s.accuracy / n);
    s.recall = std::sqrt(s.recall / n);
    s.f1 = std::sqrt(s.f1 / n);
    return s;
}

}  // namespace detail

// One cross-validated experiment. Per fold, every data-dependent fit
// (vocabulary/idf, imputation reference, scaler, selection, resampling,
// training) sees the training split only; the test split is untouched until
// prediction.
inline CVReport cross_validate(const corpus::Dataset& dataset,
                               const pipeline::FeatureConfig& feature_config,
                               const models::ModelSpec& model_spec,
                               const resample::ResampleConfig& resample_config,
                               const EvalConfig& eval_config, std::uint64_t seed,
                               age::DomainAgeProvider* age_provider,
                               const CvInstrumentation* instrumentation = nullptr) {
    const auto t0 = std::chrono::steady_clock::now();
    CVReport report;
    report.model_spec = model_spec;
    report.feature_config = feature_config;
    report.resample_config = resample_config;
    report.k = eval_config.k;
    report.knn_k = eval_config.knn_k;
    report.selection = eval_config.selection;
    report.seed = seed;

    const auto folds = corpus::stratified_kfold(dataset, eval_config.k, derive_seed(seed, "folds"));

    auto notify = [&](std::string_view stage, std::size_t fold,
                      std::span<const std::size_t> rows) {
        if (instrumentation && instrumentation->on_stage)
            instrumentation->on_stage(stage, fold, rows);
    };

    for (std::size_t f = 0; f < folds.size(); ++f) {
        const auto& train_rows = folds[f].train_indices;
        const auto& test_rows = folds[f].test_indices;
        try {
            notify("vocab_fit", f, train_rows);
            const auto transforms = pipeline::fit_transforms(dataset, train_rows, feature_config);

            auto train_matrix =
                pipeline::assemble(dataset, train_rows, feature_config, transforms, age_provider);
            train_matrix = pipeline::knn_impute(train_matrix, eval_config.knn_k);

            notify("scaler_fit", f, train_rows);
            const auto scaler = pipeline::minmax_fit(train_matrix);
            auto train_scaled = pipeline::minmax_apply(train_matrix, scaler);

            std::vector<std::size_t> retained;
            if (eval_config.selection) {
                notify("selection_fit", f, train_rows);
                auto selection = pipeline::select_features(train_scaled, train_scaled.labels,
                                                           eval_config.selection_options);
                retained = std::move(selection.retained);
                train_scaled = train_scaled.select_columns(retained);
            }

            notify("resample", f, train_rows);
            resample::ResampleConfig fold_resample = resample_config;
            fold_resample.seed = derive_seed(seed, "resample", f, resample_config.seed);
            const auto resampled = resample::resample(train_scaled, fold_resample);

            // Map resampled rows back to dataset indices for the observer.
            std::vector<std::size_t> train_source;
            train_source.reserve(resampled.source_rows.size());
            for (auto r : resampled.source_rows) train_source.push_back(train_rows[r]);
            notify("train", f, train_source);

            models::ModelSpec fold_spec = model_spec;
            fold_spec.seed = derive_seed(seed, "model", f, model_spec.seed);
            report.fold_seeds.push_back(fold_spec.seed);
            const auto model =
                models::train(fold_spec, resampled.matrix, resampled.matrix.labels);

            auto test_matrix =
                pipeline::assemble(dataset, test_rows, feature_config, transforms, age_provider);
            test_matrix = pipeline::knn_impute_with_reference(test_matrix, train_matrix,
                                                              eval_config.knn_k);
            auto test_scaled = pipeline::minmax_apply(test_matrix, scaler);
            if (eval_config.selection) test_scaled = test_scaled.select_columns(retained);

            const auto predictions = model.predict(test_scaled);
            const auto cm = confusion(test_scaled.labels, predictions);
            report.fold_confusion.push_back(cm);
            report.fold_metrics.push_back(metrics(cm));
        } catch (const Error& e) {
            throw Error("fold " + std::to_string(f) + ": " + e.what());
        }
    }

    report.mean = detail::fold_mean(report.fold_metrics);
    report.stddev = detail::fold_stddev(report.fold_metrics, report.mean);
    ConfusionMatrix pooled_cm;
    for (const auto& cm : report.fold_confusion) pooled_cm += cm;
    report.pooled = metrics(pooled_cm);
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

// ---- domain-age summary -----------------------------------------------------

struct ClassAgeStats {
    std::size_t total = 0;        // distinct domains with a resolved age
    std::size_t missing = 0;      // distinct domains the provider cannot resolve
    double mean = 0.0;
    double median = 0.0;
    double p10 = 0.0;
    double p90 = 0.0;
    std::vector<double> years;
};

struct DomainAgeStats {
    ClassAgeStats fake;
    ClassAgeStats real;
    WelchResult welch;  // fake vs real resolved years
};

// Summary over DISTINCT registrable domains per class; missing ages are
// excluded from the statistics and counted.
inline DomainAgeStats domain_age_stats(const corpus::Dataset& dataset,
                                       age::DomainAgeProvider& provider) {
    if (dataset.empty()) throw ValidationError("domain_age_stats: empty dataset");
    std::set<std::string> fake_domains, real_domains;
    for (const auto& rec : dataset.records) {
        auto domain = url::registrable_domain(rec.url);
        (rec.label == 1 ? fake_domains : real_domains).insert(std::move(domain));
    }
    DomainAgeStats out;
    auto fill = [&provider](const std::set<std::string>& domains, ClassAgeStats& s) {
        for (const auto& d : domains) {
            if (auto year = provider.lookup_age(d)) s.years.push_back(static_cast<double>(*year));
            else ++s.missing;
        }
        s.total = s.years.size();
        if (s.years.size() < 2)
            throw ValidationError("domain_age_stats: fewer than 2 resolvable domains in a class");
        s.mean = stats::mean(s.years);
        s.median = stats::median(s.years);
        s.p10 = stats::percentile(s.years, 0.10);
        s.p90 = stats::percentile(s.years, 0.90);
    };
    fill(fake_domains, out.fake);
    fill(real_domains, out.real);
    out.welch = stats::welch_ttest(out.fake.years, out.real.years);
    return out;
}

// ---- report JSON ------------------------------------------------------------

inline nlohmann::json metrics_to_json(const Metrics& m) {
    return {{"precision", m.precision},
            {"accuracy", m.accuracy},
            {"recall", m.recall},
            {"f1", m.f1}};
}

// Canonical report JSON: configuration echo plus per-fold and aggregate
// metrics. Deliberately excludes wall-clock values so identical runs are
// byte-identical; timing lives in the run manifest.
inline nlohmann::json report_to_json(const CVReport& r) {
    nlohmann::json j;
    j["config"] = {
        {"algorithm", models::to_string(r.model_spec.algorithm)},
        {"vectorizer", text::to_string(r.feature_config.text_scheme)},
        {"resampling", resample::to_string(r.resample_config.method)},
        {"feature_set", r.feature_set()},
        {"include_style", r.feature_config.include_style},
        {"include_url_token_bow", r.feature_config.include_url_token_bow},
        {"min_df", r.feature_config.min_df},
        {"k", r.k},
        {"knn_k", r.knn_k},
        {"selection", r.selection},
        {"seed", r.seed},
        {"hyperparams",
         {{"nb_alpha", r.model_spec.params.nb_alpha},
          {"l2_lambda", r.model_spec.params.l2_lambda},
          {"learning_rate", r.model_spec.params.learning_rate},
          {"epochs", r.model_spec.params.epochs},
          {"sgd_epochs", r.model_spec.params.sgd_epochs},
          {"rf_trees", r.model_spec.params.rf_trees},
          {"rf_max_depth", r.model_spec.params.rf_max_depth},
          {"rf_bootstrap", r.model_spec.params.rf_bootstrap}}}};
    j["fold_seeds"] = r.fold_seeds;
    auto folds = nlohmann::json::array();
    for (std::size_t f = 0; f < r.fold_metrics.size(); ++f) {
        const auto& cm = r.fold_confusion[f];
        folds.push_back({{"metrics", metrics_to_json(r.fold_metrics[f])},
                         {"confusion", {{"tp", cm.tp}, {"fp", cm.fp}, {"tn", cm.tn}, {"fn", cm.fn}}}});
    }
    j["folds"] = std::move(folds);
    j["mean"] = metrics_to_json(r.mean);
    j["stddev"] = metrics_to_json(r.stddev);
    j["pooled"] = metrics_to_json(r.pooled);
    return j;
}

}  // namespace misinfo::eval
