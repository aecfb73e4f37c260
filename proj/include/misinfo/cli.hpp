#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "misinfo/age_remote.hpp"
#include "misinfo/common.hpp"
#include "misinfo/corpus.hpp"
#include "misinfo/domain_age.hpp"
#include "misinfo/evaluation.hpp"
#include "misinfo/models.hpp"
#include "misinfo/pipeline.hpp"
#include "misinfo/report.hpp"
#include "misinfo/resample.hpp"
#include "misinfo/synth.hpp"
#include "misinfo/textfeat.hpp"

namespace misinfo::cli {

namespace fs = std::filesystem;

// Temp-file + rename so partially written outputs never appear under the
// final name.
inline void write_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << content;
        if (!out.good()) throw IoError("failed writing " + tmp.string());
    }
    fs::rename(tmp, path);
}

// Bounded-thread parallel map over [0, n); exceptions resurface by lowest
// index so failures are deterministic regardless of schedule.
template <typename Fn>
inline void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
    jobs = std::max<std::size_t>(1, std::min(jobs, n));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::pair<std::size_t, std::exception_ptr>> errors(jobs, {n, nullptr});
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    if (i < errors[w].first) errors[w] = {i, std::current_exception()};
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    std::pair<std::size_t, std::exception_ptr> first{n, nullptr};
    for (const auto& e : errors)
        if (e.second && e.first < first.first) first = e;
    if (first.second) std::rethrow_exception(first.second);
}

struct GridBlock {
    std::vector<std::string> feature_sets = {"text"};
    std::vector<std::string> vectorizers = {"bow", "tfidf"};
    std::vector<std::string> resamplings = {"over", "under"};
};

struct RunConfig {
    std::string dataset_path;
    std::optional<corpus::Format> format;  // inferred from extension when unset
    std::optional<std::uint64_t> seed;     // required for runs; no wall-clock default
    std::size_t k = 5;
    std::size_t knn_k = 5;
    std::size_t jobs = 1;
    std::string age_cache;
    bool offline = true;
    std::string out_dir = "out";

    pipeline::FeatureConfig feature;
    bool selection = true;
    pipeline::SelectionOptions selection_options;
    std::vector<models::ModelSpec> model_specs;  // empty -> all five algorithms
    std::vector<resample::Method> resamplings = {resample::Method::over};
    std::vector<GridBlock> grid;  // compare only; empty -> default grid

    nlohmann::json echo;  // parsed config file, for the manifest
};

inline models::ModelSpec model_spec_from_json(const nlohmann::json& j) {
    models::ModelSpec spec =
        models::default_spec(models::algorithm_from_string(j.at("algorithm").get<std::string>()));
    auto& p = spec.params;
    p.nb_alpha = j.value("nb_alpha", p.nb_alpha);
    p.l2_lambda = j.value("l2_lambda", p.l2_lambda);
    p.learning_rate = j.value("learning_rate", p.learning_rate);
    p.epochs = j.value("epochs", p.epochs);
    p.sgd_epochs = j.value("sgd_epochs", p.sgd_epochs);
    p.gradient_tolerance = j.value("gradient_tolerance", p.gradient_tolerance);
    p.rf_trees = j.value("rf_trees", p.rf_trees);
    p.rf_max_depth = j.value("rf_max_depth", p.rf_max_depth);
    p.rf_features_per_split = j.value("rf_features_per_split", p.rf_features_per_split);
    p.rf_bootstrap = j.value("rf_bootstrap", p.rf_bootstrap);
    spec.seed = j.value("seed", spec.seed);
    return spec;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    RunConfig c;
    c.echo = j;
    try {
        c.dataset_path = j.value("dataset", c.dataset_path);
        if (j.contains("format")) c.format = corpus::format_from_string(j.at("format"));
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        c.k = j.value("k", c.k);
        c.knn_k = j.value("knn_k", c.knn_k);
        c.jobs = j.value("jobs", c.jobs);
        c.age_cache = j.value("age_cache", c.age_cache);
        c.offline = j.value("offline", c.offline);
        c.out_dir = j.value("out", c.out_dir);
        if (j.contains("feature")) {
            const auto& f = j.at("feature");
            c.feature.text_scheme = text::scheme_from_string(f.value("scheme", "bow"));
            c.feature.include_style = f.value("style", c.feature.include_style);
            c.feature.include_url = f.value("url", c.feature.include_url);
            c.feature.include_url_token_bow =
                f.value("url_token_bow", c.feature.include_url_token_bow);
            c.feature.min_df = f.value("min_df", c.feature.min_df);
            c.feature.stopword_path = f.value("stopwords", c.feature.stopword_path);
            c.feature.word_list_dir = f.value("word_list_dir", c.feature.word_list_dir);
        }
        if (j.contains("selection")) {
            const auto& s = j.at("selection");
            c.selection = s.value("enabled", c.selection);
            c.selection_options.alpha = s.value("alpha", c.selection_options.alpha);
            c.selection_options.corr_threshold =
                s.value("corr_threshold", c.selection_options.corr_threshold);
            c.selection_options.select_text =
                s.value("select_text", c.selection_options.select_text);
            if (s.value("binarize", "median") == std::string("mean"))
                c.selection_options.binarize = pipeline::Binarize::mean;
        }
        if (j.contains("models"))
            for (const auto& m : j.at("models")) c.model_specs.push_back(model_spec_from_json(m));
        if (j.contains("resample")) {
            c.resamplings.clear();
            for (const auto& r : j.at("resample"))
                c.resamplings.push_back(resample::method_from_string(r.get<std::string>()));
        }
        if (j.contains("grid")) {
            for (const auto& g : j.at("grid")) {
                GridBlock block;
                if (g.contains("feature_sets"))
                    block.feature_sets = g.at("feature_sets").get<std::vector<std::string>>();
                if (g.contains("vectorizers"))
                    block.vectorizers = g.at("vectorizers").get<std::vector<std::string>>();
                if (g.contains("resamplings"))
                    block.resamplings = g.at("resamplings").get<std::vector<std::string>>();
                c.grid.push_back(std::move(block));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    return c;
}

inline std::vector<models::ModelSpec> default_model_specs() {
    std::vector<models::ModelSpec> specs;
    for (auto alg : {models::Algorithm::naive_bayes, models::Algorithm::logistic_regression,
                     models::Algorithm::linear_svm, models::Algorithm::sgd,
                     models::Algorithm::random_forest}) {
        specs.push_back(models::default_spec(alg));
    }
    return specs;
}

// The default comparison grid: every classifier under both vectorizers, with
// over- and under-sampling on text features, plus the over-sampled runs with
// the URL feature block added.
inline std::vector<GridBlock> default_grid() {
    GridBlock text;
    text.feature_sets = {"text"};
    text.vectorizers = {"bow", "tfidf"};
    text.resamplings = {"over", "under"};
    GridBlock with_url;
    with_url.feature_sets = {"text+url"};
    with_url.vectorizers = {"bow", "tfidf"};
    with_url.resamplings = {"over"};
    return {text, with_url};
}

namespace detail {

struct CliState {
    // Flag values (override config-file values when the user passed them).
    std::string config_path;
    std::string dataset;
    std::string format;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> jobs;
    std::string age_cache;
    bool offline = false;
    std::string out_dir;
};

inline RunConfig resolve_config(const CliState& s, bool require_dataset = true,
                                bool require_seed = true) {
    RunConfig c = s.config_path.empty() ? RunConfig{} : load_run_config(s.config_path);
    if (!s.dataset.empty()) c.dataset_path = s.dataset;
    if (!s.format.empty()) c.format = corpus::format_from_string(s.format);
    if (s.seed) c.seed = s.seed;
    if (s.jobs) c.jobs = *s.jobs;
    if (!s.age_cache.empty()) c.age_cache = s.age_cache;
    if (s.offline) c.offline = true;
    if (!s.out_dir.empty()) c.out_dir = s.out_dir;

    if (require_dataset) {
        if (c.dataset_path.empty()) throw ConfigError("no dataset given (--dataset or config)");
        if (!fs::exists(c.dataset_path)) throw IoError("dataset not found: " + c.dataset_path);
    }
    if (require_seed && !c.seed)
        throw ConfigError("seed is required (--seed or config); runs never default to wall clock");
    if (!c.age_cache.empty() && !fs::exists(c.age_cache))
        throw IoError("age cache not found: " + c.age_cache);
    return c;
}

inline corpus::Dataset load_for_run(const RunConfig& c) {
    const auto format = c.format ? *c.format : corpus::guess_format(c.dataset_path);
    return corpus::load_dataset(c.dataset_path, format).dataset;
}

inline std::optional<age::DomainAgeProvider> make_provider(const RunConfig& c, bool needed) {
    if (!needed) return std::nullopt;
    if (c.age_cache.empty())
        throw ConfigError("URL features require --age-cache (or age_cache in the config)");
    std::vector<std::string> warnings;
    auto provider = age::DomainAgeProvider::load_cache(
        c.age_cache,
        c.offline ? age::DomainAgeProvider::Mode::offline : age::DomainAgeProvider::Mode::online,
        &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    return provider;
}

inline void write_manifest(const RunConfig& c, const std::string& command,
                           const std::vector<std::string>& outputs, double wall_seconds) {
    nlohmann::json m;
    m["command"] = command;
    m["version"] = std::string(kVersion);
    m["model_format_version"] = models::kModelFormatVersion;
    m["config"] = c.echo.is_null() ? nlohmann::json::object() : c.echo;
    m["dataset"] = c.dataset_path;
    if (c.seed) m["seed"] = *c.seed;
    m["k"] = c.k;
    m["jobs"] = c.jobs;
    m["offline"] = c.offline;
    m["timestamp"] = age::now_iso8601_utc();
    m["wall_seconds"] = wall_seconds;
    m["outputs"] = outputs;
    write_atomic(fs::path(c.out_dir) / "manifest.json", m.dump(2) + "\n");
}

struct PlannedRun {
    pipeline::FeatureConfig feature;
    models::ModelSpec model;
    resample::ResampleConfig resample_config;
    std::string label;
};

inline std::vector<PlannedRun> plan_grid(const RunConfig& c) {
    const auto model_specs = c.model_specs.empty() ? default_model_specs() : c.model_specs;
    const auto grid = c.grid.empty() ? default_grid() : c.grid;
    std::vector<PlannedRun> runs;
    for (const auto& block : grid) {
        for (const auto& feature_set : block.feature_sets) {
            if (feature_set != "text" && feature_set != "text+url")
                throw ConfigError("unknown feature_set '" + feature_set + "'");
            for (const auto& vec : block.vectorizers) {
                for (const auto& resampling : block.resamplings) {
                    for (const auto& spec : model_specs) {
                        PlannedRun run;
                        run.feature = c.feature;
                        run.feature.text_scheme = text::scheme_from_string(vec);
                        run.feature.include_url = feature_set == "text+url";
                        run.model = spec;
                        run.resample_config.method = resample::method_from_string(resampling);
                        run.label = models::to_string(spec.algorithm) + "_" + vec + "_" +
                                    resampling + "_" +
                                    (run.feature.include_url ? "url" : "text");
                        runs.push_back(std::move(run));
                    }
                }
            }
        }
    }
    return runs;
}

inline int cmd_validate(const CliState& state, bool strict) {
    RunConfig c = resolve_config(state, true, false);
    const auto format = c.format ? *c.format : corpus::guess_format(c.dataset_path);
    const auto result = corpus::load_dataset(c.dataset_path, format,
                                             corpus::LoadOptions{strict});
    for (const auto& r : result.rejected) {
        std::cerr << c.dataset_path << " row " << r.row;
        if (!r.field.empty()) std::cerr << " field '" << r.field << "'";
        std::cerr << ": " << r.message << '\n';
    }
    if (!result.rejected.empty()) {
        std::cerr << result.rejected.size() << " invalid row(s), "
                  << result.dataset.size() << " valid\n";
        return 1;
    }
    const auto stats = corpus::compute_stats(result.dataset);
    std::cout << "OK " << stats.n_records << " records, " << stats.n_distinct_domains
              << " distinct domains, class ratio " << stats.class_ratio << '\n';
    return 0;
}

inline int cmd_stats(const CliState& state, std::size_t top_n) {
    RunConfig c = resolve_config(state, true, false);
    const auto dataset = load_for_run(c);
    const auto stats = corpus::compute_stats(dataset);

    nlohmann::json j;
    j["n_records"] = stats.n_records;
    j["n_distinct_domains"] = stats.n_distinct_domains;
    j["class_counts"] = {{"real", stats.n_real}, {"fake", stats.n_fake}};
    j["class_ratio"] = stats.class_ratio;
    if (stats.date_min) j["date_range"] = {format_date(*stats.date_min), format_date(*stats.date_max)};

    for (const int label : {1, 0}) {
        const auto top = text::top_uppercase_words(dataset, label, top_n);
        auto arr = nlohmann::json::array();
        for (const auto& [word, count] : top) arr.push_back({{"word", word}, {"count", count}});
        j[label == 1 ? "top_uppercase_fake" : "top_uppercase_real"] = std::move(arr);
    }

    // Mean per-record style counts per class, title and description.
    for (const int label : {1, 0}) {
        double counts[10] = {};
        std::size_t n = 0;
        for (const auto& rec : dataset.records) {
            if (rec.label != label) continue;
            ++n;
            const auto s = text::style_features(rec.title, rec.description);
            const double vals[10] = {
                double(s.title.exclamation_count), double(s.title.question_count),
                double(s.title.quote_count),       double(s.title.colon_count),
                double(s.title.uppercase_word_count),
                double(s.description.exclamation_count), double(s.description.question_count),
                double(s.description.quote_count),       double(s.description.colon_count),
                double(s.description.uppercase_word_count)};
            for (int i = 0; i < 10; ++i) counts[i] += vals[i];
        }
        nlohmann::json style;
        static const char* kNames[10] = {
            "title_exclamation", "title_question", "title_quote", "title_colon",
            "title_uppercase_words", "desc_exclamation", "desc_question", "desc_quote",
            "desc_colon", "desc_uppercase_words"};
        for (int i = 0; i < 10; ++i)
            style[kNames[i]] = n ? counts[i] / static_cast<double>(n) : 0.0;
        j[label == 1 ? "style_means_fake" : "style_means_real"] = std::move(style);
    }

    std::cout << j.dump(2) << '\n';
    if (!state.out_dir.empty()) {
        write_atomic(fs::path(c.out_dir) / "stats.json", j.dump(2) + "\n");
    }
    return 0;
}

inline int cmd_age_fetch(const std::string& domains_path, const std::string& cache_path,
                         int rate_ms, bool offline) {
    std::ifstream in(domains_path);
    if (!in) throw IoError("cannot open domain list " + domains_path);
    std::vector<std::string> domains;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line[0] != '#') domains.push_back(to_lower_ascii(line));
    }

    const auto mode = offline ? age::DomainAgeProvider::Mode::offline
                              : age::DomainAgeProvider::Mode::online;
    age::DomainAgeProvider provider(mode, rate_ms);
    if (fs::exists(cache_path)) {
        std::vector<std::string> warnings;
        provider = age::DomainAgeProvider::load_cache(cache_path, mode, &warnings);
        for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    }
    provider.set_remote_fetcher(age::combined_lookup);

    std::size_t hits = 0, misses = 0;
    for (const auto& d : domains) {
        try {
            if (provider.lookup_age(d)) ++hits;
            else {
                ++misses;
                std::cerr << "miss: " << d << '\n';
            }
        } catch (const ValidationError& e) {
            ++misses;
            std::cerr << "skip: " << e.what() << '\n';
        }
    }
    provider.save_cache(cache_path);
    std::cout << hits << " resolved, " << misses << " missing, cache written to " << cache_path
              << '\n';
    return 0;  // lookup misses are not failures
}

inline int cmd_synth(const CliState& state, std::size_t n, double fake_fraction,
                     double domain_reuse) {
    RunConfig c = resolve_config(state, false, true);
    corpus::SynthSpec spec = corpus::SynthSpec::defaults();
    spec.n_records = n;
    spec.fake_fraction = fake_fraction;
    spec.domain_reuse = domain_reuse;
    spec.seed = *c.seed;
    const auto t0 = std::chrono::steady_clock::now();
    const auto result = corpus::generate_synthetic(spec);

    fs::create_directories(c.out_dir);
    const auto dataset_path = fs::path(c.out_dir) / "synthetic.jsonl";
    corpus::save_dataset(result.dataset, dataset_path.string(), corpus::Format::jsonl);
    age::DomainAgeProvider provider = corpus::provider_from_records(result.age_records);
    const auto cache_path = fs::path(c.out_dir) / "age_cache.jsonl";
    provider.save_cache(cache_path.string());

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(c, "synth", {dataset_path.string(), cache_path.string()}, wall);
    std::cout << "wrote " << result.dataset.size() << " records to " << dataset_path.string()
              << " and " << result.age_records.size() << " age records to "
              << cache_path.string() << '\n';
    return 0;
}

inline int cmd_featurize(const CliState& state) {
    RunConfig c = resolve_config(state);
    const auto dataset = load_for_run(c);
    auto provider = make_provider(c, c.feature.include_url);
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<std::size_t> all_rows(dataset.size());
    for (std::size_t i = 0; i < all_rows.size(); ++i) all_rows[i] = i;
    const auto transforms = pipeline::fit_transforms(dataset, all_rows, c.feature);
    const auto matrix = pipeline::assemble(dataset, c.feature, transforms,
                                           provider ? &*provider : nullptr);

    std::string out = csv::join_row(matrix.column_names) + ",label\n";
    for (std::size_t r = 0; r < matrix.n_rows; ++r) {
        std::vector<std::string> fields;
        fields.reserve(matrix.n_cols + 1);
        for (std::size_t col = 0; col < matrix.n_cols; ++col)
            fields.push_back(matrix.is_missing(r, col) ? ""
                                                       : csv::format_double(matrix.at(r, col)));
        fields.push_back(std::to_string(matrix.labels[r]));
        out += csv::join_row(fields) + "\n";
    }
    const auto path = fs::path(c.out_dir) / "features.csv";
    write_atomic(path, out);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(c, "featurize", {path.string()}, wall);
    std::cout << "wrote " << matrix.n_rows << " x " << matrix.n_cols << " feature matrix to "
              << path.string() << '\n';
    return 0;
}

inline int cmd_evaluate(const CliState& state) {
    RunConfig c = resolve_config(state);
    if (c.model_specs.size() != 1)
        throw ConfigError("evaluate expects exactly one entry in config 'models'");
    if (c.resamplings.size() != 1)
        throw ConfigError("evaluate expects exactly one entry in config 'resample'");
    const auto dataset = load_for_run(c);
    auto provider = make_provider(c, c.feature.include_url);
    const auto t0 = std::chrono::steady_clock::now();

    eval::EvalConfig ec;
    ec.k = c.k;
    ec.knn_k = c.knn_k;
    ec.selection = c.selection;
    ec.selection_options = c.selection_options;
    resample::ResampleConfig rc;
    rc.method = c.resamplings[0];
    const auto report = eval::cross_validate(dataset, c.feature, c.model_specs[0], rc, ec,
                                             *c.seed, provider ? &*provider : nullptr);

    const auto path = fs::path(c.out_dir) / "report.json";
    write_atomic(path, eval::report_to_json(report).dump(2) + "\n");
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(c, "evaluate", {path.string()}, wall);
    std::cout << report.config_label() << ": mean F1 " << report.mean.f1 << ", recall "
              << report.mean.recall << " -> " << path.string() << '\n';
    return 0;
}

inline int cmd_compare(const CliState& state) {
    RunConfig c = resolve_config(state);
    const auto dataset = load_for_run(c);
    const auto runs = plan_grid(c);
    const bool needs_url = std::any_of(runs.begin(), runs.end(),
                                       [](const PlannedRun& r) { return r.feature.include_url; });
    auto provider = make_provider(c, needs_url);
    const auto t0 = std::chrono::steady_clock::now();

    eval::EvalConfig ec;
    ec.k = c.k;
    ec.knn_k = c.knn_k;
    ec.selection = c.selection;
    ec.selection_options = c.selection_options;

    std::vector<eval::CVReport> reports(runs.size());
    parallel_for(runs.size(), c.jobs, [&](std::size_t i) {
        reports[i] = eval::cross_validate(dataset, runs[i].feature, runs[i].model,
                                          runs[i].resample_config, ec, *c.seed,
                                          provider ? &*provider : nullptr);
    });

    std::vector<std::string> outputs;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        char idx[8];
        std::snprintf(idx, sizeof(idx), "%02zu", i);
        const auto path =
            fs::path(c.out_dir) / "reports" / (std::string(idx) + "_" + runs[i].label + ".json");
        write_atomic(path, eval::report_to_json(reports[i]).dump(2) + "\n");
        outputs.push_back(path.string());
    }

    const auto files = report::compare_report(reports);
    const auto out = fs::path(c.out_dir);
    write_atomic(out / "comparison.md", files.markdown);
    outputs.push_back((out / "comparison.md").string());
    write_atomic(out / "comparison.csv", files.table_csv);
    outputs.push_back((out / "comparison.csv").string());
    write_atomic(out / "plot_data.csv", files.plot_csv);
    outputs.push_back((out / "plot_data.csv").string());
    for (const auto& [metric, svg] : files.svg_per_metric) {
        write_atomic(out / ("plot_" + metric + ".svg"), svg);
        outputs.push_back((out / ("plot_" + metric + ".svg")).string());
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(c, "compare", outputs, wall);
    std::cout << runs.size() << " configurations -> " << (out / "comparison.md").string() << '\n';
    return 0;
}

}  // namespace detail

// Entry point shared by the binary and the in-process tests.
// Exit codes: 0 success, 1 data/validation failure, 2 usage error.
inline int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"fake/misleading news detection over search-result metadata"};
    app.require_subcommand(1);

    detail::CliState state;

    auto add_common = [&](CLI::App* cmd, bool with_out = true) {
        cmd->add_option("--config", state.config_path, "JSON run configuration");
        cmd->add_option("--dataset", state.dataset, "dataset path (overrides config)");
        cmd->add_option("--format", state.format, "dataset format: jsonl or csv");
        cmd->add_option("--seed", state.seed, "base seed (overrides config)");
        cmd->add_option("--jobs", state.jobs, "parallel workers");
        cmd->add_option("--age-cache", state.age_cache, "domain-age cache (JSONL)");
        cmd->add_flag("--offline", state.offline, "never perform network lookups");
        if (with_out) cmd->add_option("--out", state.out_dir, "output directory");
    };

    auto* validate = app.add_subcommand("validate", "schema-check a dataset");
    bool strict = false;
    add_common(validate, false);
    validate->add_flag("--strict", strict, "fail on the first invalid row");

    auto* stats = app.add_subcommand("stats", "dataset statistics and style/uppercase tables");
    std::size_t top_n = 20;
    add_common(stats);
    stats->add_option("--top", top_n, "uppercase words to list per class");

    auto* age_cmd = app.add_subcommand("age", "domain-age cache maintenance");
    age_cmd->require_subcommand(1);
    auto* fetch = age_cmd->add_subcommand("fetch", "resolve domain ages into a cache");
    std::string domains_path, cache_path;
    int rate_ms = 1000;
    bool fetch_offline = false;
    fetch->add_option("--domains", domains_path, "file with one domain per line")->required();
    fetch->add_option("--cache", cache_path, "cache file to read and update")->required();
    fetch->add_option("--rate-ms", rate_ms, "minimum interval between remote calls");
    fetch->add_flag("--offline", fetch_offline, "only consult the existing cache");

    auto* featurize = app.add_subcommand("featurize", "emit the feature matrix as CSV");
    add_common(featurize);

    auto* evaluate = app.add_subcommand("evaluate", "cross-validate one configuration");
    add_common(evaluate);

    auto* compare = app.add_subcommand("compare", "run a configuration grid and compare");
    add_common(compare);

    auto* synth = app.add_subcommand("synth", "generate a synthetic labeled dataset");
    std::size_t synth_n = 3000;
    double synth_fake_fraction = 0.10;
    double synth_domain_reuse = 0.0;
    add_common(synth);
    synth->add_option("--n", synth_n, "record count");
    synth->add_option("--fake-frac", synth_fake_fraction, "fake-class fraction in (0,1)");
    synth->add_option("--domain-reuse", synth_domain_reuse, "chance of reusing a domain");

    std::vector<std::string> argv_storage = args;
    std::vector<const char*> argv;
    argv.push_back("misinfo");
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (validate->parsed()) return detail::cmd_validate(state, strict);
        if (stats->parsed()) return detail::cmd_stats(state, top_n);
        if (age_cmd->parsed() && fetch->parsed())
            return detail::cmd_age_fetch(domains_path, cache_path, rate_ms, fetch_offline);
        if (featurize->parsed()) return detail::cmd_featurize(state);
        if (evaluate->parsed()) return detail::cmd_evaluate(state);
        if (compare->parsed()) return detail::cmd_compare(state);
        if (synth->parsed())
            return detail::cmd_synth(state, synth_n, synth_fake_fraction, synth_domain_reuse);
        std::cerr << app.help();
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace misinfo::cli
