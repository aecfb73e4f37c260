#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "misinfo/common.hpp"
#include "misinfo/corpus.hpp"
#include "misinfo/csv.hpp"
#include "misinfo/domain_age.hpp"
#include "misinfo/metrics.hpp"
#include "misinfo/rng.hpp"
#include "misinfo/stats.hpp"
#include "misinfo/textfeat.hpp"
#include "misinfo/urlfeat.hpp"

namespace misinfo::pipeline {

enum class ColumnBlock { text_bow, text_tfidf, text_style, url };

inline std::string to_string(ColumnBlock b) {
    switch (b) {
        case ColumnBlock::text_bow: return "text_bow";
        case ColumnBlock::text_tfidf: return "text_tfidf";
        case ColumnBlock::text_style: return "text_style";
        case ColumnBlock::url: return "url";
    }
    return "url";
}

// Dense row-major design matrix with named columns, a missing-value mask and
// aligned labels. Immutable by convention once built; transforms return
// copies.
struct FeatureMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> values;        // row-major
    std::vector<std::uint8_t> missing; // 1 = undefined cell
    std::vector<std::string> column_names;
    std::vector<ColumnBlock> column_block;
    std::vector<int> labels;

    double at(std::size_t r, std::size_t c) const { return values[r * n_cols + c]; }
    double& at(std::size_t r, std::size_t c) { return values[r * n_cols + c]; }
    bool is_missing(std::size_t r, std::size_t c) const { return missing[r * n_cols + c] != 0; }
    void set_missing(std::size_t r, std::size_t c, bool m) { missing[r * n_cols + c] = m ? 1 : 0; }

    bool has_missing() const {
        for (auto m : missing)
            if (m) return true;
        return false;
    }

    std::vector<double> column(std::size_t c) const {
        std::vector<double> out(n_rows);
        for (std::size_t r = 0; r < n_rows; ++r) out[r] = at(r, c);
        return out;
    }

    std::uint64_t layout_hash() const { return fnv1a(column_names); }

    static FeatureMatrix zeros(std::size_t rows, std::size_t cols) {
        FeatureMatrix m;
        m.n_rows = rows;
        m.n_cols = cols;
        m.values.assign(rows * cols, 0.0);
        m.missing.assign(rows * cols, 0);
        return m;
    }

    FeatureMatrix select_columns(const std::vector<std::size_t>& cols) const {
        FeatureMatrix out = zeros(n_rows, cols.size());
        out.labels = labels;
        out.column_names.reserve(cols.size());
        out.column_block.reserve(cols.size());
        for (auto c : cols) {
            out.column_names.push_back(column_names[c]);
            out.column_block.push_back(column_block[c]);
        }
        for (std::size_t r = 0; r < n_rows; ++r) {
            for (std::size_t j = 0; j < cols.size(); ++j) {
                out.at(r, j) = at(r, cols[j]);
                out.set_missing(r, j, is_missing(r, cols[j]));
            }
        }
        return out;
    }

    FeatureMatrix select_rows(std::span<const std::size_t> rows) const {
        FeatureMatrix out = zeros(rows.size(), n_cols);
        out.column_names = column_names;
        out.column_block = column_block;
        out.labels.reserve(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto r = rows[i];
            for (std::size_t c = 0; c < n_cols; ++c) {
                out.at(i, c) = at(r, c);
                out.set_missing(i, c, is_missing(r, c));
            }
            if (!labels.empty()) out.labels.push_back(labels[r]);
        }
        return out;
    }
};

struct FeatureConfig {
    text::TextScheme text_scheme = text::TextScheme::bow;
    bool include_style = true;
    bool include_url = false;
    bool include_url_token_bow = false;  // exploratory block, off by default
    std::size_t min_df = 2;
    std::string stopword_path;   // empty -> built-in list
    std::string word_list_dir;   // empty -> built-in lists
};

// Everything fitted from a training split that featurization needs.
struct FittedTransforms {
    text::TextScheme scheme = text::TextScheme::bow;
    text::Vocabulary vocab;                     // bow
    std::optional<text::TfidfModel> tfidf;      // tfidf
    std::optional<text::Vocabulary> url_vocab;  // URL-token bow, when enabled
    std::set<std::string> stopwords;
    url::WordLists word_lists;

    const text::Vocabulary& text_vocab() const {
        return scheme == text::TextScheme::tfidf ? tfidf->vocab : vocab;
    }
};

inline url::WordLists load_word_lists(const std::string& dir) {
    url::WordLists lists;
    if (dir.empty()) return lists;
    const std::string sep = dir.back() == '/' ? "" : "/";
    lists.blog = url::load_word_list(dir + sep + "url_words_blog.txt");
    lists.social = url::load_word_list(dir + sep + "url_words_social.txt");
    lists.news = url::load_word_list(dir + sep + "url_words_news.txt");
    lists.covid = url::load_word_list(dir + sep + "url_words_covid.txt");
    return lists;
}

inline FittedTransforms fit_transforms(const corpus::Dataset& dataset,
                                       std::span<const std::size_t> train_rows,
                                       const FeatureConfig& config) {
    FittedTransforms t;
    t.scheme = config.text_scheme;
    t.stopwords = config.stopword_path.empty() ? text::default_stopwords()
                                               : text::load_stopwords(config.stopword_path);
    t.word_lists = load_word_lists(config.word_list_dir);

    std::vector<std::vector<std::string>> docs;
    docs.reserve(train_rows.size());
    for (auto r : train_rows)
        docs.push_back(text::record_tokens(dataset.records[r], t.stopwords));
    if (config.text_scheme == text::TextScheme::tfidf) {
        t.tfidf = text::tfidf_fit(docs, config.min_df);
    } else {
        t.vocab = text::build_vocab(docs, config.min_df);
    }

    if (config.include_url_token_bow) {
        std::vector<std::vector<std::string>> url_docs;
        url_docs.reserve(train_rows.size());
        for (auto r : train_rows) {
            std::vector<std::string> toks;
            for (auto& tok : url::tokenize_url(dataset.records[r].url)) toks.push_back(tok.text);
            url_docs.push_back(std::move(toks));
        }
        t.url_vocab = text::build_vocab(url_docs, config.min_df);
    }
    return t;
}

inline const std::vector<std::string>& style_column_names() {
    static const std::vector<std::string> names = {
        "style:title_exclamation", "style:title_question", "style:title_quote",
        "style:title_colon",       "style:title_uppercase_words",
        "style:desc_exclamation",  "style:desc_question",  "style:desc_quote",
        "style:desc_colon",        "style:desc_uppercase_words"};
    return names;
}

// Builds the design matrix for the given rows. Column blocks are ordered
// [text | style | url]; a missing domain age is a masked cell.
inline FeatureMatrix assemble(const corpus::Dataset& dataset,
                              std::span<const std::size_t> rows, const FeatureConfig& config,
                              const FittedTransforms& transforms,
                              age::DomainAgeProvider* age_provider) {
    if (config.include_url && !age_provider)
        throw ConfigError("assemble: URL feature block requires an age provider");

    const auto& vocab = transforms.text_vocab();
    const std::vector<std::string> vocab_tokens = vocab.tokens_in_order();
    const std::string text_prefix = config.text_scheme == text::TextScheme::bow ? "bow:" : "tfidf:";
    const ColumnBlock text_block = config.text_scheme == text::TextScheme::bow
                                       ? ColumnBlock::text_bow
                                       : ColumnBlock::text_tfidf;

    std::vector<std::string> names;
    std::vector<ColumnBlock> blocks;
    for (const auto& tok : vocab_tokens) {
        names.push_back(text_prefix + tok);
        blocks.push_back(text_block);
    }
    if (config.include_style) {
        for (const auto& n : style_column_names()) {
            names.push_back(n);
            blocks.push_back(ColumnBlock::text_style);
        }
    }
    std::vector<std::string> url_vocab_tokens;
    if (config.include_url_token_bow && transforms.url_vocab) {
        url_vocab_tokens = transforms.url_vocab->tokens_in_order();
        for (const auto& tok : url_vocab_tokens) {
            names.push_back("urlbow:" + tok);
            blocks.push_back(ColumnBlock::url);
        }
    }
    std::size_t url_block_start = names.size();
    if (config.include_url) {
        for (const auto& n : url::UrlFeatures::column_names()) {
            names.push_back("url:" + n);
            blocks.push_back(ColumnBlock::url);
        }
    }

    FeatureMatrix m = FeatureMatrix::zeros(rows.size(), names.size());
    m.column_names = std::move(names);
    m.column_block = std::move(blocks);
    m.labels.reserve(rows.size());

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& rec = dataset.records[rows[i]];
        m.labels.push_back(rec.label);

        const auto tokens = text::record_tokens(rec, transforms.stopwords);
        const text::TextVector tv = config.text_scheme == text::TextScheme::tfidf
                                        ? transforms.tfidf->transform(tokens)
                                        : text::bow_vectorize(tokens, vocab);
        for (const auto& [col, w] : tv.entries) m.at(i, col) = w;

        std::size_t offset = vocab_tokens.size();
        if (config.include_style) {
            const auto style = text::style_features(rec.title, rec.description);
            const double vals[10] = {
                static_cast<double>(style.title.exclamation_count),
                static_cast<double>(style.title.question_count),
                static_cast<double>(style.title.quote_count),
                static_cast<double>(style.title.colon_count),
                static_cast<double>(style.title.uppercase_word_count),
                static_cast<double>(style.description.exclamation_count),
                static_cast<double>(style.description.question_count),
                static_cast<double>(style.description.quote_count),
                static_cast<double>(style.description.colon_count),
                static_cast<double>(style.description.uppercase_word_count)};
            for (std::size_t j = 0; j < 10; ++j) m.at(i, offset + j) = vals[j];
            offset += 10;
        }
        if (config.include_url_token_bow && transforms.url_vocab) {
            std::vector<std::string> toks;
            for (auto& tok : url::tokenize_url(rec.url)) toks.push_back(tok.text);
            const auto uv = text::bow_vectorize(toks, *transforms.url_vocab);
            for (const auto& [col, w] : uv.entries) m.at(i, offset + col) = w;
            offset += url_vocab_tokens.size();
        }
        if (config.include_url) {
            std::optional<int> age_year =
                age_provider->lookup_age(url::registrable_domain(rec.url));
            bool age_missing = false;
            const auto row = url::extract_url_features(rec.url, age_year, transforms.word_lists)
                                 .to_row(&age_missing);
            for (std::size_t j = 0; j < row.size(); ++j) m.at(i, url_block_start + j) = row[j];
            if (age_missing) {
                const std::size_t age_col = url_block_start + 7;  // url:age_year
                m.set_missing(i, age_col, true);
                m.at(i, age_col) = 0.0;
            }
        }
    }
    return m;
}

inline FeatureMatrix assemble(const corpus::Dataset& dataset, const FeatureConfig& config,
                              const FittedTransforms& transforms,
                              age::DomainAgeProvider* age_provider) {
    std::vector<std::size_t> rows(dataset.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return assemble(dataset, rows, config, transforms, age_provider);
}

namespace detail {

// Squared distance over mutually observed columns; +inf when none overlap.
inline double masked_distance_sq(const FeatureMatrix& a, std::size_t ra, const FeatureMatrix& b,
                                 std::size_t rb) {
    double d = 0.0;
    bool any = false;
    for (std::size_t c = 0; c < a.n_cols; ++c) {
        if (a.is_missing(ra, c) || b.is_missing(rb, c)) continue;
        const double diff = a.at(ra, c) - b.at(rb, c);
        d += diff * diff;
        any = true;
    }
    return any ? d : std::numeric_limits<double>::infinity();
}

}  // namespace detail

// Fills missing cells of `target` with the unweighted mean of the k nearest
// rows of `reference` that observe that column (Euclidean distance over
// mutually observed columns, ties broken by row index). Complete targets are
// returned unchanged.
inline FeatureMatrix knn_impute_with_reference(const FeatureMatrix& target,
                                               const FeatureMatrix& reference, std::size_t k) {
    if (k == 0) throw ConfigError("knn_impute: k must be >= 1");
    FeatureMatrix out = target;
    if (!target.has_missing()) return out;

    // Column-wise candidate lists over the reference.
    std::vector<std::vector<std::size_t>> observed(reference.n_cols);
    for (std::size_t c = 0; c < reference.n_cols; ++c)
        for (std::size_t r = 0; r < reference.n_rows; ++r)
            if (!reference.is_missing(r, c)) observed[c].push_back(r);

    for (std::size_t c = 0; c < target.n_cols; ++c) {
        bool column_has_missing = false;
        for (std::size_t r = 0; r < target.n_rows; ++r)
            column_has_missing = column_has_missing || target.is_missing(r, c);
        if (!column_has_missing) continue;
        if (observed[c].empty())
            throw ValidationError("knn_impute: column '" + target.column_names[c] +
                                  "' has no observed values to impute from");
        for (std::size_t r = 0; r < target.n_rows; ++r) {
            if (!target.is_missing(r, c)) continue;
            std::vector<std::pair<double, std::size_t>> dist;
            dist.reserve(observed[c].size());
            for (auto cand : observed[c])
                dist.emplace_back(detail::masked_distance_sq(target, r, reference, cand), cand);
            const std::size_t use = std::min(k, dist.size());
            std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(use),
                              dist.end());
            double sum = 0.0;
            for (std::size_t i = 0; i < use; ++i) sum += reference.at(dist[i].second, c);
            out.at(r, c) = sum / static_cast<double>(use);
            out.set_missing(r, c, false);
        }
    }
    return out;
}

inline FeatureMatrix knn_impute(const FeatureMatrix& matrix, std::size_t k) {
    return knn_impute_with_reference(matrix, matrix, k);
}

// Per-column training min/max.
struct ScalerParams {
    std::vector<double> min;
    std::vector<double> max;
};

inline ScalerParams minmax_fit(const FeatureMatrix& m) {
    ScalerParams p;
    p.min.assign(m.n_cols, std::numeric_limits<double>::infinity());
    p.max.assign(m.n_cols, -std::numeric_limits<double>::infinity());
    for (std::size_t r = 0; r < m.n_rows; ++r) {
        for (std::size_t c = 0; c < m.n_cols; ++c) {
            const double v = m.at(r, c);
            p.min[c] = std::min(p.min[c], v);
            p.max[c] = std::max(p.max[c], v);
        }
    }
    return p;
}

// x -> (x - min)/(max - min); constant training columns map to 0; values
// outside the training range are not clamped.
inline FeatureMatrix minmax_apply(const FeatureMatrix& m, const ScalerParams& p) {
    if (p.min.size() != m.n_cols) throw ValidationError("minmax_apply: params/matrix width mismatch");
    FeatureMatrix out = m;
    for (std::size_t c = 0; c < m.n_cols; ++c) {
        const double range = p.max[c] - p.min[c];
        for (std::size_t r = 0; r < m.n_rows; ++r) {
            out.at(r, c) = range > 0.0 ? (m.at(r, c) - p.min[c]) / range : 0.0;
        }
    }
    return out;
}

struct ColumnSelection {
    std::string column;
    std::optional<double> chi2;
    std::optional<double> p_value;
    bool dropped_by_chi2 = false;
    std::string dropped_by_correlation_with;  // partner column, empty if kept
    std::optional<double> importance_mean;
    std::optional<double> importance_std;
};

struct SelectionReport {
    std::vector<ColumnSelection> columns;

    ColumnSelection* find(const std::string& name) {
        for (auto& c : columns)
            if (c.column == name) return &c;
        return nullptr;
    }

    std::string to_csv() const {
        std::string out = "column,chi2,p,dropped_by,importance_mean,importance_std\n";
        for (const auto& c : columns) {
            std::string dropped;
            if (c.dropped_by_chi2) dropped = "chi2";
            else if (!c.dropped_by_correlation_with.empty())
                dropped = "correlation:" + c.dropped_by_correlation_with;
            out += csv::join_row(
                {c.column, c.chi2 ? csv::format_double(*c.chi2) : "",
                 c.p_value ? csv::format_double(*c.p_value) : "", dropped,
                 c.importance_mean ? csv::format_double(*c.importance_mean) : "",
                 c.importance_std ? csv::format_double(*c.importance_std) : ""});
            out += '\n';
        }
        return out;
    }
};

enum class Binarize { median, mean };

struct SelectionOptions {
    double alpha = 0.05;
    double corr_threshold = 0.7;
    bool select_text = false;  // default: chi2/correlation act on url+style blocks only
    Binarize binarize = Binarize::median;
};

namespace detail {

inline bool is_binary_column(const std::vector<double>& col) {
    for (double v : col)
        if (v != 0.0 && v != 1.0) return false;
    return true;
}

inline bool selection_applies(ColumnBlock block, const SelectionOptions& opt) {
    if (block == ColumnBlock::url || block == ColumnBlock::text_style) return true;
    return opt.select_text;
}

}  // namespace detail

struct SelectionOutcome {
    SelectionReport report;
    std::vector<std::size_t> retained;  // column indices into the input matrix
};

// Chi-squared independence filter, feature vs. label, 1 dof. Binary columns
// enter the 2x2 table directly; continuous columns are binarized at the
// median (or mean). Retained iff p < alpha.
inline SelectionOutcome chi2_filter(const FeatureMatrix& m, std::span<const int> labels,
                                    const SelectionOptions& opt = {}) {
    if (labels.size() != m.n_rows) throw ValidationError("chi2_filter: label count mismatch");
    SelectionOutcome out;
    out.report.columns.resize(m.n_cols);
    for (std::size_t c = 0; c < m.n_cols; ++c) {
        auto& sel = out.report.columns[c];
        sel.column = m.column_names[c];
        if (!detail::selection_applies(m.column_block[c], opt)) {
            out.retained.push_back(c);
            continue;
        }
        const auto col = m.column(c);
        std::vector<int> bin(col.size());
        if (detail::is_binary_column(col)) {
            for (std::size_t i = 0; i < col.size(); ++i) bin[i] = col[i] != 0.0 ? 1 : 0;
        } else {
            const double thr = opt.binarize == Binarize::median ? stats::median(col)
                                                                : stats::mean(col);
            for (std::size_t i = 0; i < col.size(); ++i) bin[i] = col[i] > thr ? 1 : 0;
        }
        double n11 = 0, n10 = 0, n01 = 0, n00 = 0;
        for (std::size_t i = 0; i < bin.size(); ++i) {
            if (bin[i] == 1) {
                if (labels[i] == 1) ++n11;
                else ++n10;
            } else {
                if (labels[i] == 1) ++n01;
                else ++n00;
            }
        }
        const auto result = stats::chi2_2x2(n11, n10, n01, n00);
        sel.chi2 = result.statistic;
        sel.p_value = result.p_value;
        if (result.p_value < opt.alpha) {
            out.retained.push_back(c);
        } else {
            sel.dropped_by_chi2 = true;
        }
    }
    return out;
}

// Greedy multicollinearity prune over the retained columns: walking columns
// in order, any later column with |r| >= threshold against an earlier kept
// one is dropped (the report records the partner). Zero-variance columns
// correlate 0 with everything.
inline std::vector<std::size_t> correlation_prune(const FeatureMatrix& m,
                                                  const std::vector<std::size_t>& retained,
                                                  SelectionReport& report,
                                                  const SelectionOptions& opt = {}) {
    std::vector<std::size_t> kept;
    std::vector<std::vector<double>> kept_cols;
    for (auto c : retained) {
        if (!detail::selection_applies(m.column_block[c], opt)) {
            kept.push_back(c);
            kept_cols.push_back({});  // never correlated against
            continue;
        }
        const auto col = m.column(c);
        bool dropped = false;
        for (std::size_t j = 0; j < kept.size(); ++j) {
            if (kept_cols[j].empty()) continue;
            const double r = stats::pearson(kept_cols[j], col);
            if (std::fabs(r) >= opt.corr_threshold) {
                if (auto* sel = report.find(m.column_names[c]))
                    sel->dropped_by_correlation_with = m.column_names[kept[j]];
                dropped = true;
                break;
            }
        }
        if (!dropped) {
            kept.push_back(c);
            kept_cols.push_back(col);
        }
    }
    return kept;
}

// Convenience: chi2 filter then correlation prune, one report.
inline SelectionOutcome select_features(const FeatureMatrix& m, std::span<const int> labels,
                                        const SelectionOptions& opt = {}) {
    SelectionOutcome out = chi2_filter(m, labels, opt);
    out.retained = correlation_prune(m, out.retained, out.report, opt);
    return out;
}

struct Importance {
    double mean = 0.0;
    double stddev = 0.0;
};

// Records per-column importances into the selection report and, when
// drop_nonpositive is set, removes columns whose mean importance is <= 0
// (importance is a diagnostic report by default, a dropper only on request).
inline std::vector<std::size_t> apply_importance_filter(
    SelectionReport& report, const std::vector<std::size_t>& retained,
    const std::vector<std::string>& column_names, const std::vector<Importance>& importances,
    bool drop_nonpositive) {
    if (retained.size() != importances.size())
        throw ValidationError("apply_importance_filter: importance count mismatch");
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < retained.size(); ++i) {
        if (auto* sel = report.find(column_names[retained[i]])) {
            sel->importance_mean = importances[i].mean;
            sel->importance_std = importances[i].stddev;
        }
        if (!drop_nonpositive || importances[i].mean > 0.0) kept.push_back(retained[i]);
    }
    return kept;
}

// Mean drop of the metric when one column is shuffled within the evaluation
// set; shuffles draw from independent seed streams per (column, repeat).
inline std::vector<Importance> permutation_importance(
    const std::function<std::vector<int>(const FeatureMatrix&)>& predict,
    const FeatureMatrix& matrix, std::span<const int> labels, eval::Metric metric,
    std::size_t n_repeats, std::uint64_t seed) {
    if (n_repeats == 0) throw ConfigError("permutation_importance: n_repeats must be >= 1");
    const double baseline =
        eval::metric_value(eval::metrics(eval::confusion(labels, predict(matrix))), metric);
    std::vector<Importance> out(matrix.n_cols);
    FeatureMatrix work = matrix;
    for (std::size_t c = 0; c < matrix.n_cols; ++c) {
        const auto original = matrix.column(c);
        std::vector<double> drops;
        drops.reserve(n_repeats);
        for (std::size_t rep = 0; rep < n_repeats; ++rep) {
            auto rng = make_rng(derive_seed(seed, "perm", c, rep));
            const auto perm = random_permutation(matrix.n_rows, rng);
            for (std::size_t r = 0; r < matrix.n_rows; ++r) work.at(r, c) = original[perm[r]];
            const double score =
                eval::metric_value(eval::metrics(eval::confusion(labels, predict(work))), metric);
            drops.push_back(baseline - score);
        }
        for (std::size_t r = 0; r < matrix.n_rows; ++r) work.at(r, c) = original[r];
        out[c].mean = stats::mean(drops);
        out[c].stddev = drops.size() > 1 ? stats::sample_stddev(drops) : 0.0;
    }
    return out;
}

}  // namespace misinfo::pipeline
