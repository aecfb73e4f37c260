#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "misinfo/common.hpp"
#include "misinfo/csv.hpp"
#include "misinfo/rng.hpp"
#include "misinfo/urlfeat.hpp"

namespace misinfo::corpus {

// One labeled search result. label: 0 = real, 1 = fake/misleading.
struct SerpRecord {
    std::string query;
    std::optional<Date> date;  // null only in lenient loads
    std::string url;
    std::string title;
    std::string description;  // may be empty
    int label = 0;

    friend bool operator==(const SerpRecord&, const SerpRecord&) = default;
};

struct DatasetStats {
    std::size_t n_records = 0;
    std::size_t n_distinct_domains = 0;  // registrable-domain granularity
    std::size_t n_real = 0;
    std::size_t n_fake = 0;
    std::string class_ratio;  // "majority:minority" in rounded percent
    std::optional<Date> date_min;
    std::optional<Date> date_max;
};

struct Dataset {
    std::vector<SerpRecord> records;  // stable file order
    std::string source_path;

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }

    friend bool operator==(const Dataset& a, const Dataset& b) {
        return a.records == b.records;
    }
};

enum class Format { jsonl, csv };

inline Format format_from_string(const std::string& s) {
    if (s == "jsonl") return Format::jsonl;
    if (s == "csv") return Format::csv;
    throw ConfigError("unknown dataset format '" + s + "' (expect jsonl or csv)");
}

// Infers from extension, defaulting to jsonl.
inline Format guess_format(const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return Format::csv;
    return Format::jsonl;
}

struct RowRejection {
    int row = 0;  // 1-based over data rows (JSONL lines / CSV rows past header)
    std::string field;
    std::string message;
};

struct LoadOptions {
    bool strict = true;  // strict: first invalid row throws; lenient: skip and report
};

struct LoadResult {
    Dataset dataset;
    std::vector<RowRejection> rejected;
};

inline const std::vector<std::string>& csv_header() {
    static const std::vector<std::string> h = {"query", "date", "url", "title", "description", "label"};
    return h;
}

namespace detail {

// Validates one record; returns the offending (field, message) if invalid.
// A date failure in lenient mode keeps the record with a null date.
inline std::optional<RowRejection> validate_record(SerpRecord& rec, int row,
                                                   const std::string& raw_date, bool strict) {
    if (rec.label != 0 && rec.label != 1)
        return RowRejection{row, "label", "label must be 0 or 1, got " + std::to_string(rec.label)};
    if (rec.url.empty()) return RowRejection{row, "url", "url is empty"};
    try {
        url::parse_url(rec.url);
    } catch (const ParseError& e) {
        return RowRejection{row, "url", e.what()};
    }
    if (rec.title.empty()) return RowRejection{row, "title", "title is empty"};
    if (!raw_date.empty()) {
        rec.date = parse_date(raw_date);
        if (!rec.date && strict)
            return RowRejection{row, "date", "unparseable date '" + raw_date + "'"};
    } else if (strict) {
        return RowRejection{row, "date", "date is empty"};
    }
    return std::nullopt;
}

}  // namespace detail

inline LoadResult load_dataset(const std::string& path, Format format,
                               const LoadOptions& options = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open dataset " + path);

    LoadResult result;
    result.dataset.source_path = path;

    auto reject = [&](RowRejection r) {
        if (options.strict)
            throw ValidationError(path + " row " + std::to_string(r.row) + " field '" + r.field +
                                  "': " + r.message);
        result.rejected.push_back(std::move(r));
    };

    if (format == Format::jsonl) {
        std::string line;
        int row = 0;
        while (std::getline(in, line)) {
            ++row;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                reject({row, "", std::string("invalid JSON: ") + e.what()});
                continue;
            }
            SerpRecord rec;
            std::string raw_date;
            try {
                rec.query = j.at("query").get<std::string>();
                raw_date = j.at("date").is_null() ? "" : j.at("date").get<std::string>();
                rec.url = j.at("url").get<std::string>();
                rec.title = j.at("title").get<std::string>();
                rec.description = j.at("description").get<std::string>();
                if (!j.at("label").is_number_integer()) {
                    reject({row, "label", "label must be an integer 0 or 1"});
                    continue;
                }
                rec.label = j.at("label").get<int>();
            } catch (const nlohmann::json::exception& e) {
                reject({row, "", std::string("missing/invalid field: ") + e.what()});
                continue;
            }
            if (auto bad = detail::validate_record(rec, row, raw_date, options.strict)) {
                reject(std::move(*bad));
                continue;
            }
            result.dataset.records.push_back(std::move(rec));
        }
    } else {
        std::ostringstream ss;
        ss << in.rdbuf();
        const auto rows = csv::parse(ss.str());
        if (rows.empty()) throw ValidationError(path + ": missing CSV header");
        if (rows[0] != csv_header()) {
            throw ValidationError(path + ": CSV header must be exactly 'query,date,url,title,description,label'");
        }
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const int row = static_cast<int>(i);
            const auto& r = rows[i];
            if (r.size() != csv_header().size()) {
                reject({row, "", "expected 6 fields, got " + std::to_string(r.size())});
                continue;
            }
            SerpRecord rec;
            rec.query = r[0];
            rec.url = r[2];
            rec.title = r[3];
            rec.description = r[4];
            try {
                std::size_t used = 0;
                rec.label = std::stoi(r[5], &used);
                if (used != r[5].size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                reject({row, "label", "label must be an integer 0 or 1, got '" + r[5] + "'"});
                continue;
            }
            if (auto bad = detail::validate_record(rec, row, r[1], options.strict)) {
                reject(std::move(*bad));
                continue;
            }
            result.dataset.records.push_back(std::move(rec));
        }
    }
    return result;
}

inline void save_dataset(const Dataset& dataset, const std::string& path, Format format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write dataset " + path);
    if (format == Format::jsonl) {
        for (const auto& rec : dataset.records) {
            nlohmann::json j{{"query", rec.query},
                             {"date", rec.date ? nlohmann::json(format_date(*rec.date)) : nlohmann::json()},
                             {"url", rec.url},
                             {"title", rec.title},
                             {"description", rec.description},
                             {"label", rec.label}};
            out << j.dump() << '\n';
        }
    } else {
        out << csv::join_row(csv_header()) << "\r\n";
        for (const auto& rec : dataset.records) {
            out << csv::join_row({rec.query, rec.date ? format_date(*rec.date) : "", rec.url,
                                  rec.title, rec.description, std::to_string(rec.label)})
                << "\r\n";
        }
    }
    if (!out.good()) throw IoError("failed writing dataset " + path);
}

inline DatasetStats compute_stats(const Dataset& dataset) {
    if (dataset.empty()) throw ValidationError("compute_stats: empty dataset");
    DatasetStats s;
    s.n_records = dataset.size();
    std::set<std::string> domains;
    for (const auto& rec : dataset.records) {
        domains.insert(url::registrable_domain(rec.url));
        if (rec.label == 1) ++s.n_fake;
        else ++s.n_real;
        if (rec.date) {
            if (!s.date_min || *rec.date < *s.date_min) s.date_min = rec.date;
            if (!s.date_max || *s.date_max < *rec.date) s.date_max = rec.date;
        }
    }
    s.n_distinct_domains = domains.size();
    const double n = static_cast<double>(s.n_records);
    const auto majority = std::max(s.n_real, s.n_fake);
    const auto minority = std::min(s.n_real, s.n_fake);
    const auto pct = [n](std::size_t c) {
        return static_cast<long>(std::lround(100.0 * static_cast<double>(c) / n));
    };
    s.class_ratio = std::to_string(pct(majority)) + ":" + std::to_string(pct(minority));
    return s;
}

struct FoldSplit {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

// Stratified k-fold: per class, indices are shuffled then dealt round-robin,
// so per-fold class counts are within 1 of perfect proportionality.
// Works for any label multiset; classes with fewer than k members are an
// error (two-class training requirements are enforced by cross_validate).
inline std::vector<FoldSplit> stratified_kfold(const Dataset& dataset, std::size_t k,
                                               std::uint64_t seed) {
    if (k < 2) throw ValidationError("stratified_kfold: k must be >= 2");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < dataset.size(); ++i)
        by_class[dataset.records[i].label].push_back(i);
    for (const auto& [label, indices] : by_class) {
        if (indices.size() < k)
            throw ValidationError("stratified_kfold: class " + std::to_string(label) + " has " +
                                  std::to_string(indices.size()) + " members, fewer than k=" +
                                  std::to_string(k));
    }

    std::vector<std::vector<std::size_t>> test_folds(k);
    for (auto& [label, indices] : by_class) {
        auto rng = make_rng(derive_seed(seed, "kfold", static_cast<std::uint64_t>(label)));
        shuffle_inplace(indices, rng);
        for (std::size_t i = 0; i < indices.size(); ++i) test_folds[i % k].push_back(indices[i]);
    }

    std::vector<FoldSplit> folds(k);
    for (std::size_t f = 0; f < k; ++f) {
        auto& test = test_folds[f];
        std::sort(test.begin(), test.end());
        std::vector<bool> in_test(dataset.size(), false);
        for (auto i : test) in_test[i] = true;
        folds[f].test_indices = std::move(test);
        for (std::size_t i = 0; i < dataset.size(); ++i)
            if (!in_test[i]) folds[f].train_indices.push_back(i);
    }
    return folds;
}

}  // namespace misinfo::corpus
