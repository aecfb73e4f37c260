#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "misinfo/common.hpp"
#include "misinfo/corpus.hpp"
#include "misinfo/stopwords.hpp"

namespace misinfo::text {

// Stylistic counts computed on the RAW text, before any cleaning.
// Quote characters counted: " ` and the UTF-8 curly double quotes.
// An uppercase word is a maximal ASCII-alphabetic token, length >= 2, with
// every letter in A-Z (so "US" counts, "A" and "In" do not).
struct FieldStyle {
    int exclamation_count = 0;
    int question_count = 0;
    int quote_count = 0;
    int colon_count = 0;
    int uppercase_word_count = 0;

    friend bool operator==(const FieldStyle&, const FieldStyle&) = default;
};

struct StyleFeatures {
    FieldStyle title;
    FieldStyle description;

    friend bool operator==(const StyleFeatures&, const StyleFeatures&) = default;
};

namespace detail {

inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

inline FieldStyle field_style(std::string_view s) {
    FieldStyle f;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        switch (c) {
            case '!': ++f.exclamation_count; break;
            case '?': ++f.question_count; break;
            case ':': ++f.colon_count; break;
            case '"': case '`': ++f.quote_count; break;
            default:
                // curly double quotes U+201C / U+201D (e2 80 9c / e2 80 9d)
                if (static_cast<unsigned char>(c) == 0xe2 && i + 2 < s.size() &&
                    static_cast<unsigned char>(s[i + 1]) == 0x80 &&
                    (static_cast<unsigned char>(s[i + 2]) == 0x9c ||
                     static_cast<unsigned char>(s[i + 2]) == 0x9d)) {
                    ++f.quote_count;
                }
        }
    }
    std::size_t i = 0;
    while (i < s.size()) {
        if (!is_ascii_alpha(s[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        bool all_upper = true;
        while (j < s.size() && is_ascii_alpha(s[j])) {
            all_upper = all_upper && is_upper(s[j]);
            ++j;
        }
        if (all_upper && j - i >= 2) ++f.uppercase_word_count;
        i = j;
    }
    return f;
}

}  // namespace detail

inline StyleFeatures style_features(std::string_view title, std::string_view description) {
    return {detail::field_style(title), detail::field_style(description)};
}

// Lowercases, strips punctuation/symbols/dashes (the counted marks are
// handled by style_features, not kept as tokens), drops stopwords.
// Tokens are maximal runs of [a-z0-9]; order preserved.
inline std::vector<std::string> clean_text(std::string_view raw,
                                           const std::set<std::string>& stopwords) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            if (!stopwords.count(cur)) tokens.push_back(cur);
            cur.clear();
        }
    };
    for (char c : raw) {
        if (c >= 'A' && c <= 'Z') cur += static_cast<char>(c - 'A' + 'a');
        else if ((c >= 'a' && c <= 'z') || is_ascii_digit(c)) cur += c;
        else flush();
    }
    flush();
    return tokens;
}

struct Vocabulary {
    std::map<std::string, std::size_t> index;    // token -> column, lexicographic order
    std::map<std::string, std::size_t> doc_freq; // over the fitted corpus
    std::size_t n_documents = 0;
    std::size_t min_df = 1;

    std::size_t size() const { return index.size(); }

    std::vector<std::string> tokens_in_order() const {
        std::vector<std::string> out(index.size());
        for (const auto& [tok, col] : index) out[col] = tok;
        return out;
    }
};

inline Vocabulary build_vocab(const std::vector<std::vector<std::string>>& corpus,
                              std::size_t min_df) {
    if (corpus.empty()) throw ValidationError("build_vocab: empty corpus");
    Vocabulary v;
    v.n_documents = corpus.size();
    v.min_df = min_df;
    for (const auto& doc : corpus) {
        std::set<std::string> seen(doc.begin(), doc.end());
        for (const auto& tok : seen) ++v.doc_freq[tok];
    }
    std::size_t col = 0;
    for (const auto& [tok, df] : v.doc_freq) {
        if (df >= min_df) v.index.emplace(tok, col++);
    }
    // doc_freq keeps only retained tokens so df(token) >= min_df holds.
    for (auto it = v.doc_freq.begin(); it != v.doc_freq.end();) {
        if (!v.index.count(it->first)) it = v.doc_freq.erase(it);
        else ++it;
    }
    return v;
}

enum class TextScheme { bow, tfidf };

inline TextScheme scheme_from_string(const std::string& s) {
    if (s == "bow") return TextScheme::bow;
    if (s == "tfidf") return TextScheme::tfidf;
    throw ConfigError("unknown text scheme '" + s + "' (expect bow or tfidf)");
}

inline std::string to_string(TextScheme s) { return s == TextScheme::bow ? "bow" : "tfidf"; }

// Sparse non-negative weights over Vocabulary columns.
struct TextVector {
    std::vector<std::pair<std::size_t, double>> entries;  // (column, weight), column-sorted
    TextScheme scheme = TextScheme::bow;
};

inline TextVector bow_vectorize(const std::vector<std::string>& tokens, const Vocabulary& vocab) {
    std::map<std::size_t, double> counts;
    for (const auto& tok : tokens) {
        if (auto it = vocab.index.find(tok); it != vocab.index.end()) counts[it->second] += 1.0;
    }
    TextVector v;
    v.scheme = TextScheme::bow;
    v.entries.assign(counts.begin(), counts.end());
    return v;
}

// Frozen TF-IDF transform. idf(t) = ln((1+N)/(1+df(t))) + 1; weight = count
// times idf; rows L2-normalized unless all-zero. Unseen documents reuse the
// fitted idf.
struct TfidfModel {
    Vocabulary vocab;
    std::vector<double> idf;  // aligned with vocab columns

    TextVector transform(const std::vector<std::string>& tokens) const {
        TextVector v = bow_vectorize(tokens, vocab);
        v.scheme = TextScheme::tfidf;
        double norm_sq = 0.0;
        for (auto& [col, w] : v.entries) {
            w *= idf[col];
            norm_sq += w * w;
        }
        if (norm_sq > 0.0) {
            const double inv = 1.0 / std::sqrt(norm_sq);
            for (auto& [col, w] : v.entries) w *= inv;
        }
        return v;
    }
};

inline TfidfModel tfidf_fit(const std::vector<std::vector<std::string>>& corpus,
                            std::size_t min_df) {
    TfidfModel m;
    m.vocab = build_vocab(corpus, min_df);
    m.idf.resize(m.vocab.size());
    const double n = static_cast<double>(m.vocab.n_documents);
    for (const auto& [tok, col] : m.vocab.index) {
        const double df = static_cast<double>(m.vocab.doc_freq.at(tok));
        m.idf[col] = std::log((1.0 + n) / (1.0 + df)) + 1.0;
    }
    return m;
}

inline std::pair<TfidfModel, std::vector<TextVector>> tfidf_fit_transform(
    const std::vector<std::vector<std::string>>& corpus, std::size_t min_df) {
    TfidfModel m = tfidf_fit(corpus, min_df);
    std::vector<TextVector> rows;
    rows.reserve(corpus.size());
    for (const auto& doc : corpus) rows.push_back(m.transform(doc));
    return {std::move(m), std::move(rows)};
}

// Uppercase-word frequency ranking over title+description of one class.
// Descending frequency, ties lexicographic.
inline std::vector<std::pair<std::string, std::size_t>> top_uppercase_words(
    const corpus::Dataset& dataset, int label, std::size_t n) {
    std::map<std::string, std::size_t> freq;
    auto scan = [&freq](std::string_view s) {
        std::size_t i = 0;
        while (i < s.size()) {
            if (!is_ascii_alpha(s[i])) {
                ++i;
                continue;
            }
            std::size_t j = i;
            bool all_upper = true;
            while (j < s.size() && is_ascii_alpha(s[j])) {
                all_upper = all_upper && detail::is_upper(s[j]);
                ++j;
            }
            if (all_upper && j - i >= 2) ++freq[std::string(s.substr(i, j - i))];
            i = j;
        }
    };
    for (const auto& rec : dataset.records) {
        if (rec.label != label) continue;
        scan(rec.title);
        scan(rec.description);
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > n) ranked.resize(n);
    return ranked;
}

// The per-record document fed to the vectorizers: title and description
// cleaned and concatenated.
inline std::vector<std::string> record_tokens(const corpus::SerpRecord& rec,
                                              const std::set<std::string>& stopwords) {
    auto tokens = clean_text(rec.title, stopwords);
    auto desc = clean_text(rec.description, stopwords);
    tokens.insert(tokens.end(), desc.begin(), desc.end());
    return tokens;
}

}  // namespace misinfo::text
