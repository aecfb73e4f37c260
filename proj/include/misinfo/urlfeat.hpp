#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "misinfo/common.hpp"
#include "misinfo/url_words.hpp"

namespace misinfo::url {

enum class Scheme { http, https, other, absent };

struct ParsedUrl {
    Scheme scheme = Scheme::absent;
    std::string scheme_text;               // lowercased raw scheme, empty when absent
    std::string third_level;               // "" when fewer than 3 labels
    std::string second_level;              // "" when fewer than 2 labels
    std::string tld;                       // final host label
    std::vector<std::string> host_labels;  // join with '.' == full_host
    std::string full_host;                 // lowercased
    std::string path;                      // remainder incl. query/fragment, case preserved
};

// Splits scheme at "://", host at the first of '/', '?', '#'. Host and scheme
// are lowercased, path keeps its case. A trailing ":port" is stripped from
// the authority before label splitting.
inline ParsedUrl parse_url(std::string_view url) {
    if (url.empty()) throw ParseError("parse_url: empty URL");
    ParsedUrl out;
    std::string_view rest = url;
    if (const auto sep = rest.find("://"); sep != std::string_view::npos) {
        out.scheme_text = to_lower_ascii(rest.substr(0, sep));
        if (out.scheme_text == "http") out.scheme = Scheme::http;
        else if (out.scheme_text == "https") out.scheme = Scheme::https;
        else out.scheme = Scheme::other;
        rest = rest.substr(sep + 3);
    }
    const auto host_end = rest.find_first_of("/?#");
    std::string_view authority = rest.substr(0, host_end);
    if (host_end != std::string_view::npos) out.path = std::string(rest.substr(host_end));

    // Bracketed IPv6 literal: keep the brackets as a single label.
    if (!authority.empty() && authority.front() == '[') {
        const auto close = authority.find(']');
        if (close == std::string_view::npos) throw ParseError("parse_url: unterminated IPv6 literal");
        out.full_host = to_lower_ascii(authority.substr(0, close + 1));
        out.host_labels = {out.full_host};
        out.tld = out.full_host;
        return out;
    }

    // Strip :port (digits only).
    if (const auto colon = authority.rfind(':'); colon != std::string_view::npos) {
        bool all_digits = colon + 1 < authority.size();
        for (std::size_t i = colon + 1; i < authority.size(); ++i)
            all_digits = all_digits && is_ascii_digit(authority[i]);
        if (all_digits) authority = authority.substr(0, colon);
    }

    out.full_host = to_lower_ascii(authority);
    if (out.full_host.empty()) throw ParseError("parse_url: no host in '" + std::string(url) + "'");

    std::size_t start = 0;
    while (true) {
        const auto dot = out.full_host.find('.', start);
        out.host_labels.push_back(out.full_host.substr(start, dot - start));
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    for (const auto& label : out.host_labels)
        if (label.empty()) throw ParseError("parse_url: empty host label in '" + std::string(url) + "'");

    const std::size_t n = out.host_labels.size();
    out.tld = out.host_labels[n - 1];
    if (n >= 2) out.second_level = out.host_labels[n - 2];
    if (n >= 3) out.third_level = out.host_labels[n - 3];
    return out;
}

// Registrable domain used for cache keys and distinct-domain counts:
// second-level + "." + TLD (the bare host when it has a single label).
inline std::string registrable_domain(const ParsedUrl& p) {
    if (p.second_level.empty()) return p.full_host;
    return p.second_level + "." + p.tld;
}

inline std::string registrable_domain(std::string_view url) {
    return registrable_domain(parse_url(url));
}

enum class TokenZone { scheme, host, tld, path };

struct UrlToken {
    std::string text;  // lowercased
    TokenZone zone;
};

// Splits on '/', '?', '.', '=', '_' and '-' (plus the "://" separator),
// drops empty tokens, and tags each token with the URL part it came from.
inline std::vector<UrlToken> tokenize_url(std::string_view url) {
    if (url.empty()) throw ParseError("tokenize_url: empty URL");
    const ParsedUrl parsed = parse_url(url);
    std::vector<UrlToken> tokens;
    auto split_into = [&tokens](std::string_view text, TokenZone zone) {
        std::string cur;
        auto flush = [&] {
            if (!cur.empty()) {
                tokens.push_back({to_lower_ascii(cur), zone});
                cur.clear();
            }
        };
        for (char c : text) {
            switch (c) {
                case '/': case '?': case '.': case '=': case '_': case '-':
                    flush();
                    break;
                default:
                    cur += c;
            }
        }
        flush();
    };
    if (parsed.scheme != Scheme::absent) split_into(parsed.scheme_text, TokenZone::scheme);
    for (std::size_t i = 0; i < parsed.host_labels.size(); ++i) {
        const bool is_tld = parsed.host_labels.size() >= 2 && i + 1 == parsed.host_labels.size();
        split_into(parsed.host_labels[i], is_tld ? TokenZone::tld : TokenZone::host);
    }
    split_into(parsed.path, TokenZone::path);
    return tokens;
}

struct LexicalCounts {
    int url_length = 0;
    int host_length = 0;
    int dot_count = 0;
    int semicolon_count = 0;
    int ampersand_count = 0;
    int slash_count = 0;
    int hyphen_count = 0;
    int underscore_count = 0;
    int equal_count = 0;
    int question_count = 0;
    int at_count = 0;
    int digit_count = 0;
};

// Character counts over the full URL string, scheme included.
inline LexicalCounts lexical_counts(std::string_view url) {
    LexicalCounts c;
    c.url_length = static_cast<int>(url.size());
    c.host_length = static_cast<int>(parse_url(url).full_host.size());
    for (char ch : url) {
        switch (ch) {
            case '.': ++c.dot_count; break;
            case ';': ++c.semicolon_count; break;
            case '&': ++c.ampersand_count; break;
            case '/': ++c.slash_count; break;
            case '-': ++c.hyphen_count; break;
            case '_': ++c.underscore_count; break;
            case '=': ++c.equal_count; break;
            case '?': ++c.question_count; break;
            case '@': ++c.at_count; break;
            default:
                if (is_ascii_digit(ch)) ++c.digit_count;
        }
    }
    return c;
}

struct WordFlags {
    bool word_blog = false;
    bool word_social = false;
    bool word_news = false;
    bool word_covid = false;
};

// Case-insensitive substring match over the whole URL.
inline WordFlags word_flags(std::string_view url, const WordLists& lists = WordLists{}) {
    const std::string lower = to_lower_ascii(url);
    auto any = [&lower](const std::vector<std::string>& words) {
        for (const auto& w : words)
            if (!w.empty() && lower.find(w) != std::string::npos) return true;
        return false;
    };
    return {any(lists.blog), any(lists.social), any(lists.news), any(lists.covid)};
}

struct HostFlags {
    bool scheme_http = false;
    bool scheme_https = false;
    bool domain_is_ip = false;
    bool domain_starts_with_digit = false;
    bool tld_com = false;
    bool tld_org = false;
    bool tld_gov = false;
    bool tld_net = false;
};

inline bool is_ipv4_host(const std::vector<std::string>& labels) {
    if (labels.size() != 4) return false;
    for (const auto& l : labels) {
        if (l.empty() || l.size() > 3) return false;
        int v = 0;
        for (char c : l) {
            if (!is_ascii_digit(c)) return false;
            v = v * 10 + (c - '0');
        }
        if (v > 255) return false;
    }
    return true;
}

inline HostFlags host_flags(const ParsedUrl& p) {
    HostFlags f;
    f.scheme_http = p.scheme == Scheme::http;
    f.scheme_https = p.scheme == Scheme::https;
    f.domain_is_ip = is_ipv4_host(p.host_labels) ||
                     (!p.full_host.empty() && p.full_host.front() == '[');
    f.domain_starts_with_digit = !p.second_level.empty() && is_ascii_digit(p.second_level.front());
    f.tld_com = p.tld == "com";
    f.tld_org = p.tld == "org";
    f.tld_gov = p.tld == "gov";
    f.tld_net = p.tld == "net";
    return f;
}

// The full URL feature row: 8 domain + 4 word-based + 2 host-based +
// 10 lexical features, in that order. host_length is carried alongside but
// is not part of the 24-column design matrix block.
struct UrlFeatures {
    int url_length = 0;
    bool domain_starts_with_digit = false;
    bool domain_is_ip = false;
    bool tld_com = false;
    bool tld_org = false;
    bool tld_gov = false;
    bool tld_net = false;
    std::optional<int> age_year;  // missing when the provider has no record
    bool word_blog = false;
    bool word_social = false;
    bool word_news = false;
    bool word_covid = false;
    bool scheme_http = false;
    bool scheme_https = false;
    int dot_count = 0;
    int semicolon_count = 0;
    int ampersand_count = 0;
    int slash_count = 0;
    int hyphen_count = 0;
    int underscore_count = 0;
    int equal_count = 0;
    int question_count = 0;
    int at_count = 0;
    int digit_count = 0;

    int host_length = 0;

    friend bool operator==(const UrlFeatures&, const UrlFeatures&) = default;

    static const std::vector<std::string>& column_names() {
        static const std::vector<std::string> names = {
            "url_length", "domain_starts_with_digit", "domain_is_ip",
            "tld_com", "tld_org", "tld_gov", "tld_net", "age_year",
            "word_blog", "word_social", "word_news", "word_covid",
            "scheme_http", "scheme_https",
            "dot_count", "semicolon_count", "ampersand_count", "slash_count",
            "hyphen_count", "underscore_count", "equal_count", "question_count",
            "at_count", "digit_count"};
        return names;
    }

    // Numeric row matching column_names(); missing age reported via the flag.
    std::array<double, 24> to_row(bool* age_missing = nullptr) const {
        if (age_missing) *age_missing = !age_year.has_value();
        return {static_cast<double>(url_length),
                domain_starts_with_digit ? 1.0 : 0.0,
                domain_is_ip ? 1.0 : 0.0,
                tld_com ? 1.0 : 0.0,
                tld_org ? 1.0 : 0.0,
                tld_gov ? 1.0 : 0.0,
                tld_net ? 1.0 : 0.0,
                age_year ? static_cast<double>(*age_year) : 0.0,
                word_blog ? 1.0 : 0.0,
                word_social ? 1.0 : 0.0,
                word_news ? 1.0 : 0.0,
                word_covid ? 1.0 : 0.0,
                scheme_http ? 1.0 : 0.0,
                scheme_https ? 1.0 : 0.0,
                static_cast<double>(dot_count),
                static_cast<double>(semicolon_count),
                static_cast<double>(ampersand_count),
                static_cast<double>(slash_count),
                static_cast<double>(hyphen_count),
                static_cast<double>(underscore_count),
                static_cast<double>(equal_count),
                static_cast<double>(question_count),
                static_cast<double>(at_count),
                static_cast<double>(digit_count)};
    }
};

// Pure composition of the extractors; the age lookup is the only stateful
// input and comes resolved by the caller (see domain_age.hpp).
inline UrlFeatures extract_url_features(std::string_view url, std::optional<int> age_year,
                                        const WordLists& lists = WordLists{}) {
    const ParsedUrl parsed = parse_url(url);
    const LexicalCounts lex = lexical_counts(url);
    const WordFlags words = word_flags(url, lists);
    const HostFlags host = host_flags(parsed);
    UrlFeatures f;
    f.url_length = lex.url_length;
    f.host_length = lex.host_length;
    f.dot_count = lex.dot_count;
    f.semicolon_count = lex.semicolon_count;
    f.ampersand_count = lex.ampersand_count;
    f.slash_count = lex.slash_count;
    f.hyphen_count = lex.hyphen_count;
    f.underscore_count = lex.underscore_count;
    f.equal_count = lex.equal_count;
    f.question_count = lex.question_count;
    f.at_count = lex.at_count;
    f.digit_count = lex.digit_count;
    f.word_blog = words.word_blog;
    f.word_social = words.word_social;
    f.word_news = words.word_news;
    f.word_covid = words.word_covid;
    f.scheme_http = host.scheme_http;
    f.scheme_https = host.scheme_https;
    f.domain_is_ip = host.domain_is_ip;
    f.domain_starts_with_digit = host.domain_starts_with_digit;
    f.tld_com = host.tld_com;
    f.tld_org = host.tld_org;
    f.tld_gov = host.tld_gov;
    f.tld_net = host.tld_net;
    f.age_year = age_year;
    return f;
}

}  // namespace misinfo::url
