#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "misinfo/common.hpp"
#include "misinfo/corpus.hpp"
#include "misinfo/domain_age.hpp"
#include "misinfo/rng.hpp"

namespace misinfo::corpus {

// Synthetic corpus generator. No redistributable labeled corpus ships with
// the project, so experiments and acceptance runs use generated datasets
// whose per-class URL-feature and domain-age distributions are configured
// here.

struct FeatureTarget {
    double mean = 0.0;
    double stddev = 0.0;
};

// Per-class generation parameters; the defaults below give the fake class
// longer, hyphen- and digit-heavy URLs on young domains and the real class
// older, www-prefixed domains, with overlapping vocabulary on the text side.
struct ClassProfile {
    FeatureTarget url_length;
    FeatureTarget hyphens;
    FeatureTarget digits;
    FeatureTarget dots;
    FeatureTarget age_year;
    double p_starts_with_digit = 0.0;
    double p_tld_com = 0.0, p_tld_org = 0.0, p_tld_gov = 0.0, p_tld_net = 0.0;
    double p_word_blog = 0.0, p_word_social = 0.0, p_word_news = 0.0, p_word_covid = 0.0;
    double p_https = 0.0, p_http = 0.0;  // remainder: scheme-less cached URL
    double p_age_missing = 0.0;
    double p_query_string = 0.05;

    // Text model: each token comes from the class's signal list, the other
    // class's list, or the shared noise vocabulary.
    double p_signal = 0.08;
    double p_cross = 0.05;
    double p_subtle = 0.0;  // docs whose text carries no class signal at all

    // Style rendering probabilities (per token / per field).
    double p_allcaps = 0.01;
    double p_exclamation = 0.02;
    double p_question = 0.02;
    double p_colon = 0.02;
    double p_quote = 0.01;
};

struct SynthSpec {
    std::size_t n_records = 3000;
    double fake_fraction = 0.10;
    ClassProfile fake;
    ClassProfile real;
    std::vector<std::string> fake_tokens;
    std::vector<std::string> real_tokens;
    std::size_t noise_vocab_size = 500;
    double domain_reuse = 0.0;  // chance a record reuses an earlier same-class domain
    std::uint64_t seed = 0;

    static SynthSpec defaults();
    void validate() const;
};

inline SynthSpec SynthSpec::defaults() {
    SynthSpec s;
    s.fake.url_length = {95.2, 14.0};
    s.fake.hyphens = {7.8, 2.2};
    s.fake.digits = {7.6, 2.8};
    s.fake.dots = {1.73, 0.6};
    s.fake.age_year = {2010.0, 8.0};
    s.fake.p_starts_with_digit = 0.012;
    s.fake.p_tld_com = 0.850;
    s.fake.p_tld_org = 0.084;
    s.fake.p_tld_gov = 0.003;
    s.fake.p_tld_net = 0.023;
    s.fake.p_word_blog = 0.044;
    s.fake.p_word_social = 0.087;
    s.fake.p_word_news = 0.102;
    s.fake.p_word_covid = 0.006;
    s.fake.p_https = 0.637;
    s.fake.p_http = 0.061;
    s.fake.p_age_missing = 0.008;
    s.fake.p_subtle = 0.30;
    s.fake.p_allcaps = 0.06;
    s.fake.p_exclamation = 0.18;
    s.fake.p_question = 0.10;
    s.fake.p_colon = 0.10;
    s.fake.p_quote = 0.08;

    s.real.url_length = {82.1, 12.0};
    s.real.hyphens = {5.4, 1.8};
    s.real.digits = {5.7, 2.2};
    s.real.dots = {2.07, 0.6};
    s.real.age_year = {2006.0, 8.0};
    s.real.p_starts_with_digit = 0.002;
    s.real.p_tld_com = 0.733;
    s.real.p_tld_org = 0.150;
    s.real.p_tld_gov = 0.046;
    s.real.p_tld_net = 0.023;
    s.real.p_word_blog = 0.017;
    s.real.p_word_social = 0.010;
    s.real.p_word_news = 0.071;
    s.real.p_word_covid = 0.001;
    s.real.p_https = 0.575;
    s.real.p_http = 0.038;
    s.real.p_age_missing = 0.008;
    s.real.p_subtle = 0.0;
    s.real.p_allcaps = 0.01;
    s.real.p_exclamation = 0.01;
    s.real.p_question = 0.02;
    s.real.p_colon = 0.04;
    s.real.p_quote = 0.02;

    s.fake_tokens = {"hoax",    "exposed",  "shocking", "secret",   "miracle",
                     "banned",  "coverup",  "agenda",   "truth",    "plandemic",
                     "warning", "microchip", "depopulation", "sheeple", "wakeup"};
    s.real_tokens = {"officials", "update",  "cases",    "vaccine",  "study",
                     "guidance",  "research", "hospital", "economy", "science",
                     "minister",  "response", "figures",  "briefing", "measures"};
    return s;
}

inline void SynthSpec::validate() const {
    if (n_records == 0) throw ConfigError("synth: n_records must be > 0");
    if (!(fake_fraction > 0.0 && fake_fraction < 1.0))
        throw ConfigError("synth: fake_fraction must be in (0,1)");
    for (const ClassProfile* p : {&fake, &real}) {
        for (const FeatureTarget* t :
             {&p->url_length, &p->hyphens, &p->digits, &p->dots, &p->age_year}) {
            if (!std::isfinite(t->mean) || !std::isfinite(t->stddev) || t->stddev < 0.0)
                throw ConfigError("synth: feature targets must be finite with stddev >= 0");
        }
        for (double prob : {p->p_starts_with_digit, p->p_tld_com, p->p_tld_org, p->p_tld_gov,
                            p->p_tld_net, p->p_word_blog, p->p_word_social, p->p_word_news,
                            p->p_word_covid, p->p_https, p->p_http, p->p_age_missing,
                            p->p_query_string, p->p_signal, p->p_cross, p->p_subtle,
                            p->p_allcaps, p->p_exclamation, p->p_question, p->p_colon,
                            p->p_quote}) {
            if (!(prob >= 0.0 && prob <= 1.0))
                throw ConfigError("synth: probabilities must be in [0,1]");
        }
        if (p->p_tld_com + p->p_tld_org + p->p_tld_gov + p->p_tld_net > 1.0)
            throw ConfigError("synth: TLD probabilities sum above 1");
        if (p->p_https + p->p_http > 1.0) throw ConfigError("synth: scheme probabilities sum above 1");
    }
    if (fake_tokens.empty() || real_tokens.empty())
        throw ConfigError("synth: signal token lists must be non-empty");
}

struct SynthResult {
    Dataset dataset;
    std::vector<age::AgeRecord> age_records;  // one per distinct generated domain with known age
};

namespace detail {

inline const std::vector<std::string>& synth_queries() {
    static const std::vector<std::string> q = {
        "italy travel coronavirus", "japan travel price",   "phones missing",
        "event 201 gates",          "coronavirus size diameter",
        "people collapsing china",  "5g coronavirus"};
    return q;
}

inline std::string random_letters(std::mt19937_64& rng, std::size_t len) {
    std::string s;
    s.reserve(len);
    for (std::size_t i = 0; i < len; ++i)
        s += static_cast<char>('a' + uniform_index(rng, 26));
    return s;
}

inline std::vector<std::string> noise_vocabulary(std::size_t size, std::uint64_t seed) {
    static const std::vector<std::string> syllables = {
        "ba", "con", "da", "lor", "mi", "nu", "pa", "ra", "sto", "ti", "ve", "zo",
        "kel", "mar", "fen", "dor", "lis", "tan", "rem", "gol", "pin", "sur", "vex", "hul"};
    auto rng = make_rng(derive_seed(seed, "noise-vocab"));
    std::set<std::string> seen;
    std::vector<std::string> vocab;
    while (vocab.size() < size) {
        std::string w = syllables[uniform_index(rng, syllables.size())] +
                        syllables[uniform_index(rng, syllables.size())];
        if (uniform_real(rng) < 0.4) w += syllables[uniform_index(rng, syllables.size())];
        if (seen.insert(w).second) vocab.push_back(std::move(w));
    }
    return vocab;
}

// Zipf-ish draw over the noise vocabulary (weight 1/(rank+2)).
inline const std::string& draw_noise(std::mt19937_64& rng, const std::vector<std::string>& vocab,
                                     const std::vector<double>& cumulative) {
    const double u = uniform_real(rng) * cumulative.back();
    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
    const auto idx = static_cast<std::size_t>(it - cumulative.begin());
    return vocab[std::min(idx, vocab.size() - 1)];
}

inline int draw_count(NormalSampler& normal, const FeatureTarget& t, int lo) {
    return std::max(lo, static_cast<int>(std::lround(normal(t.mean, t.stddev))));
}

struct DomainInfo {
    std::string domain;  // registrable form
    std::string host;    // full host incl. optional www
    std::optional<int> age_year;
};

}  // namespace detail

inline SynthResult generate_synthetic(const SynthSpec& spec) {
    spec.validate();
    SynthResult result;
    result.dataset.source_path = "<synthetic>";

    const auto n_fake =
        static_cast<std::size_t>(std::llround(spec.fake_fraction * static_cast<double>(spec.n_records)));

    const auto noise = detail::noise_vocabulary(spec.noise_vocab_size, spec.seed);
    std::vector<double> noise_cdf(noise.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < noise.size(); ++i) {
        acc += 1.0 / static_cast<double>(i + 2);
        noise_cdf[i] = acc;
    }

    auto rng = make_rng(derive_seed(spec.seed, "synth"));
    NormalSampler normal(rng);
    std::set<std::string> used_domains;
    const int max_year = std::min(age::current_year_utc(), 2020);

    auto make_domain = [&](const ClassProfile& profile,
                           std::vector<detail::DomainInfo>& pool) -> const detail::DomainInfo& {
        if (!pool.empty() && uniform_real(rng) < spec.domain_reuse)
            return pool[uniform_index(rng, pool.size())];
        detail::DomainInfo info;
        std::string second;
        do {
            second.clear();
            if (uniform_real(rng) < profile.p_starts_with_digit)
                second += static_cast<char>('1' + uniform_index(rng, 9));
            second += detail::random_letters(rng, 5 + uniform_index(rng, 5));
            const double u = uniform_real(rng);
            std::string tld;
            if (u < profile.p_tld_com) tld = "com";
            else if (u < profile.p_tld_com + profile.p_tld_org) tld = "org";
            else if (u < profile.p_tld_com + profile.p_tld_org + profile.p_tld_gov) tld = "gov";
            else if (u < profile.p_tld_com + profile.p_tld_org + profile.p_tld_gov + profile.p_tld_net)
                tld = "net";
            else {
                static const std::vector<std::string> other = {"info", "co", "io", "me"};
                tld = other[uniform_index(rng, other.size())];
            }
            info.domain = second + "." + tld;
        } while (!used_domains.insert(info.domain).second);
        if (uniform_real(rng) >= profile.p_age_missing) {
            const int year = std::clamp(
                static_cast<int>(std::lround(normal(profile.age_year.mean, profile.age_year.stddev))),
                1990, max_year);
            info.age_year = year;
        }
        info.host = info.domain;
        pool.push_back(info);
        return pool.back();
    };

    auto build_url = [&](const ClassProfile& profile, const detail::DomainInfo& domain) {
        const int target_len = detail::draw_count(normal, profile.url_length, 0);
        int hyphens = detail::draw_count(normal, profile.hyphens, 0);
        int digits = detail::draw_count(normal, profile.digits, 0);
        int dots = detail::draw_count(normal, profile.dots, 1);

        std::string url;
        const double u = uniform_real(rng);
        if (u < profile.p_https) url = "https://";
        else if (u < profile.p_https + profile.p_http) url = "http://";

        const bool www = dots >= 2;
        url += www ? "www." + domain.host : domain.host;
        int cur_dots = www ? 2 : 1;

        std::vector<std::string> words;
        if (uniform_real(rng) < profile.p_word_blog) words.push_back("blog");
        if (uniform_real(rng) < profile.p_word_social) words.push_back("facebook");
        if (uniform_real(rng) < profile.p_word_news) words.push_back("news");
        if (uniform_real(rng) < profile.p_word_covid) words.push_back("covid");

        // Path skeleton: a couple of short segments plus the flag words.
        std::vector<std::string> segments;
        segments.push_back(detail::random_letters(rng, 3 + uniform_index(rng, 3)));
        for (auto& w : words) segments.push_back(std::move(w));
        segments.push_back(detail::random_letters(rng, 3 + uniform_index(rng, 3)));
        for (const auto& seg : segments) url += "/" + seg;

        // Spend the remaining target counts inside the last path segment.
        auto count_in = [&url](char c) {
            return static_cast<int>(std::count(url.begin(), url.end(), c));
        };
        int need_hyphens = hyphens - count_in('-');
        for (; need_hyphens > 0; --need_hyphens)
            url += "-" + detail::random_letters(rng, 1);
        int need_digits = digits;
        for (char c : url) need_digits -= is_ascii_digit(c) ? 1 : 0;
        for (; need_digits > 0; --need_digits) url += static_cast<char>('0' + uniform_index(rng, 10));
        for (int need_dots = dots - cur_dots; need_dots > 0; --need_dots)
            url += "." + detail::random_letters(rng, 2 + uniform_index(rng, 3));
        if (uniform_real(rng) < profile.p_query_string) url += "?p=" + detail::random_letters(rng, 2);
        if (static_cast<int>(url.size()) < target_len)
            url += "/" + detail::random_letters(rng, static_cast<std::size_t>(target_len) - url.size() - 1);
        return url;
    };

    auto draw_token = [&](const ClassProfile& profile, bool is_fake, bool subtle) -> std::string {
        const double u = uniform_real(rng);
        const double p_own = subtle ? profile.p_cross : profile.p_signal;
        const auto& own = is_fake ? spec.fake_tokens : spec.real_tokens;
        const auto& other = is_fake ? spec.real_tokens : spec.fake_tokens;
        if (u < p_own) return own[uniform_index(rng, own.size())];
        if (u < p_own + profile.p_cross) return other[uniform_index(rng, other.size())];
        return detail::draw_noise(rng, noise, noise_cdf);
    };

    auto render_field = [&](const ClassProfile& profile, bool is_fake, bool subtle,
                            std::size_t n_tokens, bool title_case) {
        std::string out;
        for (std::size_t i = 0; i < n_tokens; ++i) {
            std::string tok = draw_token(profile, is_fake, subtle);
            if (uniform_real(rng) < profile.p_allcaps) {
                for (char& c : tok) c = static_cast<char>(c - 'a' + 'A');
            } else if (title_case && i == 0) {
                tok[0] = static_cast<char>(tok[0] - 'a' + 'A');
            }
            if (uniform_real(rng) < profile.p_quote) tok = "\"" + tok + "\"";
            if (!out.empty()) out += ' ';
            out += tok;
            if (uniform_real(rng) < profile.p_colon) out += ':';
        }
        if (uniform_real(rng) < profile.p_exclamation) out += '!';
        if (uniform_real(rng) < profile.p_question) out += '?';
        return out;
    };

    std::vector<detail::DomainInfo> fake_pool, real_pool;
    std::vector<SerpRecord> records;
    records.reserve(spec.n_records);
    for (std::size_t i = 0; i < spec.n_records; ++i) {
        const bool is_fake = i < n_fake;
        const ClassProfile& profile = is_fake ? spec.fake : spec.real;
        const auto& domain = make_domain(profile, is_fake ? fake_pool : real_pool);

        SerpRecord rec;
        rec.label = is_fake ? 1 : 0;
        rec.url = build_url(profile, domain);
        const bool subtle = is_fake && uniform_real(rng) < profile.p_subtle;
        rec.title = render_field(profile, is_fake, subtle, 6 + uniform_index(rng, 5), true);
        rec.description = render_field(profile, is_fake, subtle, 14 + uniform_index(rng, 9), false);
        rec.query = detail::synth_queries()[uniform_index(rng, detail::synth_queries().size())];
        const int offset = static_cast<int>(uniform_index(rng, 190));  // 2020-01-20 .. 2020-07-27
        int month = 1, day = 20 + offset;
        while (day > misinfo::detail::days_in_month(2020, month)) {
            day -= misinfo::detail::days_in_month(2020, month);
            ++month;
        }
        rec.date = Date{2020, month, day};
        records.push_back(std::move(rec));
    }

    shuffle_inplace(records, rng);
    result.dataset.records = std::move(records);

    for (const auto* pool : {&fake_pool, &real_pool}) {
        for (const auto& info : *pool) {
            if (info.age_year) {
                result.age_records.push_back(age::AgeRecord{
                    info.domain, *info.age_year, age::AgeSource::manual, "1970-01-01T00:00:00Z"});
            }
        }
    }
    std::sort(result.age_records.begin(), result.age_records.end(),
              [](const auto& a, const auto& b) { return a.domain < b.domain; });
    return result;
}

inline age::DomainAgeProvider provider_from_records(const std::vector<age::AgeRecord>& records) {
    age::DomainAgeProvider provider(age::DomainAgeProvider::Mode::offline);
    for (const auto& rec : records) provider.insert(rec);
    return provider;
}

}  // namespace misinfo::corpus
