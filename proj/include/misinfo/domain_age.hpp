#pragma once

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "misinfo/common.hpp"

namespace misinfo::age {

enum class AgeSource { whois, wayback, manual };

inline std::string to_string(AgeSource s) {
    switch (s) {
        case AgeSource::whois: return "whois";
        case AgeSource::wayback: return "wayback";
        case AgeSource::manual: return "manual";
    }
    return "manual";
}

inline AgeSource age_source_from_string(const std::string& s) {
    if (s == "whois") return AgeSource::whois;
    if (s == "wayback") return AgeSource::wayback;
    if (s == "manual") return AgeSource::manual;
    throw ParseError("unknown age source '" + s + "'");
}

struct AgeRecord {
    std::string domain;
    int year = 0;
    AgeSource source = AgeSource::manual;
    std::string fetched_at;  // ISO-8601 timestamp

    friend bool operator==(const AgeRecord&, const AgeRecord&) = default;
};

inline int current_year_utc() {
    const std::time_t t = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    return tm_utc.tm_year + 1900;
}

inline std::string now_iso8601_utc() {
    const std::time_t t = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

inline bool valid_registration_year(int year) {
    return year >= 1985 && year <= current_year_utc();
}

inline void validate_domain_key(const std::string& domain) {
    if (domain.empty()) throw ValidationError("domain is empty");
    if (domain.front() == '.' || domain.back() == '.')
        throw ValidationError("malformed domain '" + domain + "'");
    for (char c : domain) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' || c == '-';
        if (!ok) throw ValidationError("malformed domain '" + domain + "' (expect lowercase registrable form)");
    }
}

// Signature of a remote resolver (WHOIS / web-archive). Kept as an injected
// function so the provider core stays free of network code; see
// age_remote.hpp for the real adapters.
using RemoteFetcher = std::function<std::optional<AgeRecord>(const std::string& domain)>;

// Resolves a domain's first-seen year through a persistent cache. Offline
// mode never touches the network, which is what makes pipeline runs
// reproducible. Remote calls (online mode) are serialized and rate limited.
class DomainAgeProvider {
public:
    enum class Mode { offline, online };

    explicit DomainAgeProvider(Mode mode = Mode::offline, int rate_limit_ms = 1000)
        : mode_(mode), rate_limit_ms_(rate_limit_ms) {}

    Mode mode() const { return mode_; }
    void set_remote_fetcher(RemoteFetcher fetcher) { fetch_ = std::move(fetcher); }

    void insert(AgeRecord rec) {
        validate_domain_key(rec.domain);
        if (!valid_registration_year(rec.year))
            throw ValidationError("year " + std::to_string(rec.year) + " out of range for " + rec.domain);
        cache_[rec.domain] = std::move(rec);
    }

    const std::map<std::string, AgeRecord>& cache() const { return cache_; }

    std::optional<int> lookup_age(const std::string& domain) {
        validate_domain_key(domain);
        if (auto it = cache_.find(domain); it != cache_.end()) return it->second.year;
        if (mode_ == Mode::offline) return std::nullopt;
        if (misses_.count(domain)) return std::nullopt;
        if (!fetch_) return std::nullopt;

        std::optional<AgeRecord> rec;
        {
            std::lock_guard<std::mutex> lock(*remote_mutex_);
            throttle();
            try {
                rec = fetch_(domain);
            } catch (const std::exception&) {
                rec = std::nullopt;  // remote failure is a miss, never a pipeline abort
            }
        }
        if (rec && valid_registration_year(rec->year)) {
            cache_[domain] = *rec;
            return rec->year;
        }
        misses_.insert(domain);
        return std::nullopt;
    }

    // JSONL, one record per line; human-auditable and diff-able.
    void save_cache(const std::string& path) const {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write cache " + path);
        for (const auto& [domain, rec] : cache_) {
            nlohmann::json j{{"domain", rec.domain},
                             {"year", rec.year},
                             {"source", to_string(rec.source)},
                             {"fetched_at", rec.fetched_at}};
            out << j.dump() << '\n';
        }
        if (!out.good()) throw IoError("failed writing cache " + path);
    }

    // Duplicate domains: last entry wins, with a warning per overwrite.
    static DomainAgeProvider load_cache(const std::string& path, Mode mode = Mode::offline,
                                        std::vector<std::string>* warnings = nullptr) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open cache " + path);
        DomainAgeProvider provider(mode);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw ParseError("cache " + path + " line " + std::to_string(line_no) + ": " + e.what());
            }
            AgeRecord rec;
            try {
                rec.domain = j.at("domain").get<std::string>();
                rec.year = j.at("year").get<int>();
                rec.source = age_source_from_string(j.at("source").get<std::string>());
                rec.fetched_at = j.value("fetched_at", std::string{});
            } catch (const nlohmann::json::exception& e) {
                throw ParseError("cache " + path + " line " + std::to_string(line_no) + ": " + e.what());
            }
            if (provider.cache_.count(rec.domain) && warnings) {
                warnings->push_back("duplicate cache entry for '" + rec.domain + "' at line " +
                                    std::to_string(line_no) + "; last entry wins");
            }
            try {
                provider.insert(std::move(rec));
            } catch (const ValidationError& e) {
                throw ParseError("cache " + path + " line " + std::to_string(line_no) + ": " + e.what());
            }
        }
        return provider;
    }

private:
    void throttle() {
        using clock = std::chrono::steady_clock;
        if (last_remote_call_) {
            const auto min_gap = std::chrono::milliseconds(rate_limit_ms_);
            const auto elapsed = clock::now() - *last_remote_call_;
            if (elapsed < min_gap) std::this_thread::sleep_for(min_gap - elapsed);
        }
        last_remote_call_ = clock::now();
    }

    Mode mode_;
    int rate_limit_ms_;
    std::map<std::string, AgeRecord> cache_;
    std::set<std::string> misses_;  // negative cache, in-memory only
    RemoteFetcher fetch_;
    std::unique_ptr<std::mutex> remote_mutex_ = std::make_unique<std::mutex>();
    std::optional<std::chrono::steady_clock::time_point> last_remote_call_;
};

}  // namespace misinfo::age
